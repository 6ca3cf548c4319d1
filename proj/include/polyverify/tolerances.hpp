#pragma once

namespace polyverify {

struct Tolerances {
    double zero = 1e-12;      // rejects functionals whose normal vanishes
    double feasibility = 1e-9;
    double interior = 1e-7;   // strict-interior margin for region witnesses
    double objective = 1e-9;
};

inline const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace polyverify

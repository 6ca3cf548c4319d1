#pragma once

#include "polyverify/geometry.hpp"

#include <initializer_list>

namespace testing {

inline polyverify::Vector vec(std::initializer_list<double> v) {
    polyverify::Vector out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

inline polyverify::Matrix mat(std::initializer_list<std::initializer_list<double>> rows) {
    polyverify::Matrix out(static_cast<Eigen::Index>(rows.size()),
                           static_cast<Eigen::Index>(rows.begin()->size()));
    Eigen::Index i = 0;
    for (const auto& r : rows) {
        Eigen::Index j = 0;
        for (double x : r) out(i, j++) = x;
        ++i;
    }
    return out;
}

inline polyverify::LinearFunctional lf(std::initializer_list<double> w, double c) {
    return polyverify::LinearFunctional(vec(w), c);
}

}  // namespace testing

#pragma once

#include <random>

#include "solsurf/matlie.hpp"

namespace testsupport {

using solsurf::matlie::cd;
using solsurf::matlie::CMatrix;

inline CMatrix random_matrix(std::mt19937& rng, int n, double scale = 1.0)
{
    std::normal_distribution<double> d(0.0, 1.0);
    CMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = scale * cd(d(rng), d(rng));
    return m;
}

// Random element of su(n).
inline CMatrix random_su(std::mt19937& rng, int n, double scale = 1.0)
{
    return solsurf::matlie::project_su(random_matrix(rng, n, scale)).mat;
}

} // namespace testsupport

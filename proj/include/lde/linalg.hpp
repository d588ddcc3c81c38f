#pragma once

#include "lde/types.hpp"

#include <stdexcept>
#include <string>

namespace lde {

inline void require(bool cond, const std::string& msg) {
    if (!cond)
        throw std::invalid_argument(msg);
}

/// Max absolute deviation from Hermitian symmetry.
double hermitian_defect(const CMat& m);

bool is_hermitian(const CMat& m, double tol = 1e-12);

/// Smallest eigenvalue of a Hermitian matrix.
double min_hermitian_eigenvalue(const CMat& m);

/// Hermitian PSD square root; negative round-off eigenvalues are clamped to zero.
CMat hermitian_sqrt(const CMat& m);

/// Moore-Penrose pseudo-inverse with relative singular-value cutoff.
CMat pseudo_inverse(const CMat& m, double rtol = 1e-10);

/// Solves the Hermitian positive-definite system B X = rhs; throws if B is
/// numerically singular (relative residual above tol).
CMat solve_hermitian(const CMat& b, const CMat& rhs, const std::string& what, double tol = 1e-8);

/// Frobenius norm shorthand.
inline double frob(const CMat& m) { return m.norm(); }

} // namespace lde

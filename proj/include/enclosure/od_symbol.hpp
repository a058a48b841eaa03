#pragma once

#include <complex>
#include <vector>

#include "enclosure/medium.hpp"

namespace enclosure {

using Complex = std::complex<double>;

/// Pointwise symbol of the transversal first-order system on the level set
/// {x.omega = t}. With g = omega.A omega, p = omega.A xi, q = xi.A xi (xi the
/// unit tangential oscillation direction), the decay exponents are the roots
/// of  lambda^2 + 2(p/g) lambda + q/g = 0, complex by ellipticity.
struct SymbolPoint {
    double g = 1.0, p = 0.0, q = 1.0;
    Complex lambda_plus;   // Im > 0
    Complex lambda_minus;  // conjugate
    Complex qplus_second;  // eigenvector [1, qplus_second] of the system matrix
    double im_lambda = 0.0;

    /// Transversal decay coefficient of the leading profile (real part > 0).
    Complex decay_coeff() const { return Complex(0.0, -1.0) * lambda_plus; }
    /// 2x2 system matrix K with D_n W = tau K W at leading order.
    void system_matrix(Complex K[4]) const;
};

/// Symbol at tangential coordinate x' on the slice level t. xi = xi_sign*eta.
/// Throws SymbolDegeneracyError when the quadratic has real roots.
SymbolPoint build_symbol(const MediumSpec& medium, const Direction& dir, int xi_sign,
                         double t, double x_prime);

/// Same computation from a raw tensor (used by tests and the transport chain).
SymbolPoint build_symbol_from_tensor(const Tensor2& A, const Direction& dir, int xi_sign);

/// Symbol samples across a cross-section interval plus the uniform decay
/// lower bound over it.
struct SymbolData {
    std::vector<double> x_prime;
    std::vector<SymbolPoint> points;
    double a_decay = 0.0;  // min over samples of Im lambda_plus
};

SymbolData sample_symbol(const MediumSpec& medium, const Direction& dir, int xi_sign,
                         double t, double x_lo, double x_hi, int n_samples);

}  // namespace enclosure

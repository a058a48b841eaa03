#include "enclosure/od_symbol.hpp"

#include <cmath>
#include <limits>

#include "enclosure/errors.hpp"

namespace enclosure {

void SymbolPoint::system_matrix(Complex K[4]) const {
    // Rows of D_n [v, w2]^T = tau K [v, w2]^T with
    // w2 = -tau^{-1} g D_n v - p v.
    K[0] = -p / g;
    K[1] = -1.0 / g;
    K[2] = q - p * p / g;
    K[3] = -p / g;
}

SymbolPoint build_symbol_from_tensor(const Tensor2& A, const Direction& dir, int xi_sign) {
    SymbolPoint s;
    const Vec2 xi = dir.eta * static_cast<double>(xi_sign);
    s.g = A.pair(dir.omega, dir.omega);
    s.p = A.pair(dir.omega, xi);
    s.q = A.pair(xi, xi);
    if (s.g <= 0.0) throw SymbolDegeneracyError("symbol: omega.A omega not positive");
    const double disc = s.g * s.q - s.p * s.p;
    if (disc <= 0.0)
        throw SymbolDegeneracyError("symbol: quadratic has real roots (ellipticity violated)");
    const double beta = std::sqrt(disc) / s.g;
    s.lambda_plus = Complex(-s.p / s.g, beta);
    s.lambda_minus = std::conj(s.lambda_plus);
    s.im_lambda = beta;
    // (K - lambda I) [1, v2] = 0 from the first row.
    s.qplus_second = -(s.p + s.g * s.lambda_plus);
    return s;
}

SymbolPoint build_symbol(const MediumSpec& medium, const Direction& dir, int xi_sign,
                         double t, double x_prime) {
    const Vec2 x = dir.omega * t + dir.eta * x_prime;
    return build_symbol_from_tensor(medium.a0.eval(x), dir, xi_sign);
}

SymbolData sample_symbol(const MediumSpec& medium, const Direction& dir, int xi_sign,
                         double t, double x_lo, double x_hi, int n_samples) {
    if (n_samples < 2) throw InsufficientDataError("sample_symbol: need >= 2 samples");
    SymbolData data;
    data.a_decay = std::numeric_limits<double>::infinity();
    data.x_prime.reserve(n_samples);
    data.points.reserve(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        const double xp = x_lo + (x_hi - x_lo) * i / (n_samples - 1);
        data.x_prime.push_back(xp);
        data.points.push_back(build_symbol(medium, dir, xi_sign, t, xp));
        data.a_decay = std::min(data.a_decay, data.points.back().im_lambda);
    }
    return data;
}

}  // namespace enclosure

#pragma once

#include <complex>
#include <map>
#include <vector>

#include "enclosure/od_symbol.hpp"

namespace enclosure {

/// Compactly supported C^S bump: 1 on the plateau, polynomial smoothstep
/// falloff of the given order on each side, 0 outside [lo, hi]. Derivatives
/// of any order are evaluated exactly (they are polynomials piecewise).
class SmoothBump {
   public:
    SmoothBump() = default;
    SmoothBump(double lo, double hi, double falloff_width, int order);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double falloff() const { return wf_; }
    int order() const { return order_; }

    double value(double x) const { return derivative(x, 0); }
    double derivative(double x, int d) const;
    /// value and derivatives 0..dmax in one sweep.
    void derivatives(double x, int dmax, double* out) const;

   private:
    double lo_ = 0.0, hi_ = 1.0, wf_ = 0.25;
    int order_ = 2;
    std::vector<double> coef_;  // smoothstep polynomial coefficients

    double poly_deriv(double u, int d) const;
};

/// One monomial of the transversal expansion:
///   coeff * tau^tau_pow * xn^xn_pow * chi^{(chi_d)}(x') * E(xn),
/// with E = exp(i tau lambda_plus xn). The assembled profile multiplies by
/// b exp(i tau xi_sign x') on top.
struct ProfileTerm {
    int tau_pow = 0;
    int xn_pow = 0;
    int chi_d = 0;
    Complex coeff{1.0, 0.0};
};

/// Scalar transport symbols for a constant background tensor: the diagonal
/// first-component entries of the decoupled transversal system, order by
/// order, plus the operator that maps the scalar chain back to the physical
/// profile.
struct ChainSymbols {
    SymbolPoint symbol;
    int xi_sign = 1;
    double k = 0.0;
    int order = 0;  // N

    /// chain[l] = polynomial in the tangential derivative carrying tau^{-l};
    /// chain[l][d] multiplies chi^{(d)}.
    std::vector<std::vector<Complex>> chain;
    /// Reconstruction operator as (tau_pow, d) -> coeff, applied to the
    /// scalar chain solution; includes the identity term.
    std::map<std::pair<int, int>, Complex> reconstruct_op;

    /// Closed-form corrections: corrections[j] = term bag of v_{-j} (without
    /// the reconstruction operator applied).
    std::vector<std::vector<ProfileTerm>> corrections;
    /// Full profile terms: reconstruction operator applied to the summed
    /// chain, ready for evaluation.
    std::vector<ProfileTerm> profile;

    int max_chi_derivative = 0;
};

/// Derives the decoupled scalar transport chain for a constant-coefficient
/// background. Throws UnsupportedBackgroundError for variable backgrounds.
ChainSymbols derive_chain(const Tensor2& A0, const Direction& dir, int xi_sign,
                          double k, int order);

/// Grid realization of the transport chain: amplitudes (the corrections with
/// the transversal exponential factored out) on a tensor grid, computed by
/// integrating-factor quadrature with finite-difference tangential
/// derivatives. Cross-checked in tests against the closed form.
struct TransportGrid {
    std::vector<double> x_prime;  // tangential nodes (uniform)
    std::vector<double> xn;       // transversal nodes (uniform)
    /// amplitude[j][ix*xn.size()+in] for correction j = 0..N+1
    std::vector<std::vector<Complex>> amplitude;
    std::vector<double> l2_norm;  // of the full corrections (with decay factor)
};

TransportGrid transport_corrections(const ChainSymbols& chain, const SmoothBump& chi,
                                    double tau, double dx_prime, double dxn,
                                    double depth);

}  // namespace enclosure

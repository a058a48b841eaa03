#pragma once

#include <memory>
#include <string>

#include "enclosure/fem.hpp"
#include "enclosure/od_chain.hpp"

namespace enclosure {

/// Probe configuration for one oscillating-decaying solution.
struct ODParams {
    Direction dir;          // omega and the tangential eta
    int xi_sign = 1;        // xi = xi_sign * eta
    double t = 0.0;         // slice level
    double tau = 20.0;      // asymptotic parameter
    int order = 2;          // correction order N (capped at 4)
    SmoothBump chi;         // cutoff on the tangential cross-section
    Complex b{1.0, 0.0};    // amplitude, nonzero
};

/// Closed-form explicit part of the probe: the transport-chain profile times
/// the oscillatory phase. Valid on the closed slice {x.omega >= t}.
class ODProfile {
   public:
    ODProfile(const MediumSpec& medium, const ODParams& params);

    Complex value(const Vec2& x) const;
    void value_and_gradient(const Vec2& x, Complex& w, Complex& wx, Complex& wy) const;
    /// Exact application of the background operator to the profile.
    Complex forcing(const Vec2& x) const;

    /// Flattened coordinates of a point: x' = x.eta, xn = x.omega - t.
    void flatten(const Vec2& x, double& x_prime, double& xn) const;

    const ODParams& params() const { return params_; }
    const ChainSymbols& chain() const { return chain_; }
    double a_decay() const { return chain_.symbol.im_lambda; }
    Complex lambda_plus() const { return chain_.symbol.lambda_plus; }

   private:
    ODParams params_;
    ChainSymbols chain_;
    double b11_, b12_, b22_, k2_;
    // Terms grouped after folding the fixed tau powers into coefficients.
    struct Term {
        int xn_pow;
        int chi_d;
        Complex coeff;
    };
    std::vector<Term> terms_;
    int dmax_ = 0;

    void eval_core(double xp, double xn, Complex& v, Complex* v1, Complex* v2,
                   Complex* v11, Complex* v12, Complex* v22) const;
};

/// Probe field u = w + r with the residual corrector solved by FEM on a slice
/// mesh (zero Dirichlet data).
struct ODSolution {
    ODParams params;
    std::shared_ptr<ODProfile> profile;
    std::shared_ptr<Mesh> slice_mesh;
    std::shared_ptr<FemWorkspace> slice_fem;
    CVec r;                    // residual corrector at slice mesh nodes
    double forcing_l2 = 0.0;   // measured L2 norm of the exact forcing
    double r_h1_norm = 0.0;
    double solve_residual = 0.0;
};

/// Builds the probe on the given slice mesh: checks the wavelength
/// resolution and the eigenvalue guard, assembles the residual problem from
/// the analytic forcing (degree-4 quadrature), and solves it.
ODSolution assemble_od_solution(const MediumSpec& medium, const ODParams& params,
                                std::shared_ptr<Mesh> slice_mesh);

/// L2 norm of w (+ optional r) over the mesh region deeper than level s.
double od_l2_beyond(const ODSolution& sol, double s);

/// L2 deviation of the boundary trace from the leading oscillatory datum on
/// the flat part of the slice boundary, computed on a 1D grid.
double od_trace_deviation(const ODProfile& profile, int n_samples);

struct LayerIntegrals {
    double value_sq = 0.0;  // integral over the polygon of |w|^2
    double grad_sq = 0.0;   // integral over the polygon of |grad w|^2
};

/// Integrals of the analytic profile over a polygon, on a quadrature graded
/// to resolve the transversal decay scale 1/(tau a).
LayerIntegrals od_polygon_integrals(const ODProfile& profile, const PolygonalDomain& poly);

/// Debug dump: x', Re/Im lambda_plus, |q+| and per-correction norms.
std::string od_symbol_csv(const MediumSpec& medium, const ODParams& params,
                          int n_samples);

/// Rectangle slice domain spanned by the frame: tangential extent
/// [x_lo, x_hi], transversal extent [0, depth] measured from the level t.
PolygonalDomain make_slice_domain(const Direction& dir, double t, double x_lo,
                                  double x_hi, double depth);

}  // namespace enclosure

#pragma once

#include <array>
#include <random>
#include <string>
#include <vector>

#include "enclosure/geometry.hpp"

namespace enclosure {

/// Symmetric 2x2 tensor, row-major {a11, a12, a22}.
struct Tensor2 {
    double a11 = 1.0, a12 = 0.0, a22 = 1.0;

    std::array<double, 2> apply(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a12 * v.x + a22 * v.y};
    }
    double quad(const Vec2& v) const {
        return a11 * v.x * v.x + 2.0 * a12 * v.x * v.y + a22 * v.y * v.y;
    }
    /// Pairing u . (A v).
    double pair(const Vec2& u, const Vec2& v) const {
        return u.x * (a11 * v.x + a12 * v.y) + u.y * (a12 * v.x + a22 * v.y);
    }
    Tensor2 operator-(const Tensor2& o) const {
        return {a11 - o.a11, a12 - o.a12, a22 - o.a22};
    }
    /// Eigenvalues, ascending.
    std::array<double, 2> eigenvalues() const;
    double det() const { return a11 * a22 - a12 * a12; }
};

/// Closed-form coefficient fields: constant, affine in x, or a rotated
/// diagonal with affinely varying angle. No general plug-in format.
class TensorField {
   public:
    enum class Kind { Constant, Affine, RotatedDiagonal };

    static TensorField constant(Tensor2 t);
    /// A(x) = base + x * gx + y * gy  (entrywise).
    static TensorField affine(Tensor2 base, Tensor2 gx, Tensor2 gy);
    /// A(x) = R(theta(x)) diag(d1,d2) R(theta(x))^T,
    /// theta(x) = angle0 + grad . x.
    static TensorField rotated_diagonal(double d1, double d2, double angle0,
                                        Vec2 angle_grad);

    Tensor2 eval(const Vec2& x) const;
    bool is_constant() const { return kind_ == Kind::Constant; }
    Kind kind() const { return kind_; }

   private:
    Kind kind_ = Kind::Constant;
    Tensor2 base_, gx_, gy_;
    double d1_ = 1.0, d2_ = 1.0, angle0_ = 0.0;
    Vec2 angle_grad_;
};

/// Background tensor A0 on Omega, perturbation At on the inclusion D,
/// wavenumber k, and the declared ellipticity / jump bounds.
struct MediumSpec {
    TensorField a0;
    TensorField a_tilde;
    PolygonalDomain domain;     // Omega
    PolygonalDomain inclusion;  // D (may be meaningless when has_inclusion=false)
    bool has_inclusion = true;
    double k = 0.0;

    double lambda0 = 0.0, Lambda0 = 0.0;            // bounds for A0
    double lambda_tilde = 0.0, Lambda_tilde = 0.0;  // bounds for At
    double lambda_hat = 0.0, Lambda_hat = 0.0;      // bounds for At - A0 on D

    /// Piecewise tensor: At inside D, A0 outside. Points are classified
    /// geometrically; assembly resolves boundary points by element
    /// attribution instead.
    Tensor2 effective_tensor(const Vec2& x) const;
    /// Same map but with the in/out decision supplied by the caller (element
    /// attribution).
    Tensor2 effective_tensor_attributed(const Vec2& x, bool inside_inclusion) const {
        return (inside_inclusion && has_inclusion) ? a_tilde.eval(x) : a0.eval(x);
    }
};

struct HypothesisReport {
    // Tightest empirical bounds over the sample set.
    double lambda0_emp = 0.0, Lambda0_emp = 0.0;
    double lambda_tilde_emp = 0.0, Lambda_tilde_emp = 0.0;
    double lambda_hat_emp = 0.0, Lambda_hat_emp = 0.0;
    bool symmetric_ok = true;
    bool ellipticity_ok = false;
    bool jump_ok = false;
    bool inclusion_compact_ok = false;  // D compactly inside Omega
    bool pass = false;
    std::string detail;
};

/// Empirical check of the ellipticity and jump hypotheses over the given
/// sample points (eigen-decomposition plus random Rayleigh quotients).
HypothesisReport verify_hypotheses(const MediumSpec& spec,
                                   const std::vector<Vec2>& sample_points,
                                   std::mt19937_64& rng);

}  // namespace enclosure

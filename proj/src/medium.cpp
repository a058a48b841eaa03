#include "enclosure/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace enclosure {

std::array<double, 2> Tensor2::eigenvalues() const {
    const double tr = a11 + a22;
    const double disc = std::sqrt(std::max(0.0, 0.25 * (a11 - a22) * (a11 - a22) + a12 * a12));
    return {0.5 * tr - disc, 0.5 * tr + disc};
}

TensorField TensorField::constant(Tensor2 t) {
    TensorField f;
    f.kind_ = Kind::Constant;
    f.base_ = t;
    return f;
}

TensorField TensorField::affine(Tensor2 base, Tensor2 gx, Tensor2 gy) {
    TensorField f;
    f.kind_ = Kind::Affine;
    f.base_ = base;
    f.gx_ = gx;
    f.gy_ = gy;
    return f;
}

TensorField TensorField::rotated_diagonal(double d1, double d2, double angle0,
                                          Vec2 angle_grad) {
    TensorField f;
    f.kind_ = Kind::RotatedDiagonal;
    f.d1_ = d1;
    f.d2_ = d2;
    f.angle0_ = angle0;
    f.angle_grad_ = angle_grad;
    if (angle_grad.norm() == 0.0) {
        // Constant tensor after all; fold it so is_constant() is honest.
        const double c = std::cos(angle0), s = std::sin(angle0);
        f.kind_ = Kind::Constant;
        f.base_ = {d1 * c * c + d2 * s * s, (d1 - d2) * c * s, d1 * s * s + d2 * c * c};
    }
    return f;
}

Tensor2 TensorField::eval(const Vec2& x) const {
    switch (kind_) {
        case Kind::Constant:
            return base_;
        case Kind::Affine:
            return {base_.a11 + x.x * gx_.a11 + x.y * gy_.a11,
                    base_.a12 + x.x * gx_.a12 + x.y * gy_.a12,
                    base_.a22 + x.x * gx_.a22 + x.y * gy_.a22};
        case Kind::RotatedDiagonal: {
            const double th = angle0_ + angle_grad_.dot(x);
            const double c = std::cos(th), s = std::sin(th);
            return {d1_ * c * c + d2_ * s * s, (d1_ - d2_) * c * s,
                    d1_ * s * s + d2_ * c * c};
        }
    }
    return base_;
}

Tensor2 MediumSpec::effective_tensor(const Vec2& x) const {
    if (!domain.contains(x)) throw DomainError("effective_tensor: point outside domain");
    if (has_inclusion && inclusion.contains(x)) return a_tilde.eval(x);
    return a0.eval(x);
}

HypothesisReport verify_hypotheses(const MediumSpec& spec,
                                   const std::vector<Vec2>& sample_points,
                                   std::mt19937_64& rng) {
    if (sample_points.empty())
        throw InsufficientDataError("verify_hypotheses: empty sample set");

    HypothesisReport rep;
    const double inf = std::numeric_limits<double>::infinity();
    rep.lambda0_emp = inf;
    rep.Lambda0_emp = -inf;
    rep.lambda_tilde_emp = inf;
    rep.Lambda_tilde_emp = -inf;
    rep.lambda_hat_emp = inf;
    rep.Lambda_hat_emp = -inf;

    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    bool saw_inclusion_point = false;

    for (const Vec2& x : sample_points) {
        if (!spec.domain.contains(x)) continue;
        const Tensor2 A0 = spec.a0.eval(x);
        rep.lambda0_emp = std::min(rep.lambda0_emp, A0.eigenvalues()[0]);
        rep.Lambda0_emp = std::max(rep.Lambda0_emp, A0.eigenvalues()[1]);
        // Random Rayleigh quotients cross-check the eigen route.
        for (int r = 0; r < 4; ++r) {
            const double a = angle(rng);
            const Vec2 xi{std::cos(a), std::sin(a)};
            const double q = A0.quad(xi);
            rep.lambda0_emp = std::min(rep.lambda0_emp, q);
            rep.Lambda0_emp = std::max(rep.Lambda0_emp, q);
        }
        if (spec.has_inclusion && spec.inclusion.contains(x)) {
            saw_inclusion_point = true;
            const Tensor2 At = spec.a_tilde.eval(x);
            const Tensor2 J = At - A0;
            rep.lambda_tilde_emp = std::min(rep.lambda_tilde_emp, At.eigenvalues()[0]);
            rep.Lambda_tilde_emp = std::max(rep.Lambda_tilde_emp, At.eigenvalues()[1]);
            rep.lambda_hat_emp = std::min(rep.lambda_hat_emp, J.eigenvalues()[0]);
            rep.Lambda_hat_emp = std::max(rep.Lambda_hat_emp, J.eigenvalues()[1]);
        }
    }

    rep.ellipticity_ok = rep.lambda0_emp > 0.0;
    if (spec.has_inclusion) {
        rep.ellipticity_ok = rep.ellipticity_ok && rep.lambda_tilde_emp > 0.0;
        // Declared lambda_hat = 0 marks a deliberately null perturbation;
        // the jump hypothesis is then not required.
        rep.jump_ok = spec.lambda_hat > 0.0
                          ? (saw_inclusion_point && rep.lambda_hat_emp > 0.0)
                          : true;
        // Compact containment of D in Omega, checked on inclusion vertices.
        rep.inclusion_compact_ok = true;
        for (const Vec2& v : spec.inclusion.vertices()) {
            if (!spec.domain.contains(v) || spec.domain.distance_to_boundary(v) <= 0.0) {
                rep.inclusion_compact_ok = false;
                break;
            }
        }
    } else {
        rep.jump_ok = true;
        rep.inclusion_compact_ok = true;
        rep.lambda_tilde_emp = 0.0;
        rep.Lambda_tilde_emp = 0.0;
        rep.lambda_hat_emp = 0.0;
        rep.Lambda_hat_emp = 0.0;
    }

    // Declared bounds must not be tighter than reality allows.
    bool declared_ok = true;
    const double slack = 1e-9;
    if (spec.lambda0 > rep.lambda0_emp + slack) declared_ok = false;
    if (spec.Lambda0 > 0 && spec.Lambda0 + slack < rep.Lambda0_emp) declared_ok = false;
    if (spec.has_inclusion && spec.lambda_hat > rep.lambda_hat_emp + slack)
        declared_ok = false;

    rep.pass = rep.ellipticity_ok && rep.jump_ok && rep.inclusion_compact_ok && declared_ok;

    std::ostringstream os;
    os << "lambda0=" << rep.lambda0_emp << " Lambda0=" << rep.Lambda0_emp;
    if (spec.has_inclusion)
        os << " lambda_hat=" << rep.lambda_hat_emp << " Lambda_hat=" << rep.Lambda_hat_emp;
    if (!declared_ok) os << " (declared bounds inconsistent with samples)";
    rep.detail = os.str();
    return rep;
}

}  // namespace enclosure

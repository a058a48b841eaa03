#include "enclosure/fem.hpp"

#include <cmath>

#include "enclosure/errors.hpp"

namespace enclosure {

const TriQuadrature& TriQuadrature::centroid() {
    static const TriQuadrature q{{{1.0 / 3, 1.0 / 3, 1.0 / 3}}, {1.0}};
    return q;
}

const TriQuadrature& TriQuadrature::degree2() {
    static const TriQuadrature q{
        {{0.5, 0.5, 0.0}, {0.0, 0.5, 0.5}, {0.5, 0.0, 0.5}},
        {1.0 / 3, 1.0 / 3, 1.0 / 3}};
    return q;
}

const TriQuadrature& TriQuadrature::degree4() {
    const double a1 = 0.816847572980459, b1 = 0.091576213509771,
                 w1 = 0.109951743655322;
    const double a2 = 0.108103018168070, b2 = 0.445948490915965,
                 w2 = 0.223381589678011;
    static const TriQuadrature q{
        {{a1, b1, b1}, {b1, a1, b1}, {b1, b1, a1},
         {a2, b2, b2}, {b2, a2, b2}, {b2, b2, a2}},
        {w1, w1, w1, w2, w2, w2}};
    return q;
}

Tensor2 FemWorkspace::tri_tensor(bool include_inclusion, std::size_t t) const {
    const Vec2 c = mesh_->tri_centroid(t);
    const bool in = include_inclusion && mesh_->tri_in_inclusion[t];
    return medium_->effective_tensor_attributed(c, in);
}

FemWorkspace::FemWorkspace(const MediumSpec& medium, const Mesh& mesh)
    : medium_(&medium), mesh_(&mesh), k2_(medium.k * medium.k) {
    const int n = static_cast<int>(mesh.n_nodes());

    interior_index_.assign(n, -1);
    bpos_.assign(n, -1);
    for (std::size_t i = 0; i < mesh.boundary_loop.size(); ++i)
        bpos_[mesh.boundary_loop[i]] = static_cast<int>(i);
    for (int v = 0; v < n; ++v) {
        if (bpos_[v] < 0) {
            interior_index_[v] = n_interior_++;
            interior_nodes_.push_back(v);
        }
    }

    std::vector<Eigen::Triplet<double>> tk_full, tk_bg, tm;
    tk_full.reserve(mesh.n_triangles() * 9);
    tk_bg.reserve(mesh.n_triangles() * 9);
    tm.reserve(mesh.n_triangles() * 9);
    for (std::size_t t = 0; t < mesh.n_triangles(); ++t) {
        const double area = mesh.tri_area(t);
        const auto grads = mesh.hat_gradients(t);
        const Tensor2 Af = tri_tensor(true, t);
        const Tensor2 Ab = tri_tensor(false, t);
        const auto& tri = mesh.triangles[t];
        for (int a = 0; a < 3; ++a) {
            for (int b = 0; b < 3; ++b) {
                tk_full.emplace_back(tri[a], tri[b], area * Af.pair(grads[a], grads[b]));
                tk_bg.emplace_back(tri[a], tri[b], area * Ab.pair(grads[a], grads[b]));
                tm.emplace_back(tri[a], tri[b], area / 12.0 * (a == b ? 2.0 : 1.0));
            }
        }
    }
    K_full_.resize(n, n);
    K_bg_.resize(n, n);
    M_.resize(n, n);
    K_full_.setFromTriplets(tk_full.begin(), tk_full.end());
    K_bg_.setFromTriplets(tk_bg.begin(), tk_bg.end());
    M_.setFromTriplets(tm.begin(), tm.end());

    // Condensed operators and interior-boundary coupling.
    auto condense = [&](const SpMat& K, SpMat& C, SpMat& Cib) {
        std::vector<Eigen::Triplet<double>> tc, tib;
        const SpMat A = K - k2_ * M_;
        for (int col = 0; col < A.outerSize(); ++col) {
            for (SpMat::InnerIterator it(A, col); it; ++it) {
                const int r = static_cast<int>(it.row());
                const int c = col;
                if (interior_index_[r] >= 0 && interior_index_[c] >= 0)
                    tc.emplace_back(interior_index_[r], interior_index_[c], it.value());
                else if (interior_index_[r] >= 0 && bpos_[c] >= 0)
                    tib.emplace_back(interior_index_[r], bpos_[c], it.value());
            }
        }
        C.resize(n_interior_, n_interior_);
        C.setFromTriplets(tc.begin(), tc.end());
        Cib.resize(n_interior_, static_cast<int>(mesh_->boundary_loop.size()));
        Cib.setFromTriplets(tib.begin(), tib.end());
    };
    condense(K_full_, C_full_, C_full_ib_);
    condense(K_bg_, C_bg_, C_bg_ib_);

    lu_full_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu_full_->compute(C_full_);
    factor_ok_full_ = lu_full_->info() == Eigen::Success;
    lu_bg_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu_bg_->compute(C_bg_);
    factor_ok_bg_ = lu_bg_->info() == Eigen::Success;

    // Cyclic tridiagonal boundary mass matrix in loop ordering.
    const int nb = static_cast<int>(mesh.boundary_loop.size());
    std::vector<Eigen::Triplet<double>> tb;
    for (int i = 0; i < nb; ++i) {
        const int j = (i + 1) % nb;
        const double len =
            (mesh.nodes[mesh.boundary_loop[j]] - mesh.nodes[mesh.boundary_loop[i]]).norm();
        tb.emplace_back(i, i, len / 3.0);
        tb.emplace_back(j, j, len / 3.0);
        tb.emplace_back(i, j, len / 6.0);
        tb.emplace_back(j, i, len / 6.0);
    }
    M_bd_.resize(nb, nb);
    M_bd_.setFromTriplets(tb.begin(), tb.end());
    lu_M_bd_ = std::make_unique<Eigen::SparseLU<SpMat>>();
    lu_M_bd_->compute(M_bd_);
    if (lu_M_bd_->info() != Eigen::Success)
        throw MeshError("boundary mass factorization failed");
}

CVec FemWorkspace::condensed_solve(const Eigen::SparseLU<SpMat>& lu, const CVec& rhs) const {
    Eigen::MatrixXd B(rhs.size(), 2);
    B.col(0) = rhs.real();
    B.col(1) = rhs.imag();
    const Eigen::MatrixXd X = lu.solve(B);
    CVec out(rhs.size());
    out.real() = X.col(0);
    out.imag() = X.col(1);
    return out;
}

CVec FemWorkspace::solve_dirichlet(bool include_inclusion, const CVec& f_boundary,
                                   SolveStats* stats) const {
    const bool ok = include_inclusion ? factor_ok_full_ : factor_ok_bg_;
    if (!ok) throw EigenvalueGuardError("stiffness-mass factorization failed");
    if (f_boundary.size() != static_cast<Eigen::Index>(mesh_->boundary_loop.size()))
        throw MeshError("solve_dirichlet: trace size mismatch");
    if (!f_boundary.allFinite()) throw DomainError("solve_dirichlet: non-finite trace");

    const SpMat& Cib = include_inclusion ? C_full_ib_ : C_bg_ib_;
    const auto& lu = include_inclusion ? *lu_full_ : *lu_bg_;
    const CVec rhs = -(Cib * f_boundary);
    const CVec uI = condensed_solve(lu, rhs);

    if (stats) {
        const SpMat& C = include_inclusion ? C_full_ : C_bg_;
        const double den = rhs.norm();
        stats->rel_residual = den > 0 ? (C * uI - rhs).norm() / den : 0.0;
    }

    CVec u = CVec::Zero(mesh_->n_nodes());
    for (int v = 0; v < static_cast<int>(mesh_->n_nodes()); ++v) {
        if (interior_index_[v] >= 0)
            u[v] = uI[interior_index_[v]];
        else
            u[v] = f_boundary[bpos_[v]];
    }
    return u;
}

CVec FemWorkspace::solve_with_load(const CVec& load_full, double* rel_residual) const {
    if (!factor_ok_bg_) throw EigenvalueGuardError("background factorization failed");
    CVec rhs(n_interior_);
    for (int i = 0; i < n_interior_; ++i) rhs[i] = load_full[interior_nodes_[i]];
    const CVec uI = condensed_solve(*lu_bg_, rhs);
    if (rel_residual) {
        const double den = rhs.norm();
        *rel_residual = den > 0 ? (C_bg_ * uI - rhs).norm() / den : 0.0;
    }
    CVec u = CVec::Zero(mesh_->n_nodes());
    for (int i = 0; i < n_interior_; ++i) u[interior_nodes_[i]] = uI[i];
    return u;
}

void FemWorkspace::dn_apply(bool include_inclusion, const CVec& f_boundary,
                            CVec& functional, CVec& nodal, CVec* interior) const {
    const CVec u = solve_dirichlet(include_inclusion, f_boundary);
    const SpMat& K = include_inclusion ? K_full_ : K_bg_;
    const CVec residual = K * u - k2_ * (M_ * u);
    const int nb = static_cast<int>(mesh_->boundary_loop.size());
    functional.resize(nb);
    for (int i = 0; i < nb; ++i) functional[i] = residual[mesh_->boundary_loop[i]];
    nodal = condensed_solve(*lu_M_bd_, functional);
    if (interior) *interior = u;
}

DNPair FemWorkspace::dn_pair(const CVec& f_boundary) const {
    DNPair p;
    p.f = f_boundary;
    dn_apply(true, f_boundary, p.func_D, p.lambda_D_f, &p.u_full);
    dn_apply(false, f_boundary, p.func_0, p.lambda_0_f, &p.u_background);
    return p;
}

Complex FemWorkspace::boundary_pairing(const CVec& g_nodal, const CVec& f_nodal) const {
    if (g_nodal.size() != f_nodal.size() ||
        g_nodal.size() != static_cast<Eigen::Index>(mesh_->boundary_loop.size()))
        throw MeshError("boundary_pairing: size mismatch");
    // integral of g fbar; Eigen's dot conjugates its left argument.
    return (M_bd_ * f_nodal).dot(g_nodal);
}

Complex FemWorkspace::pair_functional(const CVec& functional, const CVec& f_nodal) const {
    if (functional.size() != f_nodal.size())
        throw MeshError("pair_functional: size mismatch");
    // integral of g fbar = sum_i <g,phi_i> conj(f_i)
    Complex s = 0.0;
    for (Eigen::Index i = 0; i < functional.size(); ++i)
        s += functional[i] * std::conj(f_nodal[i]);
    return s;
}

GuardReport FemWorkspace::eigenvalue_guard(bool include_inclusion) const {
    GuardReport rep;
    const bool ok = include_inclusion ? factor_ok_full_ : factor_ok_bg_;
    if (!ok) {
        rep.pass = false;
        rep.margin = 0.0;
        return rep;
    }
    const SpMat& C = include_inclusion ? C_full_ : C_bg_;
    const auto& lu = include_inclusion ? *lu_full_ : *lu_bg_;
    // Inverse power iteration estimates the smallest |eigenvalue|.
    Eigen::VectorXd v = Eigen::VectorXd::Ones(n_interior_);
    v.normalize();
    double mu = 0.0;
    for (int it = 0; it < 30; ++it) {
        Eigen::VectorXd w = lu.solve(v);
        const double nw = w.norm();
        if (!std::isfinite(nw) || nw == 0.0) break;
        mu = 1.0 / nw;
        v = w / nw;
    }
    double scale = 0.0;
    for (int c = 0; c < C.outerSize(); ++c)
        for (SpMat::InnerIterator it(C, c); it; ++it)
            scale = std::max(scale, std::abs(it.value()));
    rep.margin = scale > 0 ? mu / scale : 0.0;
    rep.pass = rep.margin > rep.threshold;
    return rep;
}

void FemWorkspace::require_guards() const {
    auto g0 = eigenvalue_guard(false);
    if (!g0.pass)
        throw EigenvalueGuardError("background operator failed eigenvalue guard, margin=" +
                                   std::to_string(g0.margin));
    auto g1 = eigenvalue_guard(true);
    if (!g1.pass)
        throw EigenvalueGuardError("perturbed operator failed eigenvalue guard, margin=" +
                                   std::to_string(g1.margin));
}

Complex FemWorkspace::energy_form(bool include_inclusion, const CVec& u, const CVec& v) const {
    const SpMat& K = include_inclusion ? K_full_ : K_bg_;
    return (K * v).dot(u);  // conj(Kv) . u  -> integral A grad u . conj(grad v)
}

Complex FemWorkspace::mass_form(const CVec& u, const CVec& v) const {
    return (M_ * v).dot(u);
}

Complex FemWorkspace::jump_form(const CVec& u, const CVec& v) const {
    Complex s = 0.0;
    for (std::size_t t = 0; t < mesh_->n_triangles(); ++t) {
        if (!mesh_->tri_in_inclusion[t]) continue;
        const double area = mesh_->tri_area(t);
        const auto grads = mesh_->hat_gradients(t);
        const auto& tri = mesh_->triangles[t];
        const Vec2 c = mesh_->tri_centroid(t);
        const Tensor2 J = medium_->a_tilde.eval(c) - medium_->a0.eval(c);
        Complex gux = 0, guy = 0, gvx = 0, gvy = 0;
        for (int a = 0; a < 3; ++a) {
            gux += u[tri[a]] * grads[a].x;
            guy += u[tri[a]] * grads[a].y;
            gvx += v[tri[a]] * grads[a].x;
            gvy += v[tri[a]] * grads[a].y;
        }
        const Complex jx = J.a11 * gux + J.a12 * guy;
        const Complex jy = J.a12 * gux + J.a22 * guy;
        s += area * (jx * std::conj(gvx) + jy * std::conj(gvy));
    }
    return s;
}

double FemWorkspace::inclusion_grad_sq(const CVec& u) const {
    double s = 0.0;
    for (std::size_t t = 0; t < mesh_->n_triangles(); ++t) {
        if (!mesh_->tri_in_inclusion[t]) continue;
        const double area = mesh_->tri_area(t);
        const auto grads = mesh_->hat_gradients(t);
        const auto& tri = mesh_->triangles[t];
        Complex gx = 0, gy = 0;
        for (int a = 0; a < 3; ++a) {
            gx += u[tri[a]] * grads[a].x;
            gy += u[tri[a]] * grads[a].y;
        }
        s += area * (std::norm(gx) + std::norm(gy));
    }
    return s;
}

double FemWorkspace::inclusion_value_sq(const CVec& u) const {
    double s = 0.0;
    const auto& q = TriQuadrature::degree2();
    for (std::size_t t = 0; t < mesh_->n_triangles(); ++t) {
        if (!mesh_->tri_in_inclusion[t]) continue;
        const double area = mesh_->tri_area(t);
        const auto& tri = mesh_->triangles[t];
        for (std::size_t p = 0; p < q.bary.size(); ++p) {
            Complex val = 0.0;
            for (int a = 0; a < 3; ++a) val += q.bary[p][a] * u[tri[a]];
            s += area * q.weights[p] * std::norm(val);
        }
    }
    return s;
}

double FemWorkspace::h1_norm(const CVec& u) const {
    double s = 0.0;
    for (std::size_t t = 0; t < mesh_->n_triangles(); ++t) {
        const double area = mesh_->tri_area(t);
        const auto grads = mesh_->hat_gradients(t);
        const auto& tri = mesh_->triangles[t];
        Complex gx = 0, gy = 0;
        for (int a = 0; a < 3; ++a) {
            gx += u[tri[a]] * grads[a].x;
            gy += u[tri[a]] * grads[a].y;
        }
        s += area * (std::norm(gx) + std::norm(gy));
    }
    const double l2 = l2_norm(u);
    return std::sqrt(s + l2 * l2);
}

double FemWorkspace::l2_norm(const CVec& u) const {
    return std::sqrt(std::abs((M_ * u).dot(u)));
}

CVec FemWorkspace::trace_to_field(const CVec& f_boundary) const {
    CVec u = CVec::Zero(mesh_->n_nodes());
    for (std::size_t i = 0; i < mesh_->boundary_loop.size(); ++i)
        u[mesh_->boundary_loop[i]] = f_boundary[i];
    return u;
}

CVec FemWorkspace::field_trace(const CVec& u) const {
    CVec f(mesh_->boundary_loop.size());
    for (std::size_t i = 0; i < mesh_->boundary_loop.size(); ++i)
        f[i] = u[mesh_->boundary_loop[i]];
    return f;
}

}  // namespace enclosure

#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <complex>
#include <memory>
#include <vector>

#include "enclosure/medium.hpp"
#include "enclosure/mesh.hpp"

namespace enclosure {

using Complex = std::complex<double>;
using CVec = Eigen::VectorXcd;
using SpMat = Eigen::SparseMatrix<double>;

/// Triangle quadrature rule in barycentric coordinates; weights sum to 1.
struct TriQuadrature {
    std::vector<std::array<double, 3>> bary;
    std::vector<double> weights;

    static const TriQuadrature& centroid();
    static const TriQuadrature& degree2();
    static const TriQuadrature& degree4();
};

/// Dirichlet trace with both Neumann responses and the interior fields they
/// came from. Traces and responses are indexed along the boundary loop.
struct DNPair {
    CVec f;             // Dirichlet data at boundary-loop nodes
    CVec lambda_D_f;    // nodal Neumann response, with inclusion
    CVec lambda_0_f;    // nodal Neumann response, background only
    CVec func_D;        // boundary functional <Lambda_D f, phi_i>
    CVec func_0;        // boundary functional <Lambda_0 f, phi_i>
    CVec u_full;        // interior solution, with inclusion (all nodes)
    CVec u_background;  // interior solution, background only (all nodes)
};

struct GuardReport {
    bool pass = false;
    double margin = 0.0;     // smallest singular value estimate / matrix scale
    double threshold = 1e-8;
};

struct SolveStats {
    double rel_residual = 0.0;
};

/// Assembled discrete operators for one (medium, mesh) pair, holding the
/// sparse factorizations for both the perturbed and background problems.
/// Assembly uses the element-attributed coefficient map, so the tensor is
/// never mixed within an element.
class FemWorkspace {
   public:
    FemWorkspace(const MediumSpec& medium, const Mesh& mesh);

    const Mesh& mesh() const { return *mesh_; }
    const MediumSpec& medium() const { return *medium_; }

    /// Discrete Dirichlet solve with strong imposition of f at boundary nodes.
    CVec solve_dirichlet(bool include_inclusion, const CVec& f_boundary,
                         SolveStats* stats = nullptr) const;

    /// Zero-Dirichlet solve of the background operator against a load
    /// functional given at all nodes (only interior entries enter).
    CVec solve_with_load(const CVec& load_full, double* rel_residual = nullptr) const;

    /// Variational Neumann extraction: the boundary functional g with
    /// <g, phi> = a(u, phi) - k^2 (u, phi) for every boundary hat phi, plus
    /// its nodal representation through the boundary mass matrix.
    void dn_apply(bool include_inclusion, const CVec& f_boundary, CVec& functional,
                  CVec& nodal, CVec* interior = nullptr) const;

    /// Both DN responses for one trace.
    DNPair dn_pair(const CVec& f_boundary) const;

    /// Integral over the boundary of g fbar, g given by nodal values.
    Complex boundary_pairing(const CVec& g_nodal, const CVec& f_nodal) const;
    /// Same integral when g is already a boundary functional.
    Complex pair_functional(const CVec& functional, const CVec& f_nodal) const;

    GuardReport eigenvalue_guard(bool include_inclusion) const;
    /// Throws EigenvalueGuardError if either operator fails the guard.
    void require_guards() const;

    // Discrete forms over the whole domain (fields on all nodes).
    Complex energy_form(bool include_inclusion, const CVec& u, const CVec& v) const;
    Complex mass_form(const CVec& u, const CVec& v) const;
    /// Integral over the inclusion of (At - A0) grad u . conj(grad v).
    Complex jump_form(const CVec& u, const CVec& v) const;
    /// Integral over the inclusion of A-weighted |grad u|^2 with A = identity.
    double inclusion_grad_sq(const CVec& u) const;
    double inclusion_value_sq(const CVec& u) const;

    double h1_norm(const CVec& u) const;
    double l2_norm(const CVec& u) const;

    /// Interpolate trace values from the boundary loop onto all nodes (zero
    /// in the interior).
    CVec trace_to_field(const CVec& f_boundary) const;
    CVec field_trace(const CVec& u) const;

    const std::vector<int>& boundary_loop() const { return mesh_->boundary_loop; }
    int n_interior() const { return n_interior_; }

    /// Per-triangle attributed tensor used in assembly (centroid value).
    Tensor2 tri_tensor(bool include_inclusion, std::size_t t) const;

   private:
    const MediumSpec* medium_;
    const Mesh* mesh_;
    double k2_;

    SpMat K_full_, K_bg_, M_;
    std::vector<int> interior_index_;  // node -> condensed index or -1
    std::vector<int> interior_nodes_;
    std::vector<int> bpos_;            // node -> boundary loop position or -1
    int n_interior_ = 0;

    SpMat C_full_, C_bg_;  // condensed K - k^2 M
    SpMat C_full_ib_, C_bg_ib_;  // interior x boundary coupling
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu_full_, lu_bg_;
    bool factor_ok_full_ = false, factor_ok_bg_ = false;

    // 1D boundary mass matrix in loop ordering (cyclic tridiagonal).
    SpMat M_bd_;
    std::unique_ptr<Eigen::SparseLU<SpMat>> lu_M_bd_;

    CVec condensed_solve(const Eigen::SparseLU<SpMat>& lu, const CVec& rhs) const;
};

}  // namespace enclosure

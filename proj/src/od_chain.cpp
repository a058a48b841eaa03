#include "enclosure/od_chain.hpp"

#include <algorithm>
#include <cmath>

#include "enclosure/errors.hpp"

namespace enclosure {

// ---------------------------------------------------------------------------
// SmoothBump

namespace {
double binomial(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}
}  // namespace

SmoothBump::SmoothBump(double lo, double hi, double falloff_width, int order)
    : lo_(lo), hi_(hi), wf_(falloff_width), order_(order) {
    if (hi_ <= lo_) throw DomainError("SmoothBump: empty support");
    if (wf_ <= 0.0 || 2.0 * wf_ > (hi_ - lo_) + 1e-12)
        throw DomainError("SmoothBump: falloff width must fit inside the support");
    if (order_ < 1) throw DomainError("SmoothBump: order must be >= 1");
    // smoothstep_S(u) = u^{S+1} sum_k binom(S+k,k) binom(2S+1,S-k) (-u)^k
    coef_.assign(2 * order_ + 2, 0.0);
    for (int k = 0; k <= order_; ++k) {
        const double c =
            binomial(order_ + k, k) * binomial(2 * order_ + 1, order_ - k);
        coef_[order_ + 1 + k] = (k % 2 == 0 ? c : -c);
    }
}

double SmoothBump::poly_deriv(double u, int d) const {
    // d-th derivative of the smoothstep polynomial at u in [0,1].
    double s = 0.0;
    for (int n = static_cast<int>(coef_.size()) - 1; n >= d; --n) {
        double f = 1.0;
        for (int j = 0; j < d; ++j) f *= (n - j);
        s = s * u + coef_[n] * f * ((n - d) >= 0 ? 1.0 : 0.0);
        // Horner in u over descending powers (n-d).
    }
    return s;
}

double SmoothBump::derivative(double x, int d) const {
    if (x <= lo_ || x >= hi_) return 0.0;
    const double rl = (x - lo_) / wf_;
    const double rh = (hi_ - x) / wf_;
    if (rl < 1.0) {
        const double v = poly_deriv(rl, d);
        return v / std::pow(wf_, d);
    }
    if (rh < 1.0) {
        const double v = poly_deriv(rh, d);
        return (d % 2 == 0 ? v : -v) / std::pow(wf_, d);
    }
    return d == 0 ? 1.0 : 0.0;
}

void SmoothBump::derivatives(double x, int dmax, double* out) const {
    for (int d = 0; d <= dmax; ++d) out[d] = derivative(x, d);
}

// ---------------------------------------------------------------------------
// Constant-coefficient operator algebra. A term is tau^m * P(d1) with P a
// polynomial in the tangential derivative; matrices are 2x2 of such
// polynomials, series are maps keyed by m. Constant coefficients commute, so
// products are plain convolutions.

namespace {

using Poly = std::vector<Complex>;  // Poly[d] multiplies d1^d

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Complex(0, 0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

void poly_add_to(Poly& a, const Poly& b, Complex scale = Complex(1, 0)) {
    if (a.size() < b.size()) a.resize(b.size(), Complex(0, 0));
    for (std::size_t i = 0; i < b.size(); ++i) a[i] += scale * b[i];
}

bool poly_zero(const Poly& p) {
    for (const Complex& c : p)
        if (std::abs(c) > 1e-14) return false;
    return true;
}

struct Mat2P {
    Poly e[4];  // row-major
};

Mat2P mat_mul(const Mat2P& a, const Mat2P& b) {
    Mat2P r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Poly s;
            poly_add_to(s, poly_mul(a.e[2 * i + 0], b.e[0 + j]));
            poly_add_to(s, poly_mul(a.e[2 * i + 1], b.e[2 + j]));
            r.e[2 * i + j] = std::move(s);
        }
    return r;
}

void mat_add_to(Mat2P& a, const Mat2P& b, Complex scale = Complex(1, 0)) {
    for (int i = 0; i < 4; ++i) poly_add_to(a.e[i], b.e[i], scale);
}

bool mat_zero(const Mat2P& m) {
    for (int i = 0; i < 4; ++i)
        if (!poly_zero(m.e[i])) return false;
    return true;
}

using Series = std::map<int, Mat2P>;  // tau-power -> matrix

Series series_mul(const Series& a, const Series& b, int m_min) {
    Series r;
    for (const auto& [ma, A] : a)
        for (const auto& [mb, B] : b) {
            const int m = ma + mb;
            if (m < m_min) continue;
            Mat2P prod = mat_mul(A, B);
            auto it = r.find(m);
            if (it == r.end())
                r.emplace(m, std::move(prod));
            else
                mat_add_to(it->second, prod);
        }
    return r;
}

Series series_add(Series a, const Series& b, Complex scale = Complex(1, 0)) {
    for (const auto& [m, B] : b) {
        auto it = a.find(m);
        if (it == a.end()) {
            Mat2P scaled;
            mat_add_to(scaled, B, scale);
            a.emplace(m, std::move(scaled));
        } else {
            mat_add_to(it->second, B, scale);
        }
    }
    return a;
}

Mat2P identity_mat() {
    Mat2P id;
    id.e[0] = {Complex(1, 0)};
    id.e[3] = {Complex(1, 0)};
    return id;
}

/// Inverse of I + X where X collects all tau-powers < 0 of t; Neumann series
/// truncated at m_min.
Series series_inverse_of_perturbed_identity(const Series& t, int m_min) {
    Series x = t;  // t minus identity
    {
        auto it = x.find(0);
        if (it != x.end()) {
            Mat2P id = identity_mat();
            mat_add_to(it->second, id, Complex(-1, 0));
            if (mat_zero(it->second)) x.erase(it);
        }
    }
    Series inv;
    inv.emplace(0, identity_mat());
    Series power;
    power.emplace(0, identity_mat());
    // Powers of x shift tau-powers down by at least 1 each time.
    for (int j = 1; j <= -m_min + 1; ++j) {
        power = series_mul(power, x, m_min);
        if (power.empty()) break;
        inv = series_add(std::move(inv), power, Complex(j % 2 == 0 ? 1 : -1, 0));
    }
    return inv;
}

}  // namespace

// ---------------------------------------------------------------------------

ChainSymbols derive_chain(const Tensor2& A0, const Direction& dir, int xi_sign,
                          double k, int order) {
    if (order < 0 || order > 4)
        throw DomainError("derive_chain: correction order must be in [0,4]");

    ChainSymbols out;
    out.symbol = build_symbol_from_tensor(A0, dir, xi_sign);
    out.xi_sign = xi_sign;
    out.k = k;
    out.order = order;

    const double g = out.symbol.g, p = out.symbol.p, q = out.symbol.q;
    const Complex lp = out.symbol.lambda_plus, lm = out.symbol.lambda_minus;
    const double beta = out.symbol.im_lambda;
    const Complex I1(0, 1);
    const double eps = static_cast<double>(xi_sign);
    const int m_min = -(order + 1);

    // Diagonalizer of the leading system matrix.
    Mat2P Q, Qi;
    Q.e[0] = {Complex(1, 0)};
    Q.e[1] = {Complex(1, 0)};
    Q.e[2] = {-I1 * g * beta};
    Q.e[3] = {I1 * g * beta};
    const Complex idet = 1.0 / (2.0 * I1 * g * beta);
    Qi.e[0] = {idet * (I1 * g * beta)};
    Qi.e[1] = {idet * Complex(-1, 0)};
    Qi.e[2] = {idet * (I1 * g * beta)};
    Qi.e[3] = {idet * Complex(1, 0)};

    // Lower-order couplings of the exact first-order system.
    Mat2P K0;  // order 0: first-order tangential derivatives
    K0.e[2] = {Complex(0, 0), -2.0 * I1 * eps * g * beta * beta};  // alpha1 d1
    K0.e[3] = {Complex(0, 0), 2.0 * I1 * eps * p / g};             // alpha2 d1
    Mat2P Km1;  // order -1: tangential second derivatives and k^2
    Km1.e[2] = {Complex(-k * k, 0), Complex(0, 0), Complex(-q, 0)};

    Series S;
    {
        Mat2P lead;
        lead.e[0] = {lp};
        lead.e[3] = {lm};
        S.emplace(1, std::move(lead));
        Series tmp;
        tmp.emplace(0, K0);
        tmp.emplace(-1, Km1);
        // Conjugate the couplings by the diagonalizer.
        for (auto& [m, Mt] : tmp) {
            Series one;
            one.emplace(m, Mt);
            Series qi, qq;
            qi.emplace(0, Qi);
            qq.emplace(0, Q);
            Series conj = series_mul(series_mul(qi, one, m_min), qq, m_min);
            S = series_add(std::move(S), conj);
        }
    }

    // Order-by-order decoupling with transforms I + tau^{m-1} Phi.
    Series pi_t;
    pi_t.emplace(0, identity_mat());
    for (int m = 0; m >= -order; --m) {
        auto it = S.find(m);
        if (it == S.end()) continue;
        Poly off12 = it->second.e[1];
        Poly off21 = it->second.e[2];
        if (poly_zero(off12) && poly_zero(off21)) continue;
        Mat2P phi;
        const Complex gap = lp - lm;  // 2 i beta
        for (auto& c : off12) c = -c / gap;
        for (auto& c : off21) c = c / gap;
        phi.e[1] = std::move(off12);
        phi.e[2] = std::move(off21);

        Series T;
        T.emplace(0, identity_mat());
        T.emplace(m - 1, phi);
        Series Ti = series_inverse_of_perturbed_identity(T, m_min);
        S = series_mul(series_mul(Ti, S, m_min), T, m_min);
        pi_t = series_mul(pi_t, T, m_min);
    }

    // Scalar chain symbols: (1,1) entries, orders 0..-N.
    out.chain.assign(order + 1, {});
    for (int l = 0; l <= order; ++l) {
        auto it = S.find(-l);
        if (it != S.end()) out.chain[l] = it->second.e[0];
    }

    // Reconstruction operator: first column of Q * (product of transforms),
    // rows summed since Q's first row is [1, 1].
    for (const auto& [m, Mt] : pi_t) {
        Poly sum = Mt.e[0];
        poly_add_to(sum, Mt.e[2]);
        for (std::size_t d = 0; d < sum.size(); ++d) {
            if (std::abs(sum[d]) > 1e-14)
                out.reconstruct_op[{m, static_cast<int>(d)}] += sum[d];
        }
    }

    // Closed-form chain integration. Corrections are bags of
    // (tau_pow, xn_pow, chi_d) monomials; integrating factor quadrature is
    // exact: E * int_0^xn i * src ds with the E factors cancelling.
    using Key = std::array<int, 3>;
    auto bag_to_terms = [](const std::map<Key, Complex>& bag) {
        std::vector<ProfileTerm> terms;
        for (const auto& [key, c] : bag) {
            if (std::abs(c) < 1e-300) continue;
            terms.push_back({key[0], key[1], key[2], c});
        }
        return terms;
    };

    std::vector<std::map<Key, Complex>> bags(order + 2);
    bags[0][{0, 0, 0}] = Complex(1, 0);
    for (int j = 1; j <= order + 1; ++j) {
        std::map<Key, Complex> src;
        for (int l = 0; l <= std::min(j - 1, order); ++l) {
            const Poly& sym = out.chain[l];
            if (sym.empty()) continue;
            for (const auto& [key, c] : bags[j - 1 - l]) {
                for (std::size_t d = 0; d < sym.size(); ++d) {
                    if (std::abs(sym[d]) < 1e-14) continue;
                    src[{key[0] - l, key[1], key[2] + static_cast<int>(d)}] +=
                        c * sym[d];
                }
            }
        }
        for (const auto& [key, c] : src)
            bags[j][{key[0], key[1] + 1, key[2]}] += I1 * c / double(key[1] + 1);
    }

    out.corrections.clear();
    std::map<Key, Complex> total;
    for (const auto& bag : bags) {
        out.corrections.push_back(bag_to_terms(bag));
        for (const auto& [key, c] : bag) total[key] += c;
    }

    // Apply the reconstruction operator to the summed chain.
    std::map<Key, Complex> full;
    for (const auto& [md, rc] : out.reconstruct_op) {
        for (const auto& [key, c] : total)
            full[{key[0] + md.first, key[1], key[2] + md.second}] += rc * c;
    }
    out.profile = bag_to_terms(full);
    out.max_chi_derivative = 0;
    for (const auto& t : out.profile)
        out.max_chi_derivative = std::max(out.max_chi_derivative, t.chi_d);
    return out;
}

// ---------------------------------------------------------------------------
// Grid transport: honest quadrature realization, cross-checked against the
// closed form by tests.

namespace {
/// 8th-order central difference of a uniformly sampled function, zero-padded
/// outside the grid (valid because the chain stays supported in supp(chi)).
void fd_derivative(const std::vector<Complex>& f, double dx, std::vector<Complex>& out) {
    const int n = static_cast<int>(f.size());
    out.assign(n, Complex(0, 0));
    static const double c1 = 4.0 / 5.0, c2 = -1.0 / 5.0, c3 = 4.0 / 105.0,
                        c4 = -1.0 / 280.0;
    auto at = [&](int i) { return (i < 0 || i >= n) ? Complex(0, 0) : f[i]; };
    for (int i = 0; i < n; ++i) {
        out[i] = (c1 * (at(i + 1) - at(i - 1)) + c2 * (at(i + 2) - at(i - 2)) +
                  c3 * (at(i + 3) - at(i - 3)) + c4 * (at(i + 4) - at(i - 4))) /
                 dx;
    }
}
}  // namespace

TransportGrid transport_corrections(const ChainSymbols& chain, const SmoothBump& chi,
                                    double tau, double dx_prime, double dxn,
                                    double depth) {
    const double beta = chain.symbol.im_lambda;
    const double allowed = 1.0 / (10.0 * tau * beta);
    if (dxn > allowed * (1.0 + 1e-12))
        throw ResolutionError("transport grid too coarse for the decay scale", allowed);

    TransportGrid grid;
    const double margin = 4.0 * dx_prime;
    const double xlo = chi.lo() - margin, xhi = chi.hi() + margin;
    const int nx = std::max(8, static_cast<int>(std::ceil((xhi - xlo) / dx_prime)) + 1);
    const int nn = std::max(4, static_cast<int>(std::ceil(depth / dxn)) + 1);
    grid.x_prime.resize(nx);
    for (int i = 0; i < nx; ++i) grid.x_prime[i] = xlo + (xhi - xlo) * i / (nx - 1);
    grid.xn.resize(nn);
    for (int i = 0; i < nn; ++i) grid.xn[i] = depth * i / (nn - 1);
    const double hx = grid.x_prime[1] - grid.x_prime[0];
    const double hn = grid.xn[1] - grid.xn[0];

    const int n_corr = chain.order + 2;
    grid.amplitude.assign(n_corr, std::vector<Complex>(nx * nn, Complex(0, 0)));

    // j = 0: amplitude is chi(x'), constant transversally.
    for (int ix = 0; ix < nx; ++ix) {
        const Complex v = chi.value(grid.x_prime[ix]);
        for (int in = 0; in < nn; ++in) grid.amplitude[0][ix * nn + in] = v;
    }

    const Complex I1(0, 1);
    std::vector<Complex> line(nx), dline(nx);
    for (int j = 1; j < n_corr; ++j) {
        // Source on the grid: sum over l of tau^{-l} P_l(d1) amplitude_{j-1-l}.
        std::vector<Complex> src(nx * nn, Complex(0, 0));
        for (int l = 0; l <= std::min(j - 1, chain.order); ++l) {
            const auto& sym = chain.chain[l];
            if (sym.empty()) continue;
            const double tl = std::pow(tau, -l);
            for (int in = 0; in < nn; ++in) {
                for (int ix = 0; ix < nx; ++ix)
                    line[ix] = grid.amplitude[j - 1 - l][ix * nn + in];
                // Apply the polynomial derivative by derivative.
                std::vector<Complex> acc(nx, Complex(0, 0));
                std::vector<Complex> cur = line;
                for (std::size_t d = 0; d < sym.size(); ++d) {
                    if (std::abs(sym[d]) > 1e-14)
                        for (int ix = 0; ix < nx; ++ix) acc[ix] += sym[d] * cur[ix];
                    if (d + 1 < sym.size()) {
                        fd_derivative(cur, hx, dline);
                        cur = dline;
                    }
                }
                for (int ix = 0; ix < nx; ++ix) src[ix * nn + in] += tl * acc[ix];
            }
        }
        // Cumulative integral of i*src along the transversal coordinate,
        // 4-point end-corrected rule (exact for cubics).
        for (int ix = 0; ix < nx; ++ix) {
            auto f = [&](int in) { return src[ix * nn + in]; };
            Complex acc(0, 0);
            grid.amplitude[j][ix * nn + 0] = 0.0;
            for (int in = 0; in + 1 < nn; ++in) {
                Complex step;
                if (in == 0 && nn >= 4)
                    step = (hn / 24.0) * (9.0 * f(0) + 19.0 * f(1) - 5.0 * f(2) + f(3));
                else if (in + 2 >= nn && nn >= 4)
                    step = (hn / 24.0) *
                           (f(in - 2) - 5.0 * f(in - 1) + 19.0 * f(in) + 9.0 * f(in + 1));
                else if (nn >= 4)
                    step = (hn / 24.0) *
                           (-f(in - 1) + 13.0 * f(in) + 13.0 * f(in + 1) - f(in + 2));
                else
                    step = hn * 0.5 * (f(in) + f(in + 1));
                acc += I1 * step;
                grid.amplitude[j][ix * nn + in + 1] = acc;
            }
        }
    }

    // L2 norms of the corrections including the transversal decay factor.
    grid.l2_norm.assign(n_corr, 0.0);
    for (int j = 0; j < n_corr; ++j) {
        double s = 0.0;
        for (int ix = 0; ix < nx; ++ix)
            for (int in = 0; in < nn; ++in) {
                const double w = ((ix == 0 || ix == nx - 1) ? 0.5 : 1.0) *
                                 ((in == 0 || in == nn - 1) ? 0.5 : 1.0);
                const double decay = std::exp(-2.0 * tau * beta * grid.xn[in]);
                s += w * hx * hn * std::norm(grid.amplitude[j][ix * nn + in]) * decay;
            }
        grid.l2_norm[j] = std::sqrt(s);
    }
    return grid;
}

}  // namespace enclosure

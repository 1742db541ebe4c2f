#pragma once

#include "fuzzy.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <random>

namespace ncg {

// L12 = i J3, L23 = i J1, L31 = i J2 for the spin l = (n-1)/2 matrices
struct So3Rep {
    int n = 1;
    cmat L12, L13, L23;

    cmat L(int j, int k) const {
        if (j == k) return cmat::Zero(n, n);
        if (j > k) return -L(k, j);
        if (j == 1 && k == 2) return L12;
        if (j == 1 && k == 3) return L13;
        if (j == 2 && k == 3) return L23;
        throw invalid_input("So3Rep::L: indices must lie in 1..3");
    }
};

inline So3Rep so3_irrep(int n) {
    if (n < 1) throw invalid_input("so3_irrep: n must be positive");
    const double l = 0.5 * (n - 1);
    cmat j3 = cmat::Zero(n, n), jp = cmat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double m = l - k;
        j3(k, k) = m;
        if (k > 0) jp(k - 1, k) = std::sqrt((l - m) * (l + m + 1));
    }
    const cmat jm = jp.adjoint();
    const cmat j1 = 0.5 * (jp + jm);
    const cmat j2 = (jp - jm) / (2.0 * iu);
    So3Rep r;
    r.n = n;
    r.L12 = iu * j3;
    r.L23 = iu * j1;
    r.L13 = -iu * j2;
    return r;
}

// sigma^j = i times the Pauli matrices
inline cmat sigma(int j) {
    cmat m = cmat::Zero(2, 2);
    switch (j) {
    case 1: m << 0, iu, iu, 0; break;
    case 2: m << 0, 1, -1, 0; break;
    case 3: m << iu, 0, 0, -iu; break;
    default: throw invalid_input("sigma: index must lie in 1..3");
    }
    return m;
}

inline cmat spin_op(int j, int k) { return -0.25 * comm(sigma(j), sigma(k)); }

inline CliffordModule sigma_module() {
    cmat c(2, 2);
    c << 0, 1, -1, 0;
    return make_module(0, 3, {sigma(1), sigma(2), sigma(3)}, {c}, 2);
}

// gamma^0 = [[0,1],[1,0]], gamma^a = [[0, i sigma^a], [-i sigma^a, 0]]
inline CliffordModule gamma13_module() { return product_odd(base_module(1, 0), sigma_module()); }

inline const std::array<std::pair<int, int>, 3>& sphere_pairs() {
    static const std::array<std::pair<int, int>, 3> p{{{1, 2}, {1, 3}, {2, 3}}};
    return p;
}

// Lambda_jk on r x c matrices: m -> L1 m - m L2
inline cmat lambda_op(const cmat& l1, const cmat& l2) {
    return kron(l1, eye(l2.rows())) - kron(eye(l1.rows()), l2.transpose());
}

inline std::array<cmat, 3> lambda_ops(const So3Rep& r1, const So3Rep& r2) {
    std::array<cmat, 3> out;
    for (int p = 0; p < 3; ++p) {
        auto [j, k] = sphere_pairs()[p];
        out[p] = lambda_op(r1.L(j, k), r2.L(j, k));
    }
    return out;
}

inline cmat gp_from_lambda(const std::array<cmat, 3>& lam) {
    const Index d = lam[0].rows();
    cmat out = eye(2 * d);
    for (int p = 0; p < 3; ++p) {
        auto [j, k] = sphere_pairs()[p];
        out += kron(cmat(sigma(j) * sigma(k)), lam[p]);
    }
    return out;
}

inline cmat grosse_presnajder(int n) {
    const So3Rep r = so3_irrep(n);
    return gp_from_lambda(lambda_ops(r, r));
}

// operator on C^2 (x) M(n1,n2)
inline cmat grosse_presnajder_generalised(int n1, int n2) {
    return gp_from_lambda(lambda_ops(so3_irrep(n1), so3_irrep(n2)));
}

struct CasimirReport {
    double deviation = 0; // |d - (c - c1 - c2 + 1)|
    double c1_deviation = 0; // |c1 - 3/4|
};

inline CasimirReport casimir_check(const cmat& d, const std::array<cmat, 3>& lam) {
    const Index m = lam[0].rows();
    cmat c1 = cmat::Zero(2, 2), c2 = cmat::Zero(m, m), c = cmat::Zero(2 * m, 2 * m);
    for (int p = 0; p < 3; ++p) {
        auto [j, k] = sphere_pairs()[p];
        const cmat s = spin_op(j, k);
        c1 -= s * s;
        c2 -= lam[p] * lam[p];
        const cmat tot = kron(s, eye(m)) + kron(eye(2), lam[p]);
        c -= tot * tot;
    }
    CasimirReport r;
    r.deviation = max_abs(d - (c - kron(c1, eye(m)) - kron(eye(2), c2) + eye(2 * m)));
    r.c1_deviation = max_abs(c1 - 0.75 * eye(2));
    return r;
}

inline CasimirReport casimir_check_fuzzy(int n) {
    const So3Rep r = so3_irrep(n);
    const auto lam = lambda_ops(r, r);
    return casimir_check(gp_from_lambda(lam), lam);
}

inline CasimirReport casimir_check_generalised(int n1, int n2) {
    const auto lam = lambda_ops(so3_irrep(n1), so3_irrep(n2));
    return casimir_check(gp_from_lambda(lam), lam);
}

inline std::vector<DiracTerm> sphere_terms(const FermionSpace& fs, const So3Rep& r1, const So3Rep* r2) {
    std::vector<DiracTerm> terms;
    DiracTerm mass{{0}, cmat(), {0.5 * eye(r1.n)}, TermFlavor::anticommutator};
    if (r2) mass.K.push_back(0.5 * eye(r2->n));
    terms.push_back(mass);
    for (auto [j, k] : sphere_pairs()) {
        DiracTerm t{{0, j, k}, cmat(), {r1.L(j, k)}, TermFlavor::commutator};
        if (r2) t.K.push_back(r2->L(j, k));
        terms.push_back(t);
    }
    (void)fs;
    return terms;
}

struct SphereGeometry {
    FermionSpace fs;
    DiracOperator D;
};

inline SphereGeometry fuzzy_sphere_dirac(int n) {
    SphereGeometry g{fuzzy_fermion_space(gamma13_module(), n), {}};
    const So3Rep r = so3_irrep(n);
    g.D = assemble_dirac(g.fs, sphere_terms(g.fs, r, nullptr));
    return g;
}

struct GenSphereGeometry {
    FermionSpace fs;
    DiracOperator D;
    cmat D1, D2;
};

namespace detail {

inline cmat submatrix(const cmat& m, const std::vector<Index>& idx) {
    cmat out(static_cast<Index>(idx.size()), static_cast<Index>(idx.size()));
    for (size_t a = 0; a < idx.size(); ++a)
        for (size_t b = 0; b < idx.size(); ++b) out(Index(a), Index(b)) = m(idx[a], idx[b]);
    return out;
}

}  // namespace detail

inline GenSphereGeometry gen_fuzzy_sphere_dirac(int n1, int n2) {
    GenSphereGeometry g{gen_fuzzy_fermion_space(gamma13_module(), n1, n2), {}, {}, {}};
    const So3Rep r1 = so3_irrep(n1), r2 = so3_irrep(n2);
    g.D = assemble_dirac(g.fs, sphere_terms(g.fs, r1, &r2));
    const Index h = Index(n1) * n2;
    std::vector<Index> i1, i2;
    for (Index v = 0; v < g.fs.dim_v; ++v)
        for (Index k = 0; k < h; ++k) {
            i1.push_back(v * 2 * h + k);
            i2.push_back(v * 2 * h + h + k);
        }
    g.D1 = detail::submatrix(g.D.matrix, i1);
    g.D2 = detail::submatrix(g.D.matrix, i2);
    return g;
}

struct WBlockReport {
    double block_deviation = 0; // |W D W^-1 - diag(d, -d)|
    double off_diagonal = 0;    // largest entry of the off-diagonal blocks
    double gamma_compression = 0; // top-left block of W Gamma W^-1
    double gamma0_commutator = 0;
};

inline WBlockReport w_block_report(int n) {
    const auto g = fuzzy_sphere_dirac(n);
    const cmat d = grosse_presnajder(n);
    const Index m = d.rows();
    cmat w2(2, 2);
    w2 << 1, 1, -1, 1;
    w2 /= std::sqrt(2.0);
    const cmat W = kron(w2, eye(m));
    const cmat WD = W * g.D.matrix * W.adjoint();
    cmat target = cmat::Zero(2 * m, 2 * m);
    target.topLeftCorner(m, m) = d;
    target.bottomRightCorner(m, m) = -d;
    WBlockReport r;
    r.block_deviation = max_abs(WD - target);
    r.off_diagonal = std::max(max_abs(cmat(WD.topRightCorner(m, m))), max_abs(cmat(WD.bottomLeftCorner(m, m))));
    const cmat WG = W * g.fs.Gamma * W.adjoint();
    r.gamma_compression = max_abs(cmat(WG.topLeftCorner(m, m)));
    const cmat g0 = kron(g.fs.clifford.gammas[0], eye(g.fs.block_dim));
    r.gamma0_commutator = max_abs(comm(g0, g.D.matrix));
    return r;
}

namespace detail {

inline void push(std::vector<SpectrumEntry>& e, double v, int mult) {
    if (mult > 0) e.push_back({v, mult});
}

inline Spectrum sorted(std::vector<SpectrumEntry> e) {
    std::sort(e.begin(), e.end(), [](auto& a, auto& b) { return a.value < b.value; });
    Spectrum s;
    for (auto& x : e) {
        if (!s.entries.empty() && std::abs(s.entries.back().value - x.value) <= s.aggregation_tol)
            s.entries.back().multiplicity += x.multiplicity;
        else s.entries.push_back(x);
    }
    return s;
}

}  // namespace detail

// spec of the Grosse-Presnajder operator: -k (k < n) and +k (k <= n), multiplicity 2k
inline Spectrum predicted_gp_spectrum(int n) {
    std::vector<SpectrumEntry> e;
    for (int k = 1; k <= n; ++k) {
        if (k < n) detail::push(e, -k, 2 * k);
        detail::push(e, k, 2 * k);
    }
    return detail::sorted(e);
}

inline Spectrum predicted_fuzzy_spectrum(int n) {
    if (n < 1) throw invalid_input("predicted_fuzzy_spectrum: n must be positive");
    std::vector<SpectrumEntry> e;
    for (int k = 1; k <= n; ++k) {
        const int mult = k < n ? 4 * k : 2 * n;
        detail::push(e, -k, mult);
        detail::push(e, k, mult);
    }
    return detail::sorted(e);
}

// spec of d1 for the generalised sphere, m = |n1-n2|/2, n = (n1+n2)/2
inline Spectrum predicted_gen_gp_spectrum(int n1, int n2) {
    const double m = 0.5 * std::abs(n1 - n2), n = 0.5 * (n1 + n2);
    std::vector<SpectrumEntry> e;
    detail::push(e, -m, static_cast<int>(std::lround(2 * m)));
    for (double k = m + 1; k < n - 0.25; k += 1.0) {
        detail::push(e, -k, static_cast<int>(std::lround(2 * k)));
        detail::push(e, k, static_cast<int>(std::lround(2 * k)));
    }
    detail::push(e, n, static_cast<int>(std::lround(2 * n)));
    return detail::sorted(e);
}

// spec of the block D1
inline Spectrum predicted_gen_spectrum(int n1, int n2) {
    const Spectrum d = predicted_gen_gp_spectrum(n1, n2);
    return d.merged(d.negated());
}

// spec of the full generalised Dirac operator D = D1 + D2
inline Spectrum predicted_gen_full_spectrum(int n1, int n2) { return predicted_gen_spectrum(n1, n2).scaled_multiplicity(2); }

inline Spectrum commutative_sphere_spectrum(int r_max) {
    if (r_max < 0) throw invalid_input("commutative_sphere_spectrum: r_max must be >= 0");
    std::vector<SpectrumEntry> e;
    for (int r = 0; r <= r_max; ++r) {
        detail::push(e, -(r + 1), 2 * (r + 1));
        detail::push(e, r + 1, 2 * (r + 1));
    }
    return detail::sorted(e);
}

struct MonopoleLevel {
    int r;          // 0 for the zero modes
    double lambda;  // eigenvalue magnitude
    int two_j;      // 2j
    int multiplicity;
};

struct MonopoleSpectrum {
    int kappa = 0;
    int index = 0;
    std::vector<MonopoleLevel> levels;
    Spectrum spectrum;
};

inline MonopoleSpectrum monopole_spectrum(int kappa, int r_max) {
    if (kappa == 0) throw invalid_input("monopole_spectrum: kappa = 0, use commutative_sphere_spectrum");
    if (r_max < 1) throw invalid_input("monopole_spectrum: r_max must be >= 1");
    const int ak = std::abs(kappa);
    MonopoleSpectrum ms;
    ms.kappa = kappa;
    ms.index = -kappa;
    ms.levels.push_back({0, 0.0, ak - 1, ak});
    std::vector<SpectrumEntry> e{{0.0, ak}};
    for (int r = 1; r <= r_max; ++r) {
        const int two_j = ak - 1 + 2 * r;
        const double lam = std::sqrt(double(r) * (r + ak));
        ms.levels.push_back({r, lam, two_j, two_j + 1});
        detail::push(e, lam, two_j + 1);
        detail::push(e, -lam, two_j + 1);
    }
    ms.spectrum = detail::sorted(e);
    return ms;
}

// Both sides of lambda^2 + kappa^2/4 = (j+1/2)^2 multiplied by 4, in integers.
inline bool monopole_relation_exact(int kappa, const MonopoleLevel& lv) {
    const long long ak = std::abs(kappa), r = lv.r;
    const long long lhs = 4 * r * (r + ak) + ak * ak;
    const long long rhs = (lv.two_j + 1LL) * (lv.two_j + 1LL);
    return lhs == rhs;
}

// Doubled monopole operator with the mass term, one matrix block: eigenvalues +-(j+1/2),
// spin j = m - 1/2 + r with m = mass_scale * |kappa|, the two branches cut at j = n - 1/2 and n - 3/2.
inline Spectrum mass_mixed_monopole_spectrum(int kappa, double m_per_kappa, double n) {
    const double m = m_per_kappa * std::abs(kappa);
    std::vector<SpectrumEntry> half;
    detail::push(half, -m, static_cast<int>(std::lround(2 * m)));
    for (double j = m + 0.5; j <= n - 0.5 + 1e-9; j += 1.0) {
        const int mult = static_cast<int>(std::lround(2 * j + 1));
        detail::push(half, j + 0.5, mult);
        if (j <= n - 1.5 + 1e-9) detail::push(half, -(j + 0.5), mult);
    }
    const Spectrum x = detail::sorted(half);
    return x.merged(x.negated());
}

enum class KappaIdentification { half_kappa, kappa, none };

inline const char* to_string(KappaIdentification k) {
    switch (k) {
    case KappaIdentification::half_kappa: return "m=|kappa|/2";
    case KappaIdentification::kappa: return "m=|kappa|";
    default: return "none";
    }
}

// Which reading of m makes the monopole block reproduce spec(D1) for the charge kappa = n1 - n2.
inline KappaIdentification identify_kappa(int n1, int n2) {
    const int kappa = n1 - n2;
    if (kappa == 0) throw invalid_input("identify_kappa: needs n1 != n2");
    const Spectrum target = predicted_gen_spectrum(n1, n2);
    const double n = 0.5 * (n1 + n2);
    if (spectra_match(mass_mixed_monopole_spectrum(kappa, 0.5, n), target)) return KappaIdentification::half_kappa;
    if (spectra_match(mass_mixed_monopole_spectrum(kappa, 1.0, n), target)) return KappaIdentification::kappa;
    return KappaIdentification::none;
}

// Random SU(2) element acting on the fuzzy sphere: g on C^n, h on the spinors.
struct Rotation {
    cmat g, h;
};

inline Rotation random_rotation(int n, std::mt19937_64& rng, double scale = 3.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    const So3Rep r = so3_irrep(n);
    cmat xl = cmat::Zero(n, n), xs = cmat::Zero(2, 2);
    for (auto [j, k] : sphere_pairs()) {
        const double t = u(rng);
        xl += t * r.L(j, k);
        xs += t * spin_op(j, k);
    }
    return {xl.exp(), kron(eye(2), cmat(xs.exp()))};
}

}  // namespace ncg

#pragma once

#include "linalg.hpp"

#include <array>

namespace ncg {

struct SignTriple {
    int epsilon = 1;
    int epsilon_prime = 1;
    int epsilon_double_prime = 1;
    bool operator==(const SignTriple&) const = default;
};

inline SignTriple sign_table(int s) {
    static constexpr std::array<int, 8> e{1, 1, -1, -1, -1, -1, 1, 1};
    static constexpr std::array<int, 8> ep{1, -1, 1, 1, 1, -1, 1, 1};
    static constexpr std::array<int, 8> epp{1, 1, -1, 1, 1, 1, -1, 1};
    int k = mod8(s);
    return {e[k], ep[k], epp[k]};
}

inline const char* division_algebra(int s) {
    static constexpr std::array<const char*, 8> d{"R", "C", "H", "H", "H", "C", "R", "R"};
    return d[mod8(s)];
}

inline int chirality_power(int s) { return s * (s + 1) / 2; }

struct CliffordModule {
    int p = 0;
    int q = 0;
    int s = 0;
    Index dim_v = 1;
    std::vector<cmat> gammas;
    cmat chirality;
    AntilinearOp C;
    SignTriple signs;

    int n() const { return p + q; }

    cmat P() const {
        cmat out = eye(dim_v);
        for (auto& g : gammas) out = out * g;
        return out;
    }

    // product of generators with the given (increasing) indices
    cmat word(const std::vector<int>& idx) const {
        cmat out = eye(dim_v);
        for (int a : idx) out = out * gammas.at(static_cast<size_t>(a));
        return out;
    }
};

inline cmat chirality_from(const std::vector<cmat>& gammas, int s, Index dim) {
    cmat P = eye(dim);
    for (auto& g : gammas) P = P * g;
    return ipow(chirality_power(s)) * P;
}

// Fills in s, chirality, dimension and signs from the generators.
inline CliffordModule make_module(int p, int q, std::vector<cmat> gammas, AntilinearOp C, Index dim) {
    CliffordModule m;
    m.p = p;
    m.q = q;
    m.s = mod8(q - p);
    m.dim_v = dim;
    m.gammas = std::move(gammas);
    m.chirality = chirality_from(m.gammas, m.s, dim);
    m.C = std::move(C);
    m.signs = sign_table(m.s);
    return m;
}

inline CliffordModule base_module(int p, int q) {
    const cplx i = iu;
    auto m2 = [](cplx a, cplx b, cplx c, cplx d) {
        cmat m(2, 2);
        m << a, b, c, d;
        return m;
    };
    auto one = [](cplx a) {
        cmat m(1, 1);
        m << a;
        return m;
    };
    if (p == 0 && q == 0) return make_module(0, 0, {}, {one(1)}, 1);
    if (p == 1 && q == 0) return make_module(1, 0, {one(1)}, {one(1)}, 1);
    if (p == 0 && q == 1) return make_module(0, 1, {one(-i)}, {one(1)}, 1);
    if (p == 2 && q == 0)
        return make_module(2, 0, {m2(1, 0, 0, -1), m2(0, 1, 1, 0)}, {eye(2)}, 2);
    if (p == 1 && q == 1)
        return make_module(1, 1, {m2(1, 0, 0, -1), m2(0, 1, -1, 0)}, {eye(2)}, 2);
    if (p == 0 && q == 2)
        return make_module(0, 2, {m2(i, 0, 0, -i), m2(0, 1, -1, 0)}, {m2(0, 1, -1, 0)}, 2);
    throw invalid_input("base_module: unsupported type (" + std::to_string(p) + "," + std::to_string(q) + ")");
}

struct CheckItem {
    std::string name;
    bool pass = true;
    double max_deviation = 0.0;
};

struct VerificationReport {
    std::vector<CheckItem> items;

    bool all_pass() const {
        return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.pass; });
    }
    const CheckItem* find(const std::string& name) const {
        for (auto& c : items)
            if (c.name == name) return &c;
        return nullptr;
    }
};

// Deviations of C from the sign relations; zero means all hold.
inline double real_structure_defect(const std::vector<cmat>& gammas, const cmat& chirality, const cmat& A,
                                    const SignTriple& sg) {
    double d = max_abs(A * A.conjugate() - double(sg.epsilon) * eye(A.rows()));
    for (auto& g : gammas) d = std::max(d, max_abs(A * g.conjugate() - double(sg.epsilon_prime) * g * A));
    d = std::max(d, max_abs(A * chirality.conjugate() - double(sg.epsilon_double_prime) * chirality * A));
    d = std::max(d, max_abs(A * A.adjoint() - eye(A.rows())));
    return d;
}

// +1, -1, or 0 if neither relation holds
inline int measured_sign(const cmat& lhs, const cmat& rhs, double tol = 0.0) {
    if (max_abs(lhs - rhs) <= tol) return 1;
    if (max_abs(lhs + rhs) <= tol) return -1;
    return 0;
}

inline SignTriple measure_signs(const CliffordModule& m, double tol = 0.0) {
    const cmat& A = m.C.A;
    SignTriple out;
    out.epsilon = measured_sign(A * A.conjugate(), eye(m.dim_v), tol);
    out.epsilon_prime = 1;
    for (size_t a = 0; a < m.gammas.size(); ++a) {
        int e = measured_sign(A * m.gammas[a].conjugate(), m.gammas[a] * A, tol);
        if (a == 0) out.epsilon_prime = e;
        else if (e != out.epsilon_prime) out.epsilon_prime = 0;
    }
    out.epsilon_double_prime = measured_sign(A * m.chirality.conjugate(), m.chirality * A, tol);
    return out;
}

inline CliffordModule product_even(const CliffordModule& m1, const CliffordModule& m2) {
    if (m1.s % 2 != 0) throw invalid_input("product_even: first factor must have even s");
    const Index k1 = m1.dim_v, k2 = m2.dim_v;
    std::vector<cmat> g;
    for (auto& a : m1.gammas) g.push_back(kron(a, eye(k2)));
    for (auto& b : m2.gammas) g.push_back(kron(m1.chirality, b));

    const SignTriple s1 = m1.signs, s2 = m2.signs;
    cmat A;
    if (m2.s % 2 == 0) {
        A = s1.epsilon_double_prime == 1 ? kron(m1.C.A, m2.C.A)
                                         : kron(m1.C.A, compose(m2.C, m2.chirality).A);
    } else {
        A = s1.epsilon_prime == s1.epsilon_double_prime * s2.epsilon_prime
                ? kron(m1.C.A, m2.C.A)
                : kron(compose(m1.C, m1.chirality).A, m2.C.A);
    }
    return make_module(m1.p + m2.p, m1.q + m2.q, std::move(g), {A}, k1 * k2);
}

namespace detail {

inline cmat pauli_like(int which) {
    cmat m = cmat::Zero(2, 2);
    switch (which) {
    case 0: m = eye(2); break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 1, 0, 0, -1; break;
    default: m << 0, 1, -1, 0; break;
    }
    return m;
}

// m1 (s odd) extended by a first generator t with t^2 = 1
inline CliffordModule extend_odd(const CliffordModule& m1) {
    if (m1.n() == 1 && max_abs(m1.gammas[0] - base_module(m1.p, m1.q).gammas[0]) == 0.0)
        return m1.p == 1 ? base_module(2, 0) : base_module(1, 1);

    std::vector<cmat> g{kron(eye(m1.dim_v), pauli_like(2))};
    for (auto& a : m1.gammas) g.push_back(kron(a, pauli_like(1)));
    const int s = mod8(m1.q - m1.p - 1);
    cmat chi = chirality_from(g, s, 2 * m1.dim_v);
    for (int b = 0; b < 4; ++b) {
        cmat A = kron(m1.C.A, pauli_like(b));
        if (real_structure_defect(g, chi, A, sign_table(s)) == 0.0)
            return make_module(m1.p + 1, m1.q, std::move(g), {A}, 2 * m1.dim_v);
    }
    throw std::logic_error("extend_odd: no real structure found");
}

}  // namespace detail

inline CliffordModule product_odd(const CliffordModule& m1, const CliffordModule& m2) {
    if (m1.s % 2 == 0 || m2.s % 2 == 0) throw invalid_input("product_odd: both factors must have odd s");
    CliffordModule ext = detail::extend_odd(m1);
    CliffordModule full = product_even(ext, m2);
    std::vector<cmat> g(full.gammas.begin() + 1, full.gammas.end());
    const int p = m1.p + m2.p, q = m1.q + m2.q;
    const int s = mod8(q - p);
    const Index dim = full.dim_v;
    const SignTriple sg = sign_table(s);
    cmat chi = chirality_from(g, s, dim);
    const cmat C2g = compose(m2.C, m2.chirality).A;

    const bool base_case = m1.n() == 1 && ext.n() == 2 && ext.C.A == eye(2);
    if (base_case) {
        cmat A;
        if (sg.epsilon_double_prime == 1) A = kron(eye(2), m2.C.A);
        else A = kron(m1.p == 1 ? detail::pauli_like(1) : detail::pauli_like(3), C2g);
        return make_module(p, q, std::move(g), {A}, dim);
    }

    const cmat t = ext.gammas[0];
    const std::array<cmat, 4> left{eye(ext.dim_v), ext.chirality, t, t * ext.chirality};
    const std::array<cmat, 2> right{eye(m2.dim_v), m2.chirality};
    for (auto& x : left)
        for (auto& y : right) {
            cmat A = kron(compose(ext.C, x).A, compose(m2.C, y).A);
            if (real_structure_defect(g, chi, A, sg) == 0.0) return make_module(p, q, std::move(g), {A}, dim);
        }
    throw std::logic_error("product_odd: no real structure found");
}

inline CliffordModule build_module(int p, int q) {
    if (p < 0 || q < 0) throw invalid_input("build_module: negative signature");
    CliffordModule m = base_module(0, 0);
    const int k = std::min(p, q);
    for (int i = 0; i < k; ++i) m = product_even(m, base_module(1, 1));
    const int rp = p - k, rq = q - k;
    for (int i = 0; i < rp / 2; ++i) m = product_even(m, base_module(2, 0));
    for (int i = 0; i < rq / 2; ++i) m = product_even(m, base_module(0, 2));
    if (rp % 2) m = product_even(m, base_module(1, 0));
    if (rq % 2) m = product_even(m, base_module(0, 1));
    return m;
}

inline VerificationReport verify_module(const CliffordModule& m, double tol = 0.0) {
    if (tol < 0) throw invalid_input("verify_module: negative tolerance");
    VerificationReport r;
    auto add = [&](const std::string& name, double dev) { r.items.push_back({name, dev <= tol, dev}); };
    const Index k = m.dim_v;
    const cmat one = eye(k);
    const int n = static_cast<int>(m.gammas.size());

    std::vector<int> eta(static_cast<size_t>(n), 0);
    double sig = (n == m.n()) ? 0.0 : 1.0;
    int plus = 0, minus = 0;
    for (int a = 0; a < n; ++a) {
        const cmat sq = m.gammas[a] * m.gammas[a];
        if (max_abs(sq - one) <= tol) eta[a] = 1, ++plus;
        else if (max_abs(sq + one) <= tol) eta[a] = -1, ++minus;
        else sig = std::max(sig, std::min(max_abs(sq - one), max_abs(sq + one)));
    }
    if (plus != m.p || minus != m.q) sig = std::max(sig, 1.0);
    add("signature", sig);

    double anti = 0, unit = 0, herm = 0;
    for (int a = 0; a < n; ++a) {
        const cmat& ga = m.gammas[a];
        for (int b = a; b < n; ++b) {
            const cmat ac = acomm(ga, m.gammas[b]);
            anti = std::max(anti, a == b ? max_abs(ac - 2.0 * double(eta[a]) * one) : max_abs(ac));
        }
        unit = std::max(unit, max_abs(ga * ga.adjoint() - one));
        herm = std::max(herm, max_abs(ga.adjoint() - double(eta[a] == 0 ? 1 : eta[a]) * ga));
    }
    add("anticommutation", anti);
    add("unitarity", unit);
    add("hermiticity", herm);

    const cmat P = m.P();
    const cmat& chi = m.chirality;
    add("chirality_formula", max_abs(chi - ipow(chirality_power(m.s)) * P));
    add("chirality_involution", std::max(max_abs(chi * chi - one), max_abs(chi.adjoint() - chi)));
    double grading = 0;
    for (auto& g : m.gammas) grading = std::max(grading, n % 2 == 0 ? max_abs(acomm(chi, g)) : max_abs(comm(chi, g)));
    add("chirality_grading", grading);
    add("P_square", max_abs(P * P - double(chirality_power(m.s) % 2 == 0 ? 1 : -1) * one));

    const SignTriple t = sign_table(m.s);
    const cmat& A = m.C.A;
    add("C_square", max_abs(A * A.conjugate() - double(t.epsilon) * one));
    double cg = 0;
    for (auto& g : m.gammas) cg = std::max(cg, max_abs(A * g.conjugate() - double(t.epsilon_prime) * g * A));
    add("C_gamma", cg);
    add("C_chirality", max_abs(A * chi.conjugate() - double(t.epsilon_double_prime) * chi * A));
    add("C_unitary", m.C.unitarity_defect());

    const Index expect = Index(1) << (m.n() % 2 == 0 ? m.n() / 2 : (m.n() - 1) / 2);
    add("dimension", (k == expect && A.rows() == k && chi.rows() == k) ? 0.0 : 1.0);
    add("signs", (m.s == mod8(m.q - m.p) && m.signs == t) ? 0.0 : 1.0);
    return r;
}

}  // namespace ncg

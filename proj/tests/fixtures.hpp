#pragma once

#include <fuzzy_triples/fuzzy_triples.hpp>

#include <random>
#include <string>

namespace fixtures {

using namespace ncg;

struct Geometry {
    std::string name;
    FermionSpace fs;
    DiracOperator D;
};

inline rvec gaussian(Index n, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    rvec x(n);
    for (auto& v : x) v = nd(rng);
    return x;
}

inline cmat random_complex(Index r, Index c, std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    cmat m(r, c);
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) m(i, j) = cplx(nd(rng), nd(rng));
    return m;
}

// random point of the space of geometries
inline Geometry random_geometry(const std::string& name, FermionSpace fs, std::uint64_t seed) {
    Geometry g{name, std::move(fs), {}};
    const GeometryBasis gb = geometry_basis(g.fs);
    std::mt19937_64 rng(seed);
    g.D = gb.dim_g ? gb.combine(gaussian(gb.dim_g, rng))
                   : DiracOperator{cmat::Zero(g.fs.hilbert_dim, g.fs.hilbert_dim), {}};
    return g;
}

inline Geometry sphere(int n) {
    auto s = fuzzy_sphere_dirac(n);
    return {"fuzzy sphere n=" + std::to_string(n), std::move(s.fs), std::move(s.D)};
}

inline Geometry gen_sphere(int n1, int n2) {
    auto s = gen_fuzzy_sphere_dirac(n1, n2);
    return {"generalised sphere " + std::to_string(n1) + "," + std::to_string(n2), std::move(s.fs), std::move(s.D)};
}

inline std::vector<Geometry> axiom_fixtures() {
    std::vector<Geometry> out;
    for (int n = 1; n <= 8; ++n) out.push_back(sphere(n));
    for (int n1 = 1; n1 <= 9; ++n1)
        for (int n2 = 1; n1 + n2 <= 10; ++n2) out.push_back(gen_sphere(n1, n2));
    std::uint64_t seed = 100;
    for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 1}, {1, 1}, {0, 2}, {0, 3}, {0, 4}})
        for (int n = 1; n <= 3; ++n) {
            const std::string tag = "(" + std::to_string(p) + "," + std::to_string(q) + ") n=" + std::to_string(n);
            out.push_back(random_geometry("random " + tag, fuzzy_fermion_space(build_module(p, q), n), seed++));
            out.push_back(random_geometry("random generalised " + tag,
                                          gen_fuzzy_fermion_space(build_module(p, q), n, n + 1), seed++));
        }
    return out;
}

// (p,q) and sizes with hilbert_dim <= 64
struct SpaceSpec {
    int p, q, n1, n2;  // n2 = 0 for a fuzzy space
};

inline std::vector<SpaceSpec> small_spaces() {
    std::vector<SpaceSpec> out;
    for (int p = 0; p <= 4; ++p)
        for (int q = 0; p + q <= 4; ++q) {
            const Index dv = build_module(p, q).dim_v;
            for (int n = 1; dv * n * n <= 64; ++n) out.push_back({p, q, n, 0});
            for (int n1 = 1; n1 <= 4; ++n1)
                for (int n2 = n1 + 1; 2 * dv * n1 * n2 <= 64; ++n2) out.push_back({p, q, n1, n2});
        }
    return out;
}

inline FermionSpace make_space(const SpaceSpec& s) {
    const CliffordModule cm = build_module(s.p, s.q);
    return s.n2 ? gen_fuzzy_fermion_space(cm, s.n1, s.n2) : fuzzy_fermion_space(cm, s.n1);
}

inline std::string describe(const SpaceSpec& s) {
    std::string r = "(" + std::to_string(s.p) + "," + std::to_string(s.q) + ") n=" + std::to_string(s.n1);
    if (s.n2) r += "," + std::to_string(s.n2);
    return r;
}

// One corruption per axiom; mutation k should fail axiom k and nothing else.
struct Mutation {
    int axiom;
    std::string what;
    FermionSpace fs;
    DiracOperator D;
};

inline DiracOperator zero(const FermionSpace& fs) { return {cmat::Zero(fs.hilbert_dim, fs.hilbert_dim), {}}; }

inline cmat transpose_op(int n) {
    cmat t = cmat::Zero(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(j * n + i, i * n + j) = 1.0;
    return t;
}

inline std::vector<Mutation> mutations() {
    std::vector<Mutation> out;
    const int n = 2;
    auto base = [&] { return fuzzy_sphere_dirac(n); };
    // s = 0 fixture with a nonzero D, needed where the sign eps'' enters
    auto even0 = [] { return random_geometry("(1,1)", fuzzy_fermion_space(build_module(1, 1), 2), 7); };

    {
        auto g = base();
        g.fs.signs = sign_table(g.fs.s + 1);
        out.push_back({1, "stored signs disagree with the table", g.fs, g.D});
    }
    {
        auto g = base();
        g.fs.block_dim += 1;
        out.push_back({2, "block dimension inconsistent with H", g.fs, g.D});
    }
    {
        auto g = base();
        std::vector<cmat> b;
        for (auto& e : g.fs.algebra.basis)
            if (std::abs(e(0, 1)) == 0) b.push_back(e);
        g.fs.algebra.basis = b;
        out.push_back({3, "algebra basis missing E12", g.fs, g.D});
    }
    {
        auto g = base();
        auto rho = g.fs.rho;
        g.fs.rho = [rho](const cmat& a) { return rho(cmat(a.transpose())); };
        out.push_back({4, "rho(a) replaced by rho(a^T)", g.fs, g.D});
    }
    {
        auto g = base();
        g.fs.Gamma *= 2.0;
        out.push_back({5, "Gamma scaled by 2", g.fs, g.D});
    }
    {
        auto g = base();
        g.fs.Gamma = kron(g.fs.clifford.chirality, transpose_op(n));
        out.push_back({6, "Gamma = chirality (x) transpose", g.fs, zero(g.fs)});
    }
    {
        auto g = base();
        cmat X = eye(n);
        X(0, 0) = 2.0;
        X(0, 1) = X(1, 0) = 0.5;
        g.fs.J.A = kron(g.fs.clifford.C.A, cmat(sandwich(X, X.inverse()) * transpose_op(n)));
        out.push_back({7, "J with a non-unitary similarity", g.fs, zero(g.fs)});
    }
    {
        auto g = base();
        g.fs.J = compose(g.fs.J, cmat(iu * g.fs.Gamma));
        out.push_back({8, "J replaced by J i Gamma", g.fs, zero(g.fs)});
    }
    {
        auto g = base();
        g.fs.J.A = kron(g.fs.clifford.C.A, eye(n * n));
        out.push_back({9, "J without the transpose", g.fs, zero(g.fs)});
    }
    {
        auto g = even0();
        g.D.matrix = g.D.matrix - g.fs.Gamma * g.D.matrix;
        out.push_back({10, "D - Gamma D", g.fs, g.D});
    }
    {
        auto g = base();
        g.D.matrix += eye(g.fs.hilbert_dim);
        out.push_back({11, "D + 1", g.fs, g.D});
    }
    {
        auto g = even0();
        g.D.matrix = g.D.matrix + iu * g.fs.Gamma * g.D.matrix;
        out.push_back({12, "D + i Gamma D", g.fs, g.D});
    }
    {
        auto g = base();
        const cmat e11 = unit(n, n, 0, 0);
        g.D.matrix += kron(g.fs.clifford.gammas[0], sandwich(e11, e11));
        out.push_back({13, "D + gamma0 (x) E11 m E11", g.fs, g.D});
    }
    return out;
}

}  // namespace fixtures

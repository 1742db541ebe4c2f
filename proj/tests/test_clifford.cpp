#include <fuzzy_triples/clifford.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace ncg;

namespace {

cmat m2(cplx a, cplx b, cplx c, cplx d) {
    cmat m(2, 2);
    m << a, b, c, d;
    return m;
}

// all words gamma^{a1}...gamma^{ak}, a1 < ... < ak
std::vector<cmat> all_words(const CliffordModule& m) {
    std::vector<cmat> out;
    const int n = m.n();
    for (int mask = 0; mask < (1 << n); ++mask) {
        std::vector<int> idx;
        for (int a = 0; a < n; ++a)
            if (mask & (1 << a)) idx.push_back(a);
        out.push_back(m.word(idx));
    }
    return out;
}

}  // namespace

TEST(SignTable, MatchesTheEightRows) {
    const int e[8] = {1, 1, -1, -1, -1, -1, 1, 1};
    const int ep[8] = {1, -1, 1, 1, 1, -1, 1, 1};
    const int epp[8] = {1, 1, -1, 1, 1, 1, -1, 1};
    for (int s = 0; s < 8; ++s) {
        const SignTriple t = sign_table(s);
        EXPECT_EQ(t.epsilon, e[s]) << s;
        EXPECT_EQ(t.epsilon_prime, ep[s]) << s;
        EXPECT_EQ(t.epsilon_double_prime, epp[s]) << s;
    }
    EXPECT_EQ(sign_table(0), (SignTriple{1, 1, 1}));
    EXPECT_EQ(sign_table(2), (SignTriple{-1, 1, -1}));
    EXPECT_EQ(sign_table(3), (SignTriple{-1, 1, 1}));
    EXPECT_EQ(sign_table(-6), sign_table(2));
    EXPECT_EQ(sign_table(11), sign_table(3));
}

TEST(SignTable, DivisionAlgebra) {
    EXPECT_STREQ(division_algebra(0), "R");
    EXPECT_STREQ(division_algebra(1), "C");
    EXPECT_STREQ(division_algebra(4), "H");
    EXPECT_STREQ(division_algebra(5), "C");
    EXPECT_STREQ(division_algebra(7), "R");
}

TEST(BaseModule, Type02) {
    const CliffordModule m = base_module(0, 2);
    EXPECT_EQ(m.s, 2);
    ASSERT_EQ(m.gammas.size(), 2u);
    EXPECT_EQ(m.gammas[0], m2(iu, 0, 0, -iu));
    EXPECT_EQ(m.gammas[1], m2(0, 1, -1, 0));
    EXPECT_EQ(m.chirality, m2(0, 1, 1, 0));
    cvec v(2);
    v << cplx(1, 2), cplx(3, -4);
    const cvec cv = m.C.apply(v);
    EXPECT_EQ(cv(0), std::conj(v(1)));
    EXPECT_EQ(cv(1), -std::conj(v(0)));
}

TEST(BaseModule, Type00And11) {
    const CliffordModule a = base_module(0, 0);
    EXPECT_EQ(a.dim_v, 1);
    EXPECT_TRUE(a.gammas.empty());
    EXPECT_EQ(a.chirality, eye(1));
    EXPECT_EQ(a.C.A, eye(1));
    EXPECT_EQ(a.s, 0);

    const CliffordModule b = base_module(1, 1);
    EXPECT_EQ(b.s, 0);
    EXPECT_EQ(b.chirality, m2(0, 1, 1, 0));
}

TEST(BaseModule, AllVerifyExactly) {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) {
        const VerificationReport r = verify_module(base_module(p, q));
        EXPECT_TRUE(r.all_pass()) << p << "," << q;
        for (auto& c : r.items) EXPECT_EQ(c.max_deviation, 0.0) << p << "," << q << " " << c.name;
    }
    EXPECT_THROW(base_module(2, 1), invalid_input);
}

TEST(ProductEven, TwoCopiesOf02) {
    const CliffordModule m = product_even(base_module(0, 2), base_module(0, 2));
    EXPECT_EQ(m.p, 0);
    EXPECT_EQ(m.q, 4);
    EXPECT_EQ(m.dim_v, 4);
    EXPECT_EQ(m.s, 4);
    EXPECT_EQ(measure_signs(m), (SignTriple{-1, 1, 1}));
    EXPECT_TRUE(verify_module(m).all_pass());
}

TEST(ProductEven, TrivialLeftFactor) {
    for (auto [p, q] : std::vector<std::pair<int, int>>{{1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2}}) {
        const CliffordModule m2 = base_module(p, q);
        const CliffordModule m = product_even(base_module(0, 0), m2);
        EXPECT_EQ(m.gammas, m2.gammas);
        EXPECT_EQ(m.C.A, m2.C.A);
        EXPECT_EQ(m.chirality, m2.chirality);
    }
}

TEST(ProductEven, AdjoiningTheChirality) {
    const CliffordModule m1 = base_module(0, 2);
    const CliffordModule m = product_even(m1, base_module(1, 0));
    ASSERT_EQ(m.gammas.size(), 3u);
    EXPECT_EQ(m.gammas[0], m1.gammas[0]);
    EXPECT_EQ(m.gammas[1], m1.gammas[1]);
    EXPECT_EQ(m.gammas[2], m1.chirality);
    EXPECT_TRUE(verify_module(m).all_pass());
    EXPECT_THROW(product_even(base_module(0, 1), base_module(0, 1)), invalid_input);
}

TEST(ProductOdd, Type13BlockForm) {
    const CliffordModule s = product_odd(base_module(1, 0), [] {
        cmat c(2, 2);
        c << 0, 1, -1, 0;
        cmat s1(2, 2), s2(2, 2), s3(2, 2);
        s1 << 0, iu, iu, 0;
        s2 << 0, 1, -1, 0;
        s3 << iu, 0, 0, -iu;
        return make_module(0, 3, {s1, s2, s3}, {c}, 2);
    }());
    ASSERT_EQ(s.gammas.size(), 4u);
    const cmat one = eye(2), zero = cmat::Zero(2, 2);
    cmat g0(4, 4);
    g0 << zero, one, one, zero;
    EXPECT_EQ(s.gammas[0], g0);
    cmat sg[3];
    sg[0] = m2(0, iu, iu, 0);
    sg[1] = m2(0, 1, -1, 0);
    sg[2] = m2(iu, 0, 0, -iu);
    for (int a = 0; a < 3; ++a) {
        cmat ga(4, 4);
        ga << zero, iu * sg[a], -iu * sg[a], zero;
        EXPECT_EQ(s.gammas[size_t(a) + 1], ga) << a;
    }
    EXPECT_EQ(s.s, 2);
    EXPECT_EQ(s.dim_v, 4);
    // gamma = -eps'' diag(g2, -g2) with g2 = -1 and eps'' = -1
    cmat chi = cmat::Zero(4, 4);
    chi.diagonal() << -1, -1, 1, 1;
    EXPECT_EQ(s.chirality, chi);
    // eps'' = -1: C = [[0, C2 g2], [C2 g2, 0]]
    const cmat c2g2 = m2(0, -1, 1, 0);
    cmat C(4, 4);
    C << zero, c2g2, c2g2, zero;
    EXPECT_EQ(s.C.A, C);
    EXPECT_TRUE(verify_module(s).all_pass());
}

TEST(ProductOdd, TwoCopiesOf01IsEquivalentTo02) {
    const CliffordModule a = product_odd(base_module(0, 1), base_module(0, 1));
    const CliffordModule b = base_module(0, 2);
    EXPECT_EQ(a.p, 0);
    EXPECT_EQ(a.q, 2);
    EXPECT_EQ(a.s, 2);
    EXPECT_EQ(a.dim_v, 2);
    EXPECT_TRUE(verify_module(a).all_pass());
    // averaged intertwiner T = sum_w w_b X w_a^-1 over the group of words
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    cmat X(2, 2);
    for (Index i = 0; i < 4; ++i) X(i / 2, i % 2) = cplx(nd(rng), nd(rng));
    const auto wa = all_words(a), wb = all_words(b);
    cmat T = cmat::Zero(2, 2);
    for (size_t k = 0; k < wa.size(); ++k) T += wb[k] * X * wa[k].inverse();
    EXPECT_GT(std::abs(T.determinant()), 1e-6);
    for (int g = 0; g < 2; ++g) EXPECT_LT(max_abs(cmat(T * a.gammas[g] - b.gammas[g] * T)), 1e-12);
}

TEST(ProductOdd, Dimensions) {
    const std::vector<std::pair<int, int>> odd{{1, 0}, {0, 1}};
    for (auto [p1, q1] : odd)
        for (auto [p2, q2] : odd) {
            const CliffordModule m = product_odd(base_module(p1, q1), base_module(p2, q2));
            EXPECT_EQ(m.dim_v, 2);
            EXPECT_TRUE(verify_module(m).all_pass());
        }
    const CliffordModule big = product_odd(build_module(0, 3), build_module(2, 1));
    EXPECT_EQ(big.dim_v, 1 << ((3 + 3) / 2));
    EXPECT_TRUE(verify_module(big).all_pass());
    EXPECT_THROW(product_odd(base_module(0, 2), base_module(0, 1)), invalid_input);
}

TEST(BuildModule, Examples) {
    const CliffordModule a = build_module(1, 3);
    EXPECT_EQ(a.dim_v, 4);
    EXPECT_EQ(a.s, 2);
    EXPECT_EQ(measure_signs(a), (SignTriple{-1, 1, -1}));

    const CliffordModule b = build_module(0, 3);
    EXPECT_EQ(b.dim_v, 2);
    EXPECT_EQ(b.s, 3);

    const CliffordModule c = build_module(0, 0);
    EXPECT_TRUE(c.gammas.empty());
    EXPECT_EQ(c.dim_v, 1);
    EXPECT_THROW(build_module(-1, 2), invalid_input);
}

TEST(BuildModule, MeasuredSignsAndExactIdentitiesUpTo6) {
    for (int p = 0; p <= 6; ++p)
        for (int q = 0; p + q <= 6; ++q) {
            const CliffordModule m = build_module(p, q);
            EXPECT_EQ(measure_signs(m), sign_table(q - p)) << p << "," << q;
            const VerificationReport r = verify_module(m);
            for (auto& c : r.items) EXPECT_EQ(c.max_deviation, 0.0) << p << "," << q << " " << c.name;
            const int n = p + q;
            EXPECT_EQ(m.dim_v, Index(1) << (n / 2)) << p << "," << q;
        }
}

TEST(BuildModule, PSquared) {
    for (int p = 0; p <= 5; ++p)
        for (int q = 0; p + q <= 5; ++q) {
            const CliffordModule m = build_module(p, q);
            const double sign = (m.s * (m.s + 1) / 2) % 2 == 0 ? 1.0 : -1.0;
            EXPECT_EQ(max_abs(cmat(m.P() * m.P() - sign * eye(m.dim_v))), 0.0) << p << "," << q;
        }
}

TEST(BuildModule, WordsAreLinearlyIndependentForEvenN) {
    // irreducible even modules: the 2^n words span M(2^{n/2}, C)
    for (auto [p, q] : std::vector<std::pair<int, int>>{{2, 0}, {1, 1}, {0, 2}, {1, 3}, {0, 4}, {3, 1}}) {
        const CliffordModule m = build_module(p, q);
        const auto w = all_words(m);
        const Index d = m.dim_v;
        cmat M(d * d, Index(w.size()));
        for (size_t k = 0; k < w.size(); ++k) M.col(Index(k)) = Eigen::Map<const cvec>(w[k].data(), d * d);
        EXPECT_EQ(Eigen::FullPivLU<cmat>(M).rank(), d * d) << p << "," << q;
    }
}

TEST(VerifyModule, Defects) {
    CliffordModule m = build_module(2, 3);
    EXPECT_TRUE(verify_module(m, 1e-12).all_pass());

    m.gammas[0] *= 1.01;
    const VerificationReport r = verify_module(m, 1e-12);
    EXPECT_FALSE(r.all_pass());
    ASSERT_NE(r.find("anticommutation"), nullptr);
    EXPECT_FALSE(r.find("anticommutation")->pass);

    CliffordModule b = build_module(0, 2);
    b.C.A = eye(2);
    const VerificationReport rb = verify_module(b);
    EXPECT_FALSE(rb.find("C_square")->pass);
    EXPECT_TRUE(rb.find("anticommutation")->pass);

    EXPECT_THROW(verify_module(base_module(0, 1), -1.0), invalid_input);
}

TEST(VerifyModule, Type01IsExact) {
    const VerificationReport r = verify_module(base_module(0, 1));
    EXPECT_TRUE(r.all_pass());
    for (auto& c : r.items) EXPECT_EQ(c.max_deviation, 0.0) << c.name;
}

TEST(MeasureSigns, ReportsZeroWhenNeitherSignHolds) {
    CliffordModule m = build_module(0, 2);
    m.C.A = m2(1, 1, 0, 1);
    const SignTriple s = measure_signs(m);
    EXPECT_EQ(s.epsilon, 0);
}

#include <fuzzy_triples/sphere.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace ncg;

namespace {

int delta(int a, int b) { return a == b ? 1 : 0; }

// [L_jk, L_lm] = d_kl L_jm - d_km L_jl - d_jl L_km + d_jm L_kl
template <class F>
double bracket_defect(F L, Index n) {
    double dev = 0;
    for (int j = 1; j <= 3; ++j)
        for (int k = 1; k <= 3; ++k)
            for (int l = 1; l <= 3; ++l)
                for (int m = 1; m <= 3; ++m) {
                    const cmat lhs = comm(L(j, k), L(l, m));
                    cmat rhs = cmat::Zero(n, n);
                    rhs += double(delta(k, l)) * L(j, m) - double(delta(k, m)) * L(j, l) -
                           double(delta(j, l)) * L(k, m) + double(delta(j, m)) * L(k, l);
                    dev = std::max(dev, max_abs(cmat(lhs - rhs)));
                }
    return dev;
}

// Clebsch-Gordan count: spin 1/2 (x) (l1 (x) l2) with d = +(j+1/2) on j = k+1/2 and -(j+1/2) on j = k-1/2
std::map<int, int> cg_gp_spectrum(int n1, int n2) {
    std::map<int, int> out;  // 2 * eigenvalue -> multiplicity
    const int two_l1 = n1 - 1, two_l2 = n2 - 1;
    for (int two_k = std::abs(two_l1 - two_l2); two_k <= two_l1 + two_l2; two_k += 2) {
        out[two_k + 2] += two_k + 2;
        if (two_k > 0) out[-two_k] += two_k;
    }
    return out;
}

std::map<int, int> as_map(const Spectrum& s) {
    std::map<int, int> out;
    for (auto& e : s.entries) {
        const double t = 2 * e.value;
        EXPECT_NEAR(t, std::round(t), 1e-9);
        out[int(std::lround(t))] += e.multiplicity;
    }
    return out;
}

std::map<int, int> doubled(const std::map<int, int>& d) {
    std::map<int, int> out;
    for (auto [v, m] : d) {
        out[v] += m;
        out[-v] += m;
    }
    return out;
}

}  // namespace

TEST(So3, BracketRelations) {
    for (int n = 1; n <= 6; ++n) {
        const So3Rep r = so3_irrep(n);
        EXPECT_LT(bracket_defect([&](int j, int k) { return r.L(j, k); }, n), 1e-13) << n;
        for (auto [j, k] : sphere_pairs()) EXPECT_LT(max_abs(cmat(r.L(j, k) + r.L(j, k).adjoint())), 1e-15);
    }
    EXPECT_LT(bracket_defect([](int j, int k) { return j == k ? cmat(cmat::Zero(2, 2)) : spin_op(j, k); }, 2), 1e-15);
}

TEST(So3, Casimirs) {
    for (int n = 1; n <= 6; ++n) {
        const So3Rep r = so3_irrep(n);
        cmat c = cmat::Zero(n, n);
        for (auto [j, k] : sphere_pairs()) c -= r.L(j, k) * r.L(j, k);
        const double l = 0.5 * (n - 1);
        EXPECT_LT(max_abs(cmat(c - l * (l + 1) * eye(n))), 1e-13) << n;
    }
    for (auto [j, k] : sphere_pairs()) EXPECT_EQ(max_abs(so3_irrep(1).L(j, k)), 0.0);
    EXPECT_THROW(so3_irrep(0), invalid_input);
}

TEST(SigmaModule, IsType03AndBuildsType13) {
    const CliffordModule s = sigma_module();
    EXPECT_EQ(s.s, 3);
    EXPECT_TRUE(verify_module(s).all_pass());
    const CliffordModule g = gamma13_module();
    EXPECT_EQ(g.s, 2);
    EXPECT_EQ(g.dim_v, 4);
    EXPECT_TRUE(verify_module(g).all_pass());
}

TEST(GrossePresnajder, Spectra) {
    Spectrum two;
    two.entries = {{-1, 2}, {1, 2}, {2, 4}};
    EXPECT_TRUE(spectra_match(Spectrum::of(grosse_presnajder(2)), two));
    for (int n = 1; n <= 8; ++n) {
        const Spectrum got = Spectrum::of(grosse_presnajder(n));
        EXPECT_EQ(as_map(got), cg_gp_spectrum(n, n)) << n;
        EXPECT_TRUE(spectra_match(got, predicted_gp_spectrum(n))) << n;
        // not symmetric: +n present, -n absent
        EXPECT_NEAR(got.entries.back().value, n, 1e-9);
        EXPECT_GT(got.entries.front().value, -n + 0.5);
    }
}

TEST(GrossePresnajder, CasimirIdentity) {
    for (int n = 1; n <= 6; ++n) {
        const CasimirReport r = casimir_check_fuzzy(n);
        EXPECT_LT(r.deviation, 1e-12) << n;
        EXPECT_LT(r.c1_deviation, 1e-15);
    }
    EXPECT_LT(casimir_check_generalised(3, 1).deviation, 1e-12);
    EXPECT_EQ(max_abs(cmat(grosse_presnajder(1) - eye(2))), 0.0);
}

TEST(FuzzySphere, Spectra) {
    Spectrum three;
    three.entries = {{-3, 6}, {-2, 8}, {-1, 4}, {1, 4}, {2, 8}, {3, 6}};
    EXPECT_TRUE(spectra_match(predicted_fuzzy_spectrum(3), three));
    Spectrum two;
    two.entries = {{-2, 4}, {-1, 4}, {1, 4}, {2, 4}};
    EXPECT_TRUE(spectra_match(predicted_fuzzy_spectrum(2), two));
    Spectrum one;
    one.entries = {{-1, 2}, {1, 2}};
    EXPECT_TRUE(spectra_match(predicted_fuzzy_spectrum(1), one));
    for (int n = 1; n <= 7; ++n) {
        const auto g = fuzzy_sphere_dirac(n);
        EXPECT_EQ(g.fs.hilbert_dim, 4 * n * n);
        const Spectrum s = Spectrum::of(g.D.matrix);
        EXPECT_TRUE(spectra_match(s, predicted_fuzzy_spectrum(n))) << n;
        EXPECT_EQ(as_map(s), doubled(cg_gp_spectrum(n, n))) << n;
        EXPECT_TRUE(spectra_match(s, s.negated()));
        EXPECT_EQ(s.total(), 4 * n * n);
    }
    EXPECT_THROW(predicted_fuzzy_spectrum(0), invalid_input);
}

TEST(FuzzySphere, BlockStructure) {
    for (int n = 1; n <= 6; ++n) {
        const WBlockReport r = w_block_report(n);
        EXPECT_LT(r.block_deviation, 1e-12) << n;
        EXPECT_LT(r.off_diagonal, 1e-12) << n;
        EXPECT_EQ(r.gamma_compression, 0.0) << n;
        EXPECT_LT(r.gamma0_commutator, 1e-12) << n;
    }
}

TEST(FuzzySphere, AxiomsAndTerms) {
    const auto g = fuzzy_sphere_dirac(4);
    EXPECT_TRUE(check_axioms(g.fs, g.D).all_pass());
    ASSERT_EQ(g.D.terms.size(), 4u);
    EXPECT_EQ(g.D.terms[0].flavor, TermFlavor::anticommutator);
    for (size_t t = 1; t < 4; ++t) {
        EXPECT_EQ(g.D.terms[t].flavor, TermFlavor::commutator);
        EXPECT_EQ(g.D.terms[t].omega_word.size(), 3u);
    }
    // D = gamma^0 + sum gamma^0 gamma^j gamma^k (x) [L_jk, .]
    const CliffordModule& cm = g.fs.clifford;
    const So3Rep r = so3_irrep(4);
    cmat expect = kron(cm.gammas[0], eye(16));
    for (auto [j, k] : sphere_pairs()) expect += kron(cm.word({0, j, k}), ad(r.L(j, k)));
    EXPECT_LT(max_abs(cmat(g.D.matrix - expect)), 1e-13);
}

TEST(GeneralisedSphere, Spectra) {
    const auto g = gen_fuzzy_sphere_dirac(3, 1);
    Spectrum d1;
    d1.entries = {{-2, 4}, {-1, 2}, {1, 2}, {2, 4}};
    EXPECT_TRUE(spectra_match(Spectrum::of(g.D1), d1));
    Spectrum gp;
    gp.entries = {{-1, 2}, {2, 4}};
    EXPECT_TRUE(spectra_match(predicted_gen_gp_spectrum(3, 1), gp));
    EXPECT_TRUE(spectra_match(Spectrum::of(grosse_presnajder_generalised(3, 1)), gp));
    EXPECT_EQ(g.D1.rows(), 12);

    for (int n1 = 1; n1 <= 6; ++n1)
        for (int n2 = 1; n2 <= 6; ++n2) {
            const auto h = gen_fuzzy_sphere_dirac(n1, n2);
            const Spectrum s1 = Spectrum::of(h.D1), s2 = Spectrum::of(h.D2);
            EXPECT_EQ(as_map(s1), doubled(cg_gp_spectrum(n1, n2))) << n1 << "," << n2;
            EXPECT_TRUE(spectra_match(s1, predicted_gen_spectrum(n1, n2))) << n1 << "," << n2;
            EXPECT_TRUE(spectra_match(s1, s2)) << n1 << "," << n2;
            EXPECT_TRUE(spectra_match(Spectrum::of(h.D.matrix), predicted_gen_full_spectrum(n1, n2)));
            EXPECT_EQ(as_map(Spectrum::of(grosse_presnajder_generalised(n1, n2))), cg_gp_spectrum(n1, n2));
            EXPECT_LT(casimir_check_generalised(n1, n2).deviation, 1e-12);
        }
}

TEST(GeneralisedSphere, EqualSizesReduceToTheFuzzySphere) {
    for (int n = 1; n <= 5; ++n) {
        EXPECT_TRUE(spectra_match(predicted_gen_gp_spectrum(n, n), predicted_gp_spectrum(n)));
        EXPECT_TRUE(spectra_match(predicted_gen_spectrum(n, n), predicted_fuzzy_spectrum(n)));
    }
}

TEST(GeneralisedSphere, LowestPairCarriesSpinMMinusHalf) {
    // for n1 != n2 the eigenvalue -m has multiplicity 2m = 2j + 1 with j = m - 1/2
    for (auto [n1, n2] : std::vector<std::pair<int, int>>{{3, 1}, {5, 2}, {2, 6}}) {
        const double m = 0.5 * std::abs(n1 - n2);
        const Spectrum s = predicted_gen_gp_spectrum(n1, n2);
        int mult = 0;
        for (auto& e : s.entries)
            if (std::abs(e.value + m) < 1e-12) mult = e.multiplicity;
        EXPECT_EQ(mult, int(std::lround(2 * (m - 0.5) + 1))) << n1 << "," << n2;
        // and it is the only eigenvalue of size m
        for (auto& e : s.entries)
            if (std::abs(e.value - m) < 1e-12) ADD_FAILURE() << "+m present for " << n1 << "," << n2;
    }
}

TEST(Commutative, Truncations) {
    Spectrum zero;
    zero.entries = {{-1, 2}, {1, 2}};
    EXPECT_TRUE(spectra_match(commutative_sphere_spectrum(0), zero));
    for (int r = 0; r <= 10; ++r) EXPECT_EQ(commutative_sphere_spectrum(r).total(), 2 * (r + 1) * (r + 2));
    EXPECT_TRUE(spectra_match(predicted_fuzzy_spectrum(1), commutative_sphere_spectrum(0)));
    for (int n = 2; n <= 12; ++n) {
        const Spectrum two = commutative_sphere_spectrum(n - 1).merged(commutative_sphere_spectrum(n - 2));
        EXPECT_TRUE(spectra_match(two, predicted_fuzzy_spectrum(n))) << n;
    }
    EXPECT_THROW(commutative_sphere_spectrum(-1), invalid_input);
}

TEST(Monopole, ChargeTwo) {
    const MonopoleSpectrum ms = monopole_spectrum(2, 3);
    EXPECT_EQ(ms.index, -2);
    EXPECT_EQ(ms.levels[0].multiplicity, 2);
    EXPECT_EQ(ms.levels[0].lambda, 0.0);
    EXPECT_EQ(ms.levels[1].two_j, 3);
    EXPECT_NEAR(ms.levels[1].lambda, std::sqrt(3.0), 1e-15);
    EXPECT_EQ(ms.levels[1].multiplicity, 4);
    // lambda^2 + kappa^2/4 = (j + 1/2)^2: 3 + 1 = 4
    EXPECT_TRUE(monopole_relation_exact(2, ms.levels[1]));
    bool found = false;
    for (auto& e : ms.spectrum.entries)
        if (std::abs(e.value + std::sqrt(3.0)) < 1e-12) found = e.multiplicity == 4;
    EXPECT_TRUE(found);
    EXPECT_THROW(monopole_spectrum(0, 3), invalid_input);
}

TEST(Monopole, RelationHoldsExactly) {
    for (int kappa = 1; kappa <= 6; ++kappa) {
        const MonopoleSpectrum ms = monopole_spectrum(kappa, 20);
        for (auto& lv : ms.levels) EXPECT_TRUE(monopole_relation_exact(kappa, lv)) << kappa << " r=" << lv.r;
        const MonopoleSpectrum neg = monopole_spectrum(-kappa, 20);
        EXPECT_EQ(neg.index, kappa);
        EXPECT_TRUE(spectra_match(neg.spectrum, ms.spectrum));
    }
    MonopoleLevel wrong{1, 0, 4, 5};
    EXPECT_FALSE(monopole_relation_exact(2, wrong));
}

TEST(Monopole, IdentificationSelectsHalfKappa) {
    for (int n1 = 1; n1 <= 8; ++n1)
        for (int n2 = 1; n2 <= 8; ++n2) {
            if (n1 == n2) {
                EXPECT_THROW(identify_kappa(n1, n2), invalid_input);
                continue;
            }
            EXPECT_EQ(identify_kappa(n1, n2), KappaIdentification::half_kappa) << n1 << "," << n2;
            const int kappa = n1 - n2;
            const double n = 0.5 * (n1 + n2);
            EXPECT_FALSE(spectra_match(mass_mixed_monopole_spectrum(kappa, 1.0, n), predicted_gen_spectrum(n1, n2)));
        }
    EXPECT_STREQ(to_string(KappaIdentification::half_kappa), "m=|kappa|/2");
}

TEST(Rotations, LeaveTheDiracOperatorInvariant) {
    std::mt19937_64 rng(2024);
    for (int n = 1; n <= 6; ++n) {
        const auto g = fuzzy_sphere_dirac(n);
        for (int t = 0; t < 20; ++t) {
            const Rotation rot = random_rotation(n, rng);
            const DiracOperator d = apply_transformation(g.fs, g.D, rot.g, rot.h);
            EXPECT_LT(max_abs(cmat(d.matrix - g.D.matrix)), 1e-9) << n;
        }
    }
}

TEST(Rotations, ArbitraryUnitaryIsNotASymmetry) {
    const auto g = fuzzy_sphere_dirac(3);
    cmat u = cmat::Zero(3, 3);
    u(0, 1) = u(1, 0) = 1.0;
    u(2, 2) = 1.0;
    const DiracOperator d = apply_transformation(g.fs, g.D, u, eye(4));
    EXPECT_GT(max_abs(cmat(d.matrix - g.D.matrix)), 0.1);
    EXPECT_TRUE(spectra_match(Spectrum::of(d.matrix), Spectrum::of(g.D.matrix)));
}

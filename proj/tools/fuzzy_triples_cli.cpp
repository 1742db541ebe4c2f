#include <fuzzy_triples/fuzzy_triples.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

using namespace ncg;

namespace {

constexpr int EXIT_OK = 0;
constexpr int EXIT_MISMATCH = 2;
constexpr int EXIT_USAGE = 64;

struct usage_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char b[48];
    std::snprintf(b, sizeof b, "%.10g", v);
    return b;
}

void check_format(const std::string& f) {
    if (f != "json" && f != "csv" && f != "table") throw usage_error("unknown format " + f);
}

void check_type(int p, int q) {
    if (p < 0 || q < 0) throw usage_error("p and q must be non-negative");
    if (p + q > 12) throw usage_error("p+q > 12 exceeds the spinor dimension guard");
}

void check_hilbert(long long dim) {
    if (dim > 4096) throw usage_error("hilbert_dim " + std::to_string(dim) + " exceeds 4096");
}

// gamma -----------------------------------------------------------------

struct GammaOpts {
    int p = 0, q = 0;
    bool verify = false;
    std::string format = "json";
};

void csv_matrix(std::ostream& o, const std::string& field, int idx, const cmat& m) {
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j)
            o << field << ',' << idx << ',' << i << ',' << j << ',' << detail::number(m(i, j).real()).dump() << ','
              << detail::number(m(i, j).imag()).dump() << '\n';
}

int run_gamma(const GammaOpts& o) {
    check_format(o.format);
    check_type(o.p, o.q);
    const CliffordModule m = build_module(o.p, o.q);
    std::optional<VerificationReport> rep;
    if (o.verify) rep = verify_module(m, 1e-12);

    if (o.format == "json") {
        json j = m;
        if (rep) j["verification"] = *rep;
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << "field,index,row,col,re,im\n";
        for (auto [k, v] : {std::pair{"p", m.p}, {"q", m.q}, {"s", m.s}, {"dim_v", int(m.dim_v)},
                            {"epsilon", m.signs.epsilon}, {"epsilon_prime", m.signs.epsilon_prime},
                            {"epsilon_double_prime", m.signs.epsilon_double_prime}})
            std::cout << k << ",,,," << v << ",\n";
        for (size_t a = 0; a < m.gammas.size(); ++a) csv_matrix(std::cout, "gamma", int(a), m.gammas[a]);
        csv_matrix(std::cout, "chirality", 0, m.chirality);
        csv_matrix(std::cout, "real_structure", 0, m.C.A);
        if (rep)
            for (auto& c : rep->items)
                std::cout << "check:" << c.name << ",,,," << int(c.pass) << ',' << fmt(c.max_deviation) << '\n';
    } else {
        std::cout << "type (" << m.p << "," << m.q << ")  s=" << m.s << "  dim_v=" << m.dim_v << "  signs ("
                  << m.signs.epsilon << "," << m.signs.epsilon_prime << "," << m.signs.epsilon_double_prime << ")  "
                  << division_algebra(m.s) << '\n';
        for (size_t a = 0; a < m.gammas.size(); ++a) std::cout << "gamma" << a + 1 << ":\n" << m.gammas[a] << '\n';
        std::cout << "chirality:\n" << m.chirality << "\nC:\n" << m.C.A << '\n';
        if (rep)
            for (auto& c : rep->items)
                std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << "  " << fmt(c.max_deviation) << '\n';
    }
    return rep && !rep->all_pass() ? EXIT_MISMATCH : EXIT_OK;
}

// sphere ----------------------------------------------------------------

struct SphereOpts {
    int n = 0;
    std::vector<int> gen;
    bool predict_only = false;
    std::string format = "json";
};

int run_sphere(const SphereOpts& o) {
    check_format(o.format);
    const bool generalised = !o.gen.empty();
    if (generalised && o.gen.size() != 2) throw usage_error("--generalised takes N1 N2");
    if (!generalised && o.n < 1) throw usage_error("need --n >= 1 or --generalised N1 N2");
    const int n1 = generalised ? o.gen[0] : o.n, n2 = generalised ? o.gen[1] : o.n;
    if (n1 < 1 || n2 < 1) throw usage_error("sizes must be positive");
    check_hilbert(generalised ? 8LL * n1 * n2 : 4LL * n1 * n1);

    SpectrumRecord pred{1, 3, generalised ? std::vector<int>{n1, n2} : std::vector<int>{n1},
                        generalised ? "generalised" : "fuzzy",
                        generalised ? predicted_gen_spectrum(n1, n2) : predicted_fuzzy_spectrum(n1)};
    std::optional<SpectrumRecord> comp;
    bool match = true;
    if (!o.predict_only) {
        comp = pred;
        if (generalised) comp->spectrum = Spectrum::of(gen_fuzzy_sphere_dirac(n1, n2).D1);
        else comp->spectrum = Spectrum::of(fuzzy_sphere_dirac(n1).D.matrix);
        match = spectra_match(comp->spectrum, pred.spectrum);
    }
    const std::string verdict = o.predict_only ? "PREDICTED" : match ? "MATCH" : "MISMATCH";
    const std::string block = generalised ? "D1" : "D";

    if (o.format == "json") {
        json j = {{"operator", block}, {"predicted", pred}, {"verdict", verdict}};
        if (comp) {
            j["computed"] = *comp;
            j["match"] = match;
        }
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << "source,value,multiplicity\n";
        for (auto& e : pred.spectrum.entries)
            std::cout << "predicted," << detail::number(e.value).dump() << ',' << e.multiplicity << '\n';
        if (comp)
            for (auto& e : comp->spectrum.entries)
                std::cout << "computed," << detail::number(e.value).dump() << ',' << e.multiplicity << '\n';
    } else {
        std::cout << "spec(" << block << ")  " << pred.kind << "  n=" << n1;
        if (generalised) std::cout << "," << n2;
        std::cout << "  dim " << pred.spectrum.total() << '\n';
        std::cout << "  value      predicted  computed\n";
        for (size_t k = 0; k < pred.spectrum.entries.size(); ++k) {
            char b[96];
            std::snprintf(b, sizeof b, "  %-10s %-10d", fmt(pred.spectrum.entries[k].value).c_str(),
                          pred.spectrum.entries[k].multiplicity);
            std::cout << b;
            if (comp && k < comp->spectrum.entries.size()) std::cout << comp->spectrum.entries[k].multiplicity;
            std::cout << '\n';
        }
        std::cout << verdict << '\n';
    }
    return match ? EXIT_OK : EXIT_MISMATCH;
}

// axioms ----------------------------------------------------------------

struct AxiomOpts {
    int p = 0, q = 0, n = 1, n2 = 0;
    std::optional<std::uint64_t> seed;
    std::string format = "json";
};

int run_axioms(const AxiomOpts& o) {
    check_format(o.format);
    check_type(o.p, o.q);
    if (o.n < 1 || o.n2 < 0) throw usage_error("sizes must be positive");
    const CliffordModule cm = build_module(o.p, o.q);
    const bool generalised = o.n2 > 0;
    check_hilbert(generalised ? 2LL * cm.dim_v * o.n * o.n2 : (long long)cm.dim_v * o.n * o.n);

    FermionSpace fs = generalised ? gen_fuzzy_fermion_space(cm, o.n, o.n2) : fuzzy_fermion_space(cm, o.n);
    DiracOperator D;
    std::string source;
    if (o.p == 1 && o.q == 3 && !o.seed) {
        if (generalised) {
            auto g = gen_fuzzy_sphere_dirac(o.n, o.n2);
            fs = std::move(g.fs);
            D = std::move(g.D);
        } else {
            auto g = fuzzy_sphere_dirac(o.n);
            fs = std::move(g.fs);
            D = std::move(g.D);
        }
        source = "fuzzy sphere";
    } else {
        const std::uint64_t seed = o.seed.value_or(0);
        const GeometryBasis gb = geometry_basis(fs);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> nd;
        rvec x(gb.dim_g);
        for (auto& v : x) v = nd(rng);
        D = gb.dim_g ? gb.combine(x) : DiracOperator{cmat::Zero(fs.hilbert_dim, fs.hilbert_dim), {}};
        source = "random element of G (seed " + std::to_string(seed) + ", dim " + std::to_string(gb.dim_g) + ")";
    }
    const AxiomReport rep = check_axioms(fs, D);
    std::optional<ThetaReport> th;
    if (rep.all_pass()) {
        const FrobeniusData f = canonical_frobenius(fs.algebra);
        th = theta_report(fs, f, theta_from_dirac(fs, f, D, false), D);
    }
    const bool ok = rep.all_pass() && th && th->max() < 1e-12;
    int passed = 0;
    for (auto& a : rep.items) passed += a.pass;

    if (o.format == "json") {
        json j = {{"type", {o.p, o.q}}, {"s", fs.s}, {"hilbert_dim", fs.hilbert_dim}, {"dirac", source},
                  {"axioms", rep}, {"passed", passed}, {"all_pass", ok}};
        if (th)
            j["theta"] = {{"reconstruction", th->reconstruction}, {"hermitian", th->hermitian},
                          {"right_commutes", th->right_commutes}, {"parity", th->parity}, {"gauge", th->gauge}};
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << "id,description,pass,max_deviation\n";
        for (auto& a : rep.items)
            std::cout << a.id << ",\"" << a.description << "\"," << int(a.pass) << ',' << fmt(a.max_deviation) << '\n';
        if (th) std::cout << "theta,\"theta round trip\"," << int(th->max() < 1e-12) << ',' << fmt(th->max()) << '\n';
    } else {
        std::cout << "type (" << o.p << "," << o.q << ")  s=" << fs.s << "  dim H=" << fs.hilbert_dim << "  D: " << source
                  << '\n';
        for (auto& a : rep.items) {
            char b[160];
            std::snprintf(b, sizeof b, "  %2d %-4s %-12s %s", a.id, a.pass ? "ok" : "FAIL", fmt(a.max_deviation).c_str(),
                          a.description.c_str());
            std::cout << b << '\n';
        }
        if (th) std::cout << "  theta round trip " << fmt(th->max()) << '\n';
        std::cout << passed << "/13 pass\n";
    }
    return ok ? EXIT_OK : EXIT_MISMATCH;
}

// sample ----------------------------------------------------------------

struct SampleOpts {
    int p = 0, q = 0, n = 1, n2 = 0;
    double g2 = 1, g4 = 0;
    long steps = 0;
    long burn_in = -1;
    std::optional<std::uint64_t> seed;
    int chains = 1;
    double step_size = 0.5;
    int eig_every = 100;
    std::string out;
    std::string format = "json";
};

int run_sample(const SampleOpts& o) {
    check_format(o.format);
    check_type(o.p, o.q);
    if (!o.seed) throw usage_error("--seed is required");
    if (o.steps <= 0) throw usage_error("--steps must be positive");
    if (o.chains < 1) throw usage_error("--chains must be >= 1");
    if (!(o.g2 > 0 || o.g4 > 0)) throw usage_error("need g2 > 0 or g4 > 0");
    if (o.step_size <= 0) throw usage_error("--step-size must be positive");
    const CliffordModule cm = build_module(o.p, o.q);
    const bool generalised = o.n2 > 0;
    check_hilbert(generalised ? 2LL * cm.dim_v * o.n * o.n2 : (long long)cm.dim_v * o.n * o.n);
    FermionSpace fs = generalised ? gen_fuzzy_fermion_space(cm, o.n, o.n2) : fuzzy_fermion_space(cm, o.n);
    const GeometryBasis gb = geometry_basis(fs);
    if (gb.dim_g < 1) throw usage_error("space of geometries is zero-dimensional");

    SampleConfig cfg;
    cfg.action.g2 = o.g2;
    cfg.action.g4 = o.g4;
    cfg.steps = o.steps;
    cfg.burn_in = o.burn_in >= 0 ? o.burn_in : o.steps / 10;
    if (cfg.burn_in >= cfg.steps) throw usage_error("--burn-in must be below --steps");
    cfg.seed = *o.seed;
    cfg.step_size = o.step_size;
    cfg.eig_every = o.eig_every;

    std::vector<std::unique_ptr<std::ofstream>> files;
    std::vector<std::ostream*> traces;
    if (!o.out.empty()) {
        for (int c = 0; c < o.chains; ++c) {
            const std::string path =
                o.chains == 1 ? o.out + "_trace.csv" : o.out + "_trace_chain" + std::to_string(c) + ".csv";
            files.push_back(std::make_unique<std::ofstream>(path));
            if (!*files.back()) throw usage_error("cannot write " + path);
            traces.push_back(files.back().get());
        }
    }
    const EstimateReport rep = run_chains(gb, cfg, o.chains, traces);

    json j = rep;
    j["dim_g"] = gb.dim_g;
    j["action"] = {{"g2", o.g2}, {"g4", o.g4}};
    j["seed"] = *o.seed;
    if (o.g4 == 0) {
        // Gaussian: <x x^T> = (2 g2 G)^-1 with G_ij = tr(B_i B_j)
        rmat G(gb.dim_g, gb.dim_g);
        for (int a = 0; a < gb.dim_g; ++a)
            for (int b = 0; b < gb.dim_g; ++b)
                G(a, b) = (gb.basis[size_t(a)].matrix * gb.basis[size_t(b)].matrix).trace().real();
        const rmat cov = (2 * o.g2 * G).inverse();
        const double x2 = cov(0, 0), tr2 = gb.dim_g / (2 * o.g2);
        const Estimate& e = rep.at("x0^2");
        j["gaussian_prediction"] = {{"x0^2", x2},
                                    {"trD2", tr2},
                                    {"x0^2_within_3_stderr", std::abs(e.mean - x2) <= 3 * e.stderr_}};
    }
    if (!o.out.empty()) std::ofstream(o.out + "_report.json") << j.dump(2) << '\n';

    if (o.format == "json") {
        std::cout << j.dump(2) << '\n';
    } else if (o.format == "csv") {
        std::cout << "observable,mean,stderr,n_eff\n";
        for (auto& [k, e] : rep.observables)
            std::cout << k << ',' << fmt(e.mean) << ',' << fmt(e.stderr_) << ',' << fmt(e.n_eff) << '\n';
    } else {
        std::cout << "dim G=" << gb.dim_g << "  chains=" << rep.chains << "  samples=" << rep.samples
                  << "  acceptance=" << fmt(rep.acceptance) << "  step=" << fmt(rep.step_size) << '\n';
        for (auto& [k, e] : rep.observables) {
            char b[160];
            std::snprintf(b, sizeof b, "  %-8s %14s +- %-12s n_eff %s", k.c_str(), fmt(e.mean).c_str(),
                          fmt(e.stderr_).c_str(), fmt(e.n_eff).c_str());
            std::cout << b;
            if (rep.rhat.count(k)) std::cout << "  Rhat " << fmt(rep.rhat.at(k));
            std::cout << '\n';
        }
        if (j.contains("gaussian_prediction")) std::cout << "  gaussian <x0^2> " << fmt(j["gaussian_prediction"]["x0^2"]) << '\n';
        if (rep.non_integrable) std::cout << "WARNING " << rep.warning << '\n';
    }
    return rep.axiom_failures || rep.non_integrable ? EXIT_MISMATCH : EXIT_OK;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"finite real spectral triples and fuzzy spaces"};
    app.require_subcommand(1);

    GammaOpts go;
    auto* g = app.add_subcommand("gamma", "build and verify a type (p,q) Clifford module");
    g->add_option("--p", go.p)->required();
    g->add_option("--q", go.q)->required();
    g->add_flag("--verify", go.verify);
    g->add_option("--format", go.format);

    SphereOpts so;
    auto* s = app.add_subcommand("sphere", "fuzzy sphere spectra, computed and closed form");
    s->add_option("--n", so.n);
    s->add_option("--generalised", so.gen)->expected(2);
    s->add_flag("--predict-only", so.predict_only);
    s->add_option("--format", so.format);

    AxiomOpts ao;
    std::uint64_t aseed = 0;
    auto* a = app.add_subcommand("axioms", "check the axioms on a fuzzy space");
    a->add_option("--p", ao.p)->required();
    a->add_option("--q", ao.q)->required();
    a->add_option("--n", ao.n)->required();
    a->add_option("--n2", ao.n2);
    auto* rd = a->add_option("--random-dirac", aseed);
    a->add_option("--format", ao.format);

    SampleOpts mo;
    std::uint64_t mseed = 0;
    auto* m = app.add_subcommand("sample", "Metropolis sampling of the Euclidean ensemble");
    m->add_option("--p", mo.p)->required();
    m->add_option("--q", mo.q)->required();
    m->add_option("--n", mo.n)->required();
    m->add_option("--n2", mo.n2);
    m->add_option("--g2", mo.g2);
    m->add_option("--g4", mo.g4);
    m->add_option("--steps", mo.steps)->required();
    m->add_option("--burn-in", mo.burn_in);
    auto* ms = m->add_option("--seed", mseed);
    m->add_option("--chains", mo.chains);
    m->add_option("--step-size", mo.step_size);
    m->add_option("--eig-every", mo.eig_every);
    m->add_option("--out", mo.out);
    m->add_option("--format", mo.format);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return EXIT_USAGE;
    }
    if (rd->count()) ao.seed = aseed;
    if (ms->count()) mo.seed = mseed;

    try {
        if (*g) return run_gamma(go);
        if (*s) return run_sphere(so);
        if (*a) return run_axioms(ao);
        if (*m) return run_sample(mo);
    } catch (const usage_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_USAGE;
    } catch (const invalid_input& e) {
        std::cerr << "error: " << e.what() << '\n';
        return EXIT_USAGE;
    }
    return EXIT_USAGE;
}

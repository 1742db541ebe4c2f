#pragma once

#include "fuzzy.hpp"

#include <cstdint>
#include <cstdlib>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <thread>

namespace ncg {

// S = g2 tr D^2 + g4 tr D^4, or a user supplied action
struct ActionConfig {
    double g2 = 1.0;
    double g4 = 0.0;
    std::string custom_id;
    std::function<double(const cmat&)> custom;
};

struct ActionValue {
    double S, tr2, tr4;
};

inline ActionValue evaluate_action(const ActionConfig& a, const cmat& D) {
    const cmat D2 = D * D;
    const double tr2 = D2.trace().real();
    const double tr4 = D2.squaredNorm();
    const double S = a.custom ? a.custom(D) : a.g2 * tr2 + a.g4 * tr4;
    return {S, tr2, tr4};
}

struct SampleConfig {
    ActionConfig action;
    long steps = 100000;
    long burn_in = 10000;
    std::uint64_t seed = 0;
    double step_size = 0.5;
    int eig_every = 100;     // eigen-observables every k steps
    int check_every = 1000;  // axiom spot check
    int hist_bins = 40;
    double hist_range = 0;   // 0: set from the burn-in eigenvalues
    std::ostream* trace = nullptr;
};

struct Estimate {
    double mean = 0, stderr_ = 0, n_eff = 0;
};

struct EstimateReport {
    std::map<std::string, Estimate> observables;
    std::vector<double> hist_edges;
    std::vector<double> hist_density;
    double acceptance = 0;
    double step_size = 0;  // after burn-in adaptation
    long samples = 0;
    int axiom_checks = 0, axiom_failures = 0;
    bool non_integrable = false;
    std::string warning;
    int chains = 1;
    std::map<std::string, double> rhat;

    const Estimate& at(const std::string& k) const { return observables.at(k); }
};

namespace detail {

inline Estimate batch_means(const std::vector<double>& v, int batches = 50) {
    Estimate e;
    const size_t n = v.size();
    if (n == 0) return e;
    double sum = 0;
    for (double x : v) sum += x;
    e.mean = sum / double(n);
    double var = 0;
    for (double x : v) var += (x - e.mean) * (x - e.mean);
    var /= double(n > 1 ? n - 1 : 1);
    const size_t b = n / size_t(batches);
    if (b == 0) {
        e.stderr_ = std::sqrt(var / double(n));
        e.n_eff = double(n);
        return e;
    }
    std::vector<double> means(size_t(batches), 0.0);
    for (int k = 0; k < batches; ++k) {
        for (size_t i = 0; i < b; ++i) means[size_t(k)] += v[size_t(k) * b + i];
        means[size_t(k)] /= double(b);
    }
    double mm = 0;
    for (double m : means) mm += m;
    mm /= batches;
    double bv = 0;
    for (double m : means) bv += (m - mm) * (m - mm);
    bv /= (batches - 1);
    e.stderr_ = std::sqrt(bv / batches);
    e.n_eff = e.stderr_ > 0 ? var / (e.stderr_ * e.stderr_) : double(n);
    return e;
}

inline std::mt19937_64 chain_rng(std::uint64_t seed, int chain) {
    std::seed_seq sq{std::uint32_t(seed & 0xffffffffu), std::uint32_t(seed >> 32), std::uint32_t(chain)};
    return std::mt19937_64(sq);
}

struct ChainOutput {
    EstimateReport report;
    std::map<std::string, std::vector<double>> series;
};

inline ChainOutput run_chain(const GeometryBasis& gb, const SampleConfig& cfg, int chain) {
    if (gb.dim_g < 1) throw invalid_input("sample: space of geometries is zero-dimensional");
    if (cfg.steps <= cfg.burn_in || cfg.burn_in < 0) throw invalid_input("sample: need steps > burn_in >= 0");
    if (cfg.step_size <= 0) throw invalid_input("sample: step_size must be positive");
    if (!cfg.action.custom && !(cfg.action.g2 > 0 || cfg.action.g4 > 0))
        throw invalid_input("sample: need g2 > 0 or g4 > 0");

    const FermionSpace& fs = *gb.fermion_space;
    auto rng = chain_rng(cfg.seed, chain);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unif;

    const Index d = gb.dim_g;
    rvec x = rvec::Zero(d);
    cmat D = gb.combine(x).matrix;
    ActionValue cur = evaluate_action(cfg.action, D);
    double step = cfg.step_size;

    ChainOutput out;
    auto& ser = out.series;
    const int track = int(std::min<Index>(d, 8));
    long accepted = 0, acc_window = 0, window = 0;
    double hist_range = 0;
    std::vector<double> hist(size_t(std::max(cfg.hist_bins, 1)), 0.0);
    double burn_eig_max = 0;
    long hist_count = 0;
    double first_q = 0, last_q = 0;
    long first_n = 0, last_n = 0;

    if (cfg.trace) *cfg.trace << "step,accepted,S,trD2,trD4,min_abs_eig\n";

    for (long t = 0; t < cfg.steps; ++t) {
        rvec y = x;
        for (Index i = 0; i < d; ++i) y(i) += step * normal(rng);
        const cmat Dy = gb.combine(y).matrix;
        const ActionValue prop = evaluate_action(cfg.action, Dy);
        bool acc = false;
        if (std::isfinite(prop.S)) {
            const double dS = prop.S - cur.S;
            acc = dS <= 0 || unif(rng) < std::exp(-dS);
        }
        if (acc) {
            x = y;
            D = Dy;
            cur = prop;
        }
        if (!std::isfinite(cur.S)) {
            out.report.non_integrable = true;
            out.report.warning = "action became non-finite";
            break;
        }

        const bool eig_step = cfg.eig_every > 0 && t % cfg.eig_every == 0;
        rvec ev;
        double gap = -1;
        if (eig_step) {
            ev = eigenvalues_hermitian(D);
            gap = ev.cwiseAbs().minCoeff();
        }

        if (t < cfg.burn_in) {
            ++window;
            if (acc) ++acc_window;
            if (window == 100) {
                const double r = double(acc_window) / double(window);
                if (r < 0.234) step *= 0.8;
                else if (r > 0.5) step *= 1.25;
                window = acc_window = 0;
            }
            if (eig_step) burn_eig_max = std::max(burn_eig_max, ev.cwiseAbs().maxCoeff());
        } else {
            if (t == cfg.burn_in)
                hist_range = cfg.hist_range > 0 ? cfg.hist_range : burn_eig_max > 0 ? 1.5 * burn_eig_max : 1.0;
            if (acc) ++accepted;
            ser["S"].push_back(cur.S);
            ser["trD2"].push_back(cur.tr2);
            ser["trD4"].push_back(cur.tr4);
            for (int i = 0; i < track; ++i) ser["x" + std::to_string(i)].push_back(x(i));
            ser["x0^2"].push_back(x(0) * x(0));
            ser["x0^3"].push_back(x(0) * x(0) * x(0));
            ser["x0^4"].push_back(x(0) * x(0) * x(0) * x(0));
            ser["|x|^2"].push_back(x.squaredNorm());
            if (eig_step) {
                ser["gap"].push_back(gap);
                for (Index k = 0; k < ev.size(); ++k) {
                    const double u = (ev(k) + hist_range) / (2 * hist_range);
                    if (u >= 0 && u < 1) hist[size_t(u * double(hist.size()))] += 1;
                    ++hist_count;
                }
            }
            const long pos = t - cfg.burn_in, quarter = (cfg.steps - cfg.burn_in) / 4;
            if (pos < quarter) first_q += cur.tr2, ++first_n;
            else if (pos >= 3 * quarter) last_q += cur.tr2, ++last_n;
        }

        if (cfg.check_every > 0 && t % cfg.check_every == 0) {
            const AxiomReport rep = check_axioms(fs, DiracOperator{D, {}}, 1e-10);
            ++out.report.axiom_checks;
            for (int a = 10; a <= 13; ++a)
                if (!rep.axiom(a).pass) {
                    ++out.report.axiom_failures;
                    break;
                }
        }

        if (cfg.trace) {
            auto& o = *cfg.trace;
            o << t << ',' << int(acc) << ',';
            char buf[96];
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,", cur.S, cur.tr2, cur.tr4);
            o << buf;
            if (eig_step) {
                std::snprintf(buf, sizeof buf, "%.17g", gap);
                o << buf;
            }
            o << '\n';
        }
    }

    auto& rep = out.report;
    rep.samples = long(ser["S"].size());
    rep.acceptance = rep.samples ? double(accepted) / double(rep.samples) : 0;
    rep.step_size = step;
    for (auto& [k, v] : ser) rep.observables[k] = batch_means(v);
    if (first_n && last_n) {
        const double a = first_q / double(first_n), b = last_q / double(last_n);
        if (b > 5 * a) {
            rep.non_integrable = true;
            rep.warning = "running mean of tr D^2 diverges";
        }
    }
    rep.hist_edges.resize(hist.size() + 1);
    for (size_t k = 0; k <= hist.size(); ++k)
        rep.hist_edges[k] = -hist_range + 2 * hist_range * double(k) / double(hist.size());
    rep.hist_density.resize(hist.size());
    const double w = 2 * hist_range / double(hist.size());
    for (size_t k = 0; k < hist.size(); ++k)
        rep.hist_density[k] = hist_count ? hist[k] / (double(hist_count) * w) : 0;
    return out;
}

}  // namespace detail

inline EstimateReport sample_euclidean(const GeometryBasis& gb, const SampleConfig& cfg) {
    return detail::run_chain(gb, cfg, 0).report;
}

inline int thread_cap() {
    int cap = int(std::max(1u, std::thread::hardware_concurrency()));
    if (const char* e = std::getenv("FUZZY_TRIPLES_THREADS")) {
        const int v = std::atoi(e);
        if (v > 0) cap = std::min(cap, v);
    }
    return cap;
}

// traces[c] receives the trace of chain c when non-null
inline EstimateReport run_chains(const GeometryBasis& gb, const SampleConfig& cfg, int chain_count,
                                 const std::vector<std::ostream*>& traces = {}) {
    if (chain_count < 1) throw invalid_input("run_chains: chain_count must be >= 1");
    if (chain_count == 1) {
        SampleConfig c = cfg;
        if (!traces.empty()) c.trace = traces[0];
        return sample_euclidean(gb, c);
    }
    std::vector<detail::ChainOutput> outs(static_cast<size_t>(chain_count));
    std::vector<std::exception_ptr> errs(static_cast<size_t>(chain_count));
    auto work = [&](int c) {
        SampleConfig cc = cfg;
        cc.trace = size_t(c) < traces.size() ? traces[size_t(c)] : nullptr;
        try {
            outs[size_t(c)] = detail::run_chain(gb, cc, c);
        } catch (...) {
            errs[size_t(c)] = std::current_exception();
        }
    };
    const int cap = thread_cap();
    for (int start = 0; start < chain_count; start += cap) {
        std::vector<std::thread> pool;
        for (int c = start; c < std::min(chain_count, start + cap); ++c) pool.emplace_back(work, c);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);

    EstimateReport m;
    m.chains = chain_count;
    m.step_size = outs[0].report.step_size;
    m.hist_edges = outs[0].report.hist_edges;
    m.hist_density = outs[0].report.hist_density;
    if (cfg.hist_range > 0) {
        for (size_t c = 1; c < outs.size(); ++c)
            for (size_t k = 0; k < m.hist_density.size(); ++k) m.hist_density[k] += outs[c].report.hist_density[k];
        for (auto& h : m.hist_density) h /= chain_count;
    }
    double acc = 0;
    for (auto& o : outs) {
        acc += o.report.acceptance;
        m.samples += o.report.samples;
        m.axiom_checks += o.report.axiom_checks;
        m.axiom_failures += o.report.axiom_failures;
        if (o.report.non_integrable) {
            m.non_integrable = true;
            m.warning = o.report.warning;
        }
    }
    m.acceptance = acc / chain_count;
    const double C = chain_count;
    for (auto& [k, e0] : outs[0].report.observables) {
        (void)e0;
        Estimate e;
        double W = 0, se2 = 0, neff = 0, mm = 0;
        std::vector<double> means;
        size_t n = 0;
        for (auto& o : outs) {
            const auto& v = o.series.at(k);
            const Estimate& ce = o.report.observables.at(k);
            means.push_back(ce.mean);
            mm += ce.mean;
            se2 += ce.stderr_ * ce.stderr_;
            neff += ce.n_eff;
            double var = 0;
            for (double x : v) var += (x - ce.mean) * (x - ce.mean);
            W += v.size() > 1 ? var / double(v.size() - 1) : 0;
            n = v.size();
        }
        mm /= C;
        W /= C;
        double B = 0;
        for (double mu : means) B += (mu - mm) * (mu - mm);
        B *= double(n) / (C - 1);
        e.mean = mm;
        e.stderr_ = std::sqrt(se2) / C;
        e.n_eff = neff;
        m.observables[k] = e;
        if (W > 0 && n > 1) {
            const double V = (double(n) - 1) / double(n) * W + B / double(n);
            m.rhat[k] = std::sqrt(V / W);
        }
    }
    return m;
}

}  // namespace ncg

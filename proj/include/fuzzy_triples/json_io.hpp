#pragma once

#include "montecarlo.hpp"
#include "sphere.hpp"

#include <json.hpp>

#include <sstream>

namespace ncg {

using json = nlohmann::json;

namespace detail {

// integers stay integers so exact entries such as 0, +-1, +-i print without a decimal tail
inline json number(double v) {
    if (std::isfinite(v) && v == std::round(v) && std::abs(v) < 1e15) return json(static_cast<long long>(v));
    return json(v);
}

}  // namespace detail

// row-major list of rows, each entry [re, im]
inline json matrix_json(const cmat& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json r = json::array();
        for (Index j = 0; j < m.cols(); ++j) {
            const cplx z = m(i, j);
            r.push_back(json::array({detail::number(z.real() == 0 ? 0.0 : z.real()),
                                     detail::number(z.imag() == 0 ? 0.0 : z.imag())}));
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

inline cmat matrix_from_json(const json& j) {
    const Index r = Index(j.size());
    const Index c = r ? Index(j[0].size()) : 0;
    cmat m(r, c);
    for (Index a = 0; a < r; ++a) {
        if (Index(j[size_t(a)].size()) != c) throw invalid_input("matrix json: ragged rows");
        for (Index b = 0; b < c; ++b) {
            const auto& e = j[size_t(a)][size_t(b)];
            m(a, b) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return m;
}

inline void to_json(json& j, const SignTriple& s) {
    j = {{"epsilon", s.epsilon}, {"epsilon_prime", s.epsilon_prime}, {"epsilon_double_prime", s.epsilon_double_prime}};
}

inline void from_json(const json& j, SignTriple& s) {
    s.epsilon = j.at("epsilon");
    s.epsilon_prime = j.at("epsilon_prime");
    s.epsilon_double_prime = j.at("epsilon_double_prime");
}

inline void to_json(json& j, const CliffordModule& m) {
    json g = json::array();
    for (auto& x : m.gammas) g.push_back(matrix_json(x));
    j = {{"p", m.p},
         {"q", m.q},
         {"s", m.s},
         {"dim_v", m.dim_v},
         {"gammas", g},
         {"chirality", matrix_json(m.chirality)},
         {"real_structure", matrix_json(m.C.A)},
         {"signs", m.signs},
         {"division_algebra", division_algebra(m.s)}};
}

inline void from_json(const json& j, CliffordModule& m) {
    m.p = j.at("p");
    m.q = j.at("q");
    m.s = j.at("s");
    m.dim_v = j.at("dim_v");
    m.gammas.clear();
    for (auto& g : j.at("gammas")) m.gammas.push_back(matrix_from_json(g));
    m.chirality = matrix_from_json(j.at("chirality"));
    m.C.A = matrix_from_json(j.at("real_structure"));
    m.signs = j.at("signs").get<SignTriple>();
}

inline void to_json(json& j, const CheckItem& c) {
    j = {{"name", c.name}, {"pass", c.pass}, {"max_deviation", c.max_deviation}};
}

inline void to_json(json& j, const VerificationReport& r) {
    j = {{"all_pass", r.all_pass()}, {"items", r.items}};
}

inline void to_json(json& j, const AxiomResult& a) {
    j = {{"id", a.id}, {"description", a.description}, {"pass", a.pass}, {"max_deviation", a.max_deviation}};
}

inline void from_json(const json& j, AxiomResult& a) {
    a.id = j.at("id");
    a.description = j.at("description");
    a.pass = j.at("pass");
    a.max_deviation = j.at("max_deviation");
}

inline void to_json(json& j, const AxiomReport& r) { j = r.items; }

inline void from_json(const json& j, AxiomReport& r) { r.items = j.get<std::vector<AxiomResult>>(); }

inline void to_json(json& j, const SpectrumEntry& e) {
    j = {{"value", detail::number(e.value)}, {"multiplicity", e.multiplicity}};
}

inline void from_json(const json& j, SpectrumEntry& e) {
    e.value = j.at("value");
    e.multiplicity = j.at("multiplicity");
}

struct SpectrumRecord {
    int p = 1, q = 3;
    std::vector<int> n;  // one size, or n1 n2
    std::string kind;    // fuzzy | generalised | commutative | monopole | gp
    Spectrum spectrum;
};

inline void to_json(json& j, const SpectrumRecord& s) {
    j = {{"type", {s.p, s.q}}, {"kind", s.kind}, {"entries", s.spectrum.entries}, {"total_dim", s.spectrum.total()}};
    if (s.n.size() == 1) j["n"] = s.n[0];
    else j["n"] = s.n;
}

inline void from_json(const json& j, SpectrumRecord& s) {
    s.p = j.at("type").at(0);
    s.q = j.at("type").at(1);
    s.kind = j.at("kind");
    s.n = j.at("n").is_array() ? j.at("n").get<std::vector<int>>() : std::vector<int>{j.at("n").get<int>()};
    s.spectrum.entries = j.at("entries").get<std::vector<SpectrumEntry>>();
}

inline std::string spectrum_csv(const Spectrum& s) {
    std::ostringstream o;
    o.precision(17);
    o << "value,multiplicity\n";
    for (auto& e : s.entries) o << detail::number(e.value).dump() << ',' << e.multiplicity << '\n';
    return o.str();
}

inline json terms_json(const std::vector<DiracTerm>& terms) {
    json out = json::array();
    for (auto& t : terms) {
        json K = json::array();
        for (auto& k : t.K) {
            json re = json::array(), im = json::array();
            for (Index a = 0; a < k.rows(); ++a) {
                json rr = json::array(), ir = json::array();
                for (Index b = 0; b < k.cols(); ++b) {
                    rr.push_back(detail::number(k(a, b).real()));
                    ir.push_back(detail::number(k(a, b).imag()));
                }
                re.push_back(rr);
                im.push_back(ir);
            }
            K.push_back({{"re", re}, {"im", im}});
        }
        out.push_back({{"omega", t.omega_word}, {"flavor", to_string(t.flavor)}, {"K", K}});
    }
    return out;
}

// flattened row-major Hermitian matrices, re and im parts
inline json basis_json(const GeometryBasis& gb) {
    json out = json::array();
    for (auto& d : gb.basis) {
        json re = json::array(), im = json::array();
        for (Index a = 0; a < d.matrix.rows(); ++a)
            for (Index b = 0; b < d.matrix.cols(); ++b) {
                re.push_back(detail::number(d.matrix(a, b).real()));
                im.push_back(detail::number(d.matrix(a, b).imag()));
            }
        out.push_back({{"dim", d.matrix.rows()}, {"re", re}, {"im", im}});
    }
    return out;
}

inline void to_json(json& j, const Estimate& e) { j = {{"mean", e.mean}, {"stderr", e.stderr_}, {"n_eff", e.n_eff}}; }

inline void from_json(const json& j, Estimate& e) {
    e.mean = j.at("mean");
    e.stderr_ = j.at("stderr");
    e.n_eff = j.at("n_eff");
}

inline void to_json(json& j, const EstimateReport& r) {
    j = {{"observables", r.observables},
         {"acceptance", r.acceptance},
         {"step_size", r.step_size},
         {"samples", r.samples},
         {"chains", r.chains},
         {"axiom_checks", r.axiom_checks},
         {"axiom_failures", r.axiom_failures},
         {"non_integrable", r.non_integrable},
         {"histogram", {{"edges", r.hist_edges}, {"density", r.hist_density}}}};
    if (!r.rhat.empty()) j["rhat"] = r.rhat;
    if (!r.warning.empty()) j["warning"] = r.warning;
}

inline void from_json(const json& j, EstimateReport& r) {
    r.observables = j.at("observables").get<std::map<std::string, Estimate>>();
    r.acceptance = j.at("acceptance");
    r.step_size = j.at("step_size");
    r.samples = j.at("samples");
    r.chains = j.at("chains");
    r.axiom_checks = j.at("axiom_checks");
    r.axiom_failures = j.at("axiom_failures");
    r.non_integrable = j.at("non_integrable");
    r.hist_edges = j.at("histogram").at("edges").get<std::vector<double>>();
    r.hist_density = j.at("histogram").at("density").get<std::vector<double>>();
    if (j.contains("rhat")) r.rhat = j.at("rhat").get<std::map<std::string, double>>();
    if (j.contains("warning")) r.warning = j.at("warning");
}

}  // namespace ncg

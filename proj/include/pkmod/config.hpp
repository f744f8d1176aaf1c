#pragma once

#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "pkmod/experiments.hpp"

namespace pkmod {

using nlohmann::json;

inline void require_keys(const json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
    if (!j.is_object()) throw config_error(where + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key()))
            throw config_error(where + ": unknown field \"" + it.key() + "\"");
}

inline Rat parse_rat(const json& j, const std::string& where) {
    if (j.is_number_integer()) return Rat(j.get<long long>());
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        size_t slash = s.find('/');
        try {
            if (slash == std::string::npos) return Rat(Int(s));
            return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        } catch (const std::exception&) {
            throw config_error(where + ": bad rational \"" + s + "\"");
        }
    }
    throw config_error(where + ": expected an integer or \"num/den\" string");
}

// --- modules from shorthand or explicit presentations ------------------------

// Grammar: "0" | term ("+" term)*, term = "Z/<p^a>" (t acts as 0) | "R"
// (free rank one) | "R/p" | "R/p^a".
inline FiniteModule module_from_shorthand(const QuotRingPtr& R, const std::string& text) {
    const RingParams& pr = R->params;
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw config_error("empty module shorthand");
    if (s == "0") return FiniteModule::zero(R);

    std::vector<unsigned> trivial_parts;
    size_t free_rank = 0;
    std::vector<Poly> cyclic_rels;  // one cyclic summand per entry
    size_t start = 0;
    while (start <= s.size()) {
        size_t plus = s.find('+', start);
        std::string term = s.substr(start, plus == std::string::npos ? plus : plus - start);
        start = plus == std::string::npos ? s.size() + 1 : plus + 1;
        if (term.empty()) throw config_error("bad module shorthand: " + text);
        if (term == "R") {
            ++free_rank;
        } else if (term.rfind("R/p", 0) == 0) {
            unsigned a = 1;
            if (term.size() > 3) {
                if (term[3] != '^') throw config_error("bad module shorthand term: " + term);
                a = unsigned(std::stoul(term.substr(4)));
            }
            if (a >= pr.k + 1 || a < 1)
                throw config_error("R/p^a needs 1 <= a <= k in: " + term);
            cyclic_rels.push_back(Poly::constant(pr, pr.p_power(a)));
        } else if (term.rfind("Z/", 0) == 0) {
            std::uint64_t m = std::stoull(term.substr(2));
            unsigned a = 0;
            std::uint64_t v = m;
            while (v > 1 && v % pr.p == 0) {
                v /= pr.p;
                ++a;
            }
            if (v != 1 || a == 0 || a > pr.k)
                throw config_error("Z/m term must be a p-power within precision: " + term);
            trivial_parts.push_back(a);
        } else {
            throw config_error("bad module shorthand term: " + term);
        }
    }

    // assemble the direct sum as a block-diagonal presentation
    size_t g = trivial_parts.size() + free_rank + cyclic_rels.size();
    std::vector<std::vector<Poly>> gen_rels;
    for (auto a : trivial_parts)
        gen_rels.push_back({Poly::constant(pr, pr.p_power(a)), R->t_gen()});
    for (size_t i = 0; i < free_rank; ++i) gen_rels.push_back({});
    for (auto& f : cyclic_rels) gen_rels.push_back({f});
    size_t total_rels = 0;
    for (auto& v : gen_rels) total_rels += v.size();

    QMat w(g, total_rels, R);
    size_t col = 0;
    for (size_t i = 0; i < g; ++i)
        for (auto& f : gen_rels[i]) w.set_entry(i, col++, f);
    return FiniteModule(R, w);
}

inline Poly poly_from_json(const json& j, const RingParams& pr, const std::string& where) {
    if (!j.is_array()) throw config_error(where + ": expected a coefficient array");
    std::vector<std::uint64_t> c;
    for (const auto& x : j) {
        if (!x.is_number_integer()) throw config_error(where + ": coefficients are integers");
        c.push_back(pr.reduce_signed(x.get<long long>()));
    }
    return Poly(pr, c);
}

inline FiniteModule module_from_json(const QuotRingPtr& R, const json& j,
                                     const std::string& where) {
    if (j.is_string()) return module_from_shorthand(R, j.get<std::string>());
    if (j.is_object()) {
        require_keys(j, {"presentation"}, where);
        const json& pres = j.at("presentation");
        if (!pres.is_array() || pres.empty())
            throw config_error(where + ": presentation must be a nonempty row array");
        size_t g = pres.size(), m = pres[0].size();
        QMat w(g, m, R);
        for (size_t i = 0; i < g; ++i) {
            if (pres[i].size() != m) throw config_error(where + ": ragged presentation");
            for (size_t c = 0; c < m; ++c)
                w.set_entry(i, c, poly_from_json(pres[i][c], R->params, where));
        }
        return FiniteModule(R, w);
    }
    throw config_error(where + ": module must be a shorthand string or {presentation: ...}");
}

inline Mat fp_matrix_from_json(const json& j, std::uint64_t p, const std::string& where) {
    if (!j.is_array()) throw config_error(where + ": expected a matrix (array of rows)");
    size_t rows = j.size();
    size_t cols = rows == 0 ? 0 : j[0].size();
    Mat m(rows, cols, RingParams(p, 1));
    for (size_t i = 0; i < rows; ++i) {
        if (j[i].size() != cols) throw config_error(where + ": ragged matrix");
        for (size_t c = 0; c < cols; ++c)
            m.at(i, c) = m.ring.reduce_signed(j[i][c].get<long long>());
    }
    return m;
}

// --- the experiment configuration --------------------------------------------

struct ExperimentConfig {
    std::uint64_t p = 2;
    unsigned k = 1;
    size_t n = 1;
    std::vector<std::int64_t> poly_coeffs;
    QuotRingPtr ring;
    ResiduePattern pattern;
    DigitDistribution digits;
    std::uint64_t trials = 10000;
    std::uint64_t seed = 1;
    unsigned workers = 1;
    size_t y_tuples = 5;               // equidist: number of random twists
    std::vector<std::vector<Mat>> ys;  // explicit twist tuples (over Z/p^k)
    TargetList targets;
    std::vector<std::pair<std::string, FiniteModule>> moment_panel;
};

inline ExperimentConfig parse_config(const json& j) {
    require_keys(j,
                 {"schema", "p", "k", "n", "poly", "pattern", "digits", "trials", "seed",
                  "workers", "targets", "moment_panel", "ys", "y_tuples"},
                 "config");
    if (j.value("schema", 1) != 1) throw config_error("config: unsupported schema version");
    ExperimentConfig cfg;
    if (!j.contains("p") || !j.contains("k")) throw config_error("config: p and k are required");
    cfg.p = j.at("p").get<std::uint64_t>();
    cfg.k = j.at("k").get<unsigned>();
    RingParams pr(cfg.p, cfg.k);
    if (!j.contains("poly")) throw config_error("config: poly is required");
    Poly P = poly_from_json(j.at("poly"), pr, "config.poly");
    if (!P.is_monic() || *P.degree() < 1)
        throw config_error("config.poly: modulus must be monic and non-constant");
    cfg.ring = QuotRing::make(pr, P);

    if (j.contains("pattern")) {
        const json& pj = j.at("pattern");
        if (pj.contains("matrix")) {
            require_keys(pj, {"matrix"}, "config.pattern");
            cfg.pattern = pattern_from_matrix(fp_matrix_from_json(pj.at("matrix"), cfg.p,
                                                                  "config.pattern.matrix"));
        } else {
            require_keys(pj, {"J", "Jp", "star"}, "config.pattern");
            Mat J = fp_matrix_from_json(pj.value("J", json::array()), cfg.p, "config.pattern.J");
            Mat Jp = fp_matrix_from_json(pj.at("Jp"), cfg.p, "config.pattern.Jp");
            json star_default = json::array();
            for (size_t i = 0; i < J.rows; ++i) {
                json row = json::array();
                for (size_t c = 0; c < Jp.rows; ++c) row.push_back(0);
                star_default.push_back(row);
            }
            Mat star = fp_matrix_from_json(pj.value("star", star_default), cfg.p,
                                           "config.pattern.star");
            cfg.pattern = pattern_from_blocks(J, Jp, star);
        }
        cfg.n = cfg.pattern.n();
        if (j.contains("n") && j.at("n").get<size_t>() != cfg.n)
            throw config_error("config: n contradicts the pattern size");
    } else {
        if (!j.contains("n")) throw config_error("config: need a pattern or n");
        cfg.n = j.at("n").get<size_t>();
        cfg.pattern = pattern_from_matrix(Mat(cfg.n, cfg.n, RingParams(cfg.p, 1)));
    }

    // digits
    cfg.digits = DigitDistribution::haar(cfg.p, cfg.k, cfg.n);
    if (j.contains("digits")) {
        const json& dj = j.at("digits");
        auto shorthand = [&](const std::string& s) {
            if (s == "haar") return DigitDistribution::haar(cfg.p, cfg.k, cfg.n);
            if (s == "bernoulli01") return DigitDistribution::bernoulli01(cfg.p, cfg.k, cfg.n);
            if (s == "point0") return DigitDistribution::point_mass(cfg.p, cfg.k, cfg.n, 0);
            throw config_error("config.digits: unknown shorthand \"" + s + "\"");
        };
        if (dj.is_string()) {
            cfg.digits = shorthand(dj.get<std::string>());
        } else {
            require_keys(dj, {"default", "corner_uniform", "entries"}, "config.digits");
            cfg.digits = shorthand(dj.value("default", "haar"));
            if (dj.value("corner_uniform", 0) > 0)
                cfg.digits.set_uniform_corner(dj.at("corner_uniform").get<size_t>());
            for (const auto& e : dj.value("entries", json::array())) {
                require_keys(e, {"row", "col", "digit", "weights"}, "config.digits.entries");
                size_t row = e.at("row").get<size_t>(), col = e.at("col").get<size_t>();
                if (row >= cfg.n || col >= cfg.n)
                    throw config_error("config.digits.entries: row/col out of range");
                std::vector<Rat> w;
                for (const auto& x : e.at("weights"))
                    w.push_back(parse_rat(x, "config.digits.entries.weights"));
                if (e.contains("digit")) {
                    unsigned l = e.at("digit").get<unsigned>();
                    if (l < 1 || l >= cfg.k)
                        throw config_error("config.digits.entries: digit index out of range");
                    cfg.digits.at(row, col, l) = w;
                } else {
                    cfg.digits.set_entry(row, col, w);
                }
            }
        }
    }
    cfg.digits.validate();

    cfg.trials = j.value("trials", std::uint64_t(10000));
    cfg.seed = j.value("seed", std::uint64_t(1));
    cfg.workers = j.value("workers", 1u);
    cfg.y_tuples = j.value("y_tuples", size_t(5));

    for (const auto& t : j.value("targets", json::array())) {
        require_keys(t, {"name", "module", "presentation"}, "config.targets");
        std::string name = t.at("name").get<std::string>();
        if (t.contains("module"))
            cfg.targets.emplace_back(name, module_from_json(cfg.ring, t.at("module"),
                                                            "config.targets." + name));
        else
            cfg.targets.emplace_back(
                name, module_from_json(
                          cfg.ring, json{{"presentation", t.at("presentation")}},
                          "config.targets." + name));
    }
    for (const auto& t : j.value("moment_panel", json::array())) {
        if (t.is_string())
            cfg.moment_panel.emplace_back(t.get<std::string>(),
                                          module_from_shorthand(cfg.ring, t.get<std::string>()));
        else {
            require_keys(t, {"name", "module", "presentation"}, "config.moment_panel");
            std::string name = t.at("name").get<std::string>();
            cfg.moment_panel.emplace_back(
                name, module_from_json(cfg.ring, t.contains("module")
                                                     ? t.at("module")
                                                     : json{{"presentation", t.at("presentation")}},
                                       "config.moment_panel." + name));
        }
    }
    for (const auto& tup : j.value("ys", json::array())) {
        std::vector<Mat> tuple;
        for (const auto& yj : tup) {
            Mat y(cfg.n, cfg.n, RingParams(cfg.p, cfg.k));
            if (!yj.is_array() || yj.size() != cfg.n)
                throw config_error("config.ys: expected n x n matrices");
            for (size_t i = 0; i < cfg.n; ++i)
                for (size_t c = 0; c < cfg.n; ++c)
                    y.at(i, c) = y.ring.reduce_signed(yj[i][c].get<long long>());
            tuple.push_back(std::move(y));
        }
        cfg.ys.push_back(std::move(tuple));
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw config_error("config parse error in " + path + ": " + e.what());
    }
    return parse_config(j);
}

// --- reports ------------------------------------------------------------------

// {p, k, P, presentation}: enough to reconstruct the module exactly
inline json module_to_json(const FiniteModule& m) {
    json out;
    out["p"] = m.ring()->params.p;
    out["k"] = m.ring()->params.k;
    json pc = json::array();
    for (auto c : m.ring()->modulus.c) pc.push_back(c);
    out["poly"] = pc;
    json pres = json::array();
    const QMat& w = m.presentation();
    for (size_t i = 0; i < w.rows; ++i) {
        json row = json::array();
        for (size_t j = 0; j < w.cols; ++j) {
            json entry = json::array();
            for (auto c : w.entry(i, j).c) entry.push_back(c);
            row.push_back(entry);
        }
        pres.push_back(row);
    }
    out["presentation"] = pres;
    return out;
}

inline FiniteModule module_from_full_json(const json& j) {
    RingParams pr(j.at("p").get<std::uint64_t>(), j.at("k").get<unsigned>());
    QuotRingPtr R = QuotRing::make(pr, poly_from_json(j.at("poly"), pr, "module.poly"));
    return module_from_json(R, json{{"presentation", j.at("presentation")}}, "module");
}

inline json report_to_json(const DistributionReport& rep, const ExperimentConfig& cfg,
                           const std::vector<TargetVerdict>& verdicts = {}) {
    json classes = json::array();
    for (const auto& c : rep.classes) {
        json cj;
        cj["label"] = c.label;
        cj["target"] = c.target_index >= 0;
        cj["prob"] = rat_string(c.prob);
        cj["prob_decimal"] = rat_double(c.prob);
        cj["count"] = c.count;
        cj["group_type"] = c.key.gt.parts;
        cj["fingerprint"] = c.key.hom_logs;
        cj["size_log_p"] = c.rep.size_log();
        classes.push_back(cj);
    }
    json out;
    out["schema"] = 1;
    out["mode"] = rep.exact ? "exact" : "sampled";
    out["p"] = cfg.p;
    out["k"] = cfg.k;
    out["n"] = cfg.n;
    json pc = json::array();
    for (auto c : cfg.ring->modulus.c) pc.push_back(c);
    out["poly"] = pc;
    out["points"] = rep.points;
    out["classes"] = classes;
    out["sum"] = rat_string(rep.total_prob());
    if (!verdicts.empty()) {
        json vj = json::array();
        for (const auto& v : verdicts)
            vj.push_back({{"label", v.label},
                          {"observed", rat_string(v.observed)},
                          {"formula", v.formula_valid ? rat_string(v.formula) : "n/a"},
                          {"verdict", v.verdict}});
        out["verdicts"] = vj;
        if (!rep.exact)
            out["band_note"] =
                "3-sigma binomial band per class, no multiplicity adjustment applied";
    }
    return out;
}

inline std::string report_csv(const DistributionReport& rep) {
    std::ostringstream os;
    os << "label,prob,prob_decimal,count\n";
    for (const auto& c : rep.classes)
        os << c.label << "," << rat_string(c.prob) << "," << rat_double(c.prob) << ","
           << c.count << "\n";
    return os.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw config_error("cannot write file: " + path);
    out << text;
}

}  // namespace pkmod

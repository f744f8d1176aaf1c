// Command-line front door: evaluate closed forms, run exact/sampled
// experiments, trace the division algorithm, verify the acceptance suite.
//
// Exit codes: 0 ok, 1 verification failure, 2 config error, 3 resource guard.

#include <iostream>

#include <CLI11.hpp>

#include "pkmod/acceptance.hpp"
#include "pkmod/config.hpp"

namespace {

using namespace pkmod;

std::vector<std::int64_t> parse_int_list(const std::string& s) {
    std::vector<std::int64_t> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(std::stoll(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(std::stoll(cur));
    return out;
}

QuotRingPtr ring_from_flags(std::uint64_t p, unsigned k, const std::string& poly_csv) {
    RingParams pr(p, k);
    if (poly_csv.empty()) throw config_error("--poly is required for this formula");
    std::vector<std::uint64_t> c;
    for (auto v : parse_int_list(poly_csv)) c.push_back(pr.reduce_signed(v));
    Poly P(pr, c);
    if (!P.is_monic() || *P.degree() < 1)
        throw config_error("poly: modulus must be monic and non-constant");
    return QuotRing::make(pr, P);
}

GroupType group_from_shorthand(std::uint64_t p, const std::string& text) {
    GroupType g;
    if (text == "0") return g;
    std::string s;
    for (char c : text)
        if (!isspace(static_cast<unsigned char>(c))) s += c;
    size_t start = 0;
    while (start < s.size()) {
        size_t plus = s.find('+', start);
        std::string term = s.substr(start, plus == std::string::npos ? plus : plus - start);
        start = plus == std::string::npos ? s.size() : plus + 1;
        if (term.rfind("Z/", 0) != 0) throw config_error("abelian shorthand needs Z/m terms");
        std::uint64_t m = std::stoull(term.substr(2));
        unsigned a = 0;
        while (m > 1 && m % p == 0) {
            m /= p;
            ++a;
        }
        if (m != 1 || a == 0) throw config_error("Z/m must be a nontrivial power of p");
        g.parts.push_back(a);
    }
    std::sort(g.parts.begin(), g.parts.end(), std::greater<>());
    return g;
}

int cmd_formula(const std::string& kind, std::uint64_t p, unsigned k, const std::string& poly_csv,
                const std::string& g_text, unsigned n, unsigned u, unsigned truncation) {
    if (kind == "fw") {
        GroupType g = group_from_shorthand(p, g_text);
        std::cout << rat_string(haar_cok_prob(p, n, g)) << "\n";
    } else if (kind == "fw2") {
        GroupType g = group_from_shorthand(p, g_text);
        std::cout << rat_string(fixed_residue_cok_prob(p, g)) << "\n";
    } else if (kind == "main") {
        QuotRingPtr R = ring_from_flags(p, k, poly_csv);
        FiniteModule G = module_from_shorthand(R, g_text);
        std::cout << rat_string(pushforward_cok_prob(G)) << "\n";
    } else if (kind == "limit") {
        QuotRingPtr R = ring_from_flags(p, k, poly_csv);
        FiniteModule G = module_from_shorthand(R, g_text);
        RatInterval iv = limit_cok_prob(G, truncation);
        std::cout << rat_string(iv.lo) << " .. " << rat_string(iv.hi) << "  (approx "
                  << rat_double(iv.lo) << " .. " << rat_double(iv.hi) << ")\n";
    } else if (kind == "general") {
        QuotRingPtr R = ring_from_flags(p, k, poly_csv);
        FiniteModule G = module_from_shorthand(R, g_text);
        if (R->blocks.size() != 1) throw config_error("--kind general needs a local ring");
        BettiPair b = betti_local(G);
        Rat f = local_cok_prob(R->blocks[0].res_size, n, u, b.b0, b.b1, Int(aut_count(G)),
                               G.size());
        std::cout << rat_string(f) << "\n";
    } else {
        throw config_error("unknown formula kind: " + kind);
    }
    return 0;
}

void emit_report(const DistributionReport& rep, const ExperimentConfig& cfg,
                 const std::string& out, const std::string& csv,
                 const std::vector<std::array<std::string, 3>>& moments) {
    json j = report_to_json(rep, cfg, formula_verdicts(rep, cfg.targets));
    if (!moments.empty()) {
        json mj = json::array();
        for (const auto& m : moments)
            mj.push_back({{"H", m[0]}, {"value", m[1]}, {"reference", m[2]}});
        j["moments"] = mj;
    }
    std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
    if (!csv.empty()) write_text_file(csv, report_csv(rep));
}

int cmd_enumerate(const std::string& config_path, const std::string& out, const std::string& csv,
                  unsigned trend) {
    ExperimentConfig cfg = load_config(config_path);
    DistributionReport rep = exhaust_distribution(cfg.ring, cfg.pattern, cfg.digits, cfg.targets);
    std::vector<std::array<std::string, 3>> moments;
    emit_report(rep, cfg, out, csv, moments);
    if (trend > 0) {
        // descriptive only: the same fiber law at sizes n .. n+trend
        for (unsigned extra = 1; extra <= trend; ++extra) {
            Mat ext = spectrum_avoiding_block(cfg.ring, extra);
            size_t n0 = cfg.pattern.n();
            Mat bigger(n0 + extra, n0 + extra, cfg.pattern.residue.ring);
            for (size_t i = 0; i < extra; ++i)
                for (size_t j = 0; j < extra; ++j) bigger.at(i, j) = ext.at(i, j);
            for (size_t i = 0; i < n0; ++i)
                for (size_t j = 0; j < n0; ++j)
                    bigger.at(extra + i, extra + j) = cfg.pattern.residue.at(i, j);
            ExperimentConfig c2 = cfg;
            c2.pattern = pattern_from_matrix(bigger);
            c2.n = n0 + extra;
            c2.digits = DigitDistribution::haar(cfg.p, cfg.k, c2.n);
            try {
                DistributionReport r2 =
                    exhaust_distribution(c2.ring, c2.pattern, c2.digits, c2.targets);
                std::cerr << "trend n=" << c2.n << ":\n" << report_csv(r2);
            } catch (const resource_error&) {
                std::cerr << "trend n=" << c2.n << ": skipped (fiber over the guard)\n";
                break;
            }
        }
    }
    return 0;
}

int cmd_sample(const std::string& config_path, const std::string& out, const std::string& csv,
               std::uint64_t trials, std::int64_t seed, unsigned workers) {
    ExperimentConfig cfg = load_config(config_path);
    if (trials) cfg.trials = trials;
    if (seed >= 0) cfg.seed = std::uint64_t(seed);
    if (workers) cfg.workers = workers;
    DistributionReport rep = sample_distribution(cfg.ring, cfg.pattern, cfg.digits, cfg.trials,
                                                 cfg.seed, cfg.targets, cfg.workers);
    emit_report(rep, cfg, out, csv, {});
    return 0;
}

int cmd_moments(const std::string& config_path, const std::string& out) {
    ExperimentConfig cfg = load_config(config_path);
    DistributionReport rep = exhaust_distribution(cfg.ring, cfg.pattern, cfg.digits, cfg.targets);
    FiniteModule residue = residue_module(cfg.ring, cfg.pattern.residue);
    std::vector<std::array<std::string, 3>> moments;
    bool all_equal = true;
    for (const auto& [name, H] : cfg.moment_panel) {
        Rat value = report_moment(rep, H);
        Rat ref = reference_moment(cfg.ring, residue, H);
        moments.push_back({name, rat_string(value), rat_string(ref)});
        all_equal = all_equal && value == ref;
    }
    emit_report(rep, cfg, out, "", moments);
    return all_equal ? 0 : 1;
}

int cmd_equidist(const std::string& config_path, const std::string& out) {
    ExperimentConfig cfg = load_config(config_path);
    std::vector<std::vector<Mat>> tuples = cfg.ys;
    if (tuples.empty()) {
        SplitMix64 rng(cfg.seed);
        size_t d = cfg.ring->deg();
        for (size_t t = 0; t < cfg.y_tuples; ++t) {
            std::vector<Mat> ys;
            for (size_t i = 0; i + 1 < d; ++i)
                ys.push_back(random_mat(cfg.n, cfg.n, RingParams(cfg.p, cfg.k), rng));
            tuples.push_back(std::move(ys));
        }
    }
    json lines = json::array();
    bool all = true;
    for (size_t t = 0; t < tuples.size(); ++t) {
        CompareVerdict v = equidistribution_check(cfg.ring, cfg.pattern, tuples[t], cfg.targets);
        lines.push_back({{"tuple", t}, {"equal", v.equal}, {"detail", v.detail}});
        all = all && v.equal;
    }
    json j;
    j["schema"] = 1;
    j["checks"] = lines;
    j["all_equal"] = all;
    std::string text = j.dump(2) + "\n";
    if (out.empty())
        std::cout << text;
    else
        write_text_file(out, text);
    return all ? 0 : 1;
}

int cmd_weierstrass_trace(std::uint64_t p, unsigned k, size_t n, std::uint64_t seed,
                          unsigned deg_m, const std::string& out) {
    RingParams pr(p, k);
    SplitMix64 rng(seed);
    Mat X = random_mat(n, n, pr, rng);
    MatPoly M(n, pr);
    for (unsigned i = 0; i <= deg_m; ++i) M.c.push_back(random_mat(n, n, pr, rng));
    M.trim();
    MatPoly g = weierstrass::make_divisor(X, M);
    MatPoly f(n, pr);
    f.c.push_back(Mat(n, n, pr));
    f.c.push_back(Mat::identity(n, pr));
    f.trim();
    weierstrass::DivisionResult res = weierstrass::divide(f, g);
    std::ostringstream os;
    os << "iter,delta_num,delta_den,deg_s\n";
    for (const auto& s : res.trace)
        os << s.iter << "," << s.delta_num << "," << s.delta_den << "," << s.deg_s << "\n";
    if (out.empty())
        std::cout << os.str();
    else
        write_text_file(out, os.str());
    return 0;
}

int cmd_verify() {
    auto results = acceptance::run_all();
    bool all = true;
    for (const auto& r : results) {
        std::cout << (r.pass ? "PASS" : "FAIL") << "  criterion " << r.id << ": " << r.name
                  << " (" << r.seconds << "s)";
        if (!r.detail.empty()) std::cout << " -- " << r.detail;
        std::cout << "\n";
        all = all && r.pass;
    }
    std::cout << (all ? "ALL CRITERIA PASS" : "SOME CRITERIA FAILED") << "\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact cokernel statistics for random matrices over Z/p^k"};
    app.require_subcommand(1);

    // formula
    auto* formula = app.add_subcommand("formula", "evaluate a closed form, printed as num/den");
    std::string kind = "fw2", poly_csv, g_text = "0";
    std::uint64_t p = 2;
    unsigned k = 1, n_flag = 1, u_flag = 0, truncation = 20;
    formula->add_option("--kind", kind, "fw | fw2 | main | limit | general");
    formula->add_flag_callback("--fw", [&] { kind = "fw"; }, "shorthand for --kind fw");
    formula->add_flag_callback("--fw2", [&] { kind = "fw2"; }, "shorthand for --kind fw2");
    formula->add_flag_callback("--main", [&] { kind = "main"; }, "shorthand for --kind main");
    formula->add_flag_callback("--cy", [&] { kind = "limit"; }, "shorthand for --kind limit");
    formula->add_flag_callback("--general", [&] { kind = "general"; },
                               "shorthand for --kind general");
    formula->add_option("-p,--prime", p, "prime p");
    formula->add_option("-k,--precision", k, "precision exponent k");
    formula->add_option("--poly", poly_csv, "modulus coefficients, lowest first, e.g. 0,0,1");
    formula->add_option("--G", g_text, "module shorthand (Z/4+Z/2, R/p, 0, ...)");
    formula->add_option("-n", n_flag, "matrix size n");
    formula->add_option("-u", u_flag, "extra columns u");
    formula->add_option("--truncation", truncation, "tail truncation for --kind limit");

    // enumerate / sample / moments / equidist
    std::string config_path, out_path, csv_path;
    unsigned trend = 0;
    auto* enumerate = app.add_subcommand("enumerate", "exact distribution over the residue fiber");
    enumerate->add_option("--config", config_path)->required();
    enumerate->add_option("--out", out_path);
    enumerate->add_option("--csv", csv_path);
    enumerate->add_option("--trend", trend, "also report sizes n+1 .. n+T (descriptive)");

    std::uint64_t trials = 0;
    std::int64_t seed = -1;
    unsigned workers = 0;
    auto* sample = app.add_subcommand("sample", "Monte-Carlo distribution over the residue fiber");
    sample->add_option("--config", config_path)->required();
    sample->add_option("--out", out_path);
    sample->add_option("--csv", csv_path);
    sample->add_option("--trials", trials);
    sample->add_option("--seed", seed);
    sample->add_option("--workers", workers);

    auto* moments = app.add_subcommand("moments", "exact moment table against the Haar reference");
    moments->add_option("--config", config_path)->required();
    moments->add_option("--out", out_path);

    auto* equidist = app.add_subcommand("equidist", "exact equidistribution of twisted pencils");
    equidist->add_option("--config", config_path)->required();
    equidist->add_option("--out", out_path);

    std::uint64_t wseed = 1;
    unsigned deg_m = 1;
    std::uint64_t wp = 2;
    unsigned wk = 3;
    size_t wn = 2;
    auto* wtrace = app.add_subcommand("weierstrass-trace",
                                      "per-iteration delta/degree trace of one division, as CSV");
    wtrace->add_option("-p,--prime", wp);
    wtrace->add_option("-k,--precision", wk);
    wtrace->add_option("-n", wn);
    wtrace->add_option("--seed", wseed);
    wtrace->add_option("--deg-m", deg_m, "degree of the random twist series M(t)");
    wtrace->add_option("--out", out_path);

    std::string suite = "acceptance";
    auto* verify = app.add_subcommand("verify", "run the acceptance suite");
    verify->add_option("--suite", suite, "suite name (acceptance)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (formula->parsed())
            return cmd_formula(kind, p, k, poly_csv, g_text, n_flag, u_flag, truncation);
        if (enumerate->parsed()) return cmd_enumerate(config_path, out_path, csv_path, trend);
        if (sample->parsed())
            return cmd_sample(config_path, out_path, csv_path, trials, seed, workers);
        if (moments->parsed()) return cmd_moments(config_path, out_path);
        if (equidist->parsed()) return cmd_equidist(config_path, out_path);
        if (wtrace->parsed())
            return cmd_weierstrass_trace(wp, wk, wn, wseed, deg_m, out_path);
        if (verify->parsed()) {
            if (suite != "acceptance") throw config_error("unknown suite: " + suite);
            return cmd_verify();
        }
    } catch (const resource_error& e) {
        std::cerr << "resource guard: " << e.what() << "\n";
        return 3;
    } catch (const config_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}

#pragma once

#include <map>
#include <string>
#include <thread>
#include <vector>

#include "pkmod/formulas.hpp"
#include "pkmod/module.hpp"
#include "pkmod/weierstrass.hpp"

namespace pkmod {

// ---------------------------------------------------------------------------
// Residue patterns: the fixed matrix A over F_p that every sample is
// congruent to mod p. A structured pattern [[J, *], [0, J']] declares that
// the spectrum of J avoids the roots of the modulus residue; the corner
// block J' has size r.
// ---------------------------------------------------------------------------
struct ResiduePattern {
    Mat residue;  // over F_p (k = 1 params)
    bool structured = false;
    size_t corner = 0;  // r when structured

    size_t n() const { return residue.rows; }
};

inline ResiduePattern pattern_from_matrix(Mat a) {
    if (a.rows != a.cols) throw config_error("residue pattern must be square");
    if (a.ring.k != 1) throw config_error("residue pattern lives over F_p");
    return ResiduePattern{std::move(a), false, 0};
}

inline ResiduePattern pattern_from_blocks(const Mat& j, const Mat& corner, const Mat& star) {
    if (j.ring.k != 1 || corner.ring.k != 1) throw config_error("pattern blocks live over F_p");
    size_t s = j.rows, r = corner.rows;
    if (j.cols != s || corner.cols != r) throw config_error("pattern blocks must be square");
    if (star.rows != s || star.cols != r) throw config_error("star block has the wrong shape");
    Mat a(s + r, s + r, j.ring);
    for (size_t x = 0; x < s; ++x)
        for (size_t y = 0; y < s; ++y) a.at(x, y) = j.at(x, y);
    for (size_t x = 0; x < s; ++x)
        for (size_t y = 0; y < r; ++y) a.at(x, s + y) = star.at(x, y);
    for (size_t x = 0; x < r; ++x)
        for (size_t y = 0; y < r; ++y) a.at(s + x, s + y) = corner.at(x, y);
    return ResiduePattern{std::move(a), true, r};
}

// cok(Pbar(A)) as a p-killed module over R, with t acting through A.
inline FiniteModule residue_module(const QuotRingPtr& R, const Mat& a_mod_p) {
    const RingParams& pr = R->params;
    Mat pa = poly_at_mat(R->modulus.reduced_mod_p(), a_mod_p);
    size_t n = a_mod_p.rows;
    std::vector<std::vector<std::uint64_t>> extra;
    for (size_t j = 0; j < n; ++j) {
        std::vector<std::uint64_t> col(n);
        for (size_t i = 0; i < n; ++i) col[i] = pa.at(i, j);
        extra.push_back(std::move(col));
    }
    for (size_t i = 0; i < n; ++i) {
        std::vector<std::uint64_t> row(n, 0);
        row[i] = pr.p % pr.pk;
        extra.push_back(std::move(row));
    }
    Mat lift(n, n, pr);
    for (size_t i = 0; i < n * n; ++i) lift.a[i] = a_mod_p.a[i];
    return FiniteModule::from_operator(R, lift, extra);
}

// Spectrum check for the structured form: every eigenvalue of J avoids the
// roots of Pbar over the algebraic closure iff Pbar(J) is invertible.
inline void validate_pattern(const ResiduePattern& pat, const QuotRingPtr& R) {
    if (pat.residue.ring.p != R->params.p) throw config_error("pattern prime mismatch");
    if (!pat.structured) return;
    size_t s = pat.n() - pat.corner;
    Mat j(s, s, pat.residue.ring);
    for (size_t x = 0; x < s; ++x)
        for (size_t y = 0; y < s; ++y) j.at(x, y) = pat.residue.at(x, y);
    Mat pj = poly_at_mat(R->modulus.reduced_mod_p(), j);
    if (s > 0 && det_mod_p(pj) == 0)
        throw config_error("spectrum of the off-corner block meets the modulus roots");
    for (size_t x = 0; x < pat.corner; ++x)
        for (size_t y = 0; y < s; ++y)
            if (pat.residue.at(s + x, y) != 0)
                throw config_error("structured pattern must be block upper triangular");
    FiniteModule r = residue_module(R, pat.residue);
    if (residue_rank(r) != pat.corner)
        throw config_error("corner size differs from the residue rank of cok(Pbar(A))");
}

// ---------------------------------------------------------------------------
// Digit distributions: entry (i,j) digit l (1..k-1) gets an exact weight
// vector over {0..p-1}. "haar" is uniform everywhere.
// ---------------------------------------------------------------------------
struct DigitDistribution {
    std::uint64_t p = 2;
    unsigned k = 1;
    size_t n = 0;
    // weights[((i*n)+j)*(k-1) + (l-1)][digit]
    std::vector<std::vector<Rat>> weights;

    static DigitDistribution haar(std::uint64_t p, unsigned k, size_t n) {
        DigitDistribution d{p, k, n, {}};
        std::vector<Rat> uni(p, Rat(1, p));
        d.weights.assign(n * n * (k - 1), uni);
        return d;
    }

    static DigitDistribution bernoulli01(std::uint64_t p, unsigned k, size_t n) {
        DigitDistribution d = haar(p, k, n);
        if (p < 2) throw config_error("bernoulli digits need p >= 2");
        std::vector<Rat> b(p, 0);
        b[0] = Rat(1, 2);
        b[1] = Rat(1, 2);
        for (auto& w : d.weights) w = b;
        return d;
    }

    static DigitDistribution point_mass(std::uint64_t p, unsigned k, size_t n,
                                        std::uint64_t digit = 0) {
        DigitDistribution d = haar(p, k, n);
        std::vector<Rat> pt(p, 0);
        pt[digit] = 1;
        for (auto& w : d.weights) w = pt;
        return d;
    }

    std::vector<Rat>& at(size_t i, size_t j, unsigned l) {
        return weights[((i * n) + j) * (k - 1) + (l - 1)];
    }
    const std::vector<Rat>& at(size_t i, size_t j, unsigned l) const {
        return weights[((i * n) + j) * (k - 1) + (l - 1)];
    }

    void set_entry(size_t i, size_t j, const std::vector<Rat>& w) {
        for (unsigned l = 1; l < k; ++l) at(i, j, l) = w;
    }

    void set_uniform_entry(size_t i, size_t j) {
        set_entry(i, j, std::vector<Rat>(p, Rat(1, p)));
    }

    // make the bottom-right r x r block Haar
    void set_uniform_corner(size_t r) {
        for (size_t i = n - r; i < n; ++i)
            for (size_t j = n - r; j < n; ++j) set_uniform_entry(i, j);
    }

    void validate() const {
        for (const auto& w : weights) {
            if (w.size() != p) throw config_error("digit weight vector has wrong length");
            Rat s = 0;
            for (const auto& x : w) {
                if (x < 0) throw config_error("negative digit weight");
                s += x;
            }
            if (s != 1) throw config_error("digit weights must sum to 1");
        }
    }
};

// ---------------------------------------------------------------------------
// Distribution reports: iso classes are bucketed by a cheap invariant key
// (group type + Hom counts against a fixed panel of small modules) and
// resolved by exact isomorphism tests against stored representatives.
// ---------------------------------------------------------------------------
struct ClassKey {
    GroupType gt;
    std::vector<size_t> hom_logs;

    bool operator==(const ClassKey&) const = default;
    bool operator<(const ClassKey& o) const {
        if (!(gt == o.gt)) return gt < o.gt;
        return hom_logs < o.hom_logs;
    }
};

inline std::vector<FiniteModule> fingerprint_panel(const QuotRingPtr& R) {
    std::vector<FiniteModule> panel;
    const RingParams& pr = R->params;
    Poly p_const = Poly::constant(pr, pr.p % pr.pk);
    for (const auto& blk : R->blocks) {
        Poly pi = Poly(pr, blk.pbar.c);
        panel.push_back(FiniteModule::cyclic(R, {p_const, pi}));
        if (blk.mult >= 2) panel.push_back(FiniteModule::cyclic(R, {p_const, R->mul(pi, pi)}));
        if (pr.k >= 2)
            panel.push_back(FiniteModule::cyclic(
                R, {Poly::constant(pr, pr.p_power(2)), pi}));
    }
    return panel;
}

inline ClassKey class_key(const FiniteModule& M, const std::vector<FiniteModule>& panel) {
    ClassKey key{M.group_type(), {}};
    key.hom_logs.reserve(panel.size());
    for (const auto& T : panel) key.hom_logs.push_back(hom_count_log(M, T));
    std::sort(key.hom_logs.begin(), key.hom_logs.end());
    return key;
}

struct ClassStat {
    std::string label;       // target name, or "other:<i>" for unmatched classes
    int target_index = -1;   // index into the target list, -1 if unmatched
    FiniteModule rep;
    ClassKey key;
    Rat weight = 0;          // accumulated exact weight
    std::uint64_t count = 0; // raw hit count
    Rat prob = 0;            // weight / total, filled by finalize

    ClassStat(FiniteModule rep_, ClassKey key_) : rep(std::move(rep_)), key(std::move(key_)) {}
};

struct DistributionReport {
    bool exact = true;
    std::uint64_t points = 0;  // enumerated combinations or trials
    std::vector<ClassStat> classes;

    Rat total_prob() const {
        Rat s = 0;
        for (const auto& c : classes) s += c.prob;
        return s;
    }

    const ClassStat* find_label(const std::string& label) const {
        for (const auto& c : classes)
            if (c.label == label) return &c;
        return nullptr;
    }

    Rat prob_of(const std::string& label) const {
        const ClassStat* c = find_label(label);
        return c ? c->prob : Rat(0);
    }
};

class DistributionBuilder {
public:
    DistributionBuilder(QuotRingPtr ring,
                        const std::vector<std::pair<std::string, FiniteModule>>& targets)
        : ring_(std::move(ring)), targets_(&targets), panel_(fingerprint_panel(ring_)) {}

    void add(const FiniteModule& m, const Rat& weight, std::uint64_t count = 1) {
        ClassKey key = class_key(m, panel_);
        auto it = buckets_.find(key);
        if (it != buckets_.end()) {
            for (size_t idx : it->second) {
                if (is_isomorphic(m, classes_[idx].rep)) {
                    classes_[idx].weight += weight;
                    classes_[idx].count += count;
                    return;
                }
            }
        }
        ClassStat st(m, key);
        st.weight = weight;
        st.count = count;
        for (size_t t = 0; t < targets_->size(); ++t)
            if (is_isomorphic(m, (*targets_)[t].second)) {
                st.target_index = int(t);
                st.label = (*targets_)[t].first;
                break;
            }
        if (st.target_index < 0) st.label = "other:" + std::to_string(other_++);
        buckets_[key].push_back(classes_.size());
        classes_.push_back(std::move(st));
    }

    void merge(const DistributionBuilder& o) {
        for (const auto& c : o.classes_) add(c.rep, c.weight, c.count);
    }

    DistributionReport finalize(const Rat& total_weight, std::uint64_t points, bool exact) {
        DistributionReport rep;
        rep.exact = exact;
        rep.points = points;
        rep.classes = classes_;
        // unobserved targets are reported with probability exactly 0
        for (size_t t = 0; t < targets_->size(); ++t) {
            bool seen = false;
            for (const auto& c : rep.classes) seen = seen || c.target_index == int(t);
            if (!seen) {
                ClassStat st((*targets_)[t].second, class_key((*targets_)[t].second, panel_));
                st.target_index = int(t);
                st.label = (*targets_)[t].first;
                rep.classes.push_back(std::move(st));
            }
        }
        for (auto& c : rep.classes) c.prob = c.weight / total_weight;
        std::sort(rep.classes.begin(), rep.classes.end(), [](const ClassStat& a, const ClassStat& b) {
            if ((a.target_index < 0) != (b.target_index < 0)) return b.target_index < 0;
            if (a.target_index != b.target_index) return a.target_index < b.target_index;
            if (!(a.key == b.key)) return a.key < b.key;
            return a.label < b.label;
        });
        return rep;
    }

private:
    QuotRingPtr ring_;
    const std::vector<std::pair<std::string, FiniteModule>>* targets_;
    std::vector<FiniteModule> panel_;
    std::map<ClassKey, std::vector<size_t>> buckets_;
    std::vector<ClassStat> classes_;
    size_t other_ = 0;
};

using TargetList = std::vector<std::pair<std::string, FiniteModule>>;

// ---------------------------------------------------------------------------
// Exhaustive distribution over the residue fiber X = A + (higher digits),
// exact rational weights from the digit distribution. The pencil_coeffs hook
// decides which matrix over R is formed from each X; the default is the
// linearization X - t*I.
// ---------------------------------------------------------------------------
using PencilFn = std::function<QMat(const Mat&)>;

inline PencilFn linear_pencil(const QuotRingPtr& R) {
    return [R](const Mat& x) { return linearize(x, R); };
}

inline std::uint64_t fiber_size(const RingParams& pr, size_t n) {
    std::uint64_t total = 1;
    for (size_t i = 0; i < (pr.k - 1) * n * n; ++i) {
        if (total > kEnumGuard) throw resource_error("residue fiber exceeds the 2^24 guard");
        total *= pr.p;
    }
    if (total > kEnumGuard) throw resource_error("residue fiber exceeds the 2^24 guard");
    return total;
}

inline DistributionReport exhaust_distribution(const QuotRingPtr& R, const ResiduePattern& pat,
                                               const DigitDistribution& digits,
                                               const TargetList& targets,
                                               const PencilFn& pencil = nullptr) {
    validate_pattern(pat, R);
    digits.validate();
    const RingParams& pr = R->params;
    const size_t n = pat.n();
    if (digits.n != n || digits.p != pr.p || digits.k != pr.k)
        throw config_error("digit distribution shape mismatch");
    const std::uint64_t total = fiber_size(pr, n);
    PencilFn mk = pencil ? pencil : linear_pencil(R);

    DistributionBuilder builder(R, targets);
    const size_t ndigits = (pr.k - 1) * n * n;
    std::vector<std::uint64_t> digit(ndigits, 0);
    Rat weight_sum = 0;
    for (std::uint64_t it = 0; it < total; ++it) {
        Rat w = 1;
        bool zero = false;
        Mat x(n, n, pr);
        for (size_t i = 0; i < n && !zero; ++i)
            for (size_t j = 0; j < n && !zero; ++j) {
                std::uint64_t v = pat.residue.at(i, j);
                std::uint64_t pl = pr.p;
                for (unsigned l = 1; l < pr.k; ++l) {
                    std::uint64_t dg = digit[((i * n) + j) * (pr.k - 1) + (l - 1)];
                    const Rat& wd = digits.at(i, j, l)[dg];
                    if (wd == 0) {
                        zero = true;
                        break;
                    }
                    w *= wd;
                    v += dg * pl;
                    pl *= pr.p;
                }
                x.at(i, j) = v % pr.pk;
            }
        if (!zero) {
            builder.add(FiniteModule(R, mk(x)), w);
            weight_sum += w;
        }
        // mixed-radix increment
        size_t c = 0;
        while (c < ndigits && ++digit[c] == pr.p) digit[c++] = 0;
        if (ndigits == 0) break;
    }
    if (weight_sum != 1) throw invariant_error("exact weights do not sum to 1");
    return builder.finalize(1, total, true);
}

// All of M_{rows x cols}(R), Haar (uniform) measure, exact.
inline DistributionReport exhaust_full_space(const QuotRingPtr& R, size_t rows, size_t cols,
                                             const TargetList& targets) {
    const RingParams& pr = R->params;
    const size_t D = R->deg();
    const size_t cells = rows * cols * D;
    Int total_i = int_pow(pr.pk, cells);
    if (total_i > kEnumGuard) throw resource_error("matrix space exceeds the 2^24 guard");
    std::uint64_t total = total_i.convert_to<std::uint64_t>();

    DistributionBuilder builder(R, targets);
    std::vector<std::uint64_t> coef(cells, 0);
    for (std::uint64_t it = 0; it < total; ++it) {
        QMat w(rows, cols, R);
        std::copy(coef.begin(), coef.end(), w.a.begin());
        builder.add(FiniteModule(R, w), Rat(1, total_i));
        size_t c = 0;
        while (c < cells && ++coef[c] == pr.pk) coef[c++] = 0;
        if (cells == 0) break;
    }
    return builder.finalize(1, total, true);
}

// ---------------------------------------------------------------------------
// Monte-Carlo sampling with per-trial substreams: results are independent of
// worker count and execution order by construction.
// ---------------------------------------------------------------------------
// Exact cumulative tables on a common denominator, one per digit position.
struct DigitSampler {
    std::uint64_t p = 2;
    unsigned k = 1;
    size_t n = 0;
    std::vector<std::uint64_t> den;                 // one per weight vector
    std::vector<std::vector<std::uint64_t>> cum;    // cumulative numerators

    explicit DigitSampler(const DigitDistribution& d) : p(d.p), k(d.k), n(d.n) {
        for (const auto& wv : d.weights) {
            Int lcm_den = 1;
            for (const auto& r : wv)
                lcm_den = boost::multiprecision::lcm(lcm_den, Int(denominator(r)));
            if (lcm_den > Int(std::uint64_t(1) << 62))
                throw config_error("digit weight denominators too large to sample");
            std::uint64_t dd = lcm_den.convert_to<std::uint64_t>();
            std::vector<std::uint64_t> c;
            std::uint64_t acc = 0;
            for (const auto& r : wv) {
                acc += (Int(numerator(r)) * (lcm_den / Int(denominator(r))))
                           .convert_to<std::uint64_t>();
                c.push_back(acc);
            }
            den.push_back(dd);
            cum.push_back(std::move(c));
        }
    }

    std::uint64_t draw(size_t i, size_t j, unsigned l, SplitMix64& rng) const {
        size_t idx = ((i * n) + j) * (k - 1) + (l - 1);
        std::uint64_t v = rng.below(den[idx]);
        const auto& c = cum[idx];
        for (size_t d = 0; d < c.size(); ++d)
            if (v < c[d]) return d;
        throw invariant_error("digit sampler fell off its cumulative table");
    }
};

inline Mat sample_matrix(const ResiduePattern& pat, const DigitSampler& sampler,
                         const RingParams& pr, std::uint64_t seed, std::uint64_t trial) {
    const size_t n = pat.n();
    SplitMix64 rng(seed, trial);
    Mat x(n, n, pr);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) {
            std::uint64_t v = pat.residue.at(i, j);
            std::uint64_t pl = pr.p;
            for (unsigned l = 1; l < pr.k; ++l) {
                v += sampler.draw(i, j, l, rng) * pl;
                pl *= pr.p;
            }
            x.at(i, j) = v % pr.pk;
        }
    return x;
}

inline DistributionReport sample_distribution(const QuotRingPtr& R, const ResiduePattern& pat,
                                              const DigitDistribution& digits,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const TargetList& targets, unsigned workers = 1,
                                              const PencilFn& pencil = nullptr) {
    validate_pattern(pat, R);
    digits.validate();
    if (trials < 1) throw config_error("at least one trial is required");
    const RingParams& pr = R->params;
    if (digits.n != pat.n() || digits.p != pr.p || digits.k != pr.k)
        throw config_error("digit distribution shape mismatch");
    PencilFn mk = pencil ? pencil : linear_pencil(R);

    if (workers == 0) workers = 1;
    workers = std::min<std::uint64_t>(workers, trials);
    std::vector<std::unique_ptr<DistributionBuilder>> parts;
    for (unsigned w = 0; w < workers; ++w)
        parts.emplace_back(std::make_unique<DistributionBuilder>(R, targets));

    DigitSampler sampler(digits);
    std::vector<std::exception_ptr> errors(workers);
    auto run = [&](unsigned w) {
        try {
            std::uint64_t lo = trials * w / workers, hi = trials * (w + 1) / workers;
            for (std::uint64_t t = lo; t < hi; ++t) {
                Mat x = sample_matrix(pat, sampler, pr, seed, t);
                parts[w]->add(FiniteModule(R, mk(x)), Rat(1));
            }
        } catch (...) {
            errors[w] = std::current_exception();
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::thread> threads;
        for (unsigned w = 0; w < workers; ++w) threads.emplace_back(run, w);
        for (auto& th : threads) th.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    for (unsigned w = 1; w < workers; ++w) parts[0]->merge(*parts[w]);
    return parts[0]->finalize(Rat(trials), trials, false);
}

// ---------------------------------------------------------------------------
// Moments: E |Sur(cok, H)| under an exact or empirical report.
// ---------------------------------------------------------------------------
inline Rat report_moment(const DistributionReport& rep, const FiniteModule& H) {
    Rat acc = 0;
    for (const auto& c : rep.classes) acc += c.prob * Rat(Int(sur_count(c.rep, H)));
    return acc;
}

// matrix of the t action on a p-killed module (an F_p-space)
inline Mat t_action_matrix(const FiniteModule& M) {
    const RingParams& pr = M.ring()->params;
    if (!M.is_killed_by(Poly::constant(pr, pr.p % pr.pk)))
        throw config_error("t-action matrix needs a p-killed module");
    const auto& rel = M.relation_lattice();
    std::vector<size_t> basis;
    std::vector<long> col_index(M.ambient_dim(), -1);
    for (size_t i = 0; i < rel.rows.size(); ++i)
        if (rel.pivot_val[i] >= 1) {
            col_index[rel.pivot_col[i]] = long(basis.size());
            basis.push_back(rel.pivot_col[i]);
        }
    if (rel.rows.size() != M.ambient_dim())
        throw invariant_error("p-killed module with free ambient coordinates");
    RingParams fp(pr.p, 1);
    Mat t(basis.size(), basis.size(), fp);
    Poly tg = M.ring()->t_gen();
    for (size_t b = 0; b < basis.size(); ++b) {
        std::vector<std::uint64_t> e(M.ambient_dim(), 0);
        e[basis[b]] = 1;
        auto img = M.scale(tg, e);
        for (size_t c = 0; c < M.ambient_dim(); ++c)
            if (img[c] != 0) {
                if (col_index[c] < 0) throw invariant_error("canonical rep off the basis");
                t.at(size_t(col_index[c]), b) = img[c] % pr.p;
            }
    }
    return t;
}

// A spectrum block of the requested size whose eigenvalues avoid the roots
// of Pbar: companion blocks of small irreducibles coprime to Pbar.
inline Mat spectrum_avoiding_block(const QuotRingPtr& R, size_t size);

// Reference moment M_H: the Haar moment computed at the minimal size
// n = dim r with A realizing the residue module r; independence of n makes
// this the reference for every n.
inline Rat reference_moment(const QuotRingPtr& R, const FiniteModule& residue,
                            const FiniteModule& H, size_t extra = 0) {
    Mat t = t_action_matrix(residue);
    Mat a = t;
    if (extra > 0) {
        Mat ext = spectrum_avoiding_block(R, extra);
        Mat combined(t.rows + extra, t.rows + extra, t.ring);
        for (size_t i = 0; i < extra; ++i)
            for (size_t j = 0; j < extra; ++j) combined.at(i, j) = ext.at(i, j);
        for (size_t i = 0; i < t.rows; ++i)
            for (size_t j = 0; j < t.rows; ++j) combined.at(extra + i, extra + j) = t.at(i, j);
        a = combined;
    }
    ResiduePattern pat{a, true, t.rows};
    DistributionReport rep = exhaust_distribution(
        R, pat, DigitDistribution::haar(R->params.p, R->params.k, a.rows), {});
    return report_moment(rep, H);
}

inline Mat spectrum_avoiding_block(const QuotRingPtr& R, size_t size) {
    RingParams fp(R->params.p, 1);
    Poly pbar = R->modulus.reduced_mod_p();
    // degree-1 candidate: a scalar that is not a root
    for (std::uint64_t a = 0; a < fp.p; ++a)
        if (pbar.eval(a) != 0) {
            Mat m(size, size, fp);
            for (size_t i = 0; i < size; ++i) m.at(i, i) = a;
            return m;
        }
    // fall back to companion blocks of irreducible quadratics/cubics
    auto irreducible = [&](const Poly& h) {
        for (std::uint64_t a = 0; a < fp.p; ++a)
            if (h.eval(a) == 0) return false;
        return *h.degree() <= 3;  // no roots suffices up to cubics
    };
    std::vector<Poly> blocks_available;
    for (size_t deg = 2; deg <= 3 && blocks_available.size() < 2; ++deg) {
        std::uint64_t count = 1;
        for (size_t i = 0; i < deg; ++i) count *= fp.p;
        for (std::uint64_t code = 0; code < count; ++code) {
            std::vector<std::uint64_t> c;
            std::uint64_t v = code;
            for (size_t i = 0; i < deg; ++i) {
                c.push_back(v % fp.p);
                v /= fp.p;
            }
            c.push_back(1);
            Poly h(fp, c);
            if (irreducible(h) && !mod_monic(pbar, h).is_zero()) {
                blocks_available.push_back(h);
                break;
            }
        }
    }
    // assemble `size` from available degrees (greedy, degrees 2 and 3)
    std::vector<Poly> chosen;
    size_t left = size;
    for (const auto& h : blocks_available) {
        size_t d = *h.degree();
        while (left >= d && (left - d) != 1) {
            chosen.push_back(h);
            left -= d;
            if (left == 0) break;
        }
        if (left == 0) break;
    }
    if (left != 0) throw config_error("cannot build a spectrum-avoiding block of this size");
    Mat m(size, size, fp);
    size_t off = 0;
    for (const auto& h : chosen) {
        size_t d = *h.degree();
        for (size_t i = 0; i + 1 < d; ++i) m.at(off + i + 1, off + i) = 1;
        for (size_t i = 0; i < d; ++i) m.at(off + i, off + d - 1) = fp.sub(0, h.coeff(i));
        off += d;
    }
    return m;
}

// ---------------------------------------------------------------------------
// Exact equidistribution: the linear pencil and any p-twisted pencil
// X + t(pY1 - I) + t^2 pY2 + ... + t^{d-1} pY_{d-1} give identical exact
// class distributions over the residue fiber.
// ---------------------------------------------------------------------------
struct CompareVerdict {
    bool equal = true;
    std::string detail;
};

inline CompareVerdict compare_reports(const DistributionReport& a, const DistributionReport& b) {
    std::vector<bool> used(b.classes.size(), false);
    for (const auto& ca : a.classes) {
        bool matched = false;
        for (size_t i = 0; i < b.classes.size(); ++i) {
            if (used[i]) continue;
            if (ca.key == b.classes[i].key && is_isomorphic(ca.rep, b.classes[i].rep)) {
                used[i] = true;
                if (ca.prob != b.classes[i].prob)
                    return {false, "class " + ca.label + ": " + rat_string(ca.prob) + " vs " +
                                       rat_string(b.classes[i].prob)};
                matched = true;
                break;
            }
        }
        if (!matched && ca.prob != 0) return {false, "class " + ca.label + " unmatched"};
    }
    for (size_t i = 0; i < b.classes.size(); ++i)
        if (!used[i] && b.classes[i].prob != 0)
            return {false, "class " + b.classes[i].label + " only on one side"};
    return {true, ""};
}

inline CompareVerdict equidistribution_check(const QuotRingPtr& R, const ResiduePattern& pat,
                                             const std::vector<Mat>& ys,
                                             const TargetList& targets = {}) {
    const size_t d = R->deg();
    if (ys.size() + 1 != d)
        throw config_error("equidistribution needs d-1 twist matrices");
    const RingParams& pr = R->params;
    DigitDistribution haar = DigitDistribution::haar(pr.p, pr.k, pat.n());
    DistributionReport base = exhaust_distribution(R, pat, haar, targets);

    PencilFn twisted = [&](const Mat& x) {
        std::vector<Mat> coeffs;
        coeffs.push_back(x);
        Mat first = (pr.p % pr.pk) * ys[0] - Mat::identity(pat.n(), pr);
        coeffs.push_back(first);
        for (size_t i = 1; i < ys.size(); ++i) coeffs.push_back((pr.p % pr.pk) * ys[i]);
        return from_coefficient_mats(coeffs, R);
    };
    DistributionReport tw = exhaust_distribution(R, pat, haar, targets, twisted);
    return compare_reports(base, tw);
}

// Exact total-variation distance between two reports bucketed against the
// same target list. Non-target classes aggregate into one "other" mass;
// differing target label sets are a mismatch error.
inline Rat tv_distance(const DistributionReport& a, const DistributionReport& b) {
    auto collect = [](const DistributionReport& r) {
        std::map<std::string, Rat> m;
        m["other"] = 0;
        for (const auto& c : r.classes)
            m[c.target_index >= 0 ? c.label : std::string("other")] += c.prob;
        return m;
    };
    std::map<std::string, Rat> pa = collect(a), pb = collect(b);
    for (const auto& [l, v] : pa)
        if (!pb.count(l)) throw config_error("tv_distance: label mismatch: " + l);
    for (const auto& [l, v] : pb)
        if (!pa.count(l)) throw config_error("tv_distance: label mismatch: " + l);
    Rat acc = 0;
    for (const auto& [l, v] : pa) {
        Rat d = v - pb[l];
        acc += d < 0 ? -d : d;
    }
    return acc / 2;
}

// ---------------------------------------------------------------------------
// Per-target comparison against the closed-form law: exact reports demand
// exact equality; sampled reports get a 3-sigma binomial band per class
// (no multiplicity adjustment; with T targets a Bonferroni-adjusted band
// would widen each by sqrt applied to alpha/T).
// ---------------------------------------------------------------------------
struct TargetVerdict {
    std::string label;
    Rat observed;
    Rat formula;
    bool formula_valid = true;  // false when the law's precondition fails
    std::string verdict;        // exact-equal | within-3sigma | FAIL | n/a
};

inline std::vector<TargetVerdict> formula_verdicts(const DistributionReport& rep,
                                                   const TargetList& targets) {
    std::vector<TargetVerdict> out;
    for (const auto& [label, G] : targets) {
        TargetVerdict v;
        v.label = label;
        v.observed = rep.prob_of(label);
        try {
            v.formula = pushforward_cok_prob(G);
        } catch (const config_error&) {
            v.formula_valid = false;
        }
        if (!v.formula_valid) {
            v.verdict = "n/a";
        } else if (rep.exact) {
            v.verdict = v.observed == v.formula ? "exact-equal" : "FAIL";
        } else {
            Rat diff = v.observed - v.formula;
            bool in_band =
                diff * diff * Rat(rep.points) <= Rat(9) * v.formula * (1 - v.formula);
            v.verdict = in_band ? "within-3sigma" : "FAIL";
        }
        out.push_back(std::move(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// The biased-corner effect: with P = t, A = diag(1,...,1,0) and an odd p,
// excluding the digit 0 from the corner entry breaks the exact law; the
// check asserts a strict discrepancy against the closed form on at least
// one target class.
// ---------------------------------------------------------------------------
struct BiasedCornerResult {
    bool differs = false;
    std::vector<std::string> lines;  // per-target: label, empirical, formula
};

inline BiasedCornerResult biased_corner_check(const QuotRingPtr& R, size_t n,
                                              const std::vector<Rat>& corner_weights,
                                              const TargetList& targets) {
    const RingParams& pr = R->params;
    if (pr.p == 2) throw config_error("the biased corner effect needs an odd p");
    if (!(R->modulus == Poly::monomial(pr, 1, 1)))
        throw config_error("the biased corner check is stated for modulus t");

    RingParams fp(pr.p, 1);
    Mat a(n, n, fp);
    for (size_t i = 0; i + 1 < n; ++i) a.at(i, i) = 1;
    ResiduePattern pat{a, true, 1};

    DigitDistribution digits = DigitDistribution::bernoulli01(pr.p, pr.k, n);
    digits.set_entry(n - 1, n - 1, corner_weights);

    DistributionReport rep = exhaust_distribution(R, pat, digits, targets);
    BiasedCornerResult out;
    for (const auto& [label, mod] : targets) {
        Rat emp = rep.prob_of(label);
        Rat formula = pushforward_cok_prob(mod);
        out.lines.push_back(label + ": empirical " + rat_string(emp) + ", formula " +
                            rat_string(formula));
        if (emp != formula) out.differs = true;
    }
    return out;
}

}  // namespace pkmod

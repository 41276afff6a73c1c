#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "affect/aggregate.hpp"
#include "affect/error.hpp"
#include "affect/ingest.hpp"
#include "affect/special.hpp"

namespace affect {

namespace detail {

inline double mean_of(std::span<const double> xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

// Two-pass sum of squared deviations.
inline double centered_ss(std::span<const double> xs, double mean) {
    double s = 0.0;
    for (double x : xs) s += (x - mean) * (x - mean);
    return s;
}

}  // namespace detail

// ---- Pearson correlation -------------------------------------------------------

struct CorrelationResult {
    double r{0.0};
    std::size_t n{0};
    double t_stat{0.0};
    double df{0.0};
    double p_two_sided{1.0};
};

inline CorrelationResult pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw Error("pearson: series lengths differ");
    if (xs.size() < 3) throw Error("pearson: at least 3 pairs required");
    const double mx = detail::mean_of(xs), my = detail::mean_of(ys);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw UndefinedMeasureError("pearson: constant series, correlation undefined");
    CorrelationResult c;
    c.n = xs.size();
    c.df = static_cast<double>(c.n) - 2.0;
    c.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    if (std::fabs(c.r) == 1.0) {
        c.t_stat = c.r > 0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
        c.p_two_sided = 0.0;
    } else {
        c.t_stat = c.r * std::sqrt(c.df) / std::sqrt(1.0 - c.r * c.r);
        c.p_two_sided = special::student_t_two_sided_p(c.t_stat, c.df);
    }
    return c;
}

inline CorrelationResult pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    return pearson(std::span<const double>(xs), std::span<const double>(ys));
}

// ---- one-way ANOVA -------------------------------------------------------------

struct AnovaResult {
    double F{0.0};
    bool F_infinite{false};  // zero within-group variance with differing means
    double df_between{0.0};
    double df_within{0.0};
    double ss_between{0.0};
    double ss_within{0.0};
    double p{1.0};
    std::vector<std::size_t> group_sizes;
    std::vector<double> group_means;
};

inline AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw Error("anova: at least two groups required");
    AnovaResult r;
    std::size_t N = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        if (g.empty()) throw Error("anova: every group needs at least one observation");
        N += g.size();
        for (double x : g) grand += x;
        r.group_sizes.push_back(g.size());
        r.group_means.push_back(detail::mean_of(g));
    }
    if (N <= groups.size()) throw Error("anova: total observations must exceed the number of groups");
    grand /= static_cast<double>(N);
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const double d = r.group_means[i] - grand;
        r.ss_between += static_cast<double>(groups[i].size()) * d * d;
        r.ss_within += detail::centered_ss(groups[i], r.group_means[i]);
    }
    r.df_between = static_cast<double>(groups.size() - 1);
    r.df_within = static_cast<double>(N - groups.size());
    const double ms_between = r.ss_between / r.df_between;
    const double ms_within = r.ss_within / r.df_within;
    // Round-off guard: means equal to within a few ulps count as equal.
    const double scale = std::max(1.0, std::fabs(grand));
    const bool means_equal = r.ss_between <= 1e-24 * scale * scale * static_cast<double>(N);
    if (ms_within == 0.0) {
        if (means_equal) {
            r.F = 0.0;
            r.p = 1.0;
        } else {
            r.F = std::numeric_limits<double>::infinity();
            r.F_infinite = true;
            r.p = 0.0;
        }
        return r;
    }
    r.F = means_equal ? 0.0 : ms_between / ms_within;
    r.p = special::f_upper_p(r.F, r.df_between, r.df_within);
    return r;
}

// ---- Welch's t test ------------------------------------------------------------

struct WelchResult {
    double t{0.0};
    double df{0.0};
    double p_two_sided{1.0};
    double mean_x{0.0}, mean_y{0.0};
    double sd_x{0.0}, sd_y{0.0};
    std::size_t n_x{0}, n_y{0};
};

inline WelchResult welch_t(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() < 2 || ys.size() < 2) throw Error("welch: each series needs at least 2 observations");
    WelchResult w;
    w.n_x = xs.size();
    w.n_y = ys.size();
    w.mean_x = detail::mean_of(xs);
    w.mean_y = detail::mean_of(ys);
    const double nx = static_cast<double>(w.n_x), ny = static_cast<double>(w.n_y);
    const double vx = detail::centered_ss(xs, w.mean_x) / (nx - 1.0);
    const double vy = detail::centered_ss(ys, w.mean_y) / (ny - 1.0);
    if (!std::isfinite(vx) || !std::isfinite(vy)) throw Error("welch: non-finite variance");
    if (vx == 0.0 && vy == 0.0) throw Error("welch: both variances are zero");
    w.sd_x = std::sqrt(vx);
    w.sd_y = std::sqrt(vy);
    const double ax = vx / nx, ay = vy / ny;
    w.t = (w.mean_x - w.mean_y) / std::sqrt(ax + ay);
    w.df = (ax + ay) * (ax + ay) / (ax * ax / (nx - 1.0) + ay * ay / (ny - 1.0));
    w.p_two_sided = special::student_t_two_sided_p(w.t, w.df);
    return w;
}

inline WelchResult welch_t(const std::vector<double>& xs, const std::vector<double>& ys) {
    return welch_t(std::span<const double>(xs), std::span<const double>(ys));
}

// ---- answer histogram ----------------------------------------------------------

// 5x5x5 census of rescaled answers, indexed [pleasure+2][arousal+2][dominance+2].
struct AnswerHistogram {
    std::array<std::array<std::array<std::size_t, 5>, 5>, 5> counts{};
    std::size_t total{0};

    double proportion(int p, int a, int d) const {
        return total ? static_cast<double>(counts[p + 2][a + 2][d + 2]) / static_cast<double>(total) : 0.0;
    }
};

inline AnswerHistogram answer_histogram(const std::vector<EmotionalVector>& answers) {
    AnswerHistogram h;
    for (const auto& v : answers) {
        std::array<int, 3> idx{};
        for (std::size_t d = 0; d < 3; ++d) {
            const double c = v[d];
            if (c != std::round(c) || c < -2.0 || c > 2.0)
                throw Error("answer histogram: answers must be rescaled integers in -2..2");
            idx[d] = static_cast<int>(c) + 2;
        }
        ++h.counts[idx[0]][idx[1]][idx[2]];
        ++h.total;
    }
    return h;
}

inline std::vector<EmotionalVector> answer_vectors(const Cohort& cohort, const Subgroup& group,
                                                   const std::vector<WordId>& word_set) {
    std::vector<EmotionalVector> out;
    for (auto& [w, vs] : person_vectors(cohort, group, word_set)) out.insert(out.end(), vs.begin(), vs.end());
    return out;
}

// ---- descriptive statistics ----------------------------------------------------

enum class SdConvention { sample, population };

struct Descriptive {
    std::string subgroup;
    std::size_t persons{0};
    std::size_t observations{0};
    EmotionalVector mean;
    EmotionalVector sd;
};

inline Descriptive descriptive(const std::string& label, std::size_t persons,
                               const std::vector<EmotionalVector>& answers,
                               SdConvention convention = SdConvention::sample) {
    if (answers.empty()) throw EmptySubgroupError("descriptive: subgroup '" + label + "' has no answers");
    Descriptive out{label, persons, answers.size(), {}, {}};
    const double n = static_cast<double>(answers.size());
    for (std::size_t d = 0; d < 3; ++d) {
        std::vector<double> xs;
        xs.reserve(answers.size());
        for (const auto& v : answers) xs.push_back(v[d]);
        const double m = detail::mean_of(xs);
        const double ss = detail::centered_ss(xs, m);
        const double denom = convention == SdConvention::sample ? n - 1.0 : n;
        out.mean[d] = m;
        out.sd[d] = denom > 0.0 ? std::sqrt(ss / denom) : 0.0;
    }
    return out;
}

inline Descriptive descriptive(const Cohort& cohort, const Subgroup& group, const std::vector<WordId>& word_set,
                               SdConvention convention = SdConvention::sample) {
    if (group.member_ids.empty()) throw EmptySubgroupError("descriptive: subgroup '" + group.label + "' is empty");
    return descriptive(group.label, group.size(), answer_vectors(cohort, group, word_set), convention);
}

// ANOVA across groups on one dimension, every person x word answer an observation.
inline AnovaResult dimension_anova(const std::vector<std::vector<EmotionalVector>>& groups, Dimension d) {
    std::vector<std::vector<double>> xs(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& v : groups[g]) xs[g].push_back(v[d]);
    return one_way_anova(xs);
}

// "Stacked dimensions" variant: the three dimension values of every answer are
// pooled as observations of the answer's group.
inline AnovaResult stacked_dimension_anova(const std::vector<std::vector<EmotionalVector>>& groups) {
    std::vector<std::vector<double>> xs(groups.size());
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (const auto& v : groups[g])
            for (std::size_t d = 0; d < 3; ++d) xs[g].push_back(v[d]);
    return one_way_anova(xs);
}

// ---- response-time study -------------------------------------------------------

struct ResponseTimeStudyOptions {
    std::size_t k{10};
    double cutoff_s{10.0};
    double pleasure_threshold{0.667};
    std::size_t pool_size{60};  // most frequent candidate words considered; 0 = all
};

struct ResponseTimeReport {
    std::vector<WordId> positive;
    std::vector<WordId> negative;
    double rank_mean_positive{0.0};
    double rank_mean_negative{0.0};
    std::vector<double> times_positive;
    std::vector<double> times_negative;
    AnovaResult anova;
    WelchResult welch;
};

namespace detail {

inline double rank_mean(const std::vector<std::pair<double, WordId>>& v, const std::vector<std::size_t>& chosen) {
    double s = 0.0;
    for (auto i : chosen) s += v[i].first;
    return s / static_cast<double>(chosen.size());
}

}  // namespace detail

// Selects k positive and k negative words (pleasure mean beyond +/-threshold) among
// the most frequent candidates, balancing their mean frequency rank, and compares
// pleasure response times below the cutoff.
inline ResponseTimeReport response_time_study(const Cohort& cohort, const std::map<WordId, double>& pleasure_means,
                                              const std::map<WordId, double>& frequency_ranks,
                                              const ResponseTimeStudyOptions& opt = {}) {
    std::vector<std::pair<double, WordId>> pool;
    for (const auto& [w, rank] : frequency_ranks)
        if (pleasure_means.count(w)) pool.emplace_back(rank, w);
    std::sort(pool.begin(), pool.end());
    if (opt.pool_size && pool.size() > opt.pool_size) pool.resize(opt.pool_size);
    std::vector<std::pair<double, WordId>> pos, neg;
    for (const auto& e : pool) {
        const double m = pleasure_means.at(e.second);
        if (m > opt.pleasure_threshold) pos.push_back(e);
        if (m < -opt.pleasure_threshold) neg.push_back(e);
    }
    if (pos.size() < opt.k || neg.size() < opt.k)
        throw Error("response-time study: need " + std::to_string(opt.k) + " words per side, found " +
                    std::to_string(pos.size()) + " positive and " + std::to_string(neg.size()) + " negative");

    std::vector<std::size_t> cp(opt.k), cn(opt.k);
    for (std::size_t i = 0; i < opt.k; ++i) cp[i] = cn[i] = i;
    // Swap-improve: the side with the lower (more frequent) rank mean trades its most
    // frequent chosen word for its next unused candidate while the gap shrinks.
    for (;;) {
        const double mp = detail::rank_mean(pos, cp), mn = detail::rank_mean(neg, cn);
        const double gap = std::fabs(mp - mn);
        auto& side = mp < mn ? cp : cn;
        const auto& words = mp < mn ? pos : neg;
        const std::size_t next = side.back() + 1;
        if (next >= words.size()) break;
        auto trial = side;
        trial.erase(trial.begin());
        trial.push_back(next);
        const double m_trial = detail::rank_mean(words, trial);
        const double other = mp < mn ? mn : mp;
        if (std::fabs(m_trial - other) >= gap) break;
        side = std::move(trial);
    }

    ResponseTimeReport rep;
    for (auto i : cp) rep.positive.push_back(pos[i].second);
    for (auto i : cn) rep.negative.push_back(neg[i].second);
    rep.rank_mean_positive = detail::rank_mean(pos, cp);
    rep.rank_mean_negative = detail::rank_mean(neg, cn);
    const std::set<WordId> sp(rep.positive.begin(), rep.positive.end()), sn(rep.negative.begin(), rep.negative.end());
    for (const auto& s : cohort.sessions)
        for (const auto& a : s.answers) {
            const double t = a.response_time_s[0];
            if (!(t < opt.cutoff_s)) continue;
            if (sp.count(a.word_id)) rep.times_positive.push_back(t);
            if (sn.count(a.word_id)) rep.times_negative.push_back(t);
        }
    rep.anova = one_way_anova({rep.times_positive, rep.times_negative});
    rep.welch = welch_t(rep.times_positive, rep.times_negative);
    return rep;
}

}  // namespace affect

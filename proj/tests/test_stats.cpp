#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "affect/special.hpp"
#include "affect/stats.hpp"
#include "test_util.hpp"

using namespace affect;

namespace {

double direct_pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace

TEST(Special, IncompleteBetaIdentities) {
    Rng rng(1, {});
    for (int i = 0; i < 1000; ++i) {
        const double x = rng.uniform(), a = rng.uniform(0.05, 50), b = rng.uniform(0.05, 50);
        EXPECT_NEAR(special::incomplete_beta(x, a, b) + special::incomplete_beta(1 - x, b, a), 1.0, 1e-10);
    }
    for (double x : {0.1, 0.37, 0.9}) {
        EXPECT_NEAR(special::incomplete_beta(x, 1, 1), x, 1e-12);
        EXPECT_NEAR(special::incomplete_beta(x, 3, 1), x * x * x, 1e-12);
    }
    EXPECT_NEAR(special::incomplete_beta(0.5, 7, 7), 0.5, 1e-12);
    EXPECT_EQ(special::incomplete_beta(0, 2, 3), 0.0);
    EXPECT_EQ(special::incomplete_beta(1, 2, 3), 1.0);
}

TEST(Special, LogGammaKnownValues) {
    EXPECT_NEAR(special::log_gamma(1), 0.0, 1e-12);
    EXPECT_NEAR(special::log_gamma(5), std::log(24.0), 1e-12);
    EXPECT_NEAR(special::log_gamma(0.5), 0.5 * std::log(M_PI), 1e-12);
    for (double x : {0.3, 2.7, 11.2, 140.0}) EXPECT_NEAR(special::log_gamma(x), std::lgamma(x), 1e-10);
}

TEST(Special, PValuesBoundedAndMonotone) {
    // Two-sided 5% critical value of t with 10 df.
    EXPECT_NEAR(special::student_t_two_sided_p(2.228138851986, 10), 0.05, 1e-6);
    double prev = 1.0;
    for (double t = 0; t < 8; t += 0.25) {
        const double p = special::student_t_two_sided_p(t, 7);
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, prev + 1e-15);
        prev = p;
    }
    EXPECT_NEAR(special::student_t_two_sided_p(0, 5), 1.0, 1e-12);
    // F(1, df) = t^2.
    for (double t : {0.5, 1.7, 3.674})
        EXPECT_NEAR(special::f_upper_p(t * t, 1, 4), special::student_t_two_sided_p(t, 4), 1e-10);
}

TEST(Pearson, PerfectLinearityAndDirectFormula) {
    const std::vector<double> x{1, 2, 3, 4, 5};
    std::vector<double> y;
    for (double v : x) y.push_back(2 * v + 1);
    EXPECT_DOUBLE_EQ(pearson(x, y).r, 1.0);
    const std::vector<double> h{0.3, -1.2, 2.5, 0.9, 1.1};
    EXPECT_NEAR(pearson(x, h).r, direct_pearson(x, h), 1e-12);
    EXPECT_EQ(pearson(x, h).df, 3.0);
}

TEST(Pearson, AffineInvariance) {
    Rng rng(2, {});
    std::vector<double> x(30), y(30);
    for (std::size_t i = 0; i < 30; ++i) {
        x[i] = rng.normal(0, 1);
        y[i] = 0.5 * x[i] + rng.normal(0, 1);
    }
    const auto base = pearson(x, y);
    for (int t = 0; t < 100; ++t) {
        const double a = rng.uniform(0.1, 10), b = rng.uniform(-5, 5), c = rng.uniform(0.1, 10), d = rng.uniform(-5, 5);
        std::vector<double> xs, ys;
        for (std::size_t i = 0; i < 30; ++i) {
            xs.push_back(a * x[i] + b);
            ys.push_back(c * y[i] + d);
        }
        EXPECT_NEAR(pearson(xs, ys).r, base.r, 1e-12);
    }
}

TEST(Pearson, Errors) {
    EXPECT_THROW(pearson(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), UndefinedMeasureError);
    EXPECT_THROW(pearson(std::vector<double>{1, 2}, std::vector<double>{1, 2}), Error);
    EXPECT_THROW(pearson(std::vector<double>{1, 2, 3}, std::vector<double>{1, 2}), Error);
}

TEST(Anova, HandDecomposition) {
    const auto r = one_way_anova({{1, 2, 3}, {4, 5, 6}});
    EXPECT_NEAR(r.F, 13.5, 1e-12);
    EXPECT_EQ(r.df_between, 1.0);
    EXPECT_EQ(r.df_within, 4.0);
    EXPECT_NEAR(r.ss_between, 13.5, 1e-12);
    EXPECT_NEAR(r.ss_within, 4.0, 1e-12);
    EXPECT_NEAR(r.p, special::student_t_two_sided_p(std::sqrt(13.5), 4), 1e-10);
}

TEST(Anova, DegenerateCases) {
    const auto same = one_way_anova({{1, 2, 3}, {1, 2, 3}});
    EXPECT_EQ(same.F, 0.0);
    EXPECT_NEAR(same.p, 1.0, 1e-12);
    const auto flat = one_way_anova({{2, 2}, {2, 2}});
    EXPECT_EQ(flat.F, 0.0);
    EXPECT_FALSE(flat.F_infinite);
    const auto inf = one_way_anova({{1, 1}, {3, 3}});
    EXPECT_TRUE(inf.F_infinite);
    EXPECT_TRUE(std::isinf(inf.F));
    EXPECT_THROW(one_way_anova({{1, 2}}), Error);
    EXPECT_THROW(one_way_anova({{1, 2}, {}}), Error);
}

TEST(Anova, PermutationAndShiftInvariance) {
    Rng rng(3, {});
    std::vector<std::vector<double>> g(3);
    for (auto& v : g)
        for (int i = 0; i < 12; ++i) v.push_back(rng.normal(double(&v - &g[0]) * 0.3, 1));
    const double F = one_way_anova(g).F;
    auto p = g;
    for (auto& v : p) std::reverse(v.begin(), v.end());
    EXPECT_NEAR(one_way_anova(p).F, F, 1e-12 * F);
    for (auto& v : p)
        for (auto& x : v) x += 7.5;
    EXPECT_NEAR(one_way_anova(p).F, F, 1e-9 * F);
}

TEST(Welch, IdenticalSeriesAndCollapse) {
    const std::vector<double> x{1, 4, 2, 8, 5};
    EXPECT_EQ(welch_t(x, x).t, 0.0);
    std::vector<double> y;
    for (double v : x) y.push_back(v + 3);  // equal variance, equal n
    EXPECT_NEAR(welch_t(x, y).df, 8.0, 1e-12);
    EXPECT_THROW(welch_t(std::vector<double>{1, 1}, std::vector<double>{2, 2}), Error);
    EXPECT_THROW(welch_t(std::vector<double>{1}, std::vector<double>{2, 3}), Error);
}

TEST(Welch, HandDataMatchesDirectFormula) {
    const auto w = welch_t(std::vector<double>{1, 2, 3, 4}, std::vector<double>{2, 4, 6, 8});
    const double vx = 5.0 / 3.0, vy = 20.0 / 3.0;
    const double se2 = vx / 4 + vy / 4;
    EXPECT_NEAR(w.t, (2.5 - 5.0) / std::sqrt(se2), 1e-12);
    EXPECT_NEAR(w.df, se2 * se2 / ((vx / 4) * (vx / 4) / 3 + (vy / 4) * (vy / 4) / 3), 1e-12);
    EXPECT_NEAR(w.sd_y, std::sqrt(vy), 1e-12);
}

TEST(Histogram, FullSizeCohort) {
    const auto& f = testutil::cohort_fixture();
    const auto all = everyone(f.cohort.persons());
    const auto h = answer_histogram(answer_vectors(f.cohort, all, f.cohort.lexicon.ids(WordKind::emotional_adjective)));
    EXPECT_EQ(h.total, 6825u);
    double sum = 0;
    for (int p = -2; p <= 2; ++p)
        for (int a = -2; a <= 2; ++a)
            for (int d = -2; d <= 2; ++d) sum += h.proportion(p, a, d);
    EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(Histogram, SingleCellAndBruteForce) {
    EXPECT_EQ(answer_histogram(std::vector<EmotionalVector>(9, kOrigo)).proportion(0, 0, 0), 1.0);
    Rng rng(4, {});
    std::vector<EmotionalVector> vs;
    for (int i = 0; i < 300; ++i)
        vs.push_back({double(int(rng.index(5)) - 2), double(int(rng.index(5)) - 2), double(int(rng.index(5)) - 2)});
    const auto h = answer_histogram(vs);
    for (int p = -2; p <= 2; ++p)
        for (int a = -2; a <= 2; ++a)
            for (int d = -2; d <= 2; ++d) {
                const auto n = std::count(vs.begin(), vs.end(), EmotionalVector{double(p), double(a), double(d)});
                EXPECT_EQ(h.counts[p + 2][a + 2][d + 2], std::size_t(n));
            }
    EXPECT_THROW(answer_histogram({{0.5, 0, 0}}), Error);
}

TEST(Descriptive, ConstantAndTwoPass) {
    EXPECT_EQ(descriptive("c", 1, std::vector<EmotionalVector>(4, {1, 1, 1})).sd, kOrigo);
    Rng rng(6, {});
    std::vector<EmotionalVector> vs;
    for (int i = 0; i < 200; ++i) vs.push_back({rng.normal(0, 1), rng.normal(1, 2), rng.normal(-1, 0.5)});
    const auto d = descriptive("x", 10, vs);
    const auto dp = descriptive("x", 10, vs, SdConvention::population);
    for (std::size_t k = 0; k < 3; ++k) {
        double m = 0, ss = 0;
        for (const auto& v : vs) m += v[k];
        m /= 200;
        for (const auto& v : vs) ss += (v[k] - m) * (v[k] - m);
        EXPECT_NEAR(d.mean[k], m, 1e-12);
        EXPECT_NEAR(d.sd[k], std::sqrt(ss / 199), 1e-12);
        EXPECT_NEAR(dp.sd[k], std::sqrt(ss / 200), 1e-12);
    }
    EXPECT_THROW(descriptive("e", 0, {}), EmptySubgroupError);
}

TEST(Descriptive, StackedAnovaPoolsDimensions) {
    const std::vector<std::vector<EmotionalVector>> g{{{1, 2, 3}}, {{4, 5, 6}}};
    const auto r = stacked_dimension_anova(g);
    EXPECT_NEAR(r.F, 13.5, 1e-12);
    const std::vector<std::vector<EmotionalVector>> h{{{1, 2, 3}, {1, 4, 3}}, {{4, 5, 6}, {4, 7, 6}}};
    EXPECT_EQ(dimension_anova(h, Dimension::arousal).group_means[1], 6.0);
}

namespace {

// 40 adjectives, the first 20 positive; pleasure response time depends on the side.
Cohort timing_cohort(double pos_rt, double neg_rt, std::uint64_t seed, std::map<WordId, double>& means,
                     std::map<WordId, double>& ranks) {
    const auto lex = testutil::small_lexicon(40);
    Rng rng(seed, {});
    std::vector<SessionFile> ss;
    for (int p = 0; p < 12; ++p) {
        auto s = testutil::constant_session(lex, fmt::format("p{:02}", p), Gender::woman, 0, {3, 3, 3},
                                            "2016-11-01T10:00:00Z");
        for (std::size_t i = 0; i < s.answers.size(); ++i) {
            const bool pos = i < 20;
            s.answers[i].raw = {pos ? 5 : 1, 3, 3};
            s.answers[i].response_time_s[0] = std::max(0.2, rng.normal(pos ? pos_rt : neg_rt, 0.5));
        }
        ss.push_back(s);
    }
    for (std::size_t i = 0; i < 40; ++i) {
        const auto id = fmt::format("adj{}", i + 1);
        means[id] = i < 20 ? 2.0 : -2.0;
        ranks[id] = double(i < 20 ? 2 * i + 1 : 2 * (i - 20) + 2);
    }
    return make_cohort(lex, ss);
}

}  // namespace

TEST(ResponseTime, InjectedEffectIsSignificant) {
    std::map<WordId, double> means, ranks;
    const auto c = timing_cohort(1.5, 3.0, 7, means, ranks);
    const auto r = response_time_study(c, means, ranks);
    EXPECT_EQ(r.positive.size(), 10u);
    EXPECT_EQ(r.negative.size(), 10u);
    EXPECT_LT(r.welch.p_two_sided, 1e-6);
    EXPECT_LT(r.welch.t, 0.0);
    EXPECT_LE(std::fabs(r.rank_mean_positive - r.rank_mean_negative), 1.0);
}

TEST(ResponseTime, NoEffectAndTooFewWords) {
    std::map<WordId, double> means, ranks;
    const auto c = timing_cohort(2.0, 2.0, 8, means, ranks);
    const auto r = response_time_study(c, means, ranks);
    EXPECT_LT(std::fabs(r.welch.t), 3.0);
    EXPECT_GT(r.anova.p, 0.001);
    ResponseTimeStudyOptions o;
    o.k = 25;
    EXPECT_THROW(response_time_study(c, means, ranks, o), Error);
}

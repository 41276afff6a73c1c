#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>

#include "affect/clustering.hpp"
#include "affect/synthetic.hpp"

using namespace affect;

namespace {

StandardizedMatrix blob_matrix(std::uint64_t seed, std::size_t n, double sd) {
    const auto b = synthetic::gaussian_blobs(seed, n, synthetic::five_blob_centers(), sd);
    std::vector<WordId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(fmt::format("w{:03}", i));
    return standardize(ids, b.points);
}

// A model over hand-made assignments.
ClusterModel hand_model(const std::vector<std::size_t>& assignment, std::size_t k, std::string id = "x") {
    ClusterModel m;
    m.subgroup_id = std::move(id);
    m.k = k;
    m.assignment = assignment;
    for (std::size_t i = 0; i < assignment.size(); ++i) m.word_ids.push_back(fmt::format("w{:03}", i));
    for (std::size_t c = 0; c < k; ++c) m.labels.push_back(cluster_label(c));
    m.centroids_std.assign(k, Point3{});
    m.centroids_orig.assign(k, EmotionalVector{});
    for (std::size_t c = 0; c < k; ++c) m.centroids_orig[c].pleasure = double(c);
    return m;
}

std::size_t brute_force_best(const std::vector<std::vector<std::size_t>>& t) {
    std::vector<std::size_t> perm(t.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::size_t best = 0;
    do {
        std::size_t s = 0;
        for (std::size_t i = 0; i < perm.size(); ++i) s += t[i][perm[i]];
        best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

std::size_t greedy(std::vector<std::vector<std::size_t>> t) {
    std::size_t total = 0;
    const std::size_t k = t.size();
    std::vector<bool> ur(k), uc(k);
    for (std::size_t step = 0; step < k; ++step) {
        std::size_t bi = 0, bj = 0, bv = 0;
        bool have = false;
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = 0; j < k; ++j)
                if (!ur[i] && !uc[j] && (!have || t[i][j] > bv)) {
                    bi = i, bj = j, bv = t[i][j], have = true;
                }
        ur[bi] = uc[bj] = true;
        total += bv;
    }
    return total;
}

}  // namespace

TEST(Standardize, TwoRowsGiveUnitSampleSd) {
    const auto m = standardize(std::vector<WordId>{"a", "b"}, std::vector<Point3>{{-1, 2, 0}, {1, 4, 10}});
    for (std::size_t d = 0; d < 3; ++d) {
        EXPECT_NEAR(m.rows[0][d], -std::sqrt(0.5), 1e-12);
        EXPECT_NEAR(m.rows[1][d], std::sqrt(0.5), 1e-12);
    }
    EXPECT_NEAR(m.column_sds[0], std::sqrt(2.0), 1e-12);
}

TEST(Standardize, ConstantColumnIsAnError) {
    EXPECT_THROW(standardize(std::vector<WordId>{"a", "b", "c"}, std::vector<Point3>{{1, 0, 0}, {2, 0, 1}, {3, 0, 2}}), Error);
    EXPECT_THROW(standardize(std::vector<WordId>{"a"}, std::vector<Point3>{{1, 2, 3}}), Error);
}

TEST(Standardize, ColumnsHaveZeroMeanUnitSd) {
    const auto m = blob_matrix(1, 80, 0.5);
    for (std::size_t d = 0; d < 3; ++d) {
        double mean = 0, ss = 0;
        for (const auto& r : m.rows) mean += r[d] / 80.0;
        for (const auto& r : m.rows) ss += (r[d] - mean) * (r[d] - mean);
        EXPECT_NEAR(mean, 0.0, 1e-12);
        EXPECT_NEAR(std::sqrt(ss / 79.0), 1.0, 1e-12);
    }
}

TEST(Model, LabelsBySizeAndCentroidsAreMemberMeans) {
    const auto m = blob_matrix(2, 100, 0.4);
    const auto model = fit_cluster_model(m, 4, 9, 25, "s");
    const auto sizes = model.sizes();
    for (std::size_t c = 1; c < model.k; ++c) EXPECT_GE(sizes[c - 1], sizes[c]);
    EXPECT_EQ(model.labels, (std::vector<std::string>{"A", "B", "C", "D"}));
    for (std::size_t c = 0; c < model.k; ++c) {
        Point3 s{}, o{};
        const auto rows = model.member_rows(c);
        for (auto i : rows)
            for (std::size_t d = 0; d < 3; ++d) {
                s[d] += m.rows[i][d] / double(rows.size());
                o[d] += m.original[i][d] / double(rows.size());
            }
        for (std::size_t d = 0; d < 3; ++d) {
            EXPECT_NEAR(model.centroids_std[c][d], s[d], 1e-12);
            EXPECT_NEAR(model.centroids_orig[c][kDimensions[d]], o[d], 1e-12);
        }
    }
}

TEST(Model, RerunIsBitIdentical) {
    const auto m = blob_matrix(3, 120, 0.5);
    const auto a = fit_cluster_model(m, 5, 77), b = fit_cluster_model(m, 5, 77);
    EXPECT_EQ(a.assignment, b.assignment);
    EXPECT_EQ(a.centroids_std, b.centroids_std);
    EXPECT_EQ(a.wcss, b.wcss);
}

TEST(Model, ClusterLabelSequence) {
    EXPECT_EQ(cluster_label(0), "A");
    EXPECT_EQ(cluster_label(25), "Z");
    EXPECT_EQ(cluster_label(26), "AA");
}

TEST(F1, HarmonicMean) {
    EXPECT_NEAR(f1_score(0.64, 0.82), 0.72, 0.005);
    EXPECT_EQ(f1_score(1, 1), 1.0);
    EXPECT_EQ(f1_score(0, 0), 0.0);
}

TEST(Match, IdenticalPartitionsScoreOne) {
    const auto a = hand_model({0, 0, 1, 1, 2, 2, 2}, 3, "a");
    const auto m = match_clusters(a, a);
    for (const auto& l : m.labels) {
        EXPECT_EQ(l.label_a, l.label_b);
        EXPECT_EQ(l.precision, 1.0);
        EXPECT_EQ(l.recall, 1.0);
        EXPECT_EQ(l.f1, 1.0);
    }
    EXPECT_EQ(m.avg_f1, 1.0);
}

TEST(Match, SwappedLabelsStillMatchPerfectly) {
    const auto a = hand_model({0, 0, 0, 1, 1}, 2, "a");
    const auto b = hand_model({1, 1, 1, 0, 0}, 2, "b");
    const auto m = match_clusters(a, b);
    EXPECT_EQ(m.b_for_a, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(m.avg_f1, 1.0);
}

TEST(Match, PrecisionAndRecallOrientation) {
    // A0 = {0,1,2,3}, B0 = {0,1,2} plus one stray from A1.
    const auto a = hand_model({0, 0, 0, 0, 1, 1}, 2, "a");
    const auto b = hand_model({0, 0, 0, 1, 0, 1}, 2, "b");
    const auto m = match_clusters(a, b);
    EXPECT_EQ(m.labels[0].overlap, 3u);
    EXPECT_DOUBLE_EQ(m.labels[0].precision, 3.0 / 4.0);  // of B0
    EXPECT_DOUBLE_EQ(m.labels[0].recall, 3.0 / 4.0);     // of A0
    EXPECT_DOUBLE_EQ(m.labels[1].precision, 1.0 / 2.0);
    EXPECT_DOUBLE_EQ(m.labels[1].recall, 1.0 / 2.0);
    const auto c = hand_model({0, 0, 0, 1, 1, 1}, 2, "c");
    const auto r = match_clusters(a, c, MatchOrientation::a_reference);
    const auto s = match_clusters(a, c, MatchOrientation::b_reference);
    EXPECT_DOUBLE_EQ(r.labels[0].precision, 1.0);
    EXPECT_DOUBLE_EQ(r.labels[0].recall, 0.75);
    EXPECT_DOUBLE_EQ(s.labels[0].precision, 0.75);
    EXPECT_DOUBLE_EQ(s.labels[0].recall, 1.0);
}

TEST(Match, OptimalBeatsOrTiesGreedyAndEqualsBruteForce) {
    Rng rng(5, {});
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t k = 2 + rng.index(5);
        std::vector<std::vector<std::size_t>> t(k, std::vector<std::size_t>(k));
        for (auto& row : t)
            for (auto& v : row) v = rng.index(20);
        const auto assign = max_overlap_assignment(t);
        std::size_t got = 0;
        for (std::size_t i = 0; i < k; ++i) got += t[i][assign[i]];
        EXPECT_EQ(got, brute_force_best(t));
        EXPECT_GE(got, greedy(t));
        auto sorted = assign;
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t i = 0; i < k; ++i) EXPECT_EQ(sorted[i], i);
    }
}

TEST(Match, HungarianHandCase) {
    // Greedy picks the 9 and is forced into 1 + 1; optimal takes 8 + 8.
    const std::vector<std::vector<std::size_t>> t{{9, 8}, {8, 1}};
    const auto a = max_overlap_assignment(t);
    EXPECT_EQ(a, (std::vector<std::size_t>{1, 0}));
    EXPECT_EQ(brute_force_best(t), 16u);
    EXPECT_EQ(greedy(t), 10u);
}

TEST(Match, MismatchedModelsAreErrors) {
    const auto a = hand_model({0, 1, 2}, 3), b = hand_model({0, 1, 1}, 2);
    EXPECT_THROW(match_clusters(a, b), Error);
    auto c = hand_model({0, 1, 2}, 3);
    c.word_ids[0] = "other";
    EXPECT_THROW(match_clusters(a, c), Error);
}

TEST(Propagate, CarriesReferenceLabels) {
    const auto ref = hand_model({0, 0, 0, 1, 1, 2}, 3, "ref");
    const auto other = hand_model({2, 2, 2, 0, 0, 1}, 3, "other");
    const auto p = propagate_labels(ref, other);
    for (std::size_t i = 0; i < 6; ++i) EXPECT_EQ(p.label_of(p.word_ids[i]), ref.label_of(ref.word_ids[i]));
    // Centroids travel with their clusters.
    EXPECT_EQ(p.centroid_table().centroids.at("A").pleasure, 2.0);
    EXPECT_EQ(match_clusters(ref, p).avg_f1, 1.0);
}

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <vector>

#include "affect/aggregate.hpp"
#include "affect/kmeans.hpp"
#include "affect/transform.hpp"
#include "affect/vector.hpp"

namespace affect {

using Point3 = Point<3>;

inline Point3 to_point(const EmotionalVector& v) { return v.to_array(); }
inline EmotionalVector to_vector(const Point3& p) { return EmotionalVector::from_array(p); }

// Word averages z-scored per column with the sample SD.
struct StandardizedMatrix {
    std::vector<WordId> word_ids;
    std::vector<Point3> rows;
    std::vector<Point3> original;
    Point3 column_means{};
    Point3 column_sds{};
};

inline StandardizedMatrix standardize(std::vector<WordId> ids, std::vector<Point3> original) {
    const std::size_t n = original.size();
    if (ids.size() != n) throw Error("standardize: id/row count mismatch");
    if (n < 2) throw Error("standardize: at least two rows required");
    StandardizedMatrix m;
    m.word_ids = std::move(ids);
    for (std::size_t d = 0; d < 3; ++d) {
        double mean = 0.0;
        for (const auto& r : original) mean += r[d];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& r : original) ss += (r[d] - mean) * (r[d] - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        if (!(sd > 0.0))
            throw Error("standardize: zero variance in dimension " + std::string(dimension_name(kDimensions[d])));
        m.column_means[d] = mean;
        m.column_sds[d] = sd;
    }
    m.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t d = 0; d < 3; ++d) m.rows[i][d] = (original[i][d] - m.column_means[d]) / m.column_sds[d];
    m.original = std::move(original);
    return m;
}

inline StandardizedMatrix standardize(const SubgroupAverages& averages, const std::vector<WordId>& word_set) {
    std::vector<WordId> ids;
    std::vector<Point3> rows;
    for (const auto& w : word_set) {
        ids.push_back(w);
        rows.push_back(to_point(averages.at(w)));
    }
    return standardize(std::move(ids), std::move(rows));
}

// Cluster labels: A..Z, then AA, AB, ...
inline std::string cluster_label(std::size_t index) {
    std::string s;
    std::size_t i = index + 1;
    while (i > 0) {
        --i;
        s.insert(s.begin(), static_cast<char>('A' + i % 26));
        i /= 26;
    }
    return s;
}

struct ClusterModel {
    std::string subgroup_id;
    std::size_t k{0};
    std::vector<WordId> word_ids;
    std::vector<std::string> labels;       // per cluster index
    std::vector<std::size_t> assignment;   // cluster index per word
    std::vector<Point3> centroids_std;     // mean of standardized member rows
    std::vector<EmotionalVector> centroids_orig;  // mean of member words' original averages
    double wcss{0.0};
    std::uint64_t seed{0};
    std::size_t restarts{0};
    std::size_t iterations{0};
    std::vector<double> wcss_trace;

    std::size_t index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return i;
        throw Error("subgroup '" + subgroup_id + "' has no cluster '" + label + "'");
    }
    const std::string& label_of(const WordId& w) const {
        for (std::size_t i = 0; i < word_ids.size(); ++i)
            if (word_ids[i] == w) return labels[assignment[i]];
        throw Error("word '" + w + "' not clustered for subgroup '" + subgroup_id + "'");
    }
    std::vector<std::size_t> member_rows(std::size_t cluster) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == cluster) out.push_back(i);
        return out;
    }
    std::vector<std::size_t> sizes() const {
        std::vector<std::size_t> s(k, 0);
        for (auto a : assignment) ++s[a];
        return s;
    }
    CentroidTable centroid_table() const {
        CentroidTable t{subgroup_id, {}};
        for (std::size_t c = 0; c < k; ++c) t.centroids.emplace(labels[c], centroids_orig[c]);
        return t;
    }
};

namespace detail {

// Reorders cluster indices by `order` (new index i takes old cluster order[i]).
inline void permute_clusters(ClusterModel& m, const std::vector<std::size_t>& order) {
    std::vector<std::size_t> new_index(m.k);
    for (std::size_t i = 0; i < m.k; ++i) new_index[order[i]] = i;
    for (auto& a : m.assignment) a = new_index[a];
    std::vector<Point3> cs(m.k);
    std::vector<EmotionalVector> co(m.k);
    for (std::size_t i = 0; i < m.k; ++i) {
        cs[i] = m.centroids_std[order[i]];
        co[i] = m.centroids_orig[order[i]];
    }
    m.centroids_std = std::move(cs);
    m.centroids_orig = std::move(co);
}

}  // namespace detail

// Fits k-means on the standardized rows. Clusters are labelled A.. by descending
// size, ties broken by the earliest member row.
inline ClusterModel fit_cluster_model(const StandardizedMatrix& matrix, std::size_t k, std::uint64_t seed,
                                      std::size_t restarts = 25, std::string subgroup_id = {}) {
    const auto fit = kmeans<3>(matrix.rows, k, seed, restarts);
    ClusterModel m;
    m.subgroup_id = std::move(subgroup_id);
    m.k = k;
    m.word_ids = matrix.word_ids;
    m.assignment = fit.assignment;
    m.wcss = fit.wcss;
    m.seed = seed;
    m.restarts = restarts;
    m.iterations = fit.iterations;
    m.wcss_trace = fit.wcss_trace;
    m.centroids_std = cluster_means<3>(matrix.rows, m.assignment, k);
    m.centroids_orig.resize(k);
    {
        const auto orig = cluster_means<3>(matrix.original, m.assignment, k);
        for (std::size_t c = 0; c < k; ++c) m.centroids_orig[c] = to_vector(orig[c]);
    }
    const auto sizes = m.sizes();
    std::vector<std::size_t> first(k, matrix.rows.size());
    for (std::size_t i = 0; i < m.assignment.size(); ++i) first[m.assignment[i]] = std::min(first[m.assignment[i]], i);
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (sizes[a] != sizes[b]) return sizes[a] > sizes[b];
        return first[a] < first[b];
    });
    detail::permute_clusters(m, order);
    m.labels.resize(k);
    for (std::size_t c = 0; c < k; ++c) m.labels[c] = cluster_label(c);
    return m;
}

// ---- optimal assignment ----------------------------------------------------------

// Hungarian algorithm (Kuhn-Munkres, O(n^3)) on a square cost matrix; returns the
// column assigned to each row minimizing total cost.
inline std::vector<std::size_t> hungarian_min_cost(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    for (const auto& row : cost)
        if (row.size() != n) throw Error("assignment: cost matrix must be square");
    constexpr double kInf = std::numeric_limits<double>::infinity();
    // 1-based potentials, p[j] = row matched to column j.
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
    for (std::size_t i = 1; i <= n; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, kInf);
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            double delta = kInf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<std::size_t> row_to_col(n);
    for (std::size_t j = 1; j <= n; ++j) row_to_col[p[j] - 1] = j - 1;
    return row_to_col;
}

inline std::vector<std::size_t> max_overlap_assignment(const std::vector<std::vector<std::size_t>>& overlap) {
    std::size_t mx = 0;
    for (const auto& r : overlap)
        for (auto c : r) mx = std::max(mx, c);
    std::vector<std::vector<double>> cost(overlap.size());
    for (std::size_t i = 0; i < overlap.size(); ++i)
        for (auto c : overlap[i]) cost[i].push_back(static_cast<double>(mx - c));
    return hungarian_min_cost(cost);
}

// ---- cluster matching ----------------------------------------------------------

inline double f1_score(double precision, double recall) {
    return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

enum class MatchOrientation { a_reference, b_reference };

struct LabelMatch {
    std::string label_a;
    std::string label_b;
    std::size_t overlap{0};
    std::size_t size_a{0};
    std::size_t size_b{0};
    double precision{0.0};
    double recall{0.0};
    double f1{0.0};
};

struct ClusterMatch {
    std::string subgroup_a;
    std::string subgroup_b;
    std::vector<LabelMatch> labels;      // in A's cluster order
    std::vector<std::size_t> b_for_a;    // B cluster index matched to each A cluster
    std::size_t total_overlap{0};
    double avg_precision{0.0};
    double avg_recall{0.0};
    double avg_f1{0.0};
};

inline std::vector<std::vector<std::size_t>> contingency(const ClusterModel& a, const ClusterModel& b) {
    if (a.k != b.k) throw Error("cluster matching: models have different k");
    auto ids_a = a.word_ids, ids_b = b.word_ids;
    std::sort(ids_a.begin(), ids_a.end());
    std::sort(ids_b.begin(), ids_b.end());
    if (ids_a != ids_b) throw Error("cluster matching: models cover different word universes");
    std::map<WordId, std::size_t> label_b;
    for (std::size_t i = 0; i < b.word_ids.size(); ++i) label_b[b.word_ids[i]] = b.assignment[i];
    std::vector<std::vector<std::size_t>> table(a.k, std::vector<std::size_t>(b.k, 0));
    for (std::size_t i = 0; i < a.word_ids.size(); ++i) ++table[a.assignment[i]][label_b.at(a.word_ids[i])];
    return table;
}

// Bijection between the clusters of A and B maximizing the total overlap. With
// A as reference: precision = |A_i and B_j| / |B_j|, recall = |A_i and B_j| / |A_i|.
inline ClusterMatch match_clusters(const ClusterModel& a, const ClusterModel& b,
                                   MatchOrientation orientation = MatchOrientation::a_reference) {
    const auto table = contingency(a, b);
    const auto sizes_a = a.sizes(), sizes_b = b.sizes();
    ClusterMatch m;
    m.subgroup_a = a.subgroup_id;
    m.subgroup_b = b.subgroup_id;
    m.b_for_a = max_overlap_assignment(table);
    for (std::size_t i = 0; i < a.k; ++i) {
        const std::size_t j = m.b_for_a[i];
        LabelMatch lm;
        lm.label_a = a.labels[i];
        lm.label_b = b.labels[j];
        lm.overlap = table[i][j];
        lm.size_a = sizes_a[i];
        lm.size_b = sizes_b[j];
        const double over = static_cast<double>(lm.overlap);
        const double p = lm.size_b ? over / static_cast<double>(lm.size_b) : 0.0;
        const double r = lm.size_a ? over / static_cast<double>(lm.size_a) : 0.0;
        lm.precision = orientation == MatchOrientation::a_reference ? p : r;
        lm.recall = orientation == MatchOrientation::a_reference ? r : p;
        lm.f1 = f1_score(lm.precision, lm.recall);
        m.total_overlap += lm.overlap;
        m.avg_precision += lm.precision;
        m.avg_recall += lm.recall;
        m.avg_f1 += lm.f1;
        m.labels.push_back(std::move(lm));
    }
    const double k = static_cast<double>(a.k);
    m.avg_precision /= k;
    m.avg_recall /= k;
    m.avg_f1 /= k;
    return m;
}

// Relabels `model` so each cluster carries the label of its matched reference cluster.
inline ClusterModel propagate_labels(const ClusterModel& reference, ClusterModel model) {
    const auto match = match_clusters(reference, model);
    detail::permute_clusters(model, match.b_for_a);
    model.labels = reference.labels;
    return model;
}

}  // namespace affect

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "affect/error.hpp"
#include "affect/random.hpp"

namespace affect {

template <std::size_t D>
using Point = std::array<double, D>;

template <std::size_t D>
double squared_distance(const Point<D>& a, const Point<D>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < D; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return s;
}

template <std::size_t D>
std::size_t count_distinct(std::span<const Point<D>> points) {
    std::vector<Point<D>> copy(points.begin(), points.end());
    std::sort(copy.begin(), copy.end());
    return static_cast<std::size_t>(std::unique(copy.begin(), copy.end()) - copy.begin());
}

template <std::size_t D>
struct KMeansResult {
    std::vector<std::size_t> assignment;  // cluster index per point
    std::vector<Point<D>> centroids;
    double wcss{0.0};
    std::size_t iterations{0};
    bool converged{false};
    std::size_t best_restart{0};
    std::vector<double> wcss_trace;  // WCSS after every centroid update of the winning restart
};

template <std::size_t D>
double within_cluster_ss(std::span<const Point<D>> points, const std::vector<std::size_t>& assignment,
                         const std::vector<Point<D>>& centroids) {
    double s = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) s += squared_distance(points[i], centroids[assignment[i]]);
    return s;
}

template <std::size_t D>
std::vector<Point<D>> cluster_means(std::span<const Point<D>> points, const std::vector<std::size_t>& assignment,
                                    std::size_t k) {
    std::vector<Point<D>> sums(k, Point<D>{});
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t d = 0; d < D; ++d) sums[assignment[i]][d] += points[i][d];
        ++counts[assignment[i]];
    }
    for (std::size_t c = 0; c < k; ++c)
        if (counts[c])
            for (std::size_t d = 0; d < D; ++d) sums[c][d] /= static_cast<double>(counts[c]);
    return sums;
}

namespace detail {

template <std::size_t D>
std::vector<Point<D>> kmeanspp_seeds(std::span<const Point<D>> points, std::size_t k, Rng& rng) {
    std::vector<Point<D>> centers;
    centers.reserve(k);
    centers.push_back(points[rng.index(points.size())]);
    std::vector<double> d2(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) d2[i] = squared_distance(points[i], centers[0]);
    while (centers.size() < k) {
        double total = 0.0;
        for (double v : d2) total += v;
        std::size_t pick = points.size() - 1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < points.size(); ++i) {
                acc += d2[i];
                if (d2[i] > 0.0 && acc > target) {
                    pick = i;
                    break;
                }
            }
            // Floating residue: fall back to the last point with positive weight.
            if (d2[pick] == 0.0)
                for (std::size_t i = points.size(); i-- > 0;)
                    if (d2[i] > 0.0) {
                        pick = i;
                        break;
                    }
        }
        centers.push_back(points[pick]);
        for (std::size_t i = 0; i < points.size(); ++i)
            d2[i] = std::min(d2[i], squared_distance(points[i], centers.back()));
    }
    return centers;
}

template <std::size_t D>
std::vector<std::size_t> nearest_centroids(std::span<const Point<D>> points, const std::vector<Point<D>>& centroids) {
    std::vector<std::size_t> out(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < centroids.size(); ++c) {
            const double d = squared_distance(points[i], centroids[c]);
            if (d < best) {
                best = d;
                out[i] = c;
            }
        }
    }
    return out;
}

// Gives every empty cluster the point farthest from its own centroid, taken from
// a cluster that keeps at least one member. Never increases WCSS.
template <std::size_t D>
void repair_empty_clusters(std::span<const Point<D>> points, std::vector<std::size_t>& assignment,
                           std::vector<Point<D>>& centroids) {
    const std::size_t k = centroids.size();
    std::vector<std::size_t> counts(k, 0);
    for (auto a : assignment) ++counts[a];
    for (std::size_t c = 0; c < k; ++c) {
        if (counts[c]) continue;
        std::size_t far = points.size();
        double far_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (counts[assignment[i]] < 2) continue;
            const double d = squared_distance(points[i], centroids[assignment[i]]);
            if (d > far_d) {
                far_d = d;
                far = i;
            }
        }
        if (far == points.size()) throw Error("k-means: cannot repair empty cluster");
        --counts[assignment[far]];
        assignment[far] = c;
        counts[c] = 1;
        centroids[c] = points[far];
    }
}

template <std::size_t D>
KMeansResult<D> lloyd(std::span<const Point<D>> points, std::vector<Point<D>> centroids, std::size_t max_iter) {
    const std::size_t k = centroids.size();
    KMeansResult<D> r;
    r.assignment = nearest_centroids(points, centroids);
    repair_empty_clusters(points, r.assignment, centroids);
    r.centroids = cluster_means(points, r.assignment, k);
    r.wcss = within_cluster_ss(points, r.assignment, r.centroids);
    r.wcss_trace.push_back(r.wcss);
    for (r.iterations = 1; r.iterations < max_iter; ++r.iterations) {
        auto next = nearest_centroids(points, r.centroids);
        auto centroids_next = r.centroids;
        repair_empty_clusters(points, next, centroids_next);
        if (next == r.assignment) {
            r.converged = true;
            break;
        }
        r.assignment = std::move(next);
        r.centroids = cluster_means(points, r.assignment, k);
        const double w = within_cluster_ss(points, r.assignment, r.centroids);
        if (w > r.wcss * (1.0 + 1e-12) + 1e-12)
            throw std::logic_error("k-means: WCSS increased during Lloyd iteration");
        r.wcss = w;
        r.wcss_trace.push_back(w);
    }
    return r;
}

}  // namespace detail

// Lloyd's k-means with k-means++ seeding. Each restart draws from its own stream
// (seed, restart); the lowest-WCSS restart wins, ties to the lower restart index.
template <std::size_t D>
KMeansResult<D> kmeans(std::span<const Point<D>> points, std::size_t k, std::uint64_t seed, std::size_t restarts = 25,
                       std::size_t max_iter = 100) {
    if (k == 0) throw Error("k-means: k must be >= 1");
    if (restarts == 0) throw Error("k-means: restarts must be >= 1");
    const std::size_t distinct = count_distinct<D>(points);
    if (k > distinct)
        throw Error("k-means: k=" + std::to_string(k) + " exceeds the number of distinct rows (" +
                    std::to_string(distinct) + ")");
    KMeansResult<D> best;
    bool have = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng(seed, {static_cast<std::uint64_t>(r)});
        auto result = detail::lloyd(points, detail::kmeanspp_seeds(points, k, rng), max_iter);
        result.best_restart = r;
        if (!have || result.wcss < best.wcss) {
            best = std::move(result);
            have = true;
        }
    }
    return best;
}

template <std::size_t D>
KMeansResult<D> kmeans(const std::vector<Point<D>>& points, std::size_t k, std::uint64_t seed,
                       std::size_t restarts = 25, std::size_t max_iter = 100) {
    return kmeans<D>(std::span<const Point<D>>(points), k, seed, restarts, max_iter);
}

// ---- gap statistic -------------------------------------------------------------

enum class GapRule { argmax, one_se };

struct GapPoint {
    std::size_t k{0};
    double log_w{0.0};          // log W(k) on the data
    double mean_log_w_ref{0.0}; // (1/B) sum_b log W*_b(k)
    double gap{0.0};
    double sd{0.0};  // population SD of log W*_b(k)
    double se{0.0};  // s_k = sd * sqrt(1 + 1/B)
};

struct GapCurve {
    std::vector<GapPoint> points;  // k = 1..k_max
    std::size_t B{0};
    std::size_t chosen_k{1};
    GapRule rule{GapRule::argmax};
};

inline std::size_t choose_k(const std::vector<GapPoint>& pts, GapRule rule) {
    if (pts.empty()) throw Error("gap statistic: empty curve");
    if (rule == GapRule::argmax) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < pts.size(); ++i)
            if (pts[i].gap > pts[best].gap) best = i;
        return pts[best].k;
    }
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i].gap >= pts[i + 1].gap - pts[i + 1].se) return pts[i].k;
    return pts.back().k;
}

// Tibshirani-Walther-Hastie gap statistic with reference sets drawn uniformly over
// each column's observed range.
template <std::size_t D>
GapCurve gap_statistic(std::span<const Point<D>> points, std::size_t k_max, std::size_t B, std::uint64_t seed,
                       GapRule rule = GapRule::argmax, std::size_t restarts = 10) {
    if (k_max < 2) throw Error("gap statistic: k_max must be >= 2");
    if (B < 1) throw Error("gap statistic: B must be >= 1");
    if (k_max >= count_distinct<D>(points))
        throw Error("gap statistic: k_max must be below the number of distinct rows");
    Point<D> lo, hi;
    lo.fill(std::numeric_limits<double>::infinity());
    hi.fill(-std::numeric_limits<double>::infinity());
    for (const auto& p : points)
        for (std::size_t d = 0; d < D; ++d) {
            lo[d] = std::min(lo[d], p[d]);
            hi[d] = std::max(hi[d], p[d]);
        }

    GapCurve curve;
    curve.B = B;
    curve.rule = rule;
    curve.points.resize(k_max);
    for (std::size_t k = 1; k <= k_max; ++k) {
        auto& g = curve.points[k - 1];
        g.k = k;
        g.log_w = std::log(kmeans<D>(points, k, seed, restarts).wcss);
    }
    std::vector<std::vector<double>> ref_logs(k_max);
    std::vector<Point<D>> ref(points.size());
    for (std::size_t b = 0; b < B; ++b) {
        Rng rng(seed, {0x6a70ULL, static_cast<std::uint64_t>(b)});
        for (auto& p : ref)
            for (std::size_t d = 0; d < D; ++d) p[d] = rng.uniform(lo[d], hi[d]);
        for (std::size_t k = 1; k <= k_max; ++k) {
            const std::uint64_t fit_seed = seed ^ (0x9e3779b97f4a7c15ULL * (b + 1));
            ref_logs[k - 1].push_back(std::log(kmeans<D>(ref, k, fit_seed, restarts).wcss));
        }
    }
    for (std::size_t k = 1; k <= k_max; ++k) {
        auto& g = curve.points[k - 1];
        const auto& logs = ref_logs[k - 1];
        double mean = 0.0;
        for (double v : logs) mean += v;
        mean /= static_cast<double>(B);
        double var = 0.0;
        for (double v : logs) var += (v - mean) * (v - mean);
        var /= static_cast<double>(B);
        g.mean_log_w_ref = mean;
        g.gap = mean - g.log_w;
        g.sd = std::sqrt(var);
        g.se = g.sd * std::sqrt(1.0 + 1.0 / static_cast<double>(B));
    }
    curve.chosen_k = choose_k(curve.points, rule);
    return curve;
}

template <std::size_t D>
GapCurve gap_statistic(const std::vector<Point<D>>& points, std::size_t k_max, std::size_t B, std::uint64_t seed,
                       GapRule rule = GapRule::argmax, std::size_t restarts = 10) {
    return gap_statistic<D>(std::span<const Point<D>>(points), k_max, B, seed, rule, restarts);
}

}  // namespace affect

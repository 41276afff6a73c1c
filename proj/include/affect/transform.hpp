#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affect/aggregate.hpp"
#include "affect/vector.hpp"

namespace affect {

enum class TransformKind { general, word_specific, cluster_based };

inline std::string_view to_string(TransformKind k) {
    switch (k) {
        case TransformKind::general: return "general";
        case TransformKind::word_specific: return "word_specific";
        case TransformKind::cluster_based: return "cluster_based";
    }
    return "?";
}

// Offset taking the transmitting subgroup's vector to the receiving subgroup's:
// E_to = E_from + offset. Offsets are never range-clamped.
struct TransformationVector {
    TransformKind kind{TransformKind::general};
    std::string from_subgroup;
    std::string to_subgroup;
    std::optional<std::string> anchor;  // word id or cluster label
    EmotionalVector offset;

    double magnitude() const { return norm(offset); }

    TransformationVector reversed() const { return {kind, to_subgroup, from_subgroup, anchor, -offset}; }
};

inline TransformationVector general_transformation_vector(std::string from, std::string to,
                                                          const EmotionalVector& from_mean,
                                                          const EmotionalVector& to_mean) {
    return {TransformKind::general, std::move(from), std::move(to), std::nullopt, to_mean - from_mean};
}

inline TransformationVector general_transformation_vector(const SubgroupAverages& from, const SubgroupAverages& to,
                                                          const std::vector<WordId>& word_set) {
    if (word_set.empty()) throw Error("general transformation over an empty word set");
    if (from.persons == 0 || from.words.empty())
        throw EmptySubgroupError("subgroup '" + from.subgroup_id + "' is empty");
    if (to.persons == 0 || to.words.empty()) throw EmptySubgroupError("subgroup '" + to.subgroup_id + "' is empty");
    return general_transformation_vector(from.subgroup_id, to.subgroup_id, grand_mean(from, word_set),
                                         grand_mean(to, word_set));
}

inline TransformationVector word_transformation_vector(const WordId& word, const SubgroupAverages& from,
                                                       const SubgroupAverages& to) {
    const auto* a = from.find(word);
    const auto* b = to.find(word);
    if (!a) throw Error("word '" + word + "' has no average in subgroup '" + from.subgroup_id + "'");
    if (!b) throw Error("word '" + word + "' has no average in subgroup '" + to.subgroup_id + "'");
    return {TransformKind::word_specific, from.subgroup_id, to.subgroup_id, word, b->vector - a->vector};
}

struct AppliedVector {
    EmotionalVector vector;
    bool clamped{false};
};

inline EmotionalVector apply_transformation(const EmotionalVector& v, const TransformationVector& t) {
    return v + t.offset;
}

// Display-range variant: clamps into [-2,2]^3 and reports whether it did.
inline AppliedVector apply_transformation_for_display(const EmotionalVector& v, const TransformationVector& t) {
    AppliedVector out;
    out.vector = clamp_to_scale(v + t.offset, &out.clamped);
    return out;
}

inline void sort_by_magnitude(std::vector<TransformationVector>& ts) {
    std::stable_sort(ts.begin(), ts.end(), [](const TransformationVector& a, const TransformationVector& b) {
        const double ma = a.magnitude(), mb = b.magnitude();
        if (ma != mb) return ma > mb;
        return a.anchor.value_or("") < b.anchor.value_or("");
    });
}

// Word-specific vectors for every word of `word_set`, largest distance first.
inline std::vector<TransformationVector> transformation_table(const SubgroupAverages& from,
                                                              const SubgroupAverages& to,
                                                              const std::vector<WordId>& word_set) {
    std::vector<TransformationVector> out;
    out.reserve(word_set.size());
    for (const auto& w : word_set) out.push_back(word_transformation_vector(w, from, to));
    sort_by_magnitude(out);
    return out;
}

// Cluster centroids of one subgroup in original coordinates, keyed by cluster label.
struct CentroidTable {
    std::string subgroup_id;
    std::map<std::string, EmotionalVector> centroids;
};

inline TransformationVector cluster_transformation_vector(const std::string& label, const CentroidTable& from,
                                                          const CentroidTable& to) {
    auto a = from.centroids.find(label);
    auto b = to.centroids.find(label);
    if (a == from.centroids.end())
        throw Error("cluster '" + label + "' not present for subgroup '" + from.subgroup_id + "'");
    if (b == to.centroids.end())
        throw Error("cluster '" + label + "' not present for subgroup '" + to.subgroup_id + "'");
    return {TransformKind::cluster_based, from.subgroup_id, to.subgroup_id, label, b->second - a->second};
}

inline std::vector<TransformationVector> cluster_transformation_table(const CentroidTable& from,
                                                                      const CentroidTable& to) {
    std::vector<TransformationVector> out;
    for (const auto& [label, _] : from.centroids)
        if (to.centroids.count(label)) out.push_back(cluster_transformation_vector(label, from, to));
    sort_by_magnitude(out);
    return out;
}

}  // namespace affect

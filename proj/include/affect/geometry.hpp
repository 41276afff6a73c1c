#pragma once

#include <algorithm>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "affect/aggregate.hpp"
#include "affect/clustering.hpp"
#include "affect/transform.hpp"
#include "affect/vector.hpp"

namespace affect {

enum class Sign { below, above };

// One of the eight corners of the emotional vector space at a threshold. A vector
// is inside iff each component is strictly beyond -threshold (below) or +threshold
// (above); components in [-threshold, threshold] belong to no octant.
struct OctantSpec {
    double threshold{0.0};
    std::array<Sign, 3> signs{Sign::below, Sign::below, Sign::below};

    // Bit d set when dimension d is "above".
    std::size_t index() const {
        std::size_t i = 0;
        for (std::size_t d = 0; d < 3; ++d)
            if (signs[d] == Sign::above) i |= std::size_t{1} << d;
        return i;
    }
    static OctantSpec from_index(std::size_t i, double threshold) {
        OctantSpec o{threshold, {}};
        for (std::size_t d = 0; d < 3; ++d) o.signs[d] = (i >> d) & 1 ? Sign::above : Sign::below;
        return o;
    }
    bool contains(const EmotionalVector& v) const {
        for (std::size_t d = 0; d < 3; ++d) {
            if (signs[d] == Sign::above ? !(v[d] > threshold) : !(v[d] < -threshold)) return false;
        }
        return true;
    }
    // e.g. "p<0 a>0 d<0" or "p<-1 a>1 d<-1"
    std::string name() const {
        static constexpr std::array<char, 3> kAxis{'p', 'a', 'd'};
        std::string out;
        for (std::size_t d = 0; d < 3; ++d) {
            if (d) out += ' ';
            const bool above = signs[d] == Sign::above;
            out += fmt::format("{}{}{}", kAxis[d], above ? '>' : '<',
                               above || threshold == 0.0 ? fmt::format("{}", threshold)
                                                         : fmt::format("-{}", threshold));
        }
        return out;
    }
    friend bool operator==(const OctantSpec&, const OctantSpec&) = default;
};

inline std::optional<OctantSpec> octant_classify(const EmotionalVector& v, double threshold) {
    if (threshold < 0.0) throw Error("octant threshold must be >= 0");
    OctantSpec o{threshold, {}};
    for (std::size_t d = 0; d < 3; ++d) {
        if (v[d] > threshold)
            o.signs[d] = Sign::above;
        else if (v[d] < -threshold)
            o.signs[d] = Sign::below;
        else
            return std::nullopt;
    }
    return o;
}

struct OctantCensus {
    double threshold{0.0};
    std::array<std::size_t, 8> counts{};
    std::size_t residual{0};  // vectors in a dead zone
};

inline OctantCensus octant_census(const std::vector<EmotionalVector>& vectors, double threshold) {
    OctantCensus c{threshold, {}, 0};
    for (const auto& v : vectors) {
        if (auto o = octant_classify(v, threshold))
            ++c.counts[o->index()];
        else
            ++c.residual;
    }
    return c;
}

inline OctantCensus octant_census(const SubgroupAverages& averages, const std::vector<WordId>& word_set,
                                  double threshold) {
    std::vector<EmotionalVector> vs;
    for (const auto& w : word_set) vs.push_back(averages.at(w));
    return octant_census(vs, threshold);
}

// ---- extreme affective shift ---------------------------------------------------

struct ShiftEntry {
    WordId word_id;
    double magnitude{0.0};
    EmotionalVector offset;  // absent -> present word-specific offset
};

struct ShiftList {
    OctantSpec octant;
    std::string present_group;
    std::string absent_group;
    std::vector<ShiftEntry> entries;  // descending magnitude, ties by word id
};

inline ShiftList extreme_shift_list(const OctantSpec& octant, const SubgroupAverages& present,
                                    const SubgroupAverages& absent, const std::vector<WordId>& word_set) {
    ShiftList list{octant, present.subgroup_id, absent.subgroup_id, {}};
    for (const auto& w : word_set) {
        const auto& pv = present.at(w);
        const auto& av = absent.at(w);
        if (octant.contains(pv) && !octant.contains(av)) {
            const auto t = word_transformation_vector(w, absent, present);
            list.entries.push_back({w, t.magnitude(), t.offset});
        }
    }
    std::stable_sort(list.entries.begin(), list.entries.end(), [](const ShiftEntry& a, const ShiftEntry& b) {
        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
        return a.word_id < b.word_id;
    });
    return list;
}

// ---- scale-cluster model -------------------------------------------------------

struct ScaleEntry {
    WordId word_id;
    double origo_distance{0.0};
    double centroid_distance{0.0};
    double cosine{0.0};
    bool aligned{false};  // cosine >= threshold
    bool nearest{false};  // one of the three members closest to the centroid
};

struct ScaleClusterList {
    std::string subgroup;
    std::string label;
    double threshold{0.99};
    std::vector<ScaleEntry> entries;   // aligned members, ascending origo distance
    std::vector<ScaleEntry> nearest3;  // closest members to the centroid, any cosine
    std::vector<ScaleEntry> opposite;  // cosine <= -threshold
};

struct ClusterMember {
    WordId word_id;
    EmotionalVector vector;
};

inline ScaleClusterList scale_cluster_list(std::string subgroup, std::string label, const EmotionalVector& centroid,
                                           const std::vector<ClusterMember>& members, double threshold = 0.99) {
    if (members.empty()) throw Error("scale-cluster list: cluster '" + label + "' has no members");
    if (norm(centroid) == 0.0)
        throw UndefinedMeasureError("scale-cluster list: cluster '" + label + "' has a zero centroid");
    std::vector<ScaleEntry> all;
    for (const auto& m : members) {
        ScaleEntry e;
        e.word_id = m.word_id;
        e.origo_distance = origo_distance(m.vector);
        e.centroid_distance = euclidean_distance(m.vector, centroid);
        e.cosine = norm(m.vector) == 0.0 ? 0.0 : cosine_similarity(m.vector, centroid);
        e.aligned = e.cosine >= threshold;
        all.push_back(std::move(e));
    }
    std::vector<std::size_t> by_centroid(all.size());
    for (std::size_t i = 0; i < all.size(); ++i) by_centroid[i] = i;
    std::sort(by_centroid.begin(), by_centroid.end(), [&](std::size_t a, std::size_t b) {
        if (all[a].centroid_distance != all[b].centroid_distance)
            return all[a].centroid_distance < all[b].centroid_distance;
        return all[a].word_id < all[b].word_id;
    });
    for (std::size_t i = 0; i < std::min<std::size_t>(3, by_centroid.size()); ++i) all[by_centroid[i]].nearest = true;

    ScaleClusterList list{std::move(subgroup), std::move(label), threshold, {}, {}, {}};
    for (std::size_t i : by_centroid)
        if (all[i].nearest) list.nearest3.push_back(all[i]);
    for (const auto& e : all) {
        if (e.aligned) list.entries.push_back(e);
        if (e.cosine <= -threshold) list.opposite.push_back(e);
    }
    auto by_origo = [](const ScaleEntry& a, const ScaleEntry& b) {
        if (a.origo_distance != b.origo_distance) return a.origo_distance < b.origo_distance;
        return a.word_id < b.word_id;
    };
    std::sort(list.entries.begin(), list.entries.end(), by_origo);
    std::sort(list.opposite.begin(), list.opposite.end(), by_origo);
    for (const auto& e : list.entries)
        if (e.cosine < threshold) throw std::logic_error("scale-cluster list entry below cosine threshold");
    return list;
}

inline std::vector<ClusterMember> cluster_members(const ClusterModel& model, const SubgroupAverages& averages,
                                                  const std::string& label) {
    const std::size_t c = model.index_of(label);
    std::vector<ClusterMember> out;
    for (auto row : model.member_rows(c)) out.push_back({model.word_ids[row], averages.at(model.word_ids[row])});
    return out;
}

inline ScaleClusterList scale_cluster_list(const ClusterModel& model, const SubgroupAverages& averages,
                                           const std::string& label, double threshold = 0.99) {
    return scale_cluster_list(model.subgroup_id, label, model.centroids_orig[model.index_of(label)],
                              cluster_members(model, averages, label), threshold);
}

struct SharedScaleWord {
    WordId word_id;
    double origo_difference{0.0};  // origo distance in A minus in B
};

// Words appearing in both scale lists of the same cluster label.
inline std::vector<SharedScaleWord> shared_scale_words(const ScaleClusterList& a, const ScaleClusterList& b) {
    std::vector<SharedScaleWord> out;
    for (const auto& ea : a.entries)
        for (const auto& eb : b.entries)
            if (ea.word_id == eb.word_id) out.push_back({ea.word_id, ea.origo_distance - eb.origo_distance});
    return out;
}

// ---- attraction-cluster model --------------------------------------------------

struct AttractionList {
    std::string subgroup;
    WordId word_id;
    std::vector<std::string> labels;  // ascending distance to each centroid
    std::vector<double> distances;

    std::string joined(const char* sep = ", ") const {
        std::string s;
        for (std::size_t i = 0; i < labels.size(); ++i) {
            if (i) s += sep;
            s += labels[i];
        }
        return s;
    }
};

inline AttractionList attraction_list(const WordId& word, const EmotionalVector& word_vector,
                                      const CentroidTable& centroids) {
    std::vector<std::pair<double, std::string>> ds;
    for (const auto& [label, c] : centroids.centroids) ds.emplace_back(euclidean_distance(word_vector, c), label);
    std::sort(ds.begin(), ds.end());
    AttractionList out{centroids.subgroup_id, word, {}, {}};
    for (auto& [d, l] : ds) {
        out.labels.push_back(l);
        out.distances.push_back(d);
    }
    return out;
}

}  // namespace affect

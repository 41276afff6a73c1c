#pragma once

#include <map>
#include <string>
#include <vector>

#include "affect/ingest.hpp"
#include "affect/segmentation.hpp"
#include "affect/vector.hpp"

namespace affect {

// Per-word average vectors of one subgroup.
struct SubgroupAverages {
    std::string subgroup_id;
    std::size_t persons{0};
    std::map<WordId, AverageVector> words;

    const AverageVector* find(const WordId& id) const {
        auto it = words.find(id);
        return it == words.end() ? nullptr : &it->second;
    }
    const EmotionalVector& at(const WordId& id) const {
        auto it = words.find(id);
        if (it == words.end())
            throw Error("subgroup '" + subgroup_id + "' has no average for word '" + id + "'");
        return it->second.vector;
    }
    std::map<WordId, EmotionalVector> vectors() const {
        std::map<WordId, EmotionalVector> out;
        for (const auto& [id, a] : words) out.emplace(id, a.vector);
        return out;
    }
};

// All rescaled person vectors of the subgroup, grouped by word.
inline std::map<WordId, std::vector<EmotionalVector>> person_vectors(const Cohort& cohort, const Subgroup& group,
                                                                     const std::vector<WordId>& word_set) {
    std::map<WordId, std::vector<EmotionalVector>> out;
    std::set<WordId> wanted(word_set.begin(), word_set.end());
    for (const auto& pid : group.member_ids) {
        const SessionFile* s = cohort.find(pid);
        if (!s) throw Error("subgroup '" + group.label + "' references unknown person '" + pid + "'");
        for (const auto& a : s->answers)
            if (wanted.count(a.word_id)) out[a.word_id].push_back(a.vector());
    }
    return out;
}

inline SubgroupAverages compute_averages(const Cohort& cohort, const Subgroup& group,
                                         const std::vector<WordId>& word_set) {
    if (group.member_ids.empty()) throw EmptySubgroupError("subgroup '" + group.label + "' is empty");
    SubgroupAverages out{group.subgroup_id, group.size(), {}};
    for (auto& [word, vs] : person_vectors(cohort, group, word_set))
        out.words.emplace(word, AverageVector{word, group.subgroup_id, average_vector(vs), vs.size()});
    return out;
}

// Mean of the per-word averages over `word_set`. For complete data this equals the
// mean over every person x word vector of the subgroup.
inline EmotionalVector grand_mean(const SubgroupAverages& averages, const std::vector<WordId>& word_set) {
    std::vector<EmotionalVector> vs;
    vs.reserve(word_set.size());
    for (const auto& w : word_set)
        if (const auto* a = averages.find(w)) vs.push_back(a->vector);
    if (vs.empty()) throw EmptySubgroupError("subgroup '" + averages.subgroup_id + "' has no averages over the word set");
    return average_vector(vs);
}

}  // namespace affect

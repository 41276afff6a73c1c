#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "affect/ingest.hpp"
#include "affect/records.hpp"

namespace affect {

enum class Scheme { gender, gender_parental, rating_daytime, rating_duration };

inline constexpr std::array<Scheme, 4> kSchemes{Scheme::gender, Scheme::gender_parental, Scheme::rating_daytime,
                                                Scheme::rating_duration};

inline std::string_view to_string(Scheme s) {
    switch (s) {
        case Scheme::gender: return "gender";
        case Scheme::gender_parental: return "gender_parental";
        case Scheme::rating_daytime: return "rating_daytime";
        case Scheme::rating_duration: return "rating_duration";
    }
    return "?";
}

inline Scheme parse_scheme(std::string_view s) {
    for (auto sc : kSchemes)
        if (to_string(sc) == s) return sc;
    throw Error("unknown subgroup scheme '" + std::string(s) + "'");
}

struct Subgroup {
    std::string subgroup_id;  // equals label; labels are unique across schemes
    Scheme scheme{Scheme::gender};
    std::string label;
    std::vector<PersonId> member_ids;  // sorted
    bool degenerate{false};            // empty member set
    // Key range for tertile schemes (session time of day in seconds, or seconds/answer).
    std::optional<std::pair<double, double>> key_range;

    std::size_t size() const { return member_ids.size(); }
    bool contains(std::string_view id) const {
        return std::binary_search(member_ids.begin(), member_ids.end(), id,
                                  [](auto&& a, auto&& b) { return std::string_view(a) < std::string_view(b); });
    }
};

enum class TertileKey { session_start, avg_answer_duration };

inline double tertile_key(const Person& p, TertileKey key) {
    return key == TertileKey::session_start ? p.session_start.time_of_day_s() : p.avg_answer_duration_s;
}

// Group sizes for an n-person tertile split: floor(n/3) each, remainder to the
// later groups (35 -> 11,12,12; 7 -> 2,2,3).
constexpr std::array<std::size_t, 3> tertile_sizes(std::size_t n) {
    const std::size_t base = n / 3, rem = n % 3;
    return {base, base + (rem == 2 ? 1 : 0), base + (rem >= 1 ? 1 : 0)};
}

struct Tertiles {
    std::array<std::vector<Person>, 3> groups;
    std::array<std::optional<std::pair<double, double>>, 3> ranges;  // min/max key per group
};

inline Tertiles tertile_split(std::vector<Person> persons, TertileKey key) {
    std::sort(persons.begin(), persons.end(), [key](const Person& a, const Person& b) {
        const double ka = tertile_key(a, key), kb = tertile_key(b, key);
        if (ka != kb) return ka < kb;
        return a.person_id < b.person_id;
    });
    Tertiles t;
    const auto sizes = tertile_sizes(persons.size());
    std::size_t pos = 0;
    for (std::size_t g = 0; g < 3; ++g) {
        for (std::size_t i = 0; i < sizes[g]; ++i) t.groups[g].push_back(persons[pos++]);
        if (!t.groups[g].empty())
            t.ranges[g] = {tertile_key(t.groups[g].front(), key), tertile_key(t.groups[g].back(), key)};
    }
    return t;
}

namespace detail {

inline Subgroup make_subgroup(Scheme scheme, std::string label, std::vector<PersonId> ids) {
    std::sort(ids.begin(), ids.end());
    Subgroup g;
    g.subgroup_id = label;
    g.scheme = scheme;
    g.label = std::move(label);
    g.member_ids = std::move(ids);
    g.degenerate = g.member_ids.empty();
    return g;
}

}  // namespace detail

inline std::vector<std::string> scheme_labels(Scheme s) {
    switch (s) {
        case Scheme::gender: return {"women", "men"};
        case Scheme::gender_parental:
            return {"women_without_children", "women_with_children", "men_without_children", "men_with_children"};
        case Scheme::rating_daytime: return {"early", "middle", "late"};
        case Scheme::rating_duration: return {"short", "medium", "long"};
    }
    return {};
}

inline std::vector<Subgroup> build_subgroups(const std::vector<Person>& cohort, Scheme scheme) {
    std::vector<Subgroup> out;
    const auto labels = scheme_labels(scheme);
    switch (scheme) {
        case Scheme::gender:
        case Scheme::gender_parental: {
            std::vector<std::vector<PersonId>> buckets(labels.size());
            for (const auto& p : cohort) {
                if (p.children_count < 0)
                    throw ValidationError("person " + p.person_id, "children_count missing or negative");
                const std::size_t g = p.gender == Gender::woman ? 0 : 1;
                if (scheme == Scheme::gender)
                    buckets[g].push_back(p.person_id);
                else
                    buckets[g * 2 + (p.children_count > 0 ? 1 : 0)].push_back(p.person_id);
            }
            for (std::size_t i = 0; i < labels.size(); ++i)
                out.push_back(detail::make_subgroup(scheme, labels[i], std::move(buckets[i])));
            break;
        }
        case Scheme::rating_daytime:
        case Scheme::rating_duration: {
            const auto key = scheme == Scheme::rating_daytime ? TertileKey::session_start
                                                              : TertileKey::avg_answer_duration;
            if (key == TertileKey::session_start)
                for (const auto& p : cohort)
                    if (p.session_start.text.empty())
                        throw ValidationError("person " + p.person_id, "session_start missing");
            auto t = tertile_split(cohort, key);
            for (std::size_t i = 0; i < 3; ++i) {
                std::vector<PersonId> ids;
                for (const auto& p : t.groups[i]) ids.push_back(p.person_id);
                auto g = detail::make_subgroup(scheme, labels[i], std::move(ids));
                g.key_range = t.ranges[i];
                out.push_back(std::move(g));
            }
            break;
        }
    }
    return out;
}

// The whole cohort as one subgroup ("all").
inline Subgroup everyone(const std::vector<Person>& cohort) {
    std::vector<PersonId> ids;
    for (const auto& p : cohort) ids.push_back(p.person_id);
    auto g = detail::make_subgroup(Scheme::gender, "all", std::move(ids));
    return g;
}

inline const Subgroup& find_subgroup(const std::vector<Subgroup>& groups, std::string_view label) {
    for (const auto& g : groups)
        if (g.label == label) return g;
    throw Error("unknown subgroup '" + std::string(label) + "'");
}

}  // namespace affect

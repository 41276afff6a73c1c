#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "affect/clustering.hpp"
#include "affect/error.hpp"
#include "affect/kmeans.hpp"
#include "affect/stats.hpp"

namespace affect {

struct NormSource {
    std::string name;
    std::filesystem::path path;
    std::filesystem::path mapping;
    double scale_lo{1.0};
    double scale_hi{9.0};
    bool dominance_present{true};
};

// One pipeline run. Paths in the file are relative to the file's own directory.
struct RunConfig {
    std::filesystem::path base_dir;
    std::filesystem::path lexicon;
    std::filesystem::path persons;
    std::filesystem::path sessions;
    std::optional<std::filesystem::path> session_dir;  // *.json session uploads
    std::optional<std::filesystem::path> frequency_ranks;
    std::vector<NormSource> norms;

    std::uint64_t seed{0};
    std::size_t k{5};
    std::size_t k_max{8};
    std::size_t gap_B{10};
    std::size_t restarts{25};
    std::size_t gap_restarts{10};
    GapRule gap_rule{GapRule::argmax};
    double cosine_threshold{0.99};
    std::vector<double> octant_thresholds{0.0, 1.0};
    std::string reference_subgroup{"women_without_children"};
    std::vector<std::string> model_subgroups{"women_without_children", "women_with_children", "men_without_children"};
    SdConvention sd{SdConvention::sample};
    std::size_t shift_list_length{3};  // 0 = full list
    MatchOrientation match_orientation{MatchOrientation::a_reference};
    ResponseTimeStudyOptions response_time{};
    std::filesystem::path out{"bundle"};
};

namespace detail {

inline std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

inline void require_file(const std::filesystem::path& p, const std::string& key) {
    if (!std::filesystem::is_regular_file(p))
        throw ValidationError("config", key + ": file not found: " + p.string());
}

}  // namespace detail

inline RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir,
                              std::optional<std::uint64_t> seed_override = std::nullopt) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("config", std::string("malformed JSON: ") + e.what());
    }
    if (!j.is_object()) throw ValidationError("config", "top level must be an object");
    RunConfig c;
    c.base_dir = base_dir;
    auto get = [&](const char* key, auto& dst) {
        if (!j.contains(key)) return;
        try {
            j.at(key).get_to(dst);
        } catch (const nlohmann::json::exception&) {
            throw ValidationError("config", std::string(key) + ": wrong type");
        }
    };
    auto path_of = [&](const char* key, bool required) -> std::optional<std::filesystem::path> {
        if (!j.contains(key)) {
            if (required) throw ValidationError("config", std::string("missing required key '") + key + "'");
            return std::nullopt;
        }
        if (!j.at(key).is_string()) throw ValidationError("config", std::string(key) + ": expected a path string");
        return detail::resolve(base_dir, j.at(key).get<std::string>());
    };

    if (seed_override) {
        c.seed = *seed_override;
    } else {
        if (!j.contains("seed")) throw ValidationError("config", "missing required key 'seed'");
        if (!j.at("seed").is_number_unsigned()) throw ValidationError("config", "seed: expected a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    c.lexicon = *path_of("lexicon", true);
    c.persons = *path_of("persons", true);
    c.sessions = *path_of("sessions", true);
    c.session_dir = path_of("session_dir", false);
    c.frequency_ranks = path_of("frequency_ranks", false);
    detail::require_file(c.lexicon, "lexicon");
    detail::require_file(c.persons, "persons");
    detail::require_file(c.sessions, "sessions");
    if (c.frequency_ranks) detail::require_file(*c.frequency_ranks, "frequency_ranks");
    if (c.session_dir && !std::filesystem::is_directory(*c.session_dir))
        throw ValidationError("config", "session_dir: directory not found: " + c.session_dir->string());

    if (j.contains("norms")) {
        if (!j.at("norms").is_array()) throw ValidationError("config", "norms: expected an array");
        std::size_t i = 0;
        for (const auto& n : j.at("norms")) {
            const auto where = "norms[" + std::to_string(i++) + "]";
            for (const char* key : {"name", "path", "mapping", "scale_lo", "scale_hi"})
                if (!n.contains(key)) throw ValidationError("config", where + ": missing '" + key + "'");
            NormSource s;
            try {
                s.name = n.at("name").get<std::string>();
                s.path = detail::resolve(base_dir, n.at("path").get<std::string>());
                s.mapping = detail::resolve(base_dir, n.at("mapping").get<std::string>());
                s.scale_lo = n.at("scale_lo").get<double>();
                s.scale_hi = n.at("scale_hi").get<double>();
                s.dominance_present = n.value("dominance_present", true);
            } catch (const nlohmann::json::exception&) {
                throw ValidationError("config", where + ": wrong field type");
            }
            if (!(s.scale_lo < s.scale_hi)) throw ValidationError("config", where + ": scale_lo must be < scale_hi");
            detail::require_file(s.path, where + ".path");
            detail::require_file(s.mapping, where + ".mapping");
            c.norms.push_back(std::move(s));
        }
    }

    get("k", c.k);
    get("k_max", c.k_max);
    get("gap_B", c.gap_B);
    get("restarts", c.restarts);
    get("gap_restarts", c.gap_restarts);
    get("cosine_threshold", c.cosine_threshold);
    get("octant_thresholds", c.octant_thresholds);
    get("reference_subgroup", c.reference_subgroup);
    get("model_subgroups", c.model_subgroups);
    get("shift_list_length", c.shift_list_length);
    if (j.contains("gap_rule")) {
        const auto r = j.at("gap_rule").get<std::string>();
        if (r == "argmax") c.gap_rule = GapRule::argmax;
        else if (r == "one_se") c.gap_rule = GapRule::one_se;
        else throw ValidationError("config", "gap_rule: expected 'argmax' or 'one_se'");
    }
    if (j.contains("sd")) {
        const auto s = j.at("sd").get<std::string>();
        if (s == "sample") c.sd = SdConvention::sample;
        else if (s == "population") c.sd = SdConvention::population;
        else throw ValidationError("config", "sd: expected 'sample' or 'population'");
    }
    if (j.contains("match_orientation")) {
        const auto s = j.at("match_orientation").get<std::string>();
        if (s == "a_reference") c.match_orientation = MatchOrientation::a_reference;
        else if (s == "b_reference") c.match_orientation = MatchOrientation::b_reference;
        else throw ValidationError("config", "match_orientation: expected 'a_reference' or 'b_reference'");
    }
    if (j.contains("response_time")) {
        const auto& r = j.at("response_time");
        c.response_time.k = r.value("k", c.response_time.k);
        c.response_time.cutoff_s = r.value("cutoff_s", c.response_time.cutoff_s);
        c.response_time.pleasure_threshold = r.value("pleasure_threshold", c.response_time.pleasure_threshold);
        c.response_time.pool_size = r.value("pool_size", c.response_time.pool_size);
    }
    if (j.contains("out")) c.out = detail::resolve(base_dir, j.at("out").get<std::string>());

    if (c.k < 1) throw ValidationError("config", "k must be >= 1");
    if (c.k_max < 2) throw ValidationError("config", "k_max must be >= 2");
    if (c.gap_B < 1) throw ValidationError("config", "gap_B must be >= 1");
    if (c.restarts < 1) throw ValidationError("config", "restarts must be >= 1");
    if (c.model_subgroups.empty()) throw ValidationError("config", "model_subgroups must not be empty");
    for (double t : c.octant_thresholds)
        if (t < 0.0) throw ValidationError("config", "octant thresholds must be non-negative");
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path, std::optional<std::uint64_t> seed_override = std::nullopt) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config", "cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    auto base = path.parent_path();
    if (base.empty()) base = ".";
    return parse_config(ss.str(), base, seed_override);
}

}  // namespace affect

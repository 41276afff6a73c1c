#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "affect/ingest.hpp"
#include "affect/random.hpp"

// Deterministic synthetic cohorts shaped like the original study (35 persons,
// 195 adjectives + 16 pregnancy nouns). The raw study data is not public; these
// fixtures drive the pipeline, the CLI examples and the test suites.
namespace affect::synthetic {

struct CohortShape {
    std::size_t women_without_children{13};
    std::size_t women_with_children{8};
    std::size_t men_without_children{13};
    std::size_t men_with_children{1};

    std::size_t total() const {
        return women_without_children + women_with_children + men_without_children + men_with_children;
    }
};

struct FixtureOptions {
    std::uint64_t seed{20161101};
    std::size_t adjectives{195};
    bool pregnancy_nouns{true};
    CohortShape shape{};
    double word_spread{0.30};      // latent jitter of a word around its prototype
    double subgroup_spread{0.20};  // per subgroup x word latent deviation
    double answer_noise{0.75};     // per answer noise before rounding
};

struct Fixture {
    Cohort cohort;
    ExternalNormSet norms;
    LemmaMapping mapping;
    std::map<WordId, double> frequency_ranks;
};

inline std::string iso_timestamp(int year, int month, int day, double seconds_of_day) {
    const auto total_ms = static_cast<long long>(std::llround(seconds_of_day * 1000.0));
    const long long s = total_ms / 1000;
    return fmt::format("{:04d}-{:02d}-{:02d}T{:02d}:{:02d}:{:02d}.{:03d}", year, month, day, s / 3600, (s / 60) % 60,
                       s % 60, total_ms % 1000);
}

struct NounSeed {
    const char* id;
    const char* gloss;
    EmotionalVector latent;    // cohort average scale [-2,2]
    const char* external;      // matched external lemma
    EmotionalVector external_v;  // external norm, rescaled [-2,2]
};

// Cohort-level noun averages and matched external norms (rescaled) in the style of a
// published comparison table; used as latent means for the synthetic nouns.
inline const std::array<NounSeed, 16>& noun_seeds() {
    static const std::array<NounSeed, 16> kSeeds{{
        {"intimate_relationship", "intimate relationship", {1.11, -0.26, 0.66}, "couple", {1.06, -0.03, 0.31}},
        {"motherhood", "motherhood", {0.89, -0.06, 0.2}, "motherhood", {0.9, 0.26, 0.5}},
        {"fatherhood", "fatherhood", {1, -0.51, 0.46}, "fatherhood", {0.89, -0.22, 0.31}},
        {"infant", "infant", {0.94, -0.4, 0.06}, "baby", {0.84, -0.02, -0.03}},
        {"fetus", "fetus", {0.23, -0.09, -0.43}, "fetus", {-0.13, -0.38, -0.2}},
        {"pregnancy", "pregnancy", {0.6, 0.14, -0.23}, "pregnancy", {-0.11, 0, -0.22}},
        {"giving_birth", "giving birth", {0, 0.71, -0.77}, "birth", {0.76, 0.38, 0}},
        {"breastfeeding", "breastfeeding", {0.74, -0.54, 0.09}, "nursing", {0.7, -0.72, 0.03}},
        {"baby_colic", "baby colic", {-1.26, 0.63, -1.17}, "colic", {-1.03, -1.06, -1.03}},
        {"miscarriage", "miscarriage", {-1.83, 0.97, -1.86}, "miscarriage", {-1.26, 0.35, -1.34}},
        {"abortion", "abortion", {-1.03, 0.31, -0.66}, "abortion", {-1.21, 0.22, -0.14}},
        {"preemie", "preemie", {-0.69, 0.29, -1.11}, "premature", {-0.45, -0.19, -0.3}},
        {"childlessness", "childlessness", {-1.2, -0.43, -1.11}, "childless", {-0.72, -0.86, 0.4}},
        {"sexuality", "sexuality", {1.46, 0.4, 0.51}, "sexuality", {0.48, 1.07, 0.87}},
        {"sole_custody_of_child", "sole custody of child", {-0.54, -0.11, -0.49}, "custody", {-0.13, -0.43, 0.27}},
        {"artificial_fertilization", "artificial fertilization", {0.2, -0.4, -0.34}, "fertilize", {0.23, -0.37, 0.76}},
    }};
    return kSeeds;
}

// Five affective prototypes (cluster-centroid-like positions in [-2,2]^3).
inline const std::array<EmotionalVector, 5>& prototypes() {
    static const std::array<EmotionalVector, 5> kProto{{{1.25, 0.24, 0.74},
                                                        {-1.22, -0.69, -1.08},
                                                        {1.20, -0.71, 0.79},
                                                        {-1.13, 0.21, -0.98},
                                                        {-1.40, 0.87, -1.15}}};
    return kProto;
}

inline int to_raw(double latent) {
    const long r = std::lround(latent) + 3;
    return static_cast<int>(std::clamp(r, 1L, 5L));
}

inline double clip(double v, double lim = 1.95) { return std::clamp(v, -lim, lim); }

inline Fixture make_fixture(const FixtureOptions& opt = {}) {
    Rng rng(opt.seed, {0xf1c7ULL});

    std::vector<WordEntry> words;
    std::vector<EmotionalVector> latent;
    int rank = 1;
    // Adjectives: the pregnancy context words "infant" and "fetus" interleave just
    // before the nouns in the original ordering; here nouns simply follow adjectives.
    for (std::size_t i = 0; i < opt.adjectives; ++i) {
        const auto& p = prototypes()[i % prototypes().size()];
        EmotionalVector v{clip(p.pleasure + rng.normal(0, opt.word_spread)),
                          clip(p.arousal + rng.normal(0, opt.word_spread)),
                          clip(p.dominance + rng.normal(0, opt.word_spread))};
        const auto id = fmt::format("adj{:03d}", i + 1);
        words.push_back({id, id, fmt::format("adjective {}", i + 1), WordKind::emotional_adjective, rank++});
        latent.push_back(v);
    }
    if (opt.pregnancy_nouns)
        for (const auto& n : noun_seeds()) {
            words.push_back({n.id, n.id, n.gloss, WordKind::pregnancy_noun, rank++});
            latent.push_back(n.latent);
        }

    struct GroupSpec {
        Gender gender;
        int children;
        std::size_t count;
        EmotionalVector offset;
    };
    const std::array<GroupSpec, 4> groups{{
        {Gender::woman, 0, opt.shape.women_without_children, {-0.02, 0.03, -0.02}},
        {Gender::woman, 2, opt.shape.women_with_children, {-0.02, -0.12, -0.05}},
        {Gender::man, 0, opt.shape.men_without_children, {0.03, 0.04, 0.03}},
        {Gender::man, 1, opt.shape.men_with_children, {0.10, 0.30, 0.00}},
    }};

    const std::size_t n_persons = opt.shape.total();
    // Distinct session start times spread over 07:45..23:38.
    std::vector<double> starts;
    for (std::size_t i = 0; i < n_persons; ++i) starts.push_back(rng.uniform(7.75 * 3600, 23.63 * 3600));

    std::vector<SessionFile> sessions;
    std::size_t person_index = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& spec = groups[g];
        std::vector<EmotionalVector> group_latent(latent.size());
        for (std::size_t w = 0; w < latent.size(); ++w)
            for (std::size_t d = 0; d < 3; ++d)
                group_latent[w][d] = latent[w][d] + spec.offset[d] + rng.normal(0, opt.subgroup_spread);
        for (std::size_t i = 0; i < spec.count; ++i, ++person_index) {
            SessionFile s;
            auto& p = s.person;
            p.person_id = fmt::format("p{:02d}", person_index + 1);
            p.gender = spec.gender;
            p.children_count = spec.children;
            p.age = static_cast<int>(22 + rng.index(30) + (spec.children ? 10 : 0));
            p.native_language = "fi";
            const int day = static_cast<int>(1 + person_index % 28);
            const int month = person_index % 2 ? 12 : 11;
            double clock = starts[person_index];
            p.session_start = Timestamp::parse(iso_timestamp(2016, month, day, clock));
            const double speed = std::exp(rng.normal(0.0, 0.35));
            for (std::size_t w = 0; w < words.size(); ++w) {
                RatingAnswer a;
                a.person_id = p.person_id;
                a.word_id = words[w].word_id;
                a.rank = words[w].presentation_rank;
                for (std::size_t d = 0; d < 3; ++d) {
                    a.raw[d] = to_raw(group_latent[w][d] + rng.normal(0, opt.answer_noise));
                    a.response_time_s[d] =
                        std::round((0.6 + speed * (2.2 + std::fabs(rng.normal(0, 1.4)))) * 1000.0) / 1000.0;
                }
                if (clock > 86399.0) clock = 86399.0;
                a.shown_at = Timestamp::parse(iso_timestamp(2016, month, day, clock));
                clock += a.total_response_time_s();
                s.answers.push_back(std::move(a));
            }
            sessions.push_back(std::move(s));
        }
    }

    Fixture f;
    f.cohort = make_cohort(Lexicon(words), std::move(sessions));

    f.norms.name = "external_norms";
    f.norms.scale_lo = 1.0;
    f.norms.scale_hi = 9.0;
    f.norms.dominance_present = true;
    if (opt.pregnancy_nouns)
        for (const auto& n : noun_seeds()) {
            auto native = [](double v) { return std::round(((v + 2.0) / 4.0 * 8.0 + 1.0) * 1000.0) / 1000.0; };
            f.norms.rows[n.external] = {native(n.external_v.pleasure), native(n.external_v.arousal),
                                        native(n.external_v.dominance)};
            f.mapping.push_back({n.id, n.external, "pregnancy"});
        }
    // Frequency ranks for roughly 60% of the adjectives.
    for (std::size_t i = 0; i < opt.adjectives; ++i)
        if (rng.uniform() < 0.62) f.frequency_ranks[words[i].word_id] = static_cast<double>(1 + rng.index(50000));
    return f;
}

struct BlobSet {
    std::vector<std::array<double, 3>> points;
    std::vector<std::size_t> labels;  // generating blob per point
};

// `n` points from `centers.size()` isotropic Gaussian blobs, assigned round robin,
// clipped to [-2,2]^3.
inline BlobSet gaussian_blobs(std::uint64_t seed, std::size_t n, const std::vector<EmotionalVector>& centers,
                              double sd) {
    Rng rng(seed, {0xb10bULL});
    BlobSet b;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = i % centers.size();
        std::array<double, 3> p{};
        for (std::size_t d = 0; d < 3; ++d) p[d] = std::clamp(centers[c][d] + rng.normal(0, sd), -2.0, 2.0);
        b.points.push_back(p);
        b.labels.push_back(c);
    }
    return b;
}

// Five well separated centres inside the scale cube.
inline std::vector<EmotionalVector> five_blob_centers() {
    return {{1.2, 1.2, 1.2}, {-1.2, -1.2, 1.2}, {-1.2, 1.2, -1.2}, {1.2, -1.2, -1.2}, {0.0, 0.0, 0.0}};
}

// Files a fixture is written as, keyed by file name.
inline std::map<std::string, std::string> fixture_files(const Fixture& f) {
    std::map<std::string, std::string> out;
    out["lexicon.csv"] = write_lexicon_csv(f.cohort.lexicon);
    out["persons.csv"] = write_persons_csv(f.cohort.persons());
    out["sessions.csv"] = write_sessions_csv(f.cohort.sessions);
    {
        csv::Writer w({"word", "valence", "arousal", "dominance"});
        for (const auto& [word, r] : f.norms.rows)
            w.row({word, shortest(r.valence), shortest(r.arousal), r.dominance ? shortest(*r.dominance) : ""});
        out["norms.csv"] = w.str();
    }
    {
        csv::Writer w({"word_id", "external_word", "category"});
        for (const auto& m : f.mapping) w.row({m.word_id, m.external_word, m.category});
        out["mapping.csv"] = w.str();
    }
    {
        csv::Writer w({"word_id", "rank"});
        for (const auto& [word, r] : f.frequency_ranks) w.row({word, shortest(r)});
        out["frequency.csv"] = w.str();
    }
    return out;
}

}  // namespace affect::synthetic

#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "affect/csv.hpp"
#include "affect/error.hpp"
#include "affect/records.hpp"
#include "affect/vector.hpp"

namespace affect {

inline constexpr std::string_view kSessionFormatVersion = "v1";

class Lexicon {
public:
    Lexicon() = default;
    explicit Lexicon(std::vector<WordEntry> words) : words_(std::move(words)) {
        std::sort(words_.begin(), words_.end(),
                  [](const WordEntry& a, const WordEntry& b) { return a.presentation_rank < b.presentation_rank; });
        std::set<int> ranks;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const auto& w = words_[i];
            if (w.word_id.empty()) throw ValidationError("lexicon", "empty word_id");
            if (!index_.emplace(w.word_id, i).second)
                throw ValidationError("lexicon", "duplicate word_id '" + w.word_id + "'");
            if (!ranks.insert(w.presentation_rank).second)
                throw ValidationError("lexicon", "duplicate presentation rank " + std::to_string(w.presentation_rank));
        }
    }

    const std::vector<WordEntry>& words() const { return words_; }
    std::size_t size() const { return words_.size(); }

    const WordEntry* find(std::string_view id) const {
        auto it = index_.find(std::string(id));
        return it == index_.end() ? nullptr : &words_[it->second];
    }
    bool contains(std::string_view id) const { return find(id) != nullptr; }

    std::vector<WordId> ids(std::optional<WordKind> kind = std::nullopt) const {
        std::vector<WordId> out;
        for (const auto& w : words_)
            if (!kind || w.kind == *kind) out.push_back(w.word_id);
        return out;
    }

private:
    std::vector<WordEntry> words_;  // presentation order
    std::map<std::string, std::size_t> index_;
};

struct SessionFile {
    Person person;
    std::vector<RatingAnswer> answers;  // presentation order
    std::string format_version{kSessionFormatVersion};

    friend bool operator==(const SessionFile&, const SessionFile&) = default;
};

// Validates a session against the lexicon, sorts answers by presentation rank and
// recomputes the person's average answer duration.
inline void validate_session(SessionFile& s, const Lexicon& lexicon, const std::string& where = "session") {
    const auto& pid = s.person.person_id;
    if (pid.empty()) throw ValidationError(where, "empty person_id");
    if (s.person.children_count < 0)
        throw ValidationError(where, "person '" + pid + "': negative children_count");
    if (s.person.age < 0) throw ValidationError(where, "person '" + pid + "': negative age");
    std::set<WordId> seen;
    for (const auto& a : s.answers) {
        if (a.person_id != pid)
            throw ValidationError(where, "answer for word '" + a.word_id + "' belongs to person '" + a.person_id +
                                             "', expected '" + pid + "'");
        const WordEntry* w = lexicon.find(a.word_id);
        if (!w) throw ValidationError(where, "person '" + pid + "': unknown word '" + a.word_id + "'");
        if (w->presentation_rank != a.rank)
            throw ValidationError(where, "person '" + pid + "', word '" + a.word_id + "': rank " +
                                             std::to_string(a.rank) + " differs from lexicon rank " +
                                             std::to_string(w->presentation_rank));
        if (!seen.insert(a.word_id).second)
            throw ValidationError(where, "person '" + pid + "': duplicate answer for word '" + a.word_id + "'");
        for (auto d : kDimensions) {
            const auto i = static_cast<std::size_t>(d);
            if (a.raw[i] < 1 || a.raw[i] > 5)
                throw ValidationError(where, "person '" + pid + "', word '" + a.word_id + "', " +
                                                 std::string(dimension_name(d)) + ": raw value " +
                                                 std::to_string(a.raw[i]) + " outside 1..5");
            if (!(a.response_time_s[i] >= 0.0))
                throw ValidationError(where, "person '" + pid + "', word '" + a.word_id + "', " +
                                                 std::string(dimension_name(d)) + ": negative response time");
        }
    }
    for (const auto& w : lexicon.words())
        if (!seen.count(w.word_id))
            throw ValidationError(where, "person '" + pid + "': missing answer for word '" + w.word_id + "'");
    std::sort(s.answers.begin(), s.answers.end(),
              [](const RatingAnswer& a, const RatingAnswer& b) { return a.rank < b.rank; });
    double total = 0.0;
    for (const auto& a : s.answers) total += a.total_response_time_s();
    s.person.avg_answer_duration_s = s.answers.empty() ? 0.0 : total / static_cast<double>(s.answers.size());
}

// All sessions of one study plus its lexicon. Built once, then read-only.
struct Cohort {
    Lexicon lexicon;
    std::vector<SessionFile> sessions;  // sorted by person_id

    const SessionFile* find(std::string_view person_id) const {
        auto it = std::lower_bound(sessions.begin(), sessions.end(), person_id,
                                   [](const SessionFile& s, std::string_view id) { return s.person.person_id < id; });
        return it != sessions.end() && it->person.person_id == person_id ? &*it : nullptr;
    }
    std::vector<Person> persons() const {
        std::vector<Person> out;
        out.reserve(sessions.size());
        for (const auto& s : sessions) out.push_back(s.person);
        return out;
    }
    std::size_t total_answers() const {
        std::size_t n = 0;
        for (const auto& s : sessions) n += s.answers.size();
        return n;
    }
};

inline Cohort make_cohort(Lexicon lexicon, std::vector<SessionFile> sessions) {
    Cohort c{std::move(lexicon), std::move(sessions)};
    std::sort(c.sessions.begin(), c.sessions.end(),
              [](const SessionFile& a, const SessionFile& b) { return a.person.person_id < b.person.person_id; });
    for (std::size_t i = 1; i < c.sessions.size(); ++i)
        if (c.sessions[i].person.person_id == c.sessions[i - 1].person.person_id)
            throw ValidationError("cohort", "duplicate person '" + c.sessions[i].person.person_id + "'");
    for (auto& s : c.sessions) validate_session(s, c.lexicon, "person " + s.person.person_id);
    return c;
}

// ---- flat-file formats -------------------------------------------------------

inline Lexicon parse_lexicon_csv(std::string_view text, std::string source = "lexicon.csv") {
    const auto t = csv::parse(text, std::move(source));
    const auto c_id = t.column("word_id"), c_surface = t.column("surface"), c_gloss = t.column("gloss"),
               c_kind = t.column("kind"), c_rank = t.column("rank");
    std::vector<WordEntry> words;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto where = t.where(r);
        WordEntry w;
        w.word_id = row[c_id];
        w.surface = row[c_surface];
        w.gloss = row[c_gloss];
        try {
            w.kind = parse_word_kind(row[c_kind]);
        } catch (const ValidationError& e) {
            throw ValidationError(where, e.what());
        }
        w.presentation_rank = static_cast<int>(csv::to_int(row[c_rank], where, "rank"));
        words.push_back(std::move(w));
    }
    try {
        return Lexicon(std::move(words));
    } catch (const ValidationError& e) {
        throw ValidationError(t.source, e.what());
    }
}

inline Timestamp parse_timestamp_at(std::string_view s, const std::string& where) {
    try {
        return Timestamp::parse(s);
    } catch (const ValidationError& e) {
        throw ValidationError(where, e.what());
    }
}

inline std::vector<Person> parse_persons_csv(std::string_view text, std::string source = "persons.csv") {
    const auto t = csv::parse(text, std::move(source));
    const auto c_id = t.column("person_id"), c_gender = t.column("gender"), c_age = t.column("age"),
               c_children = t.column("children_count"), c_lang = t.column("native_language"),
               c_start = t.column("session_start_iso8601");
    std::vector<Person> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto where = t.where(r);
        Person p;
        p.person_id = row[c_id];
        if (p.person_id.empty()) throw ValidationError(where, "empty person_id");
        try {
            p.gender = parse_gender(row[c_gender]);
        } catch (const ValidationError& e) {
            throw ValidationError(where, e.what());
        }
        p.age = static_cast<int>(csv::to_int(row[c_age], where, "age"));
        p.children_count = static_cast<int>(csv::to_int(row[c_children], where, "children_count"));
        if (p.children_count < 0) throw ValidationError(where, "children_count must be >= 0");
        p.native_language = row[c_lang];
        p.session_start = parse_timestamp_at(row[c_start], where);
        out.push_back(std::move(p));
    }
    return out;
}

inline std::vector<RatingAnswer> parse_sessions_csv(std::string_view text, std::string source = "sessions.csv") {
    const auto t = csv::parse(text, std::move(source));
    const auto c_pid = t.column("person_id"), c_wid = t.column("word_id"), c_rank = t.column("rank");
    const std::array<std::size_t, 3> c_raw{t.column("pleasure_raw"), t.column("arousal_raw"),
                                           t.column("dominance_raw")};
    const std::array<std::size_t, 3> c_rt{t.column("rt_p_s"), t.column("rt_a_s"), t.column("rt_d_s")};
    const auto c_shown = t.column("shown_at_iso8601");
    std::vector<RatingAnswer> out;
    out.reserve(t.rows.size());
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto where = t.where(r);
        RatingAnswer a;
        a.person_id = row[c_pid];
        a.word_id = row[c_wid];
        a.rank = static_cast<int>(csv::to_int(row[c_rank], where, "rank"));
        for (std::size_t i = 0; i < 3; ++i) {
            const auto name = t.header[c_raw[i]];
            const auto v = csv::to_int(row[c_raw[i]], where, name);
            if (v < 1 || v > 5)
                throw ValidationError(where, "person '" + a.person_id + "', word '" + a.word_id + "', " +
                                                 std::string(dimension_name(kDimensions[i])) + ": raw value " +
                                                 std::to_string(v) + " outside 1..5");
            a.raw[i] = static_cast<int>(v);
            a.response_time_s[i] = csv::to_double(row[c_rt[i]], where, t.header[c_rt[i]]);
            if (a.response_time_s[i] < 0.0) throw ValidationError(where, t.header[c_rt[i]] + " must be >= 0");
        }
        a.shown_at = parse_timestamp_at(row[c_shown], where);
        out.push_back(std::move(a));
    }
    return out;
}

inline Cohort assemble_cohort(Lexicon lexicon, const std::vector<Person>& persons,
                              const std::vector<RatingAnswer>& answers) {
    std::map<PersonId, SessionFile> by_person;
    for (const auto& p : persons) {
        if (by_person.count(p.person_id)) throw ValidationError("persons", "duplicate person '" + p.person_id + "'");
        by_person[p.person_id].person = p;
    }
    for (const auto& a : answers) {
        auto it = by_person.find(a.person_id);
        if (it == by_person.end())
            throw ValidationError("sessions", "answer for unknown person '" + a.person_id + "'");
        it->second.answers.push_back(a);
    }
    std::vector<SessionFile> sessions;
    for (auto& [id, s] : by_person) sessions.push_back(std::move(s));
    return make_cohort(std::move(lexicon), std::move(sessions));
}

inline Cohort load_cohort(const std::string& lexicon_path, const std::string& persons_path,
                          const std::string& sessions_path) {
    return assemble_cohort(parse_lexicon_csv(csv::read_file(lexicon_path), lexicon_path),
                           parse_persons_csv(csv::read_file(persons_path), persons_path),
                           parse_sessions_csv(csv::read_file(sessions_path), sessions_path));
}

inline std::string shortest(double v) { return fmt::format("{}", v); }

inline std::string write_lexicon_csv(const Lexicon& lex) {
    csv::Writer w({"word_id", "surface", "gloss", "kind", "rank"});
    for (const auto& e : lex.words())
        w.row({e.word_id, e.surface, e.gloss, std::string(to_string(e.kind)), std::to_string(e.presentation_rank)});
    return w.str();
}

inline std::string write_persons_csv(const std::vector<Person>& persons) {
    csv::Writer w({"person_id", "gender", "age", "children_count", "native_language", "session_start_iso8601"});
    for (const auto& p : persons)
        w.row({p.person_id, std::string(to_string(p.gender)), std::to_string(p.age), std::to_string(p.children_count),
               p.native_language, p.session_start.text});
    return w.str();
}

inline std::string write_sessions_csv(const std::vector<SessionFile>& sessions) {
    csv::Writer w({"person_id", "word_id", "rank", "pleasure_raw", "arousal_raw", "dominance_raw", "rt_p_s", "rt_a_s",
                   "rt_d_s", "shown_at_iso8601"});
    for (const auto& s : sessions)
        for (const auto& a : s.answers)
            w.row({a.person_id, a.word_id, std::to_string(a.rank), std::to_string(a.raw[0]), std::to_string(a.raw[1]),
                   std::to_string(a.raw[2]), shortest(a.response_time_s[0]), shortest(a.response_time_s[1]),
                   shortest(a.response_time_s[2]), a.shown_at.text});
    return w.str();
}

// ---- session JSON v1 ---------------------------------------------------------

namespace detail {

struct JsonReader {
    const nlohmann::json& node;
    std::string path;

    JsonReader at(std::string_view key) const {
        if (!node.is_object()) throw ValidationError(path.empty() ? "/" : path, "expected an object");
        auto it = node.find(std::string(key));
        if (it == node.end()) throw ValidationError(path + "/" + std::string(key), "missing field");
        return {*it, path + "/" + std::string(key)};
    }
    JsonReader at(std::size_t i) const { return {node.at(i), path + "/" + std::to_string(i)}; }

    std::string str() const {
        if (!node.is_string()) throw ValidationError(path, "expected a string");
        return node.get<std::string>();
    }
    long long integer() const {
        if (node.is_number_integer()) return node.get<long long>();
        if (node.is_number_float()) {
            const double d = node.get<double>();
            if (std::floor(d) == d) return static_cast<long long>(d);
        }
        throw ValidationError(path, "expected an integer");
    }
    double real() const {
        if (!node.is_number()) throw ValidationError(path, "expected a number");
        return node.get<double>();
    }
    Timestamp timestamp() const {
        auto s = str();
        try {
            return Timestamp::parse(s);
        } catch (const ValidationError& e) {
            throw ValidationError(path, e.what());
        }
    }
};

}  // namespace detail

// Parses a session JSON document; when `lexicon` is given the session is fully
// validated against it (coverage, duplicates, ranks).
inline SessionFile parse_session_json(std::string_view text, const Lexicon* lexicon = nullptr) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError("/", std::string("invalid JSON: ") + e.what());
    }
    const detail::JsonReader root{doc, ""};
    SessionFile s;
    s.format_version = root.at("version").str();
    if (s.format_version != kSessionFormatVersion)
        throw ValidationError("/version", "unsupported session format '" + s.format_version + "'");
    const auto p = root.at("person");
    s.person.person_id = p.at("person_id").str();
    if (s.person.person_id.empty()) throw ValidationError("/person/person_id", "empty person_id");
    try {
        s.person.gender = parse_gender(p.at("gender").str());
    } catch (const ValidationError& e) {
        if (!e.where().empty()) throw;
        throw ValidationError("/person/gender", e.what());
    }
    s.person.age = static_cast<int>(p.at("age").integer());
    if (s.person.age < 0) throw ValidationError("/person/age", "must be >= 0");
    s.person.children_count = static_cast<int>(p.at("children_count").integer());
    if (s.person.children_count < 0) throw ValidationError("/person/children_count", "must be >= 0");
    s.person.native_language = p.at("native_language").str();
    s.person.session_start = p.at("session_start_iso8601").timestamp();

    const auto answers = root.at("answers");
    if (!answers.node.is_array()) throw ValidationError("/answers", "expected an array");
    static constexpr std::array<const char*, 3> kRaw{"pleasure_raw", "arousal_raw", "dominance_raw"};
    static constexpr std::array<const char*, 3> kRt{"rt_p_s", "rt_a_s", "rt_d_s"};
    for (std::size_t i = 0; i < answers.node.size(); ++i) {
        const auto a = answers.at(i);
        RatingAnswer r;
        r.person_id = s.person.person_id;
        r.word_id = a.at("word_id").str();
        r.rank = static_cast<int>(a.at("rank").integer());
        for (std::size_t d = 0; d < 3; ++d) {
            const auto raw = a.at(kRaw[d]);
            const auto v = raw.integer();
            if (v < 1 || v > 5)
                throw ValidationError(raw.path, "word '" + r.word_id + "': raw value " + std::to_string(v) +
                                                    " outside 1..5");
            r.raw[d] = static_cast<int>(v);
            const auto rt = a.at(kRt[d]);
            r.response_time_s[d] = rt.real();
            if (!(r.response_time_s[d] >= 0.0)) throw ValidationError(rt.path, "response time must be >= 0");
        }
        r.shown_at = a.at("shown_at_iso8601").timestamp();
        s.answers.push_back(std::move(r));
    }
    if (lexicon) {
        validate_session(s, *lexicon, "session " + s.person.person_id);
    } else {
        std::set<WordId> seen;
        double total = 0.0;
        for (const auto& a : s.answers) {
            if (!seen.insert(a.word_id).second)
                throw ValidationError("/answers", "duplicate answer for word '" + a.word_id + "'");
            total += a.total_response_time_s();
        }
        std::stable_sort(s.answers.begin(), s.answers.end(),
                         [](const RatingAnswer& a, const RatingAnswer& b) { return a.rank < b.rank; });
        s.person.avg_answer_duration_s = s.answers.empty() ? 0.0 : total / static_cast<double>(s.answers.size());
    }
    return s;
}

inline std::string serialize_session_json(const SessionFile& s) {
    nlohmann::ordered_json doc;
    doc["version"] = s.format_version;
    auto& p = doc["person"];
    p["person_id"] = s.person.person_id;
    p["gender"] = std::string(to_string(s.person.gender));
    p["age"] = s.person.age;
    p["children_count"] = s.person.children_count;
    p["native_language"] = s.person.native_language;
    p["session_start_iso8601"] = s.person.session_start.text;
    auto& answers = doc["answers"] = nlohmann::ordered_json::array();
    for (const auto& a : s.answers) {
        nlohmann::ordered_json j;
        j["word_id"] = a.word_id;
        j["rank"] = a.rank;
        j["pleasure_raw"] = a.raw[0];
        j["arousal_raw"] = a.raw[1];
        j["dominance_raw"] = a.raw[2];
        j["rt_p_s"] = a.response_time_s[0];
        j["rt_a_s"] = a.response_time_s[1];
        j["rt_d_s"] = a.response_time_s[2];
        j["shown_at_iso8601"] = a.shown_at.text;
        answers.push_back(std::move(j));
    }
    return doc.dump(2) + "\n";
}

// ---- external norm sets and lemma mappings -----------------------------------

struct NormRow {
    double valence{0.0};
    double arousal{0.0};
    std::optional<double> dominance;
};

// An external affective norm collection on its native scale. The scale is always
// declared by configuration, never inferred from the data.
struct ExternalNormSet {
    std::string name;
    double scale_lo{1.0};
    double scale_hi{9.0};
    bool dominance_present{true};
    std::map<std::string, NormRow> rows;
};

inline double rescale_external(double v, double lo, double hi) {
    if (!(lo < hi)) throw ValidationError("", "norm scale requires lo < hi");
    if (v < lo || v > hi)
        throw ValidationError("", fmt::format("value {} outside declared scale [{}, {}]", v, lo, hi));
    if (v == lo) return kScaleMin;
    if (v == hi) return kScaleMax;
    return 4.0 * (v - lo) / (hi - lo) - 2.0;
}

inline double rescale_external(double v, const ExternalNormSet& set) {
    try {
        return rescale_external(v, set.scale_lo, set.scale_hi);
    } catch (const ValidationError& e) {
        throw ValidationError(set.name, e.what());
    }
}

inline ExternalNormSet parse_norms_csv(std::string_view text, std::string name, double lo, double hi,
                                       bool dominance_present, std::string source = "norms.csv") {
    if (!(lo < hi)) throw ValidationError(source, "scale_lo must be < scale_hi");
    const auto t = csv::parse(text, std::move(source));
    const auto c_word = t.column("word"), c_val = t.column("valence"), c_aro = t.column("arousal");
    const bool has_dom_col = t.has_column("dominance");
    if (dominance_present && !has_dom_col)
        throw ValidationError(t.source, "dominance declared present but no dominance column");
    const auto c_dom = has_dom_col ? t.column("dominance") : 0;
    ExternalNormSet set{std::move(name), lo, hi, dominance_present, {}};
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto where = t.where(r);
        auto check = [&](double v, std::string_view field) {
            if (v < lo || v > hi)
                throw ValidationError(where, fmt::format("{} {} outside declared scale [{}, {}]", field, v, lo, hi));
            return v;
        };
        NormRow nr;
        nr.valence = check(csv::to_double(row[c_val], where, "valence"), "valence");
        nr.arousal = check(csv::to_double(row[c_aro], where, "arousal"), "arousal");
        if (dominance_present) nr.dominance = check(csv::to_double(row[c_dom], where, "dominance"), "dominance");
        if (!set.rows.emplace(row[c_word], nr).second)
            throw ValidationError(where, "duplicate word '" + row[c_word] + "'");
    }
    return set;
}

struct MappingRow {
    WordId word_id;
    std::string external_word;
    std::string category;
};

using LemmaMapping = std::vector<MappingRow>;

inline LemmaMapping parse_mapping_csv(std::string_view text, const Lexicon& lexicon,
                                      std::string source = "mapping.csv") {
    const auto t = csv::parse(text, std::move(source));
    const auto c_id = t.column("word_id"), c_ext = t.column("external_word");
    const bool has_cat = t.has_column("category");
    const auto c_cat = has_cat ? t.column("category") : 0;
    LemmaMapping out;
    std::set<std::pair<WordId, std::string>> seen;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        if (!lexicon.contains(row[c_id]))
            throw ValidationError(t.where(r), "word_id '" + row[c_id] + "' not in lexicon");
        if (!seen.emplace(row[c_id], row[c_ext]).second)
            throw ValidationError(t.where(r), "duplicate mapping " + row[c_id] + " -> " + row[c_ext]);
        out.push_back({row[c_id], row[c_ext], has_cat ? row[c_cat] : std::string{}});
    }
    return out;
}

struct MatchedPair {
    WordId word_id;
    std::string external_word;
    std::string category;
    EmotionalVector internal;
    EmotionalVector external;  // rescaled to [-2,2]; dominance 0 when absent
};

struct NormMatch {
    std::string norm_set;
    bool dominance_present{true};
    std::vector<MatchedPair> pairs;
    std::vector<WordId> missing_internal;         // mapped ids with no internal average
    std::vector<std::string> missing_external;    // mapped external words absent from the norm set
};

inline NormMatch match_rows(const LemmaMapping& mapping, const std::map<WordId, EmotionalVector>& internal,
                            const ExternalNormSet& external) {
    NormMatch m{external.name, external.dominance_present, {}, {}, {}};
    for (const auto& row : mapping) {
        auto in = internal.find(row.word_id);
        auto ex = external.rows.find(row.external_word);
        if (in == internal.end()) m.missing_internal.push_back(row.word_id);
        if (ex == external.rows.end()) m.missing_external.push_back(row.external_word);
        if (in == internal.end() || ex == external.rows.end()) continue;
        EmotionalVector ev{rescale_external(ex->second.valence, external),
                           rescale_external(ex->second.arousal, external),
                           ex->second.dominance ? rescale_external(*ex->second.dominance, external) : 0.0};
        m.pairs.push_back({row.word_id, row.external_word, row.category, in->second, ev});
    }
    return m;
}

// The (internal, external) series of one dimension over the matched pairs.
inline std::pair<std::vector<double>, std::vector<double>> matched_series(const NormMatch& m, Dimension d) {
    if (d == Dimension::dominance && !m.dominance_present)
        throw Error("norm set '" + m.norm_set + "' has no dominance ratings; dominance comparison refused");
    std::pair<std::vector<double>, std::vector<double>> out;
    for (const auto& p : m.pairs) {
        out.first.push_back(p.internal[d]);
        out.second.push_back(p.external[d]);
    }
    return out;
}

// Cosine similarity per matched pair; needs all three dimensions.
inline std::vector<double> matched_cosines(const NormMatch& m) {
    if (!m.dominance_present)
        throw Error("norm set '" + m.norm_set + "' has no dominance ratings; 3-D cosine comparison refused");
    std::vector<double> out;
    for (const auto& p : m.pairs) out.push_back(cosine_similarity(p.internal, p.external));
    return out;
}

}  // namespace affect

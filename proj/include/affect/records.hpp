#pragma once

#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "affect/error.hpp"
#include "affect/vector.hpp"

namespace affect {

using PersonId = std::string;
using WordId = std::string;

// ISO-8601 wall-clock timestamp: YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM].
// The original text is kept so serialization is lossless.
struct Timestamp {
    std::string text;
    std::int64_t epoch_ms{0};        // UTC instant, offset applied
    std::int32_t seconds_of_day{0};  // wall-clock time of day as written, offset ignored
    std::int32_t millis{0};

    friend bool operator==(const Timestamp& a, const Timestamp& b) { return a.text == b.text; }

    double time_of_day_s() const { return seconds_of_day + millis / 1000.0; }

    static Timestamp parse(std::string_view s) {
        auto fail = [&]() -> Timestamp {
            throw ValidationError("", "malformed ISO-8601 timestamp '" + std::string(s) + "'");
        };
        auto num = [&](std::size_t pos, std::size_t len) -> int {
            if (pos + len > s.size()) fail();
            int v = 0;
            for (std::size_t i = pos; i < pos + len; ++i) {
                if (s[i] < '0' || s[i] > '9') fail();
                v = v * 10 + (s[i] - '0');
            }
            return v;
        };
        if (s.size() < 19 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' ') || s[13] != ':' ||
            s[16] != ':')
            fail();
        const int year = num(0, 4), month = num(5, 2), day = num(8, 2);
        const int hour = num(11, 2), minute = num(14, 2), second = num(17, 2);
        if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month) || hour > 23 || minute > 59 ||
            second > 60)
            fail();
        std::size_t pos = 19;
        int ms = 0;
        if (pos < s.size() && s[pos] == '.') {
            ++pos;
            std::size_t digits = 0;
            int scale = 100;
            while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
                if (digits < 3) ms += (s[pos] - '0') * scale;
                scale /= 10;
                ++digits;
                ++pos;
            }
            if (digits == 0) fail();
        }
        int offset_min = 0;
        if (pos < s.size()) {
            if (s[pos] == 'Z' && pos + 1 == s.size()) {
                ++pos;
            } else if ((s[pos] == '+' || s[pos] == '-') && pos + 6 == s.size() && s[pos + 3] == ':') {
                const int sign = s[pos] == '+' ? 1 : -1;
                const int oh = num(pos + 1, 2), om = num(pos + 4, 2);
                if (oh > 23 || om > 59) fail();
                offset_min = sign * (oh * 60 + om);
                pos += 6;
            } else {
                fail();
            }
        }
        Timestamp t;
        t.text = std::string(s);
        t.seconds_of_day = hour * 3600 + minute * 60 + second;
        t.millis = ms;
        const std::int64_t days = days_from_civil(year, month, day);
        t.epoch_ms = ((days * 86400 + t.seconds_of_day) - std::int64_t{offset_min} * 60) * 1000 + ms;
        return t;
    }

private:
    static constexpr int days_in_month(int y, int m) {
        constexpr std::array<int, 12> kDays{31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
        const bool leap = (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
        return m == 2 && leap ? 29 : kDays[static_cast<std::size_t>(m - 1)];
    }
    // Howard Hinnant's days_from_civil.
    static constexpr std::int64_t days_from_civil(int y, int m, int d) {
        y -= m <= 2;
        const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
        const unsigned yoe = static_cast<unsigned>(y - era * 400);
        const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + static_cast<unsigned>(d) - 1;
        const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
        return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
    }
};

struct RatingAnswer {
    PersonId person_id;
    WordId word_id;
    int rank{0};
    std::array<int, 3> raw{3, 3, 3};               // 1..5, (pleasure, arousal, dominance)
    std::array<double, 3> response_time_s{0, 0, 0};  // seconds
    Timestamp shown_at;

    EmotionalVector vector() const {
        return {static_cast<double>(rescale_raw_answer(raw[0])), static_cast<double>(rescale_raw_answer(raw[1])),
                static_cast<double>(rescale_raw_answer(raw[2]))};
    }
    double total_response_time_s() const { return response_time_s[0] + response_time_s[1] + response_time_s[2]; }

    friend bool operator==(const RatingAnswer&, const RatingAnswer&) = default;
};

enum class Gender { woman, man };

inline std::string_view to_string(Gender g) { return g == Gender::woman ? "woman" : "man"; }

inline Gender parse_gender(std::string_view s) {
    if (s == "woman" || s == "female" || s == "f" || s == "w") return Gender::woman;
    if (s == "man" || s == "male" || s == "m") return Gender::man;
    throw ValidationError("", "unknown gender '" + std::string(s) + "' (expected woman|man)");
}

struct Person {
    PersonId person_id;
    Gender gender{Gender::woman};
    int age{0};
    int children_count{0};
    std::string native_language;
    Timestamp session_start;
    double avg_answer_duration_s{0.0};  // always recomputed from answers

    friend bool operator==(const Person&, const Person&) = default;
};

enum class WordKind { emotional_adjective, pregnancy_noun };

inline std::string_view to_string(WordKind k) {
    return k == WordKind::emotional_adjective ? "emotional_adjective" : "pregnancy_noun";
}

inline WordKind parse_word_kind(std::string_view s) {
    if (s == "emotional_adjective" || s == "adjective") return WordKind::emotional_adjective;
    if (s == "pregnancy_noun" || s == "noun") return WordKind::pregnancy_noun;
    throw ValidationError("", "unknown word kind '" + std::string(s) + "'");
}

struct WordEntry {
    WordId word_id;
    std::string surface;
    std::string gloss;
    WordKind kind{WordKind::emotional_adjective};
    int presentation_rank{0};

    friend bool operator==(const WordEntry&, const WordEntry&) = default;
};

struct AverageVector {
    WordId word_id;
    std::string subgroup_id;
    EmotionalVector vector;
    std::size_t n{0};
};

}  // namespace affect

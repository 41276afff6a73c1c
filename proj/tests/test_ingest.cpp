#include <gtest/gtest.h>

#include <string>

#include "affect/ingest.hpp"
#include "test_util.hpp"

using namespace affect;

namespace {

std::string error_of(auto&& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

const char* kSessionsHeader =
    "person_id,word_id,rank,pleasure_raw,arousal_raw,dominance_raw,rt_p_s,rt_a_s,rt_d_s,shown_at_iso8601\n";
const char* kPersonsCsv =
    "person_id,gender,age,children_count,native_language,session_start_iso8601\n"
    "p1,woman,31,0,fi,2016-11-02T10:00:00Z\n";

std::string three_word_lexicon() {
    return "word_id,surface,gloss,kind,rank\n"
           "w1,iloinen,happy,emotional_adjective,1\n"
           "w2,surullinen,sad,emotional_adjective,2\n"
           "n1,raskaus,pregnancy,pregnancy_noun,3\n";
}

}  // namespace

TEST(Lexicon, ParsesAndOrdersByRank) {
    const auto lex = parse_lexicon_csv(
        "word_id,surface,gloss,kind,rank\nb,b,,emotional_adjective,2\na,a,,emotional_adjective,1\n");
    ASSERT_EQ(lex.size(), 2u);
    EXPECT_EQ(lex.words()[0].word_id, "a");
    EXPECT_EQ(lex.ids(WordKind::pregnancy_noun).size(), 0u);
}

TEST(Lexicon, RejectsDuplicates) {
    EXPECT_THROW(parse_lexicon_csv("word_id,surface,gloss,kind,rank\na,a,,adjective,1\na,a,,adjective,2\n"),
                 ValidationError);
    EXPECT_THROW(parse_lexicon_csv("word_id,surface,gloss,kind,rank\na,a,,adjective,1\nb,b,,adjective,1\n"),
                 ValidationError);
}

TEST(Sessions, FixtureSessionHas211AnswersAndDuration) {
    const auto& f = testutil::cohort_fixture();
    ASSERT_EQ(f.cohort.sessions.size(), 35u);
    const auto& s = f.cohort.sessions.front();
    EXPECT_EQ(s.answers.size(), 211u);
    double total = 0;
    for (const auto& a : s.answers) total += a.response_time_s[0] + a.response_time_s[1] + a.response_time_s[2];
    EXPECT_NEAR(s.person.avg_answer_duration_s, total / 211.0, 1e-12);
    EXPECT_GT(s.person.avg_answer_duration_s, 0.0);
}

TEST(Sessions, TotalAnswerCountIsPersonsTimesWords) {
    const auto& f = testutil::cohort_fixture();
    EXPECT_EQ(f.cohort.total_answers(), 35u * 211u);
    std::size_t adjective_answers = 0;
    for (const auto& s : f.cohort.sessions)
        for (const auto& a : s.answers)
            if (f.cohort.lexicon.find(a.word_id)->kind == WordKind::emotional_adjective) ++adjective_answers;
    EXPECT_EQ(adjective_answers, 6825u);
}

TEST(Sessions, MissingWordIsNamed) {
    const auto lex = parse_lexicon_csv(three_word_lexicon());
    const std::string sessions = std::string(kSessionsHeader) +
                                 "p1,w1,1,3,3,3,1,1,1,2016-11-02T10:00:01Z\n"
                                 "p1,n1,3,3,3,3,1,1,1,2016-11-02T10:00:04Z\n";
    const auto msg = error_of([&] { assemble_cohort(lex, parse_persons_csv(kPersonsCsv), parse_sessions_csv(sessions)); });
    EXPECT_NE(msg.find("w2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("missing"), std::string::npos) << msg;
}

TEST(Sessions, RawSixIsRangeErrorWithRowAndDimension) {
    const std::string sessions = std::string(kSessionsHeader) + "p1,w1,1,3,6,3,1,1,1,2016-11-02T10:00:01Z\n";
    const auto msg = error_of([&] { parse_sessions_csv(sessions); });
    EXPECT_NE(msg.find("sessions.csv:2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("arousal"), std::string::npos) << msg;
    EXPECT_NE(msg.find("outside 1..5"), std::string::npos) << msg;
}

TEST(Sessions, DuplicateAnswerRejected) {
    const auto lex = parse_lexicon_csv(three_word_lexicon());
    const std::string sessions = std::string(kSessionsHeader) +
                                 "p1,w1,1,3,3,3,1,1,1,2016-11-02T10:00:01Z\n"
                                 "p1,w1,1,3,3,3,1,1,1,2016-11-02T10:00:02Z\n"
                                 "p1,w2,2,3,3,3,1,1,1,2016-11-02T10:00:03Z\n"
                                 "p1,n1,3,3,3,3,1,1,1,2016-11-02T10:00:04Z\n";
    const auto msg = error_of([&] { assemble_cohort(lex, parse_persons_csv(kPersonsCsv), parse_sessions_csv(sessions)); });
    EXPECT_NE(msg.find("duplicate"), std::string::npos) << msg;
}

TEST(Sessions, MalformedTimestampHasCoordinates) {
    const std::string sessions = std::string(kSessionsHeader) +
                                 "p1,w1,1,3,3,3,1,1,1,2016-11-02T10:00:01Z\n"
                                 "p1,w2,2,3,3,3,1,1,1,2016-13-02T10:00:01Z\n";
    const auto msg = error_of([&] { parse_sessions_csv(sessions); });
    EXPECT_NE(msg.find("sessions.csv:3"), std::string::npos) << msg;
    EXPECT_NE(msg.find("timestamp"), std::string::npos) << msg;
}

TEST(Sessions, WrongHeaderIsRejected) {
    EXPECT_THROW(parse_sessions_csv("person_id,word_id\np1,w1\n"), ValidationError);
}

TEST(Sessions, CsvRoundTrip) {
    const auto& f = testutil::cohort_fixture();
    const auto again = assemble_cohort(parse_lexicon_csv(write_lexicon_csv(f.cohort.lexicon)),
                                       parse_persons_csv(write_persons_csv(f.cohort.persons())),
                                       parse_sessions_csv(write_sessions_csv(f.cohort.sessions)));
    ASSERT_EQ(again.sessions.size(), f.cohort.sessions.size());
    for (std::size_t i = 0; i < again.sessions.size(); ++i) EXPECT_EQ(again.sessions[i], f.cohort.sessions[i]);
}

TEST(SessionJson, RoundTripIsIdentity) {
    const auto& f = testutil::cohort_fixture();
    for (const auto& s : f.cohort.sessions) {
        const auto text = serialize_session_json(s);
        const auto back = parse_session_json(text, &f.cohort.lexicon);
        EXPECT_EQ(back, s);
        EXPECT_EQ(serialize_session_json(back), text);
    }
}

TEST(SessionJson, RoundTripWithoutLexicon) {
    const auto& s = testutil::cohort_fixture().cohort.sessions[3];
    EXPECT_EQ(parse_session_json(serialize_session_json(s)), s);
}

TEST(SessionJson, CarriesVersionV1) {
    const auto& s = testutil::cohort_fixture().cohort.sessions[0];
    const auto j = nlohmann::json::parse(serialize_session_json(s));
    EXPECT_EQ(j.at("version"), "v1");
    EXPECT_EQ(j.at("answers").size(), 211u);
    EXPECT_TRUE(j.at("person").contains("session_start_iso8601"));
}

TEST(SessionJson, ErrorsCarryFieldPath) {
    const auto& s = testutil::cohort_fixture().cohort.sessions[0];
    auto j = nlohmann::json::parse(serialize_session_json(s));
    j["answers"][3]["pleasure_raw"] = 0;
    try {
        parse_session_json(j.dump());
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.where(), "/answers/3/pleasure_raw");
    }
    j = nlohmann::json::parse(serialize_session_json(s));
    j["person"].erase("gender");
    try {
        parse_session_json(j.dump());
        FAIL() << "expected a validation error";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.where(), "/person/gender");
    }
    j = nlohmann::json::parse(serialize_session_json(s));
    j["version"] = "v2";
    EXPECT_THROW(parse_session_json(j.dump()), ValidationError);
    EXPECT_THROW(parse_session_json("{not json"), ValidationError);
}

TEST(SessionJson, MissingWordAgainstLexicon) {
    const auto& f = testutil::cohort_fixture();
    auto j = nlohmann::json::parse(serialize_session_json(f.cohort.sessions[0]));
    const std::string dropped = j["answers"][10]["word_id"];
    j["answers"].erase(10);
    const auto msg = error_of([&] { parse_session_json(j.dump(), &f.cohort.lexicon); });
    EXPECT_NE(msg.find(dropped), std::string::npos) << msg;
}

TEST(RescaleExternal, Examples) {
    EXPECT_EQ(rescale_external(5, 1, 9), 0.0);
    EXPECT_EQ(rescale_external(9, 1, 9), 2.0);
    EXPECT_EQ(rescale_external(1, 1, 9), -2.0);
    EXPECT_EQ(rescale_external(7, 1, 9), 1.0);
    EXPECT_THROW(rescale_external(9.5, 1, 9), ValidationError);
    EXPECT_THROW(rescale_external(0.5, 1, 9), ValidationError);
    EXPECT_THROW(rescale_external(1, 2, 2), ValidationError);
}

TEST(RescaleExternal, MonotoneAndEndpointExact) {
    for (auto [lo, hi] : {std::pair{1.0, 9.0}, std::pair{1.0, 7.0}, std::pair{-3.0, 3.0}, std::pair{0.0, 1.0}}) {
        EXPECT_EQ(rescale_external(lo, lo, hi), -2.0);
        EXPECT_EQ(rescale_external(hi, lo, hi), 2.0);
        double prev = -3.0;
        for (int i = 0; i <= 100; ++i) {
            const double v = rescale_external(lo + (hi - lo) * i / 100.0, lo, hi);
            EXPECT_GT(v, prev);
            prev = v;
        }
    }
}

TEST(Norms, ParseValidatesDeclaredScale) {
    const std::string csv = "word,valence,arousal,dominance\ncouple,7,4,5\n";
    const auto set = parse_norms_csv(csv, "n", 1, 9, true);
    EXPECT_EQ(set.rows.at("couple").valence, 7.0);
    EXPECT_THROW(parse_norms_csv("word,valence,arousal,dominance\nx,10,4,5\n", "n", 1, 9, true), ValidationError);
    EXPECT_THROW(parse_norms_csv("word,valence,arousal\nx,5,4\n", "n", 1, 9, true), ValidationError);
    EXPECT_NO_THROW(parse_norms_csv("word,valence,arousal\nx,5,4\n", "n", 1, 9, false));
}

TEST(MatchRows, SixteenPregnancyPairs) {
    const auto& f = testutil::cohort_fixture();
    std::map<WordId, EmotionalVector> internal;
    for (const auto& n : synthetic::noun_seeds()) internal[n.id] = n.latent;
    const auto m = match_rows(f.mapping, internal, f.norms);
    EXPECT_EQ(m.pairs.size(), 16u);
    EXPECT_TRUE(m.missing_external.empty());
    for (const auto& p : m.pairs) EXPECT_TRUE(p.external.in_scale());
}

TEST(MatchRows, EmptyMappingAndReportedGap) {
    const auto& f = testutil::cohort_fixture();
    std::map<WordId, EmotionalVector> internal;
    for (const auto& n : synthetic::noun_seeds()) internal[n.id] = n.latent;
    EXPECT_TRUE(match_rows({}, internal, f.norms).pairs.empty());

    auto mapping = f.mapping;
    mapping[2].external_word = "no_such_lemma";
    const auto m = match_rows(mapping, internal, f.norms);
    EXPECT_EQ(m.pairs.size(), 15u);
    ASSERT_EQ(m.missing_external.size(), 1u);
    EXPECT_EQ(m.missing_external[0], "no_such_lemma");
}

TEST(MatchRows, DominanceRefusedWhenAbsent) {
    const auto lex = parse_lexicon_csv(three_word_lexicon());
    const auto set = parse_norms_csv("word,valence,arousal\nhappy,8,5\nsad,2,3\npreg,6,6\n", "pa", 1, 9, false);
    const auto mapping = parse_mapping_csv("word_id,external_word,category\nw1,happy,joy\nw2,sad,sadness\nn1,preg,\n", lex);
    const std::map<WordId, EmotionalVector> internal{{"w1", {1.5, 0.2, 0.1}}, {"w2", {-1.2, -0.5, -0.4}}, {"n1", {0.5, 0.3, 0}}};
    const auto m = match_rows(mapping, internal, set);
    EXPECT_EQ(m.pairs.size(), 3u);
    EXPECT_NO_THROW(matched_series(m, Dimension::pleasure));
    EXPECT_NO_THROW(matched_series(m, Dimension::arousal));
    EXPECT_THROW(matched_series(m, Dimension::dominance), Error);
    EXPECT_THROW(matched_cosines(m), Error);
}

TEST(Mapping, RejectsUnknownIdsAndDuplicates) {
    const auto lex = parse_lexicon_csv(three_word_lexicon());
    EXPECT_THROW(parse_mapping_csv("word_id,external_word,category\nzz,happy,\n", lex), ValidationError);
    EXPECT_THROW(parse_mapping_csv("word_id,external_word,category\nw1,happy,\nw1,happy,\n", lex), ValidationError);
    EXPECT_NO_THROW(parse_mapping_csv("word_id,external_word,category\nw1,happy,\nw1,glad,\n", lex));
}

TEST(Csv, QuotedFieldsAndBom) {
    const auto t = csv::parse("\xEF\xBB\xBF" "a,b\n\"x, y\",\"he said \"\"hi\"\"\"\n");
    ASSERT_EQ(t.rows.size(), 1u);
    EXPECT_EQ(t.column("a"), 0u);
    EXPECT_EQ(t.rows[0][0], "x, y");
    EXPECT_EQ(t.rows[0][1], "he said \"hi\"");
    EXPECT_THROW(csv::parse("a,b\n1,2,3\n"), ValidationError);
}

TEST(Csv, NumberFoldsNegativeZero) {
    EXPECT_EQ(csv::number(-0.0), "0.000000");
    EXPECT_EQ(csv::number(-1e-9, 3), "0.000");
    EXPECT_EQ(csv::number(1.23456789, 3), "1.235");
}

TEST(Timestamp, ParsesOffsetsAndFractions) {
    const auto a = Timestamp::parse("2016-11-02T10:00:00Z");
    const auto b = Timestamp::parse("2016-11-02T12:00:00+02:00");
    EXPECT_EQ(a.epoch_ms, b.epoch_ms);
    EXPECT_EQ(b.seconds_of_day, 12 * 3600);
    const auto c = Timestamp::parse("2016-11-02T07:45:30.250");
    EXPECT_DOUBLE_EQ(c.time_of_day_s(), 7 * 3600 + 45 * 60 + 30.25);
    EXPECT_THROW(Timestamp::parse("2016-02-30T00:00:00Z"), ValidationError);
    EXPECT_THROW(Timestamp::parse("yesterday"), ValidationError);
}

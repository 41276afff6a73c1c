#include <gtest/gtest.h>

#include <thread>

#include <nlohmann/json.hpp>

#include "affect/serve.hpp"
#include "test_util.hpp"

using namespace affect;
namespace fs = std::filesystem;

namespace {

const Lexicon& lexicon() { return testutil::cohort_fixture().cohort.lexicon; }

std::string payload(const std::string& id = "q01", const std::string& start = "2016-11-07T14:30:00+02:00") {
    return serialize_session_json(
        testutil::constant_session(lexicon(), id, Gender::woman, 1, {4, 2, 5}, start, 1.25));
}

}  // namespace

TEST(Collect, ValidSessionIsStoredAndReingestsIdentically) {
    const auto dir = testutil::temp_dir("collect-ok");
    const auto r = collect_session(payload(), dir, &lexicon());
    ASSERT_EQ(r.status, 201) << r.body;
    const auto j = nlohmann::json::parse(r.body);
    EXPECT_EQ(j.at("answers").get<int>(), 211);
    EXPECT_EQ(r.stored_path, "sessions/q01-2016-11-07T14-30-00-02-00.json");
    const auto back = parse_session_json(testutil::read_text(dir / r.stored_path), &lexicon());
    EXPECT_EQ(back, parse_session_json(payload(), &lexicon()));
    // No temporary files left next to the stored one.
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sessions")) ++files;
    EXPECT_EQ(files, 1u);
}

TEST(Collect, ResubmissionIsAConflict) {
    const auto dir = testutil::temp_dir("collect-dup");
    ASSERT_EQ(collect_session(payload(), dir, &lexicon()).status, 201);
    const auto before = testutil::read_text(dir / "sessions/q01-2016-11-07T14-30-00-02-00.json");
    EXPECT_EQ(collect_session(payload(), dir, &lexicon()).status, 409);
    EXPECT_EQ(testutil::read_text(dir / "sessions/q01-2016-11-07T14-30-00-02-00.json"), before);
    EXPECT_EQ(collect_session(payload("q01", "2016-11-08T09:00:00Z"), dir, &lexicon()).status, 201);
}

TEST(Collect, SchemaViolationNamesTheField) {
    const auto dir = testutil::temp_dir("collect-bad");
    auto j = nlohmann::json::parse(payload());
    j["answers"][3]["pleasure_raw"] = 0;
    const auto r = collect_session(j.dump(), dir, &lexicon());
    EXPECT_EQ(r.status, 400);
    EXPECT_EQ(nlohmann::json::parse(r.body).at("field"), "/answers/3/pleasure_raw");
    EXPECT_EQ(collect_session("not json", dir).status, 400);
    auto k = nlohmann::json::parse(payload());
    k["version"] = "v2";
    EXPECT_EQ(collect_session(k.dump(), dir).status, 400);
    EXPECT_FALSE(fs::exists(dir / "sessions") && !fs::is_empty(dir / "sessions"));
}

TEST(Collect, FileNamesAreSanitized) {
    auto s = testutil::constant_session(testutil::small_lexicon(1), "../evil", Gender::man, 0, {3, 3, 3},
                                        "2016-11-01T09:00:00Z");
    EXPECT_EQ(session_file_name(s), "sessions/..-evil-2016-11-01T09-00-00Z.json");
}

TEST(Serve, LiveEndpoint) {
    const auto dir = testutil::temp_dir("serve");
    httplib::Server server;
    install_collector(server, dir, lexicon());
    const int port = server.bind_to_any_port("127.0.0.1");
    ASSERT_GT(port, 0);
    std::thread t([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    httplib::Client client("127.0.0.1", port);
    auto res = client.Post("/sessions", payload("live"), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 201);
    EXPECT_EQ(res->get_header_value("Location"), "/sessions/live-2016-11-07T14-30-00-02-00.json");
    EXPECT_EQ(res->get_header_value("Access-Control-Allow-Origin"), "*");
    res = client.Post("/sessions", payload("live"), "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 409);
    res = client.Post("/sessions", "{}", "application/json");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 400);
    res = client.Get("/health");
    ASSERT_TRUE(res);
    EXPECT_EQ(res->status, 200);

    server.stop();
    t.join();
    EXPECT_TRUE(fs::exists(dir / "sessions/live-2016-11-07T14-30-00-02-00.json"));
}

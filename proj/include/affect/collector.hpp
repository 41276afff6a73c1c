#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <system_error>

#include <nlohmann/json.hpp>

#include "affect/ingest.hpp"

namespace affect {

struct CollectResult {
    int status{500};
    std::string body;          // JSON
    std::string stored_path;   // relative to the data dir, on success
};

namespace collector_detail {

inline std::string safe_component(const std::string& s) {
    std::string out;
    for (char c : s) {
        const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' ||
                        c == '-' || c == '.';
        out.push_back(ok ? c : '-');
    }
    if (out.empty() || out == "." || out == "..") out = "_";
    return out;
}

inline std::string error_body(const std::string& field, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = message;
    j["field"] = field;
    return j.dump();
}

inline std::string temp_suffix() {
    static std::atomic<unsigned long long> counter{0};
    return std::to_string(counter.fetch_add(1)) + "-" + std::to_string(std::random_device{}());
}

}  // namespace collector_detail

// Stored file name for a session: sessions/<person_id>-<session start>.json.
inline std::string session_file_name(const SessionFile& s) {
    return "sessions/" + collector_detail::safe_component(s.person.person_id) + "-" +
           collector_detail::safe_component(s.person.session_start.text) + ".json";
}

// Validates one uploaded session JSON document and stores it under `data_dir`.
// 201 on success, 400 naming the offending field, 409 when the same person and
// session start were stored before. The write goes to a temporary file that is
// then hard-linked into place, which fails instead of overwriting.
inline CollectResult collect_session(const std::string& body, const std::filesystem::path& data_dir,
                                     const Lexicon* lexicon = nullptr) {
    namespace fs = std::filesystem;
    SessionFile s;
    try {
        s = parse_session_json(body, lexicon);
    } catch (const ValidationError& e) {
        return {400, collector_detail::error_body(e.where(), e.what()), {}};
    }
    const std::string rel = session_file_name(s);
    const fs::path final_path = data_dir / rel;
    std::error_code ec;
    fs::create_directories(final_path.parent_path(), ec);
    if (ec) return {500, collector_detail::error_body("", "cannot create " + final_path.parent_path().string()), {}};
    if (fs::exists(final_path))
        return {409, collector_detail::error_body("/person", "session already stored: " + rel), {}};

    const fs::path tmp = final_path.parent_path() / ("." + final_path.filename().string() + ".tmp-" +
                                                     collector_detail::temp_suffix());
    {
        std::ofstream f(tmp, std::ios::binary);
        f << serialize_session_json(s);
        f.flush();
        if (!f) {
            fs::remove(tmp, ec);
            return {500, collector_detail::error_body("", "cannot write " + tmp.string()), {}};
        }
    }
    fs::create_hard_link(tmp, final_path, ec);
    std::error_code ignored;
    fs::remove(tmp, ignored);
    if (ec) {
        if (fs::exists(final_path))
            return {409, collector_detail::error_body("/person", "session already stored: " + rel), {}};
        return {500, collector_detail::error_body("", "cannot store " + rel + ": " + ec.message()), {}};
    }
    nlohmann::ordered_json j;
    j["stored"] = rel;
    j["person_id"] = s.person.person_id;
    j["answers"] = s.answers.size();
    return {201, j.dump(), rel};
}

}  // namespace affect

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <httplib.h>

#include "affect/collector.hpp"

namespace affect {

// Registers the session upload endpoint (POST /sessions) on `server`.
inline void install_collector(httplib::Server& server, std::filesystem::path data_dir,
                              std::optional<Lexicon> lexicon = std::nullopt) {
    server.Post("/sessions", [data_dir = std::move(data_dir), lexicon = std::move(lexicon)](
                                 const httplib::Request& req, httplib::Response& res) {
        const auto r = collect_session(req.body, data_dir, lexicon ? &*lexicon : nullptr);
        res.status = r.status;
        if (!r.stored_path.empty()) res.set_header("Location", "/" + r.stored_path);
        res.set_content(r.body, "application/json");
    });
    // The questionnaire is a static page served from elsewhere.
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"},
                                {"Access-Control-Allow-Methods", "POST, OPTIONS"}});
    server.Options("/sessions", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        res.set_content("{\"status\":\"ok\"}", "application/json");
    });
}

}  // namespace affect

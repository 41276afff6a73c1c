// affectctl: command-line front end for the affect modelling pipeline.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "affect/affect.hpp"
#include "affect/collector.hpp"
#include "affect/config.hpp"
#include "affect/report.hpp"
#include "affect/serve.hpp"

namespace fs = std::filesystem;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
};

void add_common(CLI::App* app, Common& c, bool needs_config = true) {
    auto* opt = app->add_option("--config,-c", c.config, "run configuration (JSON)");
    if (needs_config) opt->required()->check(CLI::ExistingFile);
    app->add_option("--seed", c.seed, "override the configured seed");
    app->add_option("--out,-o", c.out, "output directory (default: print to stdout)");
}

// Prints a section to stdout, or writes its files into --out.
void emit(const affect::Bundle& b, const std::string& out) {
    if (out.empty()) {
        const bool many = b.size() > 1;
        for (const auto& [name, text] : b) {
            if (many) std::cout << "# " << name << "\n";
            std::cout << text;
        }
        return;
    }
    fs::create_directories(out);
    for (const auto& [name, text] : b) {
        std::ofstream f(fs::path(out) / name, std::ios::binary);
        f << text;
        if (!f) throw affect::Error("cannot write " + (fs::path(out) / name).string());
    }
}

affect::RunConfig config_of(const Common& c) {
    auto cfg = affect::load_config(c.config, c.seed);
    if (!c.out.empty()) cfg.out = c.out;
    return cfg;
}

void write_fixture(const std::string& dir, std::uint64_t seed) {
    affect::synthetic::FixtureOptions opt;
    opt.seed = seed;
    const auto f = affect::synthetic::make_fixture(opt);
    fs::create_directories(dir);
    for (const auto& [name, text] : affect::synthetic::fixture_files(f)) {
        std::ofstream out(fs::path(dir) / name, std::ios::binary);
        out << text;
    }
    nlohmann::ordered_json cfg;
    cfg["seed"] = seed;
    cfg["lexicon"] = "lexicon.csv";
    cfg["persons"] = "persons.csv";
    cfg["sessions"] = "sessions.csv";
    cfg["frequency_ranks"] = "frequency.csv";
    cfg["norms"] = nlohmann::ordered_json::array(
        {{{"name", f.norms.name}, {"path", "norms.csv"}, {"mapping", "mapping.csv"},
          {"scale_lo", f.norms.scale_lo}, {"scale_hi", f.norms.scale_hi}, {"dominance_present", true}}});
    cfg["k"] = 5;
    cfg["k_max"] = 8;
    cfg["gap_B"] = 10;
    cfg["restarts"] = 25;
    cfg["out"] = "bundle";
    std::ofstream(fs::path(dir) / "config.json") << cfg.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"affectctl: subgroup affect models over SAM rating sessions"};
    app.require_subcommand(1);

    Common common;
    std::string subgroup;
    std::optional<std::size_t> k_max, gap_b, shift_length;
    int port = 8080;
    std::string host = "127.0.0.1";
    std::string data_dir = "data";
    std::uint64_t fixture_seed = 20161101;

    auto section = [&](const char* name, const char* help) {
        auto* sub = app.add_subcommand(name, help);
        add_common(sub, common);
        return sub;
    };
    auto* ingest = section("ingest", "validate inputs and list persons with derived fields");
    auto* segment = section("segment", "subgroup membership for every scheme");
    auto* averages = section("averages", "per-subgroup average vectors");
    auto* transform = section("transform", "general, word-specific and cluster-based transformation vectors");
    auto* cluster = section("cluster", "k-means models, centroids, gap curve and cluster matching");
    auto* gap = section("gap", "gap statistic curve for one subgroup");
    gap->add_option("--subgroup", subgroup, "subgroup (default: the reference subgroup)");
    gap->add_option("--k-max", k_max, "largest k evaluated");
    gap->add_option("-B,--references", gap_b, "number of reference data sets");
    auto* octants = section("octants", "octant census per subgroup and threshold");
    auto* shift = section("shift", "extreme affective shift lists");
    shift->add_option("--length", shift_length, "entries per list (0 = full list)");
    auto* scale = section("scale-cluster", "scale-cluster lists");
    auto* attract = section("attract", "attraction-cluster lists for the pregnancy nouns");
    auto* stats = section("stats", "correlations, cosines, ANOVA, Welch, histogram, descriptives");
    auto* report = section("report", "full pipeline; writes the report bundle");

    auto* serve = app.add_subcommand("serve", "accept questionnaire session uploads (POST /sessions)");
    serve->add_option("--port", port, "listen port")->check(CLI::Range(0, 65535));
    serve->add_option("--host", host, "listen address");
    serve->add_option("--data-dir", data_dir, "directory receiving sessions/*.json");
    serve->add_option("--config,-c", common.config, "run configuration; its lexicon validates uploads")
        ->check(CLI::ExistingFile);

    auto* fixture = app.add_subcommand("fixture", "write a synthetic cohort plus a config");
    fixture->add_option("--out,-o", common.out, "output directory")->required();
    fixture->add_option("--seed", fixture_seed, "generator seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fixture->parsed()) {
            write_fixture(common.out, fixture_seed);
            std::cerr << "fixture written to " << common.out << "\n";
            return 0;
        }
        if (serve->parsed()) {
            std::optional<affect::Lexicon> lexicon;
            if (!common.config.empty()) {
                const auto cfg = affect::load_config(common.config);
                lexicon = affect::parse_lexicon_csv(affect::csv::read_file(cfg.lexicon.string()), cfg.lexicon.string());
            } else if (fs::exists(fs::path(data_dir) / "lexicon.csv")) {
                const auto p = (fs::path(data_dir) / "lexicon.csv").string();
                lexicon = affect::parse_lexicon_csv(affect::csv::read_file(p), p);
            }
            fs::create_directories(data_dir);
            httplib::Server server;
            affect::install_collector(server, data_dir, std::move(lexicon));
            if (!server.bind_to_port(host, port)) {
                std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
                return 1;
            }
            std::cerr << "listening on " << host << ":" << port << ", storing into " << data_dir << "\n";
            server.listen_after_bind();
            return 0;
        }

        auto cfg = config_of(common);
        if (shift_length) cfg.shift_list_length = *shift_length;
        if (k_max) cfg.k_max = *k_max;
        if (gap_b) cfg.gap_B = *gap_b;

        if (report->parsed()) {
            const auto bundle = affect::run_pipeline(cfg);
            affect::write_bundle(bundle, cfg.out);
            std::cerr << "wrote " << bundle.size() << " files to " << cfg.out.string() << "\n";
            return 0;
        }

        affect::Pipeline p(cfg);
        const std::string& out = common.out;
        if (ingest->parsed()) {
            std::cerr << fmt::format("{} persons, {} words, {} answers\n", p.cohort().sessions.size(),
                                     p.cohort().lexicon.size(), p.cohort().total_answers());
            emit(p.ingest_section(), out);
        } else if (segment->parsed()) {
            emit(p.segment_section(), out);
        } else if (averages->parsed()) {
            emit(p.averages_section(), out);
        } else if (transform->parsed()) {
            emit(p.transform_section(), out);
        } else if (cluster->parsed()) {
            emit(p.cluster_section(), out);
        } else if (gap->parsed()) {
            const std::string name = subgroup.empty() ? cfg.reference_subgroup : subgroup;
            const auto m = affect::standardize(p.averages(name), p.adjectives());
            const auto curve = affect::gap_statistic<3>(m.rows, cfg.k_max, cfg.gap_B, cfg.seed, cfg.gap_rule,
                                                         cfg.gap_restarts);
            affect::csv::Writer w({"k", "gap", "se"});
            for (const auto& pt : curve.points)
                w.row({std::to_string(pt.k), affect::csv::number(pt.gap), affect::csv::number(pt.se)});
            std::cerr << "chosen k = " << curve.chosen_k << "\n";
            emit({{"gap.csv", w.str()}}, out);
        } else if (octants->parsed()) {
            emit(p.octant_section(), out);
        } else if (shift->parsed()) {
            emit(p.shift_section(), out);
        } else if (scale->parsed()) {
            emit(p.scale_section(), out);
        } else if (attract->parsed()) {
            emit(p.attract_section(), out);
        } else if (stats->parsed()) {
            emit(p.stats_section(), out);
        }
        return 0;
    } catch (const affect::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

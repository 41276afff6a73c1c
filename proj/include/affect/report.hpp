#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <system_error>
#include <vector>

#include <fmt/format.h>

#include "affect/aggregate.hpp"
#include "affect/clustering.hpp"
#include "affect/config.hpp"
#include "affect/csv.hpp"
#include "affect/geometry.hpp"
#include "affect/ingest.hpp"
#include "affect/pca.hpp"
#include "affect/segmentation.hpp"
#include "affect/stats.hpp"
#include "affect/svg.hpp"
#include "affect/transform.hpp"

namespace affect {

// File name -> contents. std::map keeps emission order stable.
using Bundle = std::map<std::string, std::string>;

namespace report_detail {

inline std::string num(double v) { return csv::number(v, 6); }
inline std::string num3(double v) { return csv::number(v, 3); }

inline std::vector<std::filesystem::path> json_sessions_in(const std::filesystem::path& dir) {
    std::vector<std::filesystem::path> out;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace report_detail

struct ClusterSet {
    std::vector<std::string> order;                  // model subgroups, reference first
    std::map<std::string, StandardizedMatrix> matrices;
    std::map<std::string, ClusterModel> models;      // labels propagated from the reference
    GapCurve gap;                                    // for the reference subgroup
    std::vector<ClusterMatch> matches;               // every pair (i < j) of `order`
};

// Loaded cohort plus everything derived from it; derived parts are computed on demand.
class Pipeline {
public:
    explicit Pipeline(RunConfig cfg) : cfg_(std::move(cfg)) {
        auto lex = parse_lexicon_csv(csv::read_file(cfg_.lexicon.string()), cfg_.lexicon.string());
        auto persons = parse_persons_csv(csv::read_file(cfg_.persons.string()), cfg_.persons.string());
        auto answers = parse_sessions_csv(csv::read_file(cfg_.sessions.string()), cfg_.sessions.string());
        if (cfg_.session_dir) {
            for (const auto& p : report_detail::json_sessions_in(*cfg_.session_dir)) {
                SessionFile s;
                try {
                    s = parse_session_json(csv::read_file(p.string()), &lex);
                } catch (const ValidationError& e) {
                    throw ValidationError(p.string(), e.what());
                }
                persons.push_back(s.person);
                answers.insert(answers.end(), s.answers.begin(), s.answers.end());
            }
        }
        cohort_ = assemble_cohort(std::move(lex), persons, answers);
        adjectives_ = cohort_.lexicon.ids(WordKind::emotional_adjective);
        nouns_ = cohort_.lexicon.ids(WordKind::pregnancy_noun);
        all_words_ = cohort_.lexicon.ids();
        if (adjectives_.empty()) throw ValidationError(cfg_.lexicon.string(), "lexicon has no emotional adjectives");

        const auto ps = cohort_.persons();
        for (auto scheme : kSchemes)
            for (auto& g : build_subgroups(ps, scheme)) subgroups_.push_back(std::move(g));
        all_ = everyone(ps);
        for (const auto* g : listed())
            if (!g->member_ids.empty()) averages_.emplace(g->label, compute_averages(cohort_, *g, all_words_));

        for (const auto& m : cfg_.model_subgroups)
            if (!averages_.count(m))
                throw ValidationError("config", "model subgroup '" + m + "' is unknown or empty");
        if (std::find(cfg_.model_subgroups.begin(), cfg_.model_subgroups.end(), cfg_.reference_subgroup) ==
            cfg_.model_subgroups.end())
            throw ValidationError("config", "reference_subgroup must be one of model_subgroups");

        for (const auto& n : cfg_.norms) {
            auto set = parse_norms_csv(csv::read_file(n.path.string()), n.name, n.scale_lo, n.scale_hi,
                                       n.dominance_present, n.path.string());
            auto mapping = parse_mapping_csv(csv::read_file(n.mapping.string()), cohort_.lexicon, n.mapping.string());
            norms_.push_back({std::move(set), std::move(mapping)});
        }
        if (cfg_.frequency_ranks) {
            const auto t = csv::read(cfg_.frequency_ranks->string());
            const auto c_id = t.column("word_id"), c_rank = t.column("rank");
            for (std::size_t r = 0; r < t.rows.size(); ++r) {
                const auto& id = t.rows[r][c_id];
                if (!cohort_.lexicon.contains(id))
                    throw ValidationError(t.where(r), "word_id '" + id + "' not in lexicon");
                frequency_[id] = csv::to_double(t.rows[r][c_rank], t.where(r), "rank");
            }
        }
    }

    const RunConfig& config() const { return cfg_; }
    const Cohort& cohort() const { return cohort_; }
    const std::vector<WordId>& adjectives() const { return adjectives_; }
    const std::vector<WordId>& nouns() const { return nouns_; }
    const std::vector<Subgroup>& subgroups() const { return subgroups_; }
    const SubgroupAverages& averages(const std::string& label) const {
        auto it = averages_.find(label);
        if (it == averages_.end()) throw Error("no averages for subgroup '" + label + "'");
        return it->second;
    }
    bool has_averages(const std::string& label) const { return averages_.count(label) > 0; }

    // Every scheme subgroup followed by the whole cohort ("all").
    std::vector<const Subgroup*> listed() const {
        std::vector<const Subgroup*> out;
        for (const auto& g : subgroups_) out.push_back(&g);
        out.push_back(&all_);
        return out;
    }

    const ClusterSet& clusters() {
        if (!clusters_) clusters_ = fit_clusters();
        return *clusters_;
    }

    // ---- sections -------------------------------------------------------------

    Bundle ingest_section() const {
        csv::Writer w({"person_id", "gender", "children_count", "session_start_iso8601", "answers",
                       "avg_answer_duration_s"});
        for (const auto& s : cohort_.sessions)
            w.row({s.person.person_id, std::string(to_string(s.person.gender)), std::to_string(s.person.children_count),
                   s.person.session_start.text, std::to_string(s.answers.size()),
                   report_detail::num(s.person.avg_answer_duration_s)});
        return {{"ingest.csv", w.str()}};
    }

    Bundle segment_section() const {
        csv::Writer w({"scheme", "label", "person_id"});
        for (const auto* g : listed())
            for (const auto& id : g->member_ids)
                w.row({g == &all_ ? "cohort" : std::string(to_string(g->scheme)), g->label, id});
        return {{"subgroups.csv", w.str()}};
    }

    Bundle averages_section() const {
        csv::Writer w({"subgroup", "word_id", "kind", "n", "p", "a", "d"});
        for (const auto* g : listed()) {
            if (!averages_.count(g->label)) continue;
            const auto& avg = averages_.at(g->label);
            for (const auto& word : cohort_.lexicon.words()) {
                const auto* a = avg.find(word.word_id);
                if (!a) continue;
                w.row({g->label, word.word_id, std::string(to_string(word.kind)), std::to_string(a->n),
                       report_detail::num(a->vector.pleasure), report_detail::num(a->vector.arousal),
                       report_detail::num(a->vector.dominance)});
            }
        }
        return {{"averages.csv", w.str()}};
    }

    std::vector<TransformationVector> general_vectors() const {
        std::vector<TransformationVector> out;
        for (auto scheme : kSchemes) {
            std::vector<const Subgroup*> gs;
            for (const auto& g : subgroups_)
                if (g.scheme == scheme && averages_.count(g.label)) gs.push_back(&g);
            for (const auto* a : gs)
                for (const auto* b : gs)
                    if (a != b)
                        out.push_back(general_transformation_vector(averages_.at(a->label), averages_.at(b->label),
                                                                    adjectives_));
        }
        return out;
    }

    Bundle transform_section() {
        csv::Writer w({"kind", "from", "to", "anchor", "dp", "da", "dd", "magnitude"});
        auto emit = [&](const TransformationVector& t) {
            w.row({std::string(to_string(t.kind)), t.from_subgroup, t.to_subgroup, t.anchor.value_or(""),
                   report_detail::num(t.offset.pleasure), report_detail::num(t.offset.arousal),
                   report_detail::num(t.offset.dominance), report_detail::num(t.magnitude())});
        };
        for (const auto& t : general_vectors()) emit(t);
        const auto& ms = cfg_.model_subgroups;
        for (std::size_t i = 0; i < ms.size(); ++i)
            for (std::size_t j = i + 1; j < ms.size(); ++j) {
                for (const auto* set : {&adjectives_, &nouns_})
                    for (const auto& t : transformation_table(averages(ms[i]), averages(ms[j]), *set)) emit(t);
            }
        const auto& cs = clusters();
        for (std::size_t i = 0; i < cs.order.size(); ++i)
            for (std::size_t j = i + 1; j < cs.order.size(); ++j)
                for (const auto& t : cluster_transformation_table(cs.models.at(cs.order[i]).centroid_table(),
                                                                  cs.models.at(cs.order[j]).centroid_table()))
                    emit(t);
        return {{"transforms.csv", w.str()}};
    }

    Bundle cluster_section() {
        const auto& cs = clusters();
        csv::Writer members({"subgroup", "label", "word_id"});
        csv::Writer centroids({"subgroup", "label", "p", "a", "d", "origo_dist"});
        for (const auto& name : cs.order) {
            const auto& m = cs.models.at(name);
            for (std::size_t c = 0; c < m.k; ++c) {
                for (auto row : m.member_rows(c)) members.row({name, m.labels[c], m.word_ids[row]});
                const auto& v = m.centroids_orig[c];
                centroids.row({name, m.labels[c], report_detail::num(v.pleasure), report_detail::num(v.arousal),
                               report_detail::num(v.dominance), report_detail::num(origo_distance(v))});
            }
        }
        csv::Writer gap({"k", "gap", "se"});
        for (const auto& p : cs.gap.points) gap.row({std::to_string(p.k), report_detail::num(p.gap), report_detail::num(p.se)});
        csv::Writer match({"subgroupA", "subgroupB", "labelA", "labelB", "precision", "recall", "f1"});
        for (const auto& mt : cs.matches)
            for (const auto& l : mt.labels)
                match.row({mt.subgroup_a, mt.subgroup_b, l.label_a, l.label_b, report_detail::num(l.precision),
                           report_detail::num(l.recall), report_detail::num(l.f1)});
        return {{"clusters.csv", members.str()},
                {"centroids.csv", centroids.str()},
                {"gap.csv", gap.str()},
                {"match.csv", match.str()}};
    }

    Bundle octant_section() const {
        csv::Writer w({"subgroup", "threshold", "octant", "count"});
        for (const auto* g : listed()) {
            if (!averages_.count(g->label)) continue;
            for (double t : cfg_.octant_thresholds) {
                const auto census = octant_census(averages_.at(g->label), adjectives_, t);
                for (std::size_t o = 0; o < 8; ++o)
                    w.row({g->label, report_detail::num(t), OctantSpec::from_index(o, t).name(),
                           std::to_string(census.counts[o])});
                w.row({g->label, report_detail::num(t), "residual", std::to_string(census.residual)});
            }
        }
        return {{"octants.csv", w.str()}};
    }

    double shift_threshold() const {
        return cfg_.octant_thresholds.empty()
                   ? 1.0
                   : *std::max_element(cfg_.octant_thresholds.begin(), cfg_.octant_thresholds.end());
    }

    std::vector<ShiftList> shift_lists() const {
        std::vector<ShiftList> out;
        const double t = shift_threshold();
        const auto& ms = cfg_.model_subgroups;
        for (const auto& present : ms)
            for (const auto& absent : ms) {
                if (present == absent) continue;
                for (std::size_t o = 0; o < 8; ++o)
                    out.push_back(extreme_shift_list(OctantSpec::from_index(o, t), averages(present), averages(absent),
                                                     adjectives_));
            }
        return out;
    }

    Bundle shift_section() const {
        csv::Writer w({"threshold", "octant", "present", "absent", "rank", "word_id", "magnitude", "dp", "da", "dd"});
        for (const auto& list : shift_lists()) {
            const std::size_t n = cfg_.shift_list_length ? std::min(cfg_.shift_list_length, list.entries.size())
                                                         : list.entries.size();
            for (std::size_t i = 0; i < n; ++i) {
                const auto& e = list.entries[i];
                w.row({report_detail::num(list.octant.threshold), list.octant.name(), list.present_group,
                       list.absent_group, std::to_string(i + 1), e.word_id, report_detail::num(e.magnitude),
                       report_detail::num(e.offset.pleasure), report_detail::num(e.offset.arousal),
                       report_detail::num(e.offset.dominance)});
            }
        }
        return {{"shift.csv", w.str()}};
    }

    std::map<std::string, std::vector<ScaleClusterList>> scale_lists() {
        std::map<std::string, std::vector<ScaleClusterList>> out;
        const auto& cs = clusters();
        for (const auto& name : cs.order) {
            const auto& m = cs.models.at(name);
            for (const auto& label : m.labels)
                out[name].push_back(scale_cluster_list(m, averages(name), label, cfg_.cosine_threshold));
        }
        return out;
    }

    Bundle scale_section() {
        csv::Writer w({"subgroup", "label", "list", "word_id", "origo_dist", "centroid_dist", "cosine", "marker"});
        for (const auto& [name, lists] : scale_lists()) {
            (void)name;
            for (const auto& l : lists) {
                auto emit = [&](const char* kind, const ScaleEntry& e) {
                    w.row({l.subgroup, l.label, kind, e.word_id, report_detail::num(e.origo_distance),
                           report_detail::num(e.centroid_distance), report_detail::num(e.cosine),
                           e.nearest && !e.aligned ? "@" : ""});
                };
                for (const auto& e : l.entries) emit("aligned", e);
                for (const auto& e : l.nearest3) emit("nearest", e);
                for (const auto& e : l.opposite) emit("opposite", e);
            }
        }
        return {{"scale_cluster.csv", w.str()}};
    }

    std::vector<AttractionList> attraction_lists() {
        std::vector<AttractionList> out;
        const auto& cs = clusters();
        for (const auto& name : cs.order) {
            const auto table = cs.models.at(name).centroid_table();
            for (const auto& w : nouns_) out.push_back(attraction_list(w, averages(name).at(w), table));
        }
        return out;
    }

    Bundle attract_section() {
        csv::Writer w({"subgroup", "word_id", "order", "rank", "label", "distance"});
        for (const auto& a : attraction_lists())
            for (std::size_t i = 0; i < a.labels.size(); ++i)
                w.row({a.subgroup, a.word_id, a.joined(">"), std::to_string(i + 1), a.labels[i],
                       report_detail::num(a.distances[i])});
        return {{"attract.csv", w.str()}};
    }

    Bundle stats_section() const {
        using report_detail::num;
        Bundle b;
        const auto& all = averages("all");
        {
            csv::Writer corr({"norm_set", "dimension", "n", "r", "t", "df", "p"});
            csv::Writer cos({"norm_set", "word_id", "external_word", "category", "ip", "ia", "id", "ep", "ea", "ed",
                             "cosine"});
            for (const auto& [set, mapping] : norms_) {
                const auto m = match_rows(mapping, all.vectors(), set);
                for (auto d : {Dimension::pleasure, Dimension::arousal, Dimension::dominance}) {
                    if (d == Dimension::dominance && !m.dominance_present) continue;
                    if (m.pairs.size() < 3) continue;
                    const auto [xs, ys] = matched_series(m, d);
                    const auto r = pearson(xs, ys);
                    corr.row({set.name, std::string(dimension_name(d)), std::to_string(r.n), num(r.r), num(r.t_stat),
                              num(r.df), num(r.p_two_sided)});
                }
                if (!m.dominance_present) continue;
                for (const auto& p : m.pairs) {
                    const double c = norm(p.internal) == 0.0 || norm(p.external) == 0.0
                                         ? 0.0
                                         : cosine_similarity(p.internal, p.external);
                    cos.row({set.name, p.word_id, p.external_word, p.category, num(p.internal.pleasure),
                             num(p.internal.arousal), num(p.internal.dominance), num(p.external.pleasure),
                             num(p.external.arousal), num(p.external.dominance), num(c)});
                }
            }
            b["correlations.csv"] = corr.str();
            b["cosine.csv"] = cos.str();
        }

        csv::Writer anova({"test", "scheme", "dimension", "groups", "F", "df_between", "df_within", "p"});
        csv::Writer welch({"test", "x", "y", "dimension", "t", "df", "p", "mean_x", "mean_y", "n_x", "n_y"});
        auto anova_row = [&](const std::string& test, const std::string& scheme, const std::string& dim,
                             std::size_t groups, const AnovaResult& r) {
            anova.row({test, scheme, dim, std::to_string(groups), r.F_infinite ? "inf" : num(r.F), num(r.df_between),
                       num(r.df_within), num(r.p)});
        };
        auto welch_row = [&](const std::string& test, const std::string& x, const std::string& y,
                             const std::string& dim, const WelchResult& r) {
            welch.row({test, x, y, dim, num(r.t), num(r.df), num(r.p_two_sided), num(r.mean_x), num(r.mean_y),
                       std::to_string(r.n_x), std::to_string(r.n_y)});
        };
        for (auto scheme : kSchemes) {
            std::vector<std::vector<EmotionalVector>> groups;
            for (const auto& g : subgroups_)
                if (g.scheme == scheme && !g.member_ids.empty()) groups.push_back(answer_vectors(cohort_, g, adjectives_));
            if (groups.size() < 2) continue;
            const std::string sname(to_string(scheme));
            for (auto d : {Dimension::pleasure, Dimension::arousal, Dimension::dominance})
                anova_row("subgroup_answers", sname, std::string(dimension_name(d)), groups.size(),
                          dimension_anova(groups, d));
            anova_row("subgroup_answers", sname, "stacked", groups.size(), stacked_dimension_anova(groups));
        }
        {
            const auto gender = build_subgroups(cohort_.persons(), Scheme::gender);
            if (!gender[0].member_ids.empty() && !gender[1].member_ids.empty()) {
                const auto xa = answer_vectors(cohort_, gender[0], adjectives_);
                const auto ya = answer_vectors(cohort_, gender[1], adjectives_);
                for (auto d : {Dimension::pleasure, Dimension::arousal, Dimension::dominance}) {
                    std::vector<double> xs, ys;
                    for (const auto& v : xa) xs.push_back(v[d]);
                    for (const auto& v : ya) ys.push_back(v[d]);
                    welch_row("subgroup_answers", gender[0].label, gender[1].label, std::string(dimension_name(d)),
                              welch_t(xs, ys));
                }
            }
        }
        if (!frequency_.empty()) {
            std::map<WordId, double> pleasure;
            for (const auto& w : adjectives_) pleasure[w] = all.at(w).pleasure;
            const auto rt = response_time_study(cohort_, pleasure, frequency_, cfg_.response_time);
            anova_row("response_time", "positive_vs_negative", "pleasure", 2, rt.anova);
            welch_row("response_time", "positive", "negative", "pleasure", rt.welch);
            csv::Writer sel({"side", "word_id", "frequency_rank", "side_rank_mean"});
            for (const auto& w : rt.positive)
                sel.row({"positive", w, num(frequency_.at(w)), num(rt.rank_mean_positive)});
            for (const auto& w : rt.negative)
                sel.row({"negative", w, num(frequency_.at(w)), num(rt.rank_mean_negative)});
            b["response_time.csv"] = sel.str();
        }
        b["anova.csv"] = anova.str();
        b["welch.csv"] = welch.str();

        {
            const auto h = answer_histogram(answer_vectors(cohort_, all_, adjectives_));
            csv::Writer w({"pleasure", "arousal", "dominance", "count", "proportion"});
            for (int p = -2; p <= 2; ++p)
                for (int a = -2; a <= 2; ++a)
                    for (int d = -2; d <= 2; ++d)
                        w.row({std::to_string(p), std::to_string(a), std::to_string(d),
                               std::to_string(h.counts[p + 2][a + 2][d + 2]), num(h.proportion(p, a, d))});
            b["histogram.csv"] = w.str();
        }
        {
            csv::Writer w({"subgroup", "persons", "observations", "mean_p", "mean_a", "mean_d", "sd_p", "sd_a", "sd_d"});
            for (const auto* g : listed()) {
                if (g->member_ids.empty()) continue;
                const auto s = descriptive(cohort_, *g, adjectives_, cfg_.sd);
                w.row({g->label, std::to_string(s.persons), std::to_string(s.observations), num(s.mean.pleasure),
                       num(s.mean.arousal), num(s.mean.dominance), num(s.sd.pleasure), num(s.sd.arousal),
                       num(s.sd.dominance)});
            }
            b["descriptive.csv"] = w.str();
        }
        return b;
    }

    Bundle figure_section() {
        Bundle b;
        {
            const auto& avg = averages(cfg_.reference_subgroup);
            std::vector<svg::Marker> ms;
            csv::Writer w({"word_id", "p", "a", "d"});
            for (const auto& id : adjectives_) {
                const auto& v = avg.at(id);
                ms.push_back({v.pleasure, v.arousal, svg::diverging_color(v.dominance),
                              fmt::format("{} ({}, {}, {})", id, csv::number(v.pleasure, 2), csv::number(v.arousal, 2),
                                          csv::number(v.dominance, 2))});
                w.row({id, report_detail::num(v.pleasure), report_detail::num(v.arousal),
                       report_detail::num(v.dominance)});
            }
            svg::Axes axes{-2, 2, -2, 2, "pleasure", "arousal"};
            b["figure1.svg"] = svg::scatter("Average vectors: " + cfg_.reference_subgroup + " (colour = dominance)",
                                            axes, ms);
            b["figure1.csv"] = w.str();
        }
        const auto& cs = clusters();
        for (const auto& name : cs.order) {
            const auto& m = cs.models.at(name);
            const auto proj = pca_project(cs.matrices.at(name));
            std::vector<svg::Marker> ms;
            csv::Writer w({"word_id", "label", "pc1", "pc2"});
            for (std::size_t i = 0; i < m.word_ids.size(); ++i) {
                const auto& xy = proj.coordinates[i];
                const auto c = m.assignment[i];
                ms.push_back({xy[0], xy[1], svg::category_color(c), m.word_ids[i] + " [" + m.labels[c] + "]"});
                w.row({m.word_ids[i], m.labels[c], report_detail::num(xy[0]), report_detail::num(xy[1])});
            }
            b["figure2_" + name + ".svg"] =
                svg::scatter("Clusters of " + name + " (PCA)", svg::fit_axes(ms, "PC1", "PC2"), ms);
            b["figure2_" + name + ".csv"] = w.str();
        }
        return b;
    }

    // Highest-ranking patterns per model, one row per (model, scope).
    Bundle summary_section() {
        constexpr std::size_t kTop = 5;
        using report_detail::num3;
        csv::Writer w({"model", "scope", "pattern"});
        auto pair_name = [](const std::string& a, const std::string& b) { return a + " vs " + b; };
        {
            std::map<std::string, TransformationVector> best;
            for (const auto& t : general_vectors()) {
                const std::string scheme(to_string(find_subgroup(subgroups_, t.from_subgroup).scheme));
                auto it = best.find(scheme);
                if (it == best.end() || t.magnitude() > it->second.magnitude()) best.insert_or_assign(scheme, t);
            }
            for (auto scheme : kSchemes) {
                auto it = best.find(std::string(to_string(scheme)));
                if (it == best.end()) continue;
                const auto& t = it->second;
                w.row({"general", it->first, fmt::format("{} -> {} ({})", t.from_subgroup, t.to_subgroup, num3(t.magnitude()))});
            }
        }
        const auto& ms = cfg_.model_subgroups;
        auto top_words = [&](const std::vector<WordId>& set, const char* model) {
            for (std::size_t i = 0; i < ms.size(); ++i)
                for (std::size_t j = i + 1; j < ms.size(); ++j) {
                    const auto t = transformation_table(averages(ms[i]), averages(ms[j]), set);
                    std::string s;
                    for (std::size_t n = 0; n < std::min(kTop, t.size()); ++n)
                        s += fmt::format("{}{} ({})", n ? "; " : "", *t[n].anchor, num3(t[n].magnitude()));
                    w.row({model, pair_name(ms[i], ms[j]), s});
                }
        };
        top_words(adjectives_, "word_specific_adjectives");
        {
            std::map<std::pair<std::string, std::string>, std::vector<ShiftEntry>> merged;
            for (const auto& l : shift_lists()) {
                auto& v = merged[{l.present_group, l.absent_group}];
                v.insert(v.end(), l.entries.begin(), l.entries.end());
            }
            for (const auto& present : ms)
                for (const auto& absent : ms) {
                    if (present == absent) continue;
                    auto v = merged[{present, absent}];
                    std::sort(v.begin(), v.end(), [](const ShiftEntry& a, const ShiftEntry& b) {
                        if (a.magnitude != b.magnitude) return a.magnitude > b.magnitude;
                        return a.word_id < b.word_id;
                    });
                    std::string s;
                    for (std::size_t n = 0; n < std::min(kTop, v.size()); ++n)
                        s += fmt::format("{}{} ({})", n ? "; " : "", v[n].word_id, num3(v[n].magnitude));
                    w.row({"extreme_shift", present + " & not " + absent, s.empty() ? "no value" : s});
                }
        }
        const auto& cs = clusters();
        for (std::size_t i = 0; i < cs.order.size(); ++i)
            for (std::size_t j = i + 1; j < cs.order.size(); ++j) {
                const auto t = cluster_transformation_table(cs.models.at(cs.order[i]).centroid_table(),
                                                            cs.models.at(cs.order[j]).centroid_table());
                std::string s;
                for (std::size_t n = 0; n < t.size(); ++n)
                    s += fmt::format("{}{} ({})", n ? "; " : "", *t[n].anchor, num3(t[n].magnitude()));
                w.row({"cluster_based", pair_name(cs.order[i], cs.order[j]), s});
            }
        {
            const auto lists = scale_lists();
            for (std::size_t i = 0; i < cs.order.size(); ++i)
                for (std::size_t j = i + 1; j < cs.order.size(); ++j) {
                    const auto& la = lists.at(cs.order[i]);
                    const auto& lb = lists.at(cs.order[j]);
                    std::string s;
                    for (std::size_t c = 0; c < la.size(); ++c) {
                        const auto shared = shared_scale_words(la[c], lb[c]);
                        s += fmt::format("{}{}:", c ? " " : "", la[c].label);
                        if (shared.empty()) s += " no value.";
                        for (std::size_t n = 0; n < shared.size(); ++n)
                            s += fmt::format(" {} ({}){}", shared[n].word_id, num3(shared[n].origo_difference),
                                             n + 1 == shared.size() ? "." : ";");
                    }
                    w.row({"scale_cluster", pair_name(cs.order[i], cs.order[j]), s});
                }
        }
        if (!nouns_.empty()) {
            top_words(nouns_, "word_specific_nouns");
            std::map<std::pair<std::string, WordId>, std::string> nearest;
            for (const auto& a : attraction_lists()) nearest[{a.subgroup, a.word_id}] = a.labels.front();
            for (std::size_t i = 0; i < cs.order.size(); ++i)
                for (std::size_t j = i + 1; j < cs.order.size(); ++j) {
                    std::string s;
                    for (const auto& n : nouns_) {
                        const auto& x = nearest.at({cs.order[i], n});
                        const auto& y = nearest.at({cs.order[j], n});
                        if (x != y) s += fmt::format("{}{} ({} vs {})", s.empty() ? "" : "; ", n, x, y);
                    }
                    w.row({"attraction_cluster", pair_name(cs.order[i], cs.order[j]), s.empty() ? "no value" : s});
                }
        }
        return {{"summary.csv", w.str()}};
    }

    Bundle full_bundle() {
        Bundle b;
        for (auto&& part : {ingest_section(), segment_section(), averages_section(), transform_section(),
                            cluster_section(), octant_section(), shift_section(), scale_section(), attract_section(),
                            stats_section(), figure_section(), summary_section()})
            for (auto& [name, text] : part) b[name] = text;
        return b;
    }

private:
    ClusterSet fit_clusters() const {
        ClusterSet cs;
        cs.order.push_back(cfg_.reference_subgroup);
        for (const auto& m : cfg_.model_subgroups)
            if (m != cfg_.reference_subgroup) cs.order.push_back(m);
        for (const auto& name : cs.order) cs.matrices.emplace(name, standardize(averages(name), adjectives_));

        const auto& ref_matrix = cs.matrices.at(cfg_.reference_subgroup);
        const auto reference = fit_cluster_model(ref_matrix, cfg_.k, cfg_.seed, cfg_.restarts, cfg_.reference_subgroup);
        cs.models.emplace(reference.subgroup_id, reference);
        for (std::size_t i = 1; i < cs.order.size(); ++i) {
            auto m = fit_cluster_model(cs.matrices.at(cs.order[i]), cfg_.k, cfg_.seed, cfg_.restarts, cs.order[i]);
            cs.models.emplace(cs.order[i], propagate_labels(reference, std::move(m)));
        }
        cs.gap = gap_statistic<3>(ref_matrix.rows, cfg_.k_max, cfg_.gap_B, cfg_.seed, cfg_.gap_rule, cfg_.gap_restarts);
        for (std::size_t i = 0; i < cs.order.size(); ++i)
            for (std::size_t j = i + 1; j < cs.order.size(); ++j)
                cs.matches.push_back(
                    match_clusters(cs.models.at(cs.order[i]), cs.models.at(cs.order[j]), cfg_.match_orientation));
        return cs;
    }

    RunConfig cfg_;
    Cohort cohort_;
    std::vector<WordId> adjectives_, nouns_, all_words_;
    std::vector<Subgroup> subgroups_;
    Subgroup all_;
    std::map<std::string, SubgroupAverages> averages_;
    std::vector<std::pair<ExternalNormSet, LemmaMapping>> norms_;
    std::map<WordId, double> frequency_;
    std::optional<ClusterSet> clusters_;
};

// Writes the bundle into `out` atomically: everything goes to a sibling staging
// directory that replaces `out` only once every file is on disk.
inline void write_bundle(const Bundle& bundle, const std::filesystem::path& out) {
    namespace fs = std::filesystem;
    const fs::path target = fs::absolute(out).lexically_normal();
    const fs::path parent = target.parent_path();
    fs::create_directories(parent);
    const fs::path staging = parent / (target.filename().string() + ".staging");
    const fs::path old = parent / (target.filename().string() + ".old");
    fs::remove_all(staging);
    fs::remove_all(old);
    try {
        fs::create_directory(staging);
        for (const auto& [name, text] : bundle) {
            std::ofstream f(staging / name, std::ios::binary);
            f << text;
            if (!f) throw Error("cannot write " + (staging / name).string());
        }
        if (fs::exists(target)) fs::rename(target, old);
        fs::rename(staging, target);
        fs::remove_all(old);
    } catch (...) {
        std::error_code ec;
        fs::remove_all(staging, ec);
        if (!fs::exists(target, ec) && fs::exists(old, ec)) fs::rename(old, target, ec);
        throw;
    }
}

inline Bundle run_pipeline(const RunConfig& cfg) {
    Pipeline p(cfg);
    return p.full_bundle();
}

}  // namespace affect

// Builds the synthetic cohort and prints the general and the five largest
// word-specific transformation vectors between two gender-parental subgroups.

#include <cstdio>

#include <fmt/format.h>

#include "affect/affect.hpp"

int main() {
    using namespace affect;
    const auto fixture = synthetic::make_fixture();
    const auto& cohort = fixture.cohort;
    const auto words = cohort.lexicon.ids(WordKind::emotional_adjective);
    const auto groups = build_subgroups(cohort.persons(), Scheme::gender_parental);

    const auto& from = find_subgroup(groups, "women_with_children");
    const auto& to = find_subgroup(groups, "women_without_children");
    const auto a = compute_averages(cohort, from, words);
    const auto b = compute_averages(cohort, to, words);

    const auto t = general_transformation_vector(a, b, words);
    fmt::print("T {} -> {} = ({:+.3f}; {:+.3f}; {:+.3f})  |T| = {:.3f}\n", t.from_subgroup, t.to_subgroup,
               t.offset.pleasure, t.offset.arousal, t.offset.dominance, t.magnitude());

    const auto table = transformation_table(a, b, words);
    for (std::size_t i = 0; i < 5 && i < table.size(); ++i) {
        const auto& w = table[i];
        const auto moved = apply_transformation(a.at(*w.anchor), w);
        fmt::print("WT({}) = ({:+.2f}; {:+.2f}; {:+.2f})  |WT| = {:.2f}  lands on ({:.2f}; {:.2f}; {:.2f})\n", *w.anchor,
                   w.offset.pleasure, w.offset.arousal, w.offset.dominance, w.magnitude(), moved.pleasure,
                   moved.arousal, moved.dominance);
    }
    return 0;
}

#include <doctest.h>

#include "cspkit/model_finder.hpp"
#include "cspkit/problems.hpp"
#include "oracles.hpp"

using namespace cspkit;

namespace {

ModelFinderOptions all_opts(bool leaf = false) {
    ModelFinderOptions o;
    o.limits.mode = SearchMode::All;
    o.check_at_leaf = leaf;
    return o;
}

std::set<Interpretation> as_set(const std::vector<Interpretation>& v) { return {v.begin(), v.end()}; }

}  // namespace

TEST_CASE("model finder on the standard small instances") {
    CHECK(find_models(queens_spec(4), all_opts()).models.size() == 2);
    CHECK(find_models(coloring_spec(triangle(), 3), all_opts()).models.size() == 6);
    CHECK(find_models(coloring_spec(complete_graph(5), 4), all_opts()).models.empty());
    CHECK(find_models(queens_spec(1), all_opts()).models.size() == 1);
}

TEST_CASE("first mode stops at one model") {
    const auto r = find_models(queens_spec(8));
    REQUIRE(r.models.size() == 1);
    CHECK(check(queens_spec(8), r.models[0]).empty());
    CHECK(r.status == SearchStatus::Complete);
}

TEST_CASE("models are produced in lexicographic table order") {
    const auto r = find_models(queens_spec(6), all_opts());
    CHECK(r.models.size() == 4);
    CHECK(std::is_sorted(r.models.begin(), r.models.end()));
}

TEST_CASE("early checking prunes compared to checking at the leaves") {
    const auto spec = queens_spec(5);
    const auto early = find_models(spec, all_opts(false));
    const auto leaf = find_models(spec, all_opts(true));
    CHECK(as_set(early.models) == as_set(leaf.models));
    CHECK(early.stats.choices < leaf.stats.choices);
    CHECK(leaf.stats.choices == 5 + 25 + 125 + 625 + 3125);
}

TEST_CASE("limits") {
    auto o = all_opts();
    o.limits.max_solutions = 5;
    const auto r = find_models(queens_spec(8), o);
    CHECK(r.models.size() == 5);
    CHECK(r.status == SearchStatus::Truncated);
    auto t = all_opts(true);
    t.limits.deadline = Clock::now();
    CHECK(find_models(queens_spec(10), t).status == SearchStatus::TimedOut);
}

TEST_CASE("property: model finder matches exhaustive enumeration") {
    for (int n = 1; n <= 6; ++n) CHECK(as_set(find_models(queens_spec(n), all_opts()).models) == oracle::all_models(queens_spec(n)));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto spec = coloring_spec(gen_graph({6, 0.5, seed, 3}), 3);
        CHECK(as_set(find_models(spec, all_opts()).models) == oracle::all_models(spec));
    }
}

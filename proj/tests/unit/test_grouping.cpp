#include <doctest.h>

#include <algorithm>
#include <set>

#include "tooldc/grouping.hpp"

using namespace tooldc;

namespace {

RankedTools identity_ranking(std::size_t n) {
    RankedTools r;
    for (std::size_t i = 0; i < n; ++i) r.entries.push_back({i, static_cast<double>(n - i)});
    return r;
}

}  // namespace

TEST_SUITE("grouping") {

TEST_CASE("twelve tools, k five") {
    const auto plan = build_plan(identity_ranking(12), 12);
    REQUIRE(plan.groups.size() == 6);
    CHECK(plan.groups[0] == ToolGroup{0, {0, 1, 2, 3, 4}, std::nullopt});
    CHECK(plan.groups[1] == ToolGroup{1, {0, 5, 6}, 0u});
    CHECK(plan.groups[2] == ToolGroup{2, {1, 7, 8}, 1u});
    CHECK(plan.groups[3] == ToolGroup{3, {2, 9}, 2u});
    CHECK(plan.groups[5] == ToolGroup{5, {4, 11}, 4u});
}

TEST_CASE("follows the ranking, not the library order") {
    RankedTools r{{{3, 9}, {0, 8}, {2, 7}, {1, 6}}};
    const auto plan = build_plan(r, 4, {2, std::nullopt});
    CHECK(plan.t_top == std::vector<std::size_t>{3, 0});
    CHECK(plan.t_tail == std::vector<std::size_t>{2, 1});
    CHECK(plan.groups[1].members == std::vector<std::size_t>{3, 2});
    CHECK(plan.groups[2].members == std::vector<std::size_t>{0, 1});
}

TEST_CASE("invariants over small sizes") {
    for (std::size_t n = 1; n <= 30; ++n) {
        for (std::size_t k = 1; k <= 8; ++k) {
            const auto plan = build_plan(identity_ranking(n), n, {k, std::nullopt});
            const auto kk = std::min(k, n);
            REQUIRE(plan.k() == kk);
            REQUIRE(plan.groups.size() == kk + 1);
            REQUIRE(plan.groups[0].members == plan.t_top);
            std::multiset<std::size_t> tail;
            std::size_t min_chunk = n, max_chunk = 0;
            for (std::size_t j = 1; j <= kk; ++j) {
                const auto& g = plan.groups[j];
                REQUIRE(g.anchor == plan.t_top[j - 1]);
                REQUIRE(g.members.front() == plan.t_top[j - 1]);
                tail.insert(g.members.begin() + 1, g.members.end());
                min_chunk = std::min(min_chunk, g.members.size() - 1);
                max_chunk = std::max(max_chunk, g.members.size() - 1);
            }
            REQUIRE(tail == std::multiset<std::size_t>(plan.t_tail.begin(), plan.t_tail.end()));
            REQUIRE(max_chunk - min_chunk <= 1);
        }
    }
}

TEST_CASE("cap truncates chunks") {
    const auto plan = build_plan(identity_ranking(30), 30, {3, 4});
    for (std::size_t j = 1; j <= 3; ++j) CHECK(plan.groups[j].members.size() == 4);
    CHECK(plan.groups[1].members == std::vector<std::size_t>{0, 3, 4, 5});
}

TEST_CASE("bad input") {
    CHECK_THROWS_AS(build_plan(identity_ranking(0), 0), std::invalid_argument);
    CHECK_THROWS_AS(build_plan(identity_ranking(3), 3, {0, std::nullopt}), std::invalid_argument);
    CHECK_THROWS_AS(build_plan(identity_ranking(3), 3, {2, 0}), std::invalid_argument);
    CHECK_THROWS_AS(build_plan(identity_ranking(3), 4), std::invalid_argument);
    RankedTools dup{{{0, 1}, {0, 1}}};
    CHECK_THROWS_AS(build_plan(dup, 2), std::invalid_argument);
}

TEST_CASE("enumeration groups") {
    const auto groups = enumeration_groups(3);
    REQUIRE(groups.size() == 3);
    CHECK(groups[0] == ToolGroup{1, {0}, 0u});
    CHECK(groups[2] == ToolGroup{3, {2}, 2u});
}

}

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "tooldc/retrieval.hpp"

namespace tooldc {

struct GroupingConfig {
    std::size_t k = 5;
    /// Caps groups 1..K (anchor included); tail tools beyond the cap are dropped.
    std::optional<std::size_t> max_group_size;
};

struct ToolGroup {
    std::size_t index = 0;
    std::vector<std::size_t> members;
    /// Absent for group 0, which holds the whole retrieved top set.
    std::optional<std::size_t> anchor;

    friend bool operator==(const ToolGroup&, const ToolGroup&) = default;
};

struct GroupingPlan {
    std::vector<ToolGroup> groups;  // K + 1 entries
    std::vector<std::size_t> t_top;
    std::vector<std::size_t> t_tail;

    std::size_t k() const noexcept { return t_top.size(); }

    friend bool operator==(const GroupingPlan&, const GroupingPlan&) = default;
};

/// Anchor grouping. K = min(cfg.k, lib_size); group 0 is the top-K set;
/// group j >= 1 is the j-th top tool followed by the j-th contiguous chunk of
/// the rank-ordered tail. Chunk sizes differ by at most one, larger first.
/// Throws std::invalid_argument on lib_size == 0, cfg.k == 0, a zero cap, or
/// a ranking that does not cover every position exactly once.
GroupingPlan build_plan(const RankedTools& ranked, std::size_t lib_size, const GroupingConfig& cfg = {});

/// Enumeration plan for N tools: K = N singleton groups in library order, no
/// group 0. Used by the training-data builder.
std::vector<ToolGroup> enumeration_groups(std::size_t lib_size);

}  // namespace tooldc

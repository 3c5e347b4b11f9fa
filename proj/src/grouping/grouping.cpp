#include <algorithm>
#include <stdexcept>

#include "tooldc/grouping.hpp"

namespace tooldc {

GroupingPlan build_plan(const RankedTools& ranked, std::size_t lib_size, const GroupingConfig& cfg) {
    if (lib_size == 0) throw std::invalid_argument("build_plan: empty library");
    if (cfg.k == 0) throw std::invalid_argument("build_plan: k must be at least 1");
    if (cfg.max_group_size && *cfg.max_group_size == 0)
        throw std::invalid_argument("build_plan: max_group_size must be at least 1");
    if (ranked.entries.size() != lib_size) throw std::invalid_argument("build_plan: ranking does not cover library");
    std::vector<bool> seen(lib_size, false);
    for (const auto& e : ranked.entries) {
        if (e.position >= lib_size || seen[e.position])
            throw std::invalid_argument("build_plan: ranking positions invalid");
        seen[e.position] = true;
    }

    const std::size_t k = std::min(cfg.k, lib_size);
    GroupingPlan plan;
    plan.t_top = top_k(ranked, k);
    for (std::size_t i = k; i < lib_size; ++i) plan.t_tail.push_back(ranked.entries[i].position);

    plan.groups.reserve(k + 1);
    plan.groups.push_back(ToolGroup{0, plan.t_top, std::nullopt});

    const std::size_t tail = plan.t_tail.size();
    const std::size_t base = tail / k;
    const std::size_t extra = tail % k;
    std::size_t offset = 0;
    for (std::size_t j = 1; j <= k; ++j) {
        const std::size_t chunk = base + (j <= extra ? 1 : 0);
        std::size_t kept = chunk;
        if (cfg.max_group_size) kept = std::min(kept, *cfg.max_group_size - 1);

        ToolGroup group{j, {}, plan.t_top[j - 1]};
        group.members.reserve(kept + 1);
        group.members.push_back(plan.t_top[j - 1]);
        group.members.insert(group.members.end(), plan.t_tail.begin() + static_cast<std::ptrdiff_t>(offset),
                             plan.t_tail.begin() + static_cast<std::ptrdiff_t>(offset + kept));
        plan.groups.push_back(std::move(group));
        offset += chunk;
    }
    return plan;
}

std::vector<ToolGroup> enumeration_groups(std::size_t lib_size) {
    std::vector<ToolGroup> groups;
    groups.reserve(lib_size);
    for (std::size_t i = 0; i < lib_size; ++i) groups.push_back(ToolGroup{i + 1, {i}, i});
    return groups;
}

}  // namespace tooldc

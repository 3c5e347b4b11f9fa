#include <atomic>
#include <future>

#include "tooldc/evalharness.hpp"

namespace tooldc {

std::string default_rollup(const std::string& category) {
    return category.starts_with("live") ? "live" : "non_live";
}

Metrics aggregate(const std::vector<InstanceRecord>& records, const RollupFn& rollup) {
    Metrics m;
    for (const auto& r : records) {
        auto& stats = m.categories[r.category];
        ++stats.scored;
        ++m.instances;
        if (r.matched) {
            ++stats.matched;
            ++m.matched;
        }
        if (!r.error.empty()) ++m.errors;
    }
    std::map<std::string, std::pair<double, std::size_t>> sums;
    for (const auto& [category, stats] : m.categories) {
        auto& s = sums[rollup(category)];
        s.first += stats.accuracy();
        ++s.second;
    }
    double total = 0.0;
    for (const auto& [name, s] : sums) {
        const double mean = s.first / static_cast<double>(s.second);
        m.rollups[name] = mean;
        total += mean;
    }
    m.overall = sums.empty() ? 0.0 : total / static_cast<double>(sums.size());
    return m;
}

EvalReport evaluate(const std::vector<EvalInstance>& dataset, const Strategy& strategy, CompletionPort& port,
                    const Retriever& retriever, const EvalConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("evaluate: empty dataset");
    EvalReport report;
    report.records.resize(dataset.size());

    auto run_one = [&](std::size_t i) {
        const auto& inst = dataset[i];
        auto& rec = report.records[i];
        rec.id = inst.id;
        rec.category = inst.category;
        try {
            auto trace = run_strategy(inst, strategy, port, retriever, cfg.pipeline);
            rec.matched = trace.final_issued && ast_match(trace.final_outcome, inst.answers);
            rec.trace = std::move(trace);
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    };

    const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.concurrency, dataset.size()));
    if (workers == 1) {
        for (std::size_t i = 0; i < dataset.size(); ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::future<void>> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.push_back(std::async(std::launch::async, [&] {
                for (std::size_t i = next++; i < dataset.size(); i = next++) run_one(i);
            }));
        }
        for (auto& f : pool) f.get();
    }
    report.metrics = aggregate(report.records, cfg.rollup);
    return report;
}

json metrics_to_json(const Metrics& m) {
    json categories = json::object();
    for (const auto& [name, s] : m.categories)
        categories[name] = json{{"matched", s.matched}, {"scored", s.scored}, {"accuracy", s.accuracy()}};
    json rollups = json::object();
    for (const auto& [name, v] : m.rollups) rollups[name] = v;
    return json{{"categories", std::move(categories)},
                {"rollups", std::move(rollups)},
                {"overall", m.overall},
                {"instances", m.instances},
                {"matched", m.matched},
                {"errors", m.errors}};
}

json record_to_json(const InstanceRecord& r, std::optional<std::size_t> trace_line) {
    json j{{"id", r.id}, {"category", r.category}, {"matched", r.matched}};
    if (!r.error.empty()) j["error"] = r.error;
    j["trace"] = trace_line ? json(*trace_line) : json(nullptr);
    return j;
}

}  // namespace tooldc

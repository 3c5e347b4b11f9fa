#include <doctest.h>

#include <chrono>
#include <thread>

#include "support/synthetic.hpp"
#include "tooldc/pipeline.hpp"
#include "tooldc/prompts.hpp"

using namespace tooldc;

namespace {

EvalInstance weather_instance() {
    std::vector<ToolDefinition> tools{
        {"get_weather", "Get the current weather for a city", {{"city", ParamType::String, "city name", true}}},
        {"get_forecast", "Weather forecast for the coming days",
         {{"city", ParamType::String, "city name", true}, {"days", ParamType::Integer, "how many", false}}},
    };
    for (int i = 0; i < 10; ++i)
        tools.push_back({"unrelated_" + std::to_string(i), "Manage spreadsheet number " + std::to_string(i), {}});
    EvalInstance inst;
    inst.id = "w1";
    inst.category = "simple";
    inst.query = "What is the weather in Paris?";
    inst.library = ToolLibrary(std::move(tools));
    inst.golden = {"get_weather"};
    inst.answers = {AnswerSpec{"get_weather", {ParamAnswer{"city", {Value("Paris")}, false}}}};
    return inst;
}

// Slow, order-scrambling port: answers depend only on the request.
class JitterPort final : public CompletionPort {
public:
    std::string complete(const ChatRequest& req) override {
        const auto tools = extract_prompt_tools(req.system);
        std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<int>((tools.size() * 7) % 5)));
        ++calls_;
        if (tools.contains("get_weather")) return R"([get_weather(city="Paris")])";
        if (tools.contains("get_forecast")) return R"([get_forecast(city="Paris", days=2)])";
        return "none apply";
    }
    Usage usage() const override { return Usage{calls_.load(), 0, 0}; }

private:
    std::atomic<std::uint64_t> calls_{0};
};

}  // namespace

TEST_SUITE("pipeline") {

TEST_CASE("tool-dc end to end") {
    const auto inst = weather_instance();
    ScriptedMock mock;
    MockMatcher try_weather;
    try_weather.tools_include = {"get_weather"};
    try_weather.stage = MockMatcher::Stage::Try;
    mock.add_rule(try_weather, R"([get_weather(city="Paris")])");
    MockMatcher try_forecast;
    try_forecast.tools_include = {"get_forecast"};
    try_forecast.stage = MockMatcher::Stage::Try;
    mock.add_rule(try_forecast, R"([get_forecast(town="Paris")])");  // invalid key
    MockMatcher retry;
    retry.stage = MockMatcher::Stage::Retry;
    retry.tools_include = {"get_weather"};
    retry.max_tools = 1;
    mock.add_rule(retry, R"([get_weather(city="Paris")])");

    const auto trace = run_strategy(inst, Strategy::tool_dc(), mock, bm25_retriever());
    CHECK(trace.groups.size() == 6);
    CHECK(trace.completions == 7);
    CHECK(mock.usage().calls == 7);
    CHECK(trace.retry_set == std::vector<std::size_t>{0});
    CHECK(trace.context == trace.retry_set);
    CHECK(trace.final_issued);
    REQUIRE(trace.final_outcome.is_parsed());
    CHECK(trace.final_outcome.calls()[0].name == "get_weather");
    // The forecast tool appears in some group whose answer failed the key check.
    bool saw_invalid = false;
    for (const auto& g : trace.groups)
        for (const auto& r : g.report.reasons) saw_invalid = saw_invalid || r.kind == FailureReason::Kind::UnknownArgKey;
    CHECK(saw_invalid);
}

TEST_CASE("empty valid set skips the final call unless fallback is on") {
    const auto inst = weather_instance();
    ScriptedMock mock("I cannot help with that.");
    auto trace = run_strategy(inst, Strategy::tool_dc(), mock, bm25_retriever());
    CHECK_FALSE(trace.final_issued);
    CHECK(trace.completions == 6);
    CHECK(trace.final_outcome.is_null());

    ScriptedMock mock2("[get_weather(city=\"Paris\")]");
    MockMatcher try_stage;
    try_stage.stage = MockMatcher::Stage::Try;
    mock2.add_rule(try_stage, "nope");
    PipelineConfig cfg;
    cfg.fallback_all_funs = true;
    trace = run_strategy(inst, Strategy::tool_dc(), mock2, bm25_retriever(), cfg);
    CHECK(trace.fallback_used);
    CHECK(trace.context.size() == inst.library.size());
    CHECK(trace.completions == 7);
    CHECK(trace.final_outcome.is_parsed());
}

TEST_CASE("group failures become null outcomes") {
    const auto inst = weather_instance();
    ScriptedMock mock(R"([get_weather(city="Paris")])");
    mock.set_fault(1, MockFault::Transport);
    mock.set_fault(3, MockFault::Gibberish);
    PipelineConfig cfg;
    cfg.try_parallelism = 1;
    const auto trace = run_strategy(inst, Strategy::tool_dc(), mock, bm25_retriever(), cfg);
    CHECK_FALSE(trace.groups[0].error.empty());
    CHECK(trace.groups[0].outcome.is_null());
    CHECK(trace.groups[2].raw == kMockGibberish);
    CHECK(trace.groups[2].outcome.is_null());
    CHECK(trace.final_issued);

    ScriptedMock dead;
    for (std::uint64_t i = 1; i <= 6; ++i) dead.set_fault(i, MockFault::Transport);
    CHECK_THROWS_AS(run_strategy(inst, Strategy::tool_dc(), dead, bm25_retriever(), cfg), PipelineError);

    ScriptedMock final_fails(R"([get_weather(city="Paris")])");
    final_fails.set_fault(7, MockFault::Transport);
    CHECK_THROWS_AS(run_strategy(inst, Strategy::tool_dc(), final_fails, bm25_retriever(), cfg), PipelineError);
}

TEST_CASE("try results keep group order under concurrency") {
    const auto inst = weather_instance();
    const auto plan = build_plan(bm25_rank(inst.query, inst.library), inst.library.size());
    JitterPort a, b;
    PipelineConfig seq;
    seq.try_parallelism = 1;
    const auto serial = run_try(inst.query, plan.groups, inst.library, a, seq);
    const auto parallel = run_try(inst.query, plan.groups, inst.library, b);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].group_index == plan.groups[i].index);
        CHECK(serial[i].group_index == parallel[i].group_index);
        CHECK(serial[i].raw == parallel[i].raw);
    }
}

TEST_CASE("retry set deduplicates by first appearance") {
    const auto inst = weather_instance();
    const std::vector<GroupOutcome> valid{
        {1, parse_invocations(R"([get_forecast(city="a"), get_weather(city="b")])")},
        {3, parse_invocations(R"([get_weather(city="c")])")}};
    CHECK(build_retry_set(valid, inst.library) == std::vector<std::size_t>{1, 0});
    ScriptedMock mock;
    CHECK_THROWS_AS(run_retry("q", {}, inst.library, mock), PipelineError);
}

TEST_CASE("baselines issue one completion") {
    const auto inst = weather_instance();
    ScriptedMock mock(R"([get_weather(city="Paris")])");
    for (auto s : {Strategy::all_funs(), Strategy::top_k(3), Strategy::gt_funs()}) {
        const auto trace = run_strategy(inst, s, mock, bm25_retriever());
        CHECK(trace.completions == 1);
        CHECK(trace.groups.empty());
    }
    CHECK(run_strategy(inst, Strategy::top_k(3), mock, bm25_retriever()).context.size() == 3);
    CHECK(run_strategy(inst, Strategy::gt_funs(), mock, bm25_retriever()).context == std::vector<std::size_t>{0});
    auto no_golden = inst;
    no_golden.golden.clear();
    CHECK_THROWS_AS(run_strategy(no_golden, Strategy::gt_funs(), mock, bm25_retriever()), PipelineError);
}

TEST_CASE("trace json round trip") {
    const auto inst = weather_instance();
    JitterPort port;
    const auto trace = run_strategy(inst, Strategy::tool_dc(), port, bm25_retriever());
    const auto j = trace_to_json(trace);
    const auto back = trace_from_json(json::parse(j.dump()));
    CHECK(trace_to_json(back) == j);
    CHECK(back.completions == trace.completions);
    CHECK(back.final_outcome == trace.final_outcome);
    CHECK(parse_strategy_kind("top_k") == Strategy::Kind::TopK);
    CHECK_FALSE(parse_strategy_kind("best").has_value());
}

TEST_CASE("synthetic cases behave as designed") {
    const auto suite = synthetic::make_suite(6);
    ScriptedMock mock;
    synthetic::add_rules(mock, suite);
    for (const auto& c : suite) {
        const auto trace = run_strategy(c.instance, Strategy::tool_dc(), mock, bm25_retriever());
        REQUIRE(trace.final_outcome.is_parsed());
        CHECK(serialize_invocations(trace.final_outcome.calls()) == c.golden_call);
    }
}

}

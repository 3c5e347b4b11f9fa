#include <doctest.h>

#include <sstream>

#include "support/generators.hpp"
#include "support/oracles.hpp"
#include "support/synthetic.hpp"
#include "tooldc/evalharness.hpp"
#include "tooldc/library_io.hpp"

using namespace tooldc;

namespace {

const char* kRow =
    R"({"id": "simple_0", "category": "simple", "question": "Area of a triangle with base 10 and height 5?",
        "functions": [{"name": "calculate_triangle_area", "description": "Area of a triangle.",
          "parameters": {"type": "dict", "properties": {
            "base": {"type": "integer", "description": "base"},
            "height": {"type": "integer", "description": "height"},
            "unit": {"type": "string", "description": "unit"}}, "required": ["base", "height"]}}],
        "golden": ["calculate_triangle_area"],
        "answers": [{"fn": "calculate_triangle_area", "params": {"base": [10], "height": [5], "unit": ["units", ""]}}]})";

std::vector<AnswerSpec> triangle_spec() { return instance_from_json(json::parse(kRow)).answers; }

bool matches(const char* text, const std::vector<AnswerSpec>& spec) { return ast_match(parse_invocations(text), spec); }

}  // namespace

TEST_SUITE("evalharness") {

TEST_CASE("dataset row decoding") {
    const auto inst = instance_from_json(json::parse(kRow));
    CHECK(inst.id == "simple_0");
    REQUIRE(inst.answers.size() == 1);
    const auto& unit = inst.answers[0].params[2];
    CHECK(unit.name == "unit");
    CHECK(unit.optional);
    CHECK(unit.acceptable == std::vector<Value>{Value("units")});
    CHECK(instance_from_json(instance_to_json(inst)) == inst);
}

TEST_CASE("ast match examples") {
    const auto spec = triangle_spec();
    CHECK(matches("[calculate_triangle_area(base=10, height=5)]", spec));
    CHECK(matches("[calculate_triangle_area(base=10.0, height=5, unit='units')]", spec));
    CHECK_FALSE(matches("[calculate_triangle_area(base=10, height=5, unit='cm')]", spec));
    CHECK_FALSE(matches("[calculate_triangle_area(base=10)]", spec));
    CHECK_FALSE(matches("[calculate_triangle_area(base=10, height=5, color=1)]", spec));
    CHECK_FALSE(matches("[calculate_triangle_area(base=10.5, height=5)]", spec));
    CHECK_FALSE(matches("[calc(base=10, height=5)]", spec));
    CHECK_FALSE(matches("[calculate_triangle_area(base=10, height=5), calculate_triangle_area(base=10, height=5)]", spec));
    CHECK_FALSE(matches("not a call", spec));
}

TEST_CASE("parallel calls need a one-to-one pairing") {
    // Greedy pairing of the first call with the first spec fails here.
    const std::vector<AnswerSpec> spec{AnswerSpec{"f", {ParamAnswer{"a", {Value(1), Value(2)}, false}}},
                                       AnswerSpec{"f", {ParamAnswer{"a", {Value(1)}, false}}}};
    CHECK(matches("[f(a=1), f(a=2)]", spec));
    CHECK(matches("[f(a=2), f(a=1)]", spec));
    CHECK_FALSE(matches("[f(a=2), f(a=2)]", spec));
}

TEST_CASE("optional parameter with no values must be absent") {
    const std::vector<AnswerSpec> spec{AnswerSpec{"f", {ParamAnswer{"a", {}, true}}}};
    CHECK(matches("[f()]", spec));
    CHECK_FALSE(matches("[f(a=1)]", spec));
}

TEST_CASE("agrees with exhaustive permutation matching") {
    gen::Rng rng(5150);
    std::size_t positives = 0;
    for (int i = 0; i < 500; ++i) {
        const auto fx = gen::ast_fixture(rng);
        const bool expect = oracle::ast_match_exhaustive(fx.prediction, fx.spec);
        REQUIRE(ast_match(fx.prediction, fx.spec) == expect);
        positives += expect ? 1 : 0;
    }
    CHECK(positives > 50);
    CHECK(positives < 450);
}

TEST_CASE("read_dataset reports the failing line") {
    std::istringstream in(json::parse(kRow).dump() + "\n\n{\"id\": 3}\n");
    try {
        read_dataset(in);
        FAIL("expected DatasetError");
    } catch (const DatasetError& e) {
        CHECK(e.line() == 3);
    }
    std::istringstream ok(json::parse(kRow).dump() + "\n");
    const auto data = read_dataset(ok);
    std::ostringstream out;
    write_dataset(out, data);
    std::istringstream again(out.str());
    CHECK(read_dataset(again) == data);
}

TEST_CASE("noise injection") {
    const auto c = synthetic::make_case(4);
    const auto pool = synthetic::make_pool(80);
    const auto a = inject_noise(c.instance, pool, 20, 42);
    const auto b = inject_noise(c.instance, pool, 20, 42);
    CHECK(a == b);
    CHECK(a.library.size() == 20);
    for (const auto& t : c.instance.library.tools()) CHECK(a.library.find(t.name) != nullptr);
    CHECK(a.query == c.instance.query);
    CHECK(a.answers == c.instance.answers);
    CHECK_FALSE(inject_noise(c.instance, pool, 20, 43) == a);
    CHECK(inject_noise(c.instance, pool, c.instance.library.size(), 1).library.size() == c.instance.library.size());
    CHECK_THROWS_AS(inject_noise(c.instance, pool, 200, 1), PoolExhausted);
    CHECK_THROWS_AS(inject_noise(c.instance, pool, 2, 1), std::invalid_argument);

    // Names already in the library are never drawn again.
    const auto self_pool = c.instance.library;
    CHECK_THROWS_AS(inject_noise(c.instance, self_pool, c.instance.library.size() + 1, 1), PoolExhausted);
}

TEST_CASE("derived seeds are stable and id-sensitive") {
    CHECK(derive_seed(7, "a") == derive_seed(7, "a"));
    CHECK(derive_seed(7, "a") != derive_seed(7, "b"));
    CHECK(derive_seed(7, "a") != derive_seed(8, "a"));
}

TEST_CASE("pooled tools keep first occurrence") {
    const auto suite = synthetic::make_suite(3);
    std::vector<EvalInstance> data;
    for (const auto& c : suite) data.push_back(c.instance);
    data.push_back(suite[0].instance);
    std::size_t total = 0;
    for (const auto& c : suite) total += c.instance.library.size();
    const auto pooled = pooled_tools(data);
    CHECK(pooled.size() == total);
    CHECK(pooled[0] == suite[0].instance.library[0]);
}

TEST_CASE("aggregation averages categories, then rollups") {
    std::vector<InstanceRecord> recs;
    auto add = [&](const char* cat, bool ok) { recs.push_back(InstanceRecord{"x", cat, ok, {}, std::nullopt}); };
    add("simple", true);
    add("simple", true);
    add("simple", true);
    add("simple", false);  // 0.75
    add("multiple", true); // 1.0
    add("live_simple", false);
    add("live_simple", true);  // 0.5
    const auto m = aggregate(recs);
    CHECK(m.categories.at("simple").accuracy() == doctest::Approx(0.75));
    CHECK(m.rollups.at("non_live") == doctest::Approx(0.875));
    CHECK(m.rollups.at("live") == doctest::Approx(0.5));
    CHECK(m.overall == doctest::Approx(0.6875));
    CHECK(m.instances == 7);
    CHECK(m.matched == 5);
}

TEST_CASE("evaluate records failures and keeps going") {
    const auto suite = synthetic::make_suite(4);
    std::vector<EvalInstance> data;
    for (const auto& c : suite) data.push_back(c.instance);
    ScriptedMock mock;
    synthetic::add_cooperative_rules(mock, suite);
    mock.set_fault(1, MockFault::Transport);
    EvalConfig cfg;
    cfg.concurrency = 1;
    const auto report = evaluate(data, Strategy::gt_funs(), mock, bm25_retriever(), cfg);
    REQUIRE(report.records.size() == 4);
    CHECK_FALSE(report.records[0].error.empty());
    CHECK_FALSE(report.records[0].matched);
    for (std::size_t i = 1; i < 4; ++i) CHECK(report.records[i].matched);
    CHECK(report.metrics.errors == 1);
    CHECK(report.records[1].id == data[1].id);
    const auto j = metrics_to_json(report.metrics);
    CHECK(j["matched"] == 3);
}

}

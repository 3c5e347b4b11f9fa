#include "cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "tooldc/cotforge.hpp"
#include "tooldc/evalharness.hpp"
#include "tooldc/http_port.hpp"
#include "tooldc/library_io.hpp"
#include "tooldc/mock_port.hpp"
#include "tooldc/pipeline.hpp"

namespace tooldc::cli {

namespace {

namespace fs = std::filesystem;

// Reported with kExitData.
struct DataFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reported with kExitUsage.
struct UsageFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string env_or(const char* name, std::string fallback) {
    const char* v = std::getenv(name);
    return v != nullptr && *v != '\0' ? std::string(v) : fallback;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataFailure("cannot read " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw DataFailure("cannot write " + path.string());
    return out;
}

// Port settings shared by eval and build-cot. Endpoint, model and key
// variable fall back to TOOLDC_ENDPOINT, TOOLDC_MODEL, TOOLDC_API_KEY_ENV
// when neither a flag nor the config file sets them.
struct PortOptions {
    std::string mock;
    std::string endpoint;
    std::string model;
    std::string api_key_env;
    double timeout_s = 60.0;
    int retries = 3;
    int max_in_flight = 8;
    double temperature = 0.0;
    std::size_t max_tokens = 512;

    CLI::Option* endpoint_opt = nullptr;
    CLI::Option* model_opt = nullptr;
    CLI::Option* key_opt = nullptr;

    void add_to(CLI::App& app) {
        app.add_option("--mock", mock, "Scripted mock fixture (JSON) used instead of an endpoint");
        endpoint_opt = app.add_option("--endpoint", endpoint, "OpenAI-compatible base URL [env TOOLDC_ENDPOINT]");
        model_opt = app.add_option("--model", model, "Model name sent to the endpoint [env TOOLDC_MODEL]");
        key_opt = app.add_option("--api-key-env", api_key_env,
                                 "Variable holding the API key [env TOOLDC_API_KEY_ENV, default OPENAI_API_KEY]");
        app.add_option("--timeout", timeout_s, "Per-call timeout in seconds")->capture_default_str();
        app.add_option("--retries", retries, "Retries for transient transport errors")->capture_default_str();
        app.add_option("--max-in-flight", max_in_flight, "Concurrent requests to the endpoint")->capture_default_str();
        app.add_option("--temperature", temperature, "Sampling temperature")->capture_default_str()->check(
            CLI::NonNegativeNumber);
        app.add_option("--max-tokens", max_tokens, "Completion token limit")->capture_default_str()->check(
            CLI::PositiveNumber);
    }

    void resolve_env() {
        if (endpoint_opt->count() == 0 && mock.empty()) endpoint = env_or("TOOLDC_ENDPOINT", "");
        if (model_opt->count() == 0) model = env_or("TOOLDC_MODEL", model);
        if (key_opt->count() == 0) api_key_env = env_or("TOOLDC_API_KEY_ENV", "OPENAI_API_KEY");
    }

    std::unique_ptr<CompletionPort> make_port() {
        resolve_env();
        if (!mock.empty() && !endpoint.empty()) throw UsageFailure("--mock and --endpoint are mutually exclusive");
        if (mock.empty() && endpoint.empty()) throw UsageFailure("one of --mock or --endpoint is required");
        if (!mock.empty()) {
            try {
                return std::make_unique<ScriptedMock>(ScriptedMock::from_json(json::parse(read_file(mock))));
            } catch (const DataFailure&) {
                throw;
            } catch (const std::exception& e) {
                throw DataFailure("mock fixture " + mock + ": " + e.what());
            }
        }
        EndpointConfig cfg;
        cfg.url = endpoint;
        cfg.model = model;
        cfg.api_key_env = api_key_env;
        cfg.timeout = std::chrono::milliseconds(static_cast<std::int64_t>(timeout_s * 1000.0));
        cfg.max_retries = retries;
        cfg.max_in_flight = max_in_flight;
        return std::make_unique<HttpPort>(cfg);
    }

    PipelineConfig pipeline() const {
        PipelineConfig p;
        p.temperature = temperature;
        p.max_tokens = max_tokens;
        p.model = model;
        return p;
    }
};

std::vector<EvalInstance> load_dataset(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataFailure("cannot read dataset " + path);
    try {
        return read_dataset(in);
    } catch (const DatasetError& e) {
        throw DataFailure(path + ": " + e.what());
    }
}

std::string percent(double v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(2) << v * 100.0;
    return s.str();
}

void print_metrics(std::ostream& out, const Metrics& m) {
    out << std::left << std::setw(28) << "category" << std::right << std::setw(9) << "matched" << std::setw(8)
        << "scored" << std::setw(10) << "accuracy" << '\n';
    for (const auto& [name, s] : m.categories)
        out << std::left << std::setw(28) << name << std::right << std::setw(9) << s.matched << std::setw(8)
            << s.scored << std::setw(10) << percent(s.accuracy()) << '\n';
    for (const auto& [name, v] : m.rollups)
        out << std::left << std::setw(45) << ("[" + name + "]") << std::right << std::setw(10) << percent(v) << '\n';
    out << std::left << std::setw(45) << "overall" << std::right << std::setw(10) << percent(m.overall) << '\n';
    if (m.errors) out << m.errors << " instance(s) failed; see results.jsonl\n";
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
    std::string dataset;
    std::string strategy = "tooldc";
    std::size_t k = 5;
    std::size_t max_group_size = 0;
    std::string out_dir = "results";
    std::string trace_out;
    std::size_t concurrency = 8;
    bool fallback = false;
    double bm25_k1 = 1.5;
    double bm25_b = 0.75;
    PortOptions port;
};

void add_eval(CLI::App& app, EvalArgs& a) {
    app.add_option("--dataset", a.dataset, "Dataset JSONL")->required();
    app.add_option("--strategy", a.strategy, "tooldc | all_funs | top_k | gt_funs")
        ->capture_default_str()
        ->check(CLI::IsMember({"tooldc", "all_funs", "top_k", "gt_funs"}));
    app.add_option("--k", a.k, "Group count for tooldc (K = min(k, N)); k for top_k")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    app.add_option("--max-group-size", a.max_group_size, "Cap on anchor groups (0 = uncapped)");
    app.add_option("--out", a.out_dir, "Output directory")->capture_default_str();
    app.add_option("--trace-out", a.trace_out, "Trace JSONL (default <out>/traces.jsonl)");
    app.add_option("--concurrency", a.concurrency, "Instances run in parallel")->capture_default_str()->check(
        CLI::PositiveNumber);
    app.add_flag("--fallback-all-funs", a.fallback, "Answer with the full library when no Try outcome validates");
    app.add_option("--bm25-k1", a.bm25_k1, "BM25 k1")->capture_default_str();
    app.add_option("--bm25-b", a.bm25_b, "BM25 b")->capture_default_str();
    a.port.add_to(app);
}

int cmd_eval(EvalArgs& a, std::ostream& out) {
    auto port = a.port.make_port();
    auto dataset = load_dataset(a.dataset);
    if (dataset.empty()) throw DataFailure("dataset " + a.dataset + " is empty");

    Strategy strategy;
    strategy.kind = *parse_strategy_kind(a.strategy);
    strategy.k = a.k;
    strategy.grouping.k = a.k;
    if (a.max_group_size) strategy.grouping.max_group_size = a.max_group_size;
    if (strategy.kind == Strategy::Kind::GtFuns) {
        for (const auto& inst : dataset)
            if (inst.golden.empty()) throw DataFailure("instance " + inst.id + " has no golden tool names");
    }

    EvalConfig cfg;
    cfg.pipeline = a.port.pipeline();
    cfg.pipeline.fallback_all_funs = a.fallback;
    cfg.concurrency = a.concurrency;
    const auto report = evaluate(dataset, strategy, *port, bm25_retriever({a.bm25_k1, a.bm25_b}), cfg);

    const fs::path dir(a.out_dir);
    const fs::path trace_path = a.trace_out.empty() ? dir / "traces.jsonl" : fs::path(a.trace_out);
    auto traces = open_out(trace_path);
    auto results = open_out(dir / "results.jsonl");
    std::size_t line = 0;
    for (const auto& rec : report.records) {
        std::optional<std::size_t> trace_line;
        if (rec.trace) {
            traces << trace_to_json(*rec.trace).dump() << '\n';
            trace_line = ++line;
        }
        results << record_to_json(rec, trace_line).dump() << '\n';
    }
    json summary = metrics_to_json(report.metrics);
    summary["strategy"] = a.strategy;
    summary["k"] = a.k;
    summary["dataset"] = a.dataset;
    auto summary_out = open_out(dir / "summary.json");
    summary_out << summary.dump(2) << '\n';
    if (!traces || !results || !summary_out) throw DataFailure("failed writing results under " + dir.string());

    print_metrics(out, report.metrics);
    return kExitOk;
}

// ---- inject ---------------------------------------------------------------

struct InjectArgs {
    std::string dataset;
    std::string pool;
    std::size_t n = 20;
    std::uint64_t seed = 0;
    std::string out;
};

void add_inject(CLI::App& app, InjectArgs& a) {
    app.add_option("--dataset", a.dataset, "Dataset JSONL")->required();
    app.add_option("--pool", a.pool, "Distractor tool library (JSON); default: every tool in the dataset");
    app.add_option("--n", a.n, "Target tools per instance")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--seed", a.seed, "Sampling seed")->capture_default_str();
    app.add_option("--out", a.out, "Output dataset JSONL")->required();
}

int cmd_inject(InjectArgs& a, std::ostream& out) {
    auto dataset = load_dataset(a.dataset);
    ToolLibrary pool;
    if (a.pool.empty()) {
        pool = pooled_tools(dataset);
    } else {
        try {
            pool = load_library(read_file(a.pool));
        } catch (const LibraryError& e) {
            throw DataFailure("pool " + a.pool + ": " + e.what());
        }
    }
    std::vector<EvalInstance> extended;
    extended.reserve(dataset.size());
    for (const auto& inst : dataset) {
        try {
            extended.push_back(inject_noise(inst, pool, a.n, derive_seed(a.seed, inst.id)));
        } catch (const std::exception& e) {
            throw DataFailure(e.what());
        }
    }
    auto file = open_out(a.out);
    write_dataset(file, extended);
    if (!file) throw DataFailure("failed writing " + a.out);
    out << "wrote " << extended.size() << " instances with " << a.n << " tools each to " << a.out << '\n';
    return kExitOk;
}

// ---- build-cot ------------------------------------------------------------

struct CotArgs {
    std::string corpus;
    std::string out;
    std::size_t limit = 0;
    std::size_t concurrency = 1;
    PortOptions port;
};

void add_cot(CLI::App& app, CotArgs& a) {
    app.add_option("--corpus", a.corpus, "Raw corpus (xlam-style JSON array or JSONL)")->required();
    app.add_option("--out", a.out, "Output training JSONL")->required();
    app.add_option("--limit", a.limit, "Process only the first N raw samples (0 = all)");
    app.add_option("--concurrency", a.concurrency, "Samples built in parallel")->capture_default_str()->check(
        CLI::PositiveNumber);
    a.port.add_to(app);
}

int cmd_build_cot(CotArgs& a, std::ostream& out) {
    auto port = a.port.make_port();
    std::ifstream in(a.corpus, std::ios::binary);
    if (!in) throw DataFailure("cannot read corpus " + a.corpus);
    std::vector<RawSample> raw;
    try {
        raw = read_raw_corpus(in);
    } catch (const DatasetError& e) {
        throw DataFailure(a.corpus + ": " + e.what());
    }
    if (a.limit && raw.size() > a.limit) raw.resize(a.limit);

    CotConfig cfg;
    cfg.pipeline = a.port.pipeline();
    cfg.concurrency = a.concurrency;
    auto file = open_out(a.out);
    CotCounts counts;
    try {
        counts = build_dataset(raw, *port, file, cfg);
    } catch (const SinkError& e) {
        std::ofstream marker(a.out + ".partial");
        marker << e.written() << '\n';
        throw DataFailure(std::string(e.what()) + "; " + std::to_string(e.written()) + " records written, marked " +
                          a.out + ".partial");
    }
    out << "processed=" << raw.size() << " emitted=" << counts.emitted
        << " skipped_empty_valid=" << counts.skipped_empty_valid << " skipped_mismatch=" << counts.skipped_mismatch
        << " errored=" << counts.errored << '\n';
    return kExitOk;
}

// ---- explain --------------------------------------------------------------

struct ExplainArgs {
    std::string trace;
    std::string id;
};

void add_explain(CLI::App& app, ExplainArgs& a) {
    app.add_option("--trace", a.trace, "Trace JSONL written by eval")->required();
    app.add_option("--id", a.id, "Instance id (default: first trace)");
}

std::string names_of(const RunTrace& t, const std::vector<std::size_t>& positions) {
    std::string s;
    for (std::size_t i = 0; i < positions.size(); ++i) {
        if (i) s += ", ";
        s += t.tool_names[positions[i]];
    }
    return s;
}

std::string outcome_text(const ParseOutcome& o) {
    return o.is_parsed() ? serialize_invocations(o.calls()) : std::string("<null>");
}

void print_trace(std::ostream& out, const RunTrace& t) {
    out << "instance " << t.instance_id << "  strategy " << to_string(t.strategy) << "  completions "
        << t.completions << '\n';
    if (t.strategy == Strategy::Kind::ToolDcTf) {
        out << "groups (" << t.groups.size() << "):\n";
        for (const auto& g : t.groups) {
            out << "  S" << g.index << "  anchor=" << (g.anchor ? t.tool_names[*g.anchor] : std::string("-"))
                << "  tools=[" << names_of(t, g.members) << "]\n";
            out << "      output: " << outcome_text(g.outcome) << '\n';
            if (!g.error.empty()) out << "      transport: " << g.error << '\n';
            if (g.report.valid) {
                out << "      verdict: valid\n";
            } else {
                out << "      verdict: invalid\n";
                for (const auto& r : g.report.reasons) out << "        - " << describe(r) << '\n';
            }
        }
        out << "retry set: [" << names_of(t, t.retry_set) << "]\n";
        if (!t.final_issued) {
            out << "retry: skipped (no valid Try outcome)\n";
        } else if (t.fallback_used) {
            out << "retry: fallback over all " << t.context.size() << " tools\n";
        }
    } else {
        out << "context (" << t.context.size() << " tools): [" << names_of(t, t.context) << "]\n";
    }
    out << "final: " << (t.final_issued ? outcome_text(t.final_outcome) : std::string("<null>")) << '\n';
}

int cmd_explain(ExplainArgs& a, std::ostream& out) {
    std::ifstream in(a.trace, std::ios::binary);
    if (!in) throw DataFailure("cannot read trace file " + a.trace);
    std::string line;
    std::size_t number = 0;
    std::optional<RunTrace> found;
    while (std::getline(in, line)) {
        ++number;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        RunTrace t;
        try {
            t = trace_from_json(json::parse(line));
        } catch (const std::exception& e) {
            throw DataFailure(a.trace + ": line " + std::to_string(number) + ": corrupted trace: " + e.what());
        }
        if (!found && (a.id.empty() || t.instance_id == a.id)) found = std::move(t);
    }
    if (!found)
        throw DataFailure(a.id.empty() ? "trace file " + a.trace + " is empty" : "unknown instance id: " + a.id);
    print_trace(out, *found);
    return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Divide-and-conquer tool calling: evaluation, noise injection, CoT data construction"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key = value config file; sections [eval], [inject], [build-cot], [explain]");
    app.footer("Precedence: flags > config file > environment (TOOLDC_ENDPOINT, TOOLDC_MODEL, TOOLDC_API_KEY_ENV).\n"
               "Exit status: 0 success, 1 data/runtime failure, 2 usage error.");

    EvalArgs eval_args;
    InjectArgs inject_args;
    CotArgs cot_args;
    ExplainArgs explain_args;
    auto* eval = app.add_subcommand("eval", "Run a strategy over a dataset and score it");
    add_eval(*eval, eval_args);
    auto* inject = app.add_subcommand("inject", "Pad every instance to N tools with distractors");
    add_inject(*inject, inject_args);
    auto* cot = app.add_subcommand("build-cot", "Build the chain-of-thought training set");
    add_cot(*cot, cot_args);
    auto* explain = app.add_subcommand("explain", "Pretty-print one run trace");
    add_explain(*explain, explain_args);
    for (auto* sub : {eval, inject, cot, explain}) sub->fallthrough();  // --config after the subcommand

    std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
    std::reverse(rest.begin(), rest.end());
    try {
        app.parse(rest);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n\n";
        CLI::App* failed = &app;
        for (auto* sub : {eval, inject, cot, explain})
            if (sub->parsed()) failed = sub;
        err << failed->help();
        return kExitUsage;
    }

    try {
        if (eval->parsed()) return cmd_eval(eval_args, out);
        if (inject->parsed()) return cmd_inject(inject_args, out);
        if (cot->parsed()) return cmd_build_cot(cot_args, out);
        if (explain->parsed()) return cmd_explain(explain_args, out);
    } catch (const UsageFailure& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

}  // namespace tooldc::cli

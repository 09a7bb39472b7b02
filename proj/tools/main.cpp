#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"
#include "ragbench/corpus/chunker.hpp"
#include "ragbench/corpus/store.hpp"
#include "ragbench/evaluation/kendall.hpp"
#include "ragbench/evaluation/report.hpp"
#include "ragbench/generation/client.hpp"
#include "ragbench/orchestrator/config.hpp"
#include "ragbench/orchestrator/dataset.hpp"
#include "ragbench/orchestrator/experiment.hpp"
#include "ragbench/orchestrator/runstore.hpp"
#include "ragbench/rerank/client.hpp"
#include "ragbench/retrieval/bm25.hpp"
#include "ragbench/retrieval/types.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace ragbench;

void print_aggregates(const evaluation::MetricReport& report) {
    for (const auto& [metric, aggregate] : report.aggregates) {
        std::printf("%-14s mean %.4f  scored %llu  excluded %llu\n", metric.c_str(),
                    aggregate.mean, static_cast<unsigned long long>(aggregate.count),
                    static_cast<unsigned long long>(aggregate.excluded));
    }
}

struct IngestArgs {
    std::string collection;
    std::string store_dir;
    std::string chunk = "words";
    std::size_t size = 100;
    std::size_t workers = 0;
};

void cmd_ingest(const IngestArgs& args) {
    corpus::ChunkPolicy policy;
    if (args.chunk == "words") {
        policy.mode = corpus::ChunkMode::Words;
    } else if (args.chunk == "characters") {
        policy.mode = corpus::ChunkMode::Characters;
    } else {
        throw Error::config("InvalidPolicy", "--chunk must be words or characters");
    }
    policy.size = args.size;
    corpus::JsonlCollectionSource source(args.collection);
    const auto summary = corpus::ingest_collection(source, policy, args.store_dir, args.workers);
    std::cout << "documents " << summary.documents << "\n"
              << "passages  " << summary.passages << "\n"
              << "checksum  " << summary.checksum << "\n";
}

struct IndexArgs {
    std::string store_dir;
    std::string output;
    double k1 = 0.9;
    double b = 0.4;
};

void cmd_index(const IndexArgs& args) {
    const auto store = corpus::CorpusStore::open(args.store_dir);
    const auto index = retrieval::Bm25Index::build(store, {args.k1, args.b});
    index.save(args.output);
    std::cout << "passages " << index.passage_count() << "\n"
              << "avgdl    " << index.average_length() << "\n";
}

struct RetrieveArgs {
    std::string store_dir;
    std::string dataset;
    std::string output;
    std::string kind = "bm25";
    std::string index_path; // prebuilt lexical index (bm25 only)
    std::size_t k = 50;
    double k1 = 0.9;
    double b = 0.4;
    std::string vectors;
    std::string queries;
    unsigned seed = 1;
};

void cmd_retrieve(const RetrieveArgs& args) {
    const auto examples = orchestrator::load_dataset(args.dataset);
    const auto store = corpus::CorpusStore::open(args.store_dir);
    std::vector<retrieval::RankedList> runs;
    if (args.kind == "bm25" && !args.index_path.empty()) {
        const auto index = retrieval::Bm25Index::load(args.index_path);
        runs.reserve(examples.size());
        for (const auto& ex : examples) {
            runs.push_back(index.search(ex.question, args.k, ex.example_id));
        }
    } else {
        orchestrator::ExperimentConfig config;
        config.top_retrieve = args.k;
        config.top_context = std::min<std::size_t>(args.k, config.top_context);
        config.retriever.kind = args.kind;
        config.retriever.k1 = args.k1;
        config.retriever.b = args.b;
        config.retriever.vectors = args.vectors;
        config.retriever.queries = args.queries;
        config.retriever.seed = args.seed;
        runs = orchestrator::run_retrieval(config, args.kind, examples, store);
    }
    retrieval::write_ranked_runs(args.output, runs);
    std::cout << "queries " << runs.size() << "\n";
}

struct RerankArgs {
    std::string store_dir;
    std::string dataset;
    std::string run_path;
    std::string output;
    std::size_t keep = 5;
    std::size_t max_batch = 32;
    std::size_t max_in_flight = 4;
};

void cmd_rerank(const RerankArgs& args) {
    const auto examples = orchestrator::load_dataset(args.dataset);
    const auto store = corpus::CorpusStore::open(args.store_dir);
    const auto runs = retrieval::read_ranked_runs(args.run_path);
    std::map<std::string, const orchestrator::QAExample*> by_id;
    for (const auto& ex : examples) by_id[ex.example_id] = &ex;

    rerank::RerankerEndpoint endpoint{net::endpoint_from_env("RAGBENCH_RERANKER", true),
                                      args.max_batch, args.max_in_flight};
    std::vector<retrieval::RankedList> reranked;
    reranked.reserve(runs.size());
    for (const auto& run : runs) {
        const auto it = by_id.find(run.query_id);
        if (it == by_id.end()) {
            throw Error::data("MissingQuery",
                              "ranked run for unknown query '" + run.query_id + "'");
        }
        if (run.entries.empty()) {
            retrieval::RankedList empty;
            empty.query_id = run.query_id;
            empty.producer = retrieval::Producer::Reranked;
            reranked.push_back(std::move(empty));
            continue;
        }
        reranked.push_back(
            rerank::rerank(endpoint, it->second->question, run, store, args.keep));
    }
    retrieval::write_ranked_runs(args.output, reranked);
    std::cout << "queries " << reranked.size() << "\n";
}

struct GenerateArgs {
    std::string dataset;
    std::string output;
    std::string model;
    std::string mode = "rag";
    std::string store_dir;
    std::string run_path;
    std::size_t top_context = 5;
    int max_new_tokens = 128;
    double temperature = 0.0;
    std::size_t max_in_flight = 4;
    std::string variant = "basic";
    std::string language = "en";
    std::string translations;
};

void cmd_generate(const GenerateArgs& args) {
    const auto examples = orchestrator::load_dataset(args.dataset);
    orchestrator::ExperimentConfig config;
    config.mode = orchestrator::prompt_mode_from_string(args.mode);
    if (config.mode == orchestrator::PromptMode::Oracle) {
        // Oracle only changes how the ranked run was produced; prompts are
        // plain context prompts either way.
        config.mode = orchestrator::PromptMode::Rag;
    }
    config.top_context = args.top_context;
    config.top_retrieve = std::max<std::size_t>(args.top_context, config.top_retrieve);
    config.language.expected = args.language;
    config.language.variant = args.variant;
    config.language.translations = args.translations;

    std::optional<corpus::CorpusStore> store;
    std::vector<retrieval::RankedList> runs;
    if (config.mode != orchestrator::PromptMode::ClosedBook) {
        if (args.store_dir.empty() || args.run_path.empty()) {
            throw Error::config("MissingContext",
                                "rag generation needs --store and --run");
        }
        store.emplace(corpus::CorpusStore::open(args.store_dir));
        runs = retrieval::read_ranked_runs(args.run_path);
    }

    const generation::DecodeConfig decode{args.max_new_tokens, args.temperature, args.model};
    auto plan = orchestrator::plan_prompts(config, decode, examples,
                                           runs.empty() ? nullptr : &runs,
                                           store ? &*store : nullptr);
    const auto endpoint = net::endpoint_from_env("RAGBENCH_LLM", true);
    const auto generated =
        generation::generate_batch(endpoint, plan.tasks, decode, {args.max_in_flight, false});
    auto records = std::move(plan.records);
    for (std::size_t j = 0; j < generated.size(); ++j) {
        records[plan.task_slot[j]] = generated[j];
    }
    generation::write_generations(args.output, records);
    std::size_t failed = 0;
    for (const auto& record : records) failed += record.failed ? 1 : 0;
    std::cout << "generated " << records.size() << " (" << failed << " failed)\n";
}

struct EvaluateArgs {
    std::string dataset;
    std::string generations;
    std::string output;
    std::vector<std::string> metrics = {"match", "em", "f1", "rouge", "char3"};
    std::string judge_model;
    std::string language = "en";
    std::string run_path;
    std::size_t k = 5;
    std::string judge_output;
    std::string run_id = "adhoc";
};

void cmd_evaluate(const EvaluateArgs& args) {
    const auto examples = orchestrator::load_dataset(args.dataset);
    const auto records = generation::read_generations(args.generations);
    std::vector<retrieval::RankedList> runs;
    if (!args.run_path.empty()) runs = retrieval::read_ranked_runs(args.run_path);

    orchestrator::EvaluationOptions options{args.metrics, args.judge_model, args.language, args.k};
    const auto metric_list = orchestrator::expand_metrics(args.metrics);
    const bool wants_judge =
        std::find(metric_list.begin(), metric_list.end(), "llmeval") != metric_list.end();
    const auto judge = net::endpoint_from_env("RAGBENCH_JUDGE", wants_judge);

    const auto output = orchestrator::evaluate_records(
        args.run_id, examples, records, runs.empty() ? nullptr : &runs, options, judge);
    evaluation::write_metrics(args.output, output.report);
    if (!args.judge_output.empty()) {
        jsonl::write_file_atomic(args.judge_output, jsonl::to_lines(output.judge_lines));
    }
    print_aggregates(output.report);
}

struct CorrelateArgs {
    std::string metrics_path;
    std::string target = "llmeval";
};

void cmd_correlate(const CorrelateArgs& args) {
    const auto report = evaluation::read_metrics(args.metrics_path);
    std::map<std::string, std::map<std::string, double>> by_metric;
    for (const auto& score : report.scores) {
        by_metric[score.metric_id][score.example_id] = score.value;
    }
    const auto target_it = by_metric.find(args.target);
    if (target_it == by_metric.end()) {
        throw Error::data("MissingMetric",
                          "no per-sample scores for target metric '" + args.target + "'");
    }
    const auto target_scores = target_it->second;
    by_metric.erase(args.target);
    const auto taus = evaluation::correlate_metrics(by_metric, target_scores);
    for (const auto& [metric, tau] : taus) {
        if (tau) {
            std::printf("%-14s %+.4f\n", metric.c_str(), *tau);
        } else {
            std::printf("%-14s n/a\n", metric.c_str());
        }
    }
}

struct ReportArgs {
    std::string store_dir;
    std::vector<std::string> runs;
    std::string baseline;
    std::string csv;
};

void cmd_report(const ReportArgs& args) {
    orchestrator::RunStore store(args.store_dir);
    const auto baseline = args.baseline.empty() ? std::nullopt
                                                : std::optional<std::string>(args.baseline);
    const auto table = orchestrator::report_runs(store, args.runs, baseline);
    std::cout << table.text;
    if (!args.csv.empty()) {
        jsonl::write_file_atomic(args.csv, table.csv);
        std::cout << "csv written to " << args.csv << "\n";
    }
}

struct ValidateArgs {
    std::string config_path;
};

void cmd_validate(const ValidateArgs& args) {
    const auto config = orchestrator::load_config(args.config_path);
    std::optional<bool> has_judgments;
    std::vector<std::string> findings;
    try {
        const auto examples = orchestrator::load_dataset(config.dataset);
        has_judgments = std::any_of(examples.begin(), examples.end(),
                                    [](const auto& ex) { return ex.has_judgment(); });
    } catch (const Error& e) {
        findings.push_back(std::string("dataset: ") + e.what());
    }
    const auto config_findings = orchestrator::validate_config(config, has_judgments);
    findings.insert(findings.end(), config_findings.begin(), config_findings.end());
    if (findings.empty()) {
        std::cout << "ok\n";
        return;
    }
    for (const auto& finding : findings) std::cout << finding << "\n";
    throw Error::config("InvalidConfig",
                        std::to_string(findings.size()) + " finding(s); see output above");
}

struct RunArgs {
    std::string config_path;
    std::string store_dir;
};

void cmd_run(const RunArgs& args) {
    const auto config = orchestrator::load_config(args.config_path);
    std::optional<bool> has_judgments;
    try {
        const auto examples = orchestrator::load_dataset(config.dataset);
        has_judgments = std::any_of(examples.begin(), examples.end(),
                                    [](const auto& ex) { return ex.has_judgment(); });
    } catch (const Error&) {
        // run_experiment reports dataset problems with full context
    }
    const auto findings = orchestrator::validate_config(config, has_judgments);
    if (!findings.empty()) {
        for (const auto& finding : findings) std::cerr << finding << "\n";
        throw Error::config("InvalidConfig",
                            std::to_string(findings.size()) + " finding(s); see output above");
    }
    const auto endpoints = orchestrator::endpoints_from_env(config);
    orchestrator::RunStore store(args.store_dir);
    const auto result = orchestrator::run_experiment(config, store, endpoints);

    const auto stage_line = [](const char* stage, const std::string& id, bool cached) {
        if (id.empty()) return;
        std::cout << stage << " " << id << (cached ? "  (cached)" : "") << "\n";
    };
    stage_line("retrieve ", result.retrieve_run_id, result.retrieve_cached);
    stage_line("rerank   ", result.rerank_run_id, result.rerank_cached);
    stage_line("generate ", result.generate_run_id, result.generate_cached);
    stage_line("evaluate ", result.evaluate_run_id, result.evaluate_cached);
    print_aggregates(result.report);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"RAG benchmarking toolkit"};
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Chunk a document collection into a passage store");
    ingest->add_option("--collection", ingest_args.collection, "collection JSONL file")
        ->required();
    ingest->add_option("--store", ingest_args.store_dir, "passage store directory")->required();
    ingest->add_option("--chunk", ingest_args.chunk, "words|characters");
    ingest->add_option("--size", ingest_args.size, "chunk budget per passage");
    ingest->add_option("--workers", ingest_args.workers, "chunking threads (0 = auto)");
    ingest->callback([&] { cmd_ingest(ingest_args); });

    IndexArgs index_args;
    auto* index = app.add_subcommand("index", "Build a lexical index over a passage store");
    index->add_option("--store", index_args.store_dir)->required();
    index->add_option("--output", index_args.output, "index file")->required();
    index->add_option("--k1", index_args.k1);
    index->add_option("--b", index_args.b);
    index->callback([&] { cmd_index(index_args); });

    RetrieveArgs retrieve_args;
    auto* retrieve = app.add_subcommand("retrieve", "Rank passages for every dataset question");
    retrieve->add_option("--store", retrieve_args.store_dir)->required();
    retrieve->add_option("--dataset", retrieve_args.dataset)->required();
    retrieve->add_option("--output", retrieve_args.output, "ranked runs file")->required();
    retrieve->add_option("--kind", retrieve_args.kind, "bm25|sparse|dense|random|oracle");
    retrieve->add_option("--index", retrieve_args.index_path, "prebuilt lexical index");
    retrieve->add_option("--k", retrieve_args.k, "passages per query");
    retrieve->add_option("--k1", retrieve_args.k1);
    retrieve->add_option("--b", retrieve_args.b);
    retrieve->add_option("--vectors", retrieve_args.vectors, "passage vectors file");
    retrieve->add_option("--queries", retrieve_args.queries, "query vectors file");
    retrieve->add_option("--seed", retrieve_args.seed, "random retriever seed");
    retrieve->callback([&] { cmd_retrieve(retrieve_args); });

    RerankArgs rerank_args;
    auto* rerank_cmd = app.add_subcommand("rerank", "Rescore ranked runs with the rerank service");
    rerank_cmd->add_option("--store", rerank_args.store_dir)->required();
    rerank_cmd->add_option("--dataset", rerank_args.dataset)->required();
    rerank_cmd->add_option("--run", rerank_args.run_path, "input ranked runs")->required();
    rerank_cmd->add_option("--output", rerank_args.output)->required();
    rerank_cmd->add_option("--keep", rerank_args.keep, "passages kept per query");
    rerank_cmd->add_option("--max-batch", rerank_args.max_batch);
    rerank_cmd->add_option("--max-in-flight", rerank_args.max_in_flight);
    rerank_cmd->callback([&] { cmd_rerank(rerank_args); });

    GenerateArgs generate_args;
    auto* generate = app.add_subcommand("generate", "Answer every question with the chat service");
    generate->add_option("--dataset", generate_args.dataset)->required();
    generate->add_option("--output", generate_args.output, "generations file")->required();
    generate->add_option("--model", generate_args.model)->required();
    generate->add_option("--mode", generate_args.mode, "rag|closed_book|oracle");
    generate->add_option("--store", generate_args.store_dir);
    generate->add_option("--run", generate_args.run_path, "ranked runs for context");
    generate->add_option("--top-context", generate_args.top_context);
    generate->add_option("--max-new-tokens", generate_args.max_new_tokens);
    generate->add_option("--temperature", generate_args.temperature);
    generate->add_option("--max-in-flight", generate_args.max_in_flight);
    generate->add_option("--variant", generate_args.variant,
                         "basic|reply_in_ul|basic_translated|reply_in_ul_translated");
    generate->add_option("--language", generate_args.language, "user language tag");
    generate->add_option("--translations", generate_args.translations,
                         "prompt translation resource");
    generate->callback([&] { cmd_generate(generate_args); });

    EvaluateArgs evaluate_args;
    auto* evaluate = app.add_subcommand("evaluate", "Score a generations file against a dataset");
    evaluate->add_option("--dataset", evaluate_args.dataset)->required();
    evaluate->add_option("--generations", evaluate_args.generations)->required();
    evaluate->add_option("--output", evaluate_args.output, "metrics file")->required();
    evaluate->add_option("--metrics", evaluate_args.metrics)->delimiter(',');
    evaluate->add_option("--judge-model", evaluate_args.judge_model);
    evaluate->add_option("--language", evaluate_args.language, "expected response language");
    evaluate->add_option("--run", evaluate_args.run_path, "ranked runs for recall_at_k");
    evaluate->add_option("--k", evaluate_args.k, "recall cutoff");
    evaluate->add_option("--judge-output", evaluate_args.judge_output, "judge audit file");
    evaluate->add_option("--run-id", evaluate_args.run_id, "label stored in the metrics file");
    evaluate->callback([&] { cmd_evaluate(evaluate_args); });

    CorrelateArgs correlate_args;
    auto* correlate = app.add_subcommand(
        "correlate", "Rank correlation of each metric against a target metric");
    correlate->add_option("--metrics", correlate_args.metrics_path, "metrics file")->required();
    correlate->add_option("--target", correlate_args.target, "target metric column");
    correlate->callback([&] { cmd_correlate(correlate_args); });

    ReportArgs report_args;
    auto* report = app.add_subcommand("report", "Tabulate evaluated runs from a run store");
    report->add_option("--store", report_args.store_dir, "run store directory")->required();
    report->add_option("runs", report_args.runs, "evaluate run ids")->required();
    report->add_option("--baseline", report_args.baseline, "baseline run id for gain columns");
    report->add_option("--csv", report_args.csv, "also write the table as CSV");
    report->callback([&] { cmd_report(report_args); });

    ValidateArgs validate_args;
    auto* validate = app.add_subcommand("validate", "Static checks over an experiment config");
    validate->add_option("--config", validate_args.config_path)->required();
    validate->callback([&] { cmd_validate(validate_args); });

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Execute a configured experiment end to end");
    run->add_option("--config", run_args.config_path)->required();
    run->add_option("--store", run_args.store_dir, "run store directory")->required();
    run->callback([&] { cmd_run(run_args); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

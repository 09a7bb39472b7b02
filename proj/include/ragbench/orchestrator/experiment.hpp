#pragma once

#include "ragbench/corpus/store.hpp"
#include "ragbench/evaluation/report.hpp"
#include "ragbench/generation/client.hpp"
#include "ragbench/net/http.hpp"
#include "ragbench/orchestrator/config.hpp"
#include "ragbench/orchestrator/dataset.hpp"
#include "ragbench/orchestrator/runstore.hpp"
#include "ragbench/retrieval/types.hpp"

#include <optional>
#include <string>
#include <vector>

namespace ragbench::orchestrator {

// Service endpoints a pipeline may call. endpoints_from_env reads
// RAGBENCH_LLM_URL/_KEY, RAGBENCH_RERANKER_URL/_KEY and RAGBENCH_JUDGE_URL/
// _KEY; an endpoint's URL is required only when the config uses that stage.
struct StageEndpoints {
    net::HttpEndpoint llm;
    net::HttpEndpoint reranker;
    net::HttpEndpoint judge;
};

StageEndpoints endpoints_from_env(const ExperimentConfig& config);

struct ExperimentResult {
    std::string retrieve_run_id; // empty in closed_book mode
    std::string rerank_run_id;   // empty without a reranker
    std::string generate_run_id;
    std::string evaluate_run_id;
    bool retrieve_cached = false;
    bool rerank_cached = false;
    bool generate_cached = false;
    bool evaluate_cached = false;
    evaluation::MetricReport report;
};

// Runs the retriever named by `kind` over every example ("oracle" builds the
// context from the judgments). Backs both the pipeline's retrieve stage and
// the standalone retrieve command.
std::vector<retrieval::RankedList> run_retrieval(const ExperimentConfig& config,
                                                 const std::string& kind,
                                                 const std::vector<QAExample>& examples,
                                                 const corpus::CorpusStore& store);

// Prompt construction for a batch: tasks ready for the chat service plus
// pre-failed records for examples with no usable context. tasks[j] fills
// records[task_slot[j]] once generated; other record slots are already final.
struct PromptPlan {
    std::vector<generation::GenerationTask> tasks;
    std::vector<std::size_t> task_slot;
    std::vector<generation::GenerationRecord> records;
};

PromptPlan plan_prompts(const ExperimentConfig& config, const generation::DecodeConfig& decode,
                        const std::vector<QAExample>& examples,
                        const std::vector<retrieval::RankedList>* context_runs,
                        const corpus::CorpusStore* store);

// Metric computation over a generated batch, shared by the pipeline and the
// standalone evaluate command.
struct EvaluationOptions {
    std::vector<std::string> metrics = {"match", "em", "f1", "rouge", "char3"};
    std::string judge_model;            // needed by llmeval
    std::string expected_language = "en"; // needed by clr
    std::size_t recall_k = 5;           // cutoff for recall_at_k
};

struct EvaluationOutput {
    evaluation::MetricReport report;
    std::vector<nlohmann::json> judge_lines; // one audit record per judged sample
};

// Failed generations and judge-service failures become excluded counts, never
// silent drops. recall_at_k is scored from `context_runs` (examples without
// judgments or runs are excluded) and ignores generation failures.
EvaluationOutput evaluate_records(const std::string& run_id,
                                  const std::vector<QAExample>& examples,
                                  const std::vector<generation::GenerationRecord>& records,
                                  const std::vector<retrieval::RankedList>* context_runs,
                                  const EvaluationOptions& options,
                                  const net::HttpEndpoint& judge_endpoint);

// Executes retrieve -> (rerank) -> generate -> evaluate. Each stage persists
// its artifacts under a run id derived from (stage, config, parents, corpus
// checksum); a stage whose run id already exists is loaded from the store
// instead of recomputed, so repeating a config touches no service. Stage
// errors rethrow prefixed with the stage name and run id.
ExperimentResult run_experiment(const ExperimentConfig& config, RunStore& store,
                                const StageEndpoints& endpoints);

struct ReportTable {
    std::string text; // aligned fixed-width columns
    std::string csv;
};

// Rows = evaluate runs in the order given; columns = the union of their
// metric lists in first-appearance order, one mean per cell ("-" when a run
// lacks the metric). A baseline run adds a signed gain column (row minus
// baseline) after each metric. Unknown or unevaluated run ids raise
// MissingRun.
ReportTable report_runs(const RunStore& store, const std::vector<std::string>& evaluate_run_ids,
                        const std::optional<std::string>& baseline_run_id = std::nullopt);

} // namespace ragbench::orchestrator

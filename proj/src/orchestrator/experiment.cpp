#include "ragbench/orchestrator/experiment.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/hash.hpp"
#include "ragbench/core/jsonl.hpp"
#include "ragbench/core/unicode.hpp"
#include "ragbench/corpus/store.hpp"
#include "ragbench/evaluation/judge.hpp"
#include "ragbench/evaluation/language.hpp"
#include "ragbench/evaluation/metrics.hpp"
#include "ragbench/generation/client.hpp"
#include "ragbench/orchestrator/dataset.hpp"
#include "ragbench/rerank/client.hpp"
#include "ragbench/retrieval/bm25.hpp"
#include "ragbench/retrieval/dense.hpp"
#include "ragbench/retrieval/oracle.hpp"
#include "ragbench/retrieval/sparse.hpp"
#include "ragbench/retrieval/types.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <optional>
#include <random>
#include <set>
#include <unordered_map>

namespace ragbench::orchestrator {
namespace {

std::string file_sha256(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("FileUnreadable", "cannot open " + path.string());
    }
    Sha256 hasher;
    char buf[1 << 16];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) {
            hasher.update(buf, static_cast<std::size_t>(in.gcount()));
        }
    }
    return hasher.hex_digest();
}

// Re-raises a stage failure with the stage name and run id attached, keeping
// the original kind and code so exit-code mapping stays intact.
template <typename Fn>
auto with_stage(const char* stage, const std::string& run_id, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const Error& e) {
        std::string message = e.what();
        const std::string prefix = e.code() + ": ";
        if (message.rfind(prefix, 0) == 0) message.erase(0, prefix.size());
        throw Error(e.kind(), e.code(),
                    std::string("stage ") + stage + " (" + run_id + "): " + message);
    }
}

std::string runs_to_content(const std::vector<retrieval::RankedList>& runs) {
    std::vector<nlohmann::json> records;
    records.reserve(runs.size());
    for (const auto& run : runs) records.push_back(retrieval::ranked_run_to_json(run));
    return jsonl::to_lines(records);
}

std::vector<retrieval::RankedList> runs_from_content(const std::string& content,
                                                     const std::string& what) {
    std::vector<retrieval::RankedList> runs;
    jsonl::for_each_line(content, what, [&](std::size_t line_no, const nlohmann::json& record) {
        runs.push_back(
            retrieval::ranked_run_from_json(record, what + ":" + std::to_string(line_no)));
    });
    return runs;
}

std::string generations_to_content(const std::vector<generation::GenerationRecord>& records) {
    std::vector<nlohmann::json> lines;
    lines.reserve(records.size());
    for (const auto& record : records) {
        lines.push_back(generation::generation_record_to_json(record));
    }
    return jsonl::to_lines(lines);
}

std::vector<generation::GenerationRecord> generations_from_content(const std::string& content,
                                                                   const std::string& what) {
    std::vector<generation::GenerationRecord> records;
    jsonl::for_each_line(content, what, [&](std::size_t line_no, const nlohmann::json& record) {
        records.push_back(generation::generation_record_from_json(
            record, what + ":" + std::to_string(line_no)));
    });
    return records;
}

// Seed that depends on both the experiment seed and the query, stable across
// processes (std::hash is not).
std::uint64_t query_seed(unsigned seed, const std::string& query_id) {
    const auto digest = sha256_hex(query_id);
    const std::uint64_t h = std::stoull(digest.substr(0, 16), nullptr, 16);
    return h ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(seed) + 1));
}

retrieval::RankedList random_ranking(const corpus::CorpusStore& store,
                                     const std::string& query_id, unsigned seed, std::size_t k) {
    auto ids = store.passage_ids(); // copy: partially shuffled below
    std::mt19937_64 rng(query_seed(seed, query_id));
    const std::size_t take = std::min<std::size_t>(k, ids.size());
    retrieval::RankedList out;
    out.query_id = query_id;
    out.producer = retrieval::Producer::Random;
    for (std::size_t i = 0; i < take; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, ids.size() - 1);
        std::swap(ids[i], ids[pick(rng)]);
        out.entries.emplace_back(ids[i], static_cast<double>(take - i));
    }
    retrieval::finalize_ranking(out);
    return out;
}

nlohmann::json retrieve_stage_config(const ExperimentConfig& config,
                                     const std::string& effective_kind,
                                     const std::string& dataset_checksum) {
    nlohmann::json retriever = {{"kind", effective_kind}};
    if (effective_kind == "bm25") {
        retriever["k1"] = config.retriever.k1;
        retriever["b"] = config.retriever.b;
    } else if (effective_kind == "sparse" || effective_kind == "dense") {
        retriever["vectors"] = file_sha256(config.retriever.vectors);
        retriever["queries"] = file_sha256(config.retriever.queries);
    } else if (effective_kind == "random") {
        retriever["seed"] = config.retriever.seed;
    }
    return {{"dataset", dataset_checksum},
            {"retriever", std::move(retriever)},
            {"top_k", config.top_retrieve}};
}

std::string format_value(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", value);
    return buf;
}

std::string format_gain(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%+.4f", value);
    return buf;
}

std::string csv_escape(const std::string& value) {
    if (value.find_first_of(",\"\n") == std::string::npos) return value;
    std::string out = "\"";
    for (char c : value) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

std::vector<retrieval::RankedList> run_retrieval(const ExperimentConfig& config,
                                                 const std::string& effective_kind,
                                                 const std::vector<QAExample>& examples,
                                                 const corpus::CorpusStore& store) {
    const std::size_t k = config.top_retrieve;
    std::vector<retrieval::RankedList> runs;
    runs.reserve(examples.size());
    if (effective_kind == "oracle") {
        for (const auto& ex : examples) {
            runs.push_back(
                retrieval::oracle_context(ex.example_id, ex.references, ex.judgment(), store, k));
        }
    } else if (effective_kind == "bm25") {
        const auto index =
            retrieval::Bm25Index::build(store, {config.retriever.k1, config.retriever.b});
        for (const auto& ex : examples) {
            runs.push_back(index.search(ex.question, k, ex.example_id));
        }
    } else if (effective_kind == "sparse") {
        const auto vectors = retrieval::read_sparse_vectors(config.retriever.vectors);
        for (const auto& [id, weights] : vectors) {
            if (!store.contains(id)) {
                throw Error::data("UnknownPassage",
                                  "vector for '" + id + "' has no passage in the corpus store");
            }
        }
        const auto queries = retrieval::read_sparse_vectors(config.retriever.queries);
        const auto index = retrieval::SparseIndex::build(vectors, store.passage_ids());
        for (const auto& ex : examples) {
            const auto it = queries.find(ex.example_id);
            if (it == queries.end()) {
                throw Error::data("MissingVectors",
                                  "no query vector for example '" + ex.example_id + "'");
            }
            runs.push_back(index.search(it->second, k, ex.example_id));
        }
    } else if (effective_kind == "dense") {
        const auto matrix = retrieval::read_dense_vectors(config.retriever.vectors);
        for (const auto& id : matrix.ids) {
            if (!store.contains(id)) {
                throw Error::data("UnknownPassage",
                                  "vector for '" + id + "' has no passage in the corpus store");
            }
        }
        const auto query_matrix = retrieval::read_dense_vectors(config.retriever.queries);
        std::unordered_map<std::string, std::size_t> query_row;
        for (std::size_t i = 0; i < query_matrix.ids.size(); ++i) {
            query_row[query_matrix.ids[i]] = i;
        }
        for (const auto& ex : examples) {
            const auto it = query_row.find(ex.example_id);
            if (it == query_row.end()) {
                throw Error::data("MissingVectors",
                                  "no query vector for example '" + ex.example_id + "'");
            }
            const float* row = query_matrix.row(it->second);
            retrieval::DenseVector query(row, row + query_matrix.dim);
            runs.push_back(retrieval::search_dense(matrix, query, k, ex.example_id));
        }
    } else if (effective_kind == "random") {
        for (const auto& ex : examples) {
            runs.push_back(random_ranking(store, ex.example_id, config.retriever.seed, k));
        }
    } else {
        throw Error::config("UnknownRetriever", "no retriever kind named '" + effective_kind + "'");
    }
    return runs;
}

PromptPlan plan_prompts(const ExperimentConfig& config, const generation::DecodeConfig& decode,
                        const std::vector<QAExample>& examples,
                        const std::vector<retrieval::RankedList>* context_runs,
                        const corpus::CorpusStore* store) {
    const auto variant = generation::variant_from_string(config.language.variant);
    generation::TranslationTable translations;
    if (variant != generation::PromptVariant::Basic) {
        translations = generation::load_translations(config.language.translations);
    }
    std::unordered_map<std::string, const retrieval::RankedList*> run_of;
    if (context_runs) {
        for (const auto& run : *context_runs) run_of[run.query_id] = &run;
    }

    PromptPlan plan;
    plan.records.resize(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        const auto& ex = examples[i];
        try {
            generation::PromptBundle bundle;
            if (config.mode == PromptMode::ClosedBook) {
                bundle = generation::build_closed_book_prompt(ex.question);
            } else {
                if (!context_runs || !store) {
                    throw Error::config("MissingContext",
                                        "context prompts need a ranked run and a passage store");
                }
                const auto it = run_of.find(ex.example_id);
                if (it == run_of.end()) {
                    throw Error::data("MissingQuery",
                                      "no ranked run for example '" + ex.example_id + "'");
                }
                const auto& entries = it->second->entries;
                const std::size_t take = std::min<std::size_t>(config.top_context, entries.size());
                std::vector<std::string> passages;
                passages.reserve(take);
                for (std::size_t j = 0; j < take; ++j) {
                    passages.push_back(store->get(entries[j].first).prompt_text());
                }
                bundle = generation::build_rag_prompt(ex.question, passages);
            }
            bundle = generation::apply_language_variant(bundle, config.language.expected, variant,
                                                        translations);
            plan.tasks.push_back({ex.example_id, std::move(bundle)});
            plan.task_slot.push_back(i);
        } catch (const Error& e) {
            // A query with no usable context still produces a (failed) record;
            // anything else is a batch-level problem.
            if (e.code() != "NoContext") throw;
            generation::GenerationRecord record;
            record.query_id = ex.example_id;
            record.model_id = decode.model_id;
            record.decode_hash = generation::decode_config_hash(decode);
            record.failed = true;
            record.error = e.code();
            plan.records[i] = std::move(record);
        }
    }
    return plan;
}

EvaluationOutput evaluate_records(const std::string& run_id,
                                  const std::vector<QAExample>& examples,
                                  const std::vector<generation::GenerationRecord>& records,
                                  const std::vector<retrieval::RankedList>* context_runs,
                                  const EvaluationOptions& options,
                                  const net::HttpEndpoint& judge_endpoint) {
    const auto metric_list = expand_metrics(options.metrics);
    const bool wants_clr =
        std::find(metric_list.begin(), metric_list.end(), "clr") != metric_list.end();

    std::unordered_map<std::string, const generation::GenerationRecord*> record_of;
    for (const auto& record : records) record_of[record.query_id] = &record;
    std::unordered_map<std::string, const retrieval::RankedList*> run_of;
    if (context_runs) {
        for (const auto& run : *context_runs) run_of[run.query_id] = &run;
    }

    std::optional<evaluation::TrigramLanguageDetector> detector;
    if (wants_clr) {
        detector.emplace();
        if (!detector->supports(options.expected_language)) {
            throw Error::config("UnsupportedLanguage",
                                "no language profile for '" + options.expected_language + "'");
        }
    }
    evaluation::JudgeEndpoint judge{judge_endpoint, options.judge_model};

    std::vector<evaluation::MetricScore> scores;
    std::map<std::string, std::uint64_t> excluded;
    for (const auto& metric : metric_list) excluded.emplace(metric, 0); // every metric reports
    std::vector<nlohmann::json> judge_lines;

    for (const auto& ex : examples) {
        const auto rec_it = record_of.find(ex.example_id);
        if (rec_it == record_of.end()) {
            throw Error::data("MissingGeneration",
                              "no generation for example '" + ex.example_id + "'");
        }
        const auto& record = *rec_it->second;
        const std::string& response = record.response;
        std::optional<evaluation::Prf> prf;
        for (const auto& metric : metric_list) {
            if (metric == "recall_at_k") {
                const auto run_it = run_of.find(ex.example_id);
                if (run_it == run_of.end() || !ex.has_judgment()) {
                    ++excluded[metric];
                    continue;
                }
                scores.push_back({ex.example_id, metric,
                                  retrieval::recall_at_k(*run_it->second, ex.judgment(),
                                                         options.recall_k)});
                continue;
            }
            if (record.failed) {
                ++excluded[metric];
                continue;
            }
            if (metric == "llmeval") {
                try {
                    const auto outcome =
                        evaluation::llmeval(judge, ex.question, ex.references, response);
                    scores.push_back(
                        {ex.example_id, metric, static_cast<double>(outcome.verdict)});
                    judge_lines.push_back({{"query_id", ex.example_id},
                                           {"verdict", outcome.verdict},
                                           {"raw", outcome.raw}});
                } catch (const Error& e) {
                    if (e.kind() != ErrorKind::Service) throw;
                    ++excluded[metric];
                    judge_lines.push_back({{"query_id", ex.example_id}, {"error", e.code()}});
                }
                continue;
            }
            if (metric == "clr") {
                if (unicode::scalar_count(response) <= 20) {
                    ++excluded[metric];
                    continue;
                }
                const double value =
                    detector->detect(response) == options.expected_language ? 1.0 : 0.0;
                scores.push_back({ex.example_id, metric, value});
                continue;
            }
            double value = 0.0;
            if (metric == "match") {
                value = evaluation::match_metric(ex.references, response);
            } else if (metric == "em") {
                value = evaluation::exact_match(ex.references, response);
            } else if (metric == "precision" || metric == "recall" || metric == "f1") {
                if (!prf) prf = evaluation::token_prf(ex.references, response);
                value = metric == "precision" ? prf->precision
                        : metric == "recall"  ? prf->recall
                                              : prf->f1;
            } else if (metric == "rouge1") {
                value = evaluation::rouge_n(ex.references, response, 1);
            } else if (metric == "rouge2") {
                value = evaluation::rouge_n(ex.references, response, 2);
            } else if (metric == "rougel") {
                value = evaluation::rouge_l(ex.references, response);
            } else if (metric == "char3_recall") {
                value = evaluation::char3_recall(ex.references, response);
            } else {
                throw Error::config("UnknownMetric", "no metric named '" + metric + "'");
            }
            scores.push_back({ex.example_id, metric, value});
        }
    }

    EvaluationOutput output;
    output.report = evaluation::build_report(run_id, std::move(scores), excluded);
    output.judge_lines = std::move(judge_lines);
    return output;
}

StageEndpoints endpoints_from_env(const ExperimentConfig& config) {
    StageEndpoints endpoints;
    endpoints.llm = net::endpoint_from_env("RAGBENCH_LLM", true);
    const bool wants_rerank = config.reranker.has_value() && config.mode == PromptMode::Rag;
    endpoints.reranker = net::endpoint_from_env("RAGBENCH_RERANKER", wants_rerank);
    const auto metric_list = expand_metrics(config.metrics);
    const bool wants_judge =
        std::find(metric_list.begin(), metric_list.end(), "llmeval") != metric_list.end();
    endpoints.judge = net::endpoint_from_env("RAGBENCH_JUDGE", wants_judge);
    return endpoints;
}

ExperimentResult run_experiment(const ExperimentConfig& config, RunStore& store,
                                const StageEndpoints& endpoints) {
    if (config.top_retrieve == 0 || config.top_context == 0 ||
        config.top_context > config.top_retrieve) {
        throw Error::config("InvalidLimits", "need 0 < top_context <= top_retrieve");
    }
    if (config.reranker && config.mode != PromptMode::Rag) {
        throw Error::config("RerankerNeedsRag", "a reranker only applies to rag mode");
    }

    const auto examples = load_dataset(config.dataset);
    if (examples.empty()) {
        throw Error::data("EmptyDataset", config.dataset + " holds no examples");
    }
    const auto dataset_checksum = file_sha256(config.dataset);

    std::optional<corpus::CorpusStore> corpus_store;
    std::string corpus_checksum;
    if (config.mode != PromptMode::ClosedBook) {
        corpus_store.emplace(corpus::CorpusStore::open(config.corpus));
        corpus_checksum = corpus_store->checksum();
    }

    ExperimentResult result;
    std::vector<retrieval::RankedList> context_runs;

    // ---- retrieve ---------------------------------------------------------
    if (config.mode != PromptMode::ClosedBook) {
        const std::string effective_kind =
            config.mode == PromptMode::Oracle ? "oracle" : config.retriever.kind;
        const auto stage_config = retrieve_stage_config(config, effective_kind, dataset_checksum);
        const auto run_id = compute_run_id("retrieve", stage_config, {}, corpus_checksum);
        result.retrieve_run_id = run_id;
        with_stage("retrieve", run_id, [&] {
            if (store.has(run_id)) {
                result.retrieve_cached = true;
                context_runs = runs_from_content(store.read_artifact(run_id, "run.jsonl"),
                                                 run_id + "/run.jsonl");
            } else {
                context_runs = run_retrieval(config, effective_kind, examples, *corpus_store);
                store.put_artifact(run_id, "run.jsonl", runs_to_content(context_runs));
                store.finish_run(run_id, "retrieve", stage_config, {}, corpus_checksum);
            }
        });
    }

    // ---- rerank -----------------------------------------------------------
    if (config.reranker) {
        const nlohmann::json stage_config = {{"reranker", config.reranker->name},
                                             {"keep", config.top_context},
                                             {"max_batch", config.reranker->max_batch}};
        const auto run_id =
            compute_run_id("rerank", stage_config, {result.retrieve_run_id}, corpus_checksum);
        result.rerank_run_id = run_id;
        with_stage("rerank", run_id, [&] {
            if (store.has(run_id)) {
                result.rerank_cached = true;
                context_runs = runs_from_content(store.read_artifact(run_id, "run.jsonl"),
                                                 run_id + "/run.jsonl");
            } else {
                rerank::RerankerEndpoint reranker{endpoints.reranker, config.reranker->max_batch,
                                                  config.reranker->max_in_flight};
                std::vector<retrieval::RankedList> reranked;
                reranked.reserve(context_runs.size());
                std::unordered_map<std::string, const QAExample*> by_id;
                for (const auto& ex : examples) by_id[ex.example_id] = &ex;
                for (const auto& run : context_runs) {
                    const auto it = by_id.find(run.query_id);
                    if (it == by_id.end()) {
                        throw Error::data("MissingQuery", "ranked run for unknown query '" +
                                                              run.query_id + "'");
                    }
                    if (run.entries.empty()) {
                        retrieval::RankedList empty;
                        empty.query_id = run.query_id;
                        empty.producer = retrieval::Producer::Reranked;
                        reranked.push_back(std::move(empty));
                        continue;
                    }
                    reranked.push_back(rerank::rerank(reranker, it->second->question, run,
                                                      *corpus_store, config.top_context));
                }
                context_runs = std::move(reranked);
                store.put_artifact(run_id, "run.jsonl", runs_to_content(context_runs));
                store.finish_run(run_id, "rerank", stage_config, {result.retrieve_run_id},
                                 corpus_checksum);
            }
        });
    }

    // ---- generate ----------------------------------------------------------
    const std::string context_run_id =
        result.rerank_run_id.empty() ? result.retrieve_run_id : result.rerank_run_id;
    generation::DecodeConfig decode{config.generator.max_new_tokens, config.generator.temperature,
                                    config.generator.model};
    generation::variant_from_string(config.language.variant); // reject bad variants up front
    const nlohmann::json generate_config = {
        {"mode", to_string(config.mode)},
        {"model", config.generator.model},
        {"decode",
         {{"max_new_tokens", decode.max_new_tokens}, {"temperature", decode.temperature}}},
        {"top_context", config.top_context},
        {"language", config.language.expected},
        {"variant", config.language.variant}};
    const std::vector<std::string> generate_parents =
        config.mode == PromptMode::ClosedBook ? std::vector<std::string>{}
                                              : std::vector<std::string>{context_run_id};
    const auto generate_run_id =
        compute_run_id("generate", generate_config, generate_parents, corpus_checksum);
    result.generate_run_id = generate_run_id;

    std::vector<generation::GenerationRecord> records;
    with_stage("generate", generate_run_id, [&] {
        if (store.has(generate_run_id)) {
            result.generate_cached = true;
            records = generations_from_content(
                store.read_artifact(generate_run_id, "generations.jsonl"),
                generate_run_id + "/generations.jsonl");
            return;
        }
        auto plan = plan_prompts(config, decode, examples,
                                 config.mode == PromptMode::ClosedBook ? nullptr : &context_runs,
                                 corpus_store ? &*corpus_store : nullptr);
        const auto generated = generation::generate_batch(
            endpoints.llm, plan.tasks, decode, {config.generator.max_in_flight, false});
        records = std::move(plan.records);
        for (std::size_t j = 0; j < generated.size(); ++j) {
            records[plan.task_slot[j]] = generated[j];
        }
        double total_ms = 0.0;
        nlohmann::json per_query = nlohmann::json::object();
        for (auto& record : records) {
            record.retrieval_run_id =
                config.mode == PromptMode::ClosedBook ? "closed_book" : result.retrieve_run_id;
            record.rerank_run_id = result.rerank_run_id;
            total_ms += record.wall_ms;
            per_query[record.query_id] = record.wall_ms;
        }
        store.put_artifact(generate_run_id, "generations.jsonl", generations_to_content(records));
        const nlohmann::json timings = {{"total_ms", total_ms}, {"per_query", per_query}};
        store.put_sidecar(generate_run_id, "timings.json", timings.dump(2) + "\n");
        store.finish_run(generate_run_id, "generate", generate_config, generate_parents,
                         corpus_checksum);
    });

    // ---- evaluate -----------------------------------------------------------
    const auto metric_list = expand_metrics(config.metrics);
    const bool wants_judge =
        std::find(metric_list.begin(), metric_list.end(), "llmeval") != metric_list.end();
    const bool wants_clr =
        std::find(metric_list.begin(), metric_list.end(), "clr") != metric_list.end();
    nlohmann::json evaluate_config = {{"metrics", metric_list}};
    if (wants_judge) evaluate_config["judge_model"] = config.judge_model;
    if (wants_clr) evaluate_config["expected_language"] = config.language.expected;
    if (std::find(metric_list.begin(), metric_list.end(), "recall_at_k") != metric_list.end()) {
        evaluate_config["k"] = config.top_context;
    }
    const auto evaluate_run_id =
        compute_run_id("evaluate", evaluate_config, {generate_run_id}, std::string());
    result.evaluate_run_id = evaluate_run_id;

    with_stage("evaluate", evaluate_run_id, [&] {
        if (store.has(evaluate_run_id)) {
            result.evaluate_cached = true;
            result.report =
                evaluation::metrics_from_jsonl(store.read_artifact(evaluate_run_id, "metrics.jsonl"),
                                               evaluate_run_id + "/metrics.jsonl");
            return;
        }
        EvaluationOptions options{config.metrics, config.judge_model, config.language.expected,
                                  config.top_context};
        auto output = evaluate_records(
            evaluate_run_id, examples, records,
            config.mode == PromptMode::ClosedBook ? nullptr : &context_runs, options,
            endpoints.judge);
        result.report = std::move(output.report);
        store.put_artifact(evaluate_run_id, "metrics.jsonl",
                           evaluation::metrics_to_jsonl(result.report));
        if (wants_judge) {
            store.put_artifact(evaluate_run_id, "judge_outputs.jsonl",
                               jsonl::to_lines(output.judge_lines));
        }
        nlohmann::json metric_means = nlohmann::json::object();
        for (const auto& [metric, aggregate] : result.report.aggregates) {
            metric_means[metric] = {{"mean", aggregate.mean},
                                    {"count", aggregate.count},
                                    {"excluded", aggregate.excluded}};
        }
        const nlohmann::json report_doc = {
            {"experiment", config.name.empty() ? evaluate_run_id : config.name},
            {"mode", to_string(config.mode)},
            {"model", config.generator.model},
            {"stage_runs",
             {{"retrieve", result.retrieve_run_id},
              {"rerank", result.rerank_run_id},
              {"generate", result.generate_run_id},
              {"evaluate", evaluate_run_id}}},
            {"metric_order", metric_list},
            {"metrics", std::move(metric_means)}};
        store.put_artifact(evaluate_run_id, "report.json", report_doc.dump(2) + "\n");
        store.finish_run(evaluate_run_id, "evaluate", evaluate_config, {generate_run_id},
                         std::string());
    });

    return result;
}

ReportTable report_runs(const RunStore& store, const std::vector<std::string>& evaluate_run_ids,
                        const std::optional<std::string>& baseline_run_id) {
    struct Row {
        std::string name;
        std::map<std::string, double> values;
        std::vector<std::string> order;
    };
    const auto load = [&](const std::string& run_id) -> Row {
        if (!store.has(run_id)) {
            throw Error::data("MissingRun", "no run '" + run_id + "' in the store");
        }
        if (store.manifest(run_id).value("stage", "") != "evaluate") {
            throw Error::data("MissingRun", "run '" + run_id + "' has not been evaluated");
        }
        const auto doc = nlohmann::json::parse(store.read_artifact(run_id, "report.json"));
        Row row;
        row.name = doc.value("experiment", run_id);
        for (const auto& metric : doc["metric_order"]) {
            row.order.push_back(metric.get<std::string>());
        }
        for (const auto& [metric, aggregate] : doc["metrics"].items()) {
            row.values[metric] = aggregate["mean"].get<double>();
        }
        return row;
    };

    std::optional<Row> baseline;
    if (baseline_run_id) baseline = load(*baseline_run_id);

    std::vector<Row> rows;
    std::vector<std::string> columns;
    std::set<std::string> seen;
    for (const auto& run_id : evaluate_run_ids) {
        rows.push_back(load(run_id));
        for (const auto& metric : rows.back().order) {
            if (seen.insert(metric).second) columns.push_back(metric);
        }
    }

    std::vector<std::string> headers{"experiment"};
    for (const auto& column : columns) {
        headers.push_back(column);
        if (baseline) headers.push_back(column + "_gain");
    }

    std::vector<std::vector<std::string>> grid;
    for (const auto& row : rows) {
        std::vector<std::string> cells{row.name};
        for (const auto& column : columns) {
            const auto it = row.values.find(column);
            cells.push_back(it == row.values.end() ? "-" : format_value(it->second));
            if (baseline) {
                const auto base_it = baseline->values.find(column);
                const bool both =
                    it != row.values.end() && base_it != baseline->values.end();
                cells.push_back(both ? format_gain(it->second - base_it->second) : "-");
            }
        }
        grid.push_back(std::move(cells));
    }

    std::vector<std::size_t> widths(headers.size());
    for (std::size_t j = 0; j < headers.size(); ++j) widths[j] = headers[j].size();
    for (const auto& cells : grid) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            widths[j] = std::max(widths[j], cells[j].size());
        }
    }

    ReportTable table;
    const auto emit_text_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j > 0) table.text += "  ";
            const auto pad = widths[j] - cells[j].size();
            if (j == 0) {
                table.text += cells[j] + std::string(pad, ' ');
            } else {
                table.text += std::string(pad, ' ') + cells[j];
            }
        }
        // Trailing spaces on the name column would be invisible noise.
        while (!table.text.empty() && table.text.back() == ' ') table.text.pop_back();
        table.text += '\n';
    };
    emit_text_row(headers);
    for (const auto& cells : grid) emit_text_row(cells);

    const auto emit_csv_row = [&](const std::vector<std::string>& cells) {
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (j > 0) table.csv += ',';
            table.csv += csv_escape(cells[j]);
        }
        table.csv += '\n';
    };
    emit_csv_row(headers);
    for (const auto& cells : grid) emit_csv_row(cells);

    return table;
}

} // namespace ragbench::orchestrator

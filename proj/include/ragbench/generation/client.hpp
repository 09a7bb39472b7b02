#pragma once

#include "ragbench/generation/prompt.hpp"
#include "ragbench/net/http.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace ragbench::generation {

struct DecodeConfig {
    int max_new_tokens = 128;
    double temperature = 0.0; // 0 = greedy
    std::string model_id;
};

// Short stable fingerprint of (model, temperature, token cap).
std::string decode_config_hash(const DecodeConfig& config);

struct GenerationRecord {
    std::string query_id;
    PromptBundle prompt;
    std::string response; // may legitimately be empty
    std::string model_id;
    std::string decode_hash;
    std::string retrieval_run_id; // or "closed_book" / "oracle"
    std::string rerank_run_id;    // empty when no reranker ran
    bool failed = false;
    std::string error;  // error code when failed
    double wall_ms = 0.0; // informational; kept out of cacheable artifacts
};

// Chat-completions request body for the bundle; exposed so tests can pin the
// exact wire format.
nlohmann::json chat_request_body(const PromptBundle& bundle, const DecodeConfig& config);

// One round trip: POST {base}/v1/chat/completions, return
// choices[0].message.content. Raises ServiceUnavailable /
// MalformedResponse / ContextTooLong (the latter names query_id).
std::string chat_complete(const net::HttpEndpoint& endpoint, const PromptBundle& bundle,
                          const DecodeConfig& config, const std::string& query_id);

struct GenerationTask {
    std::string query_id;
    PromptBundle bundle;
};

GenerationRecord generate(const net::HttpEndpoint& endpoint, const GenerationTask& task,
                          const DecodeConfig& config);

struct BatchOptions {
    std::size_t max_in_flight = 4;
    bool fail_fast = false; // default records per-item failures instead
};

// Results align with input order: result[i].query_id == tasks[i].query_id.
std::vector<GenerationRecord> generate_batch(const net::HttpEndpoint& endpoint,
                                             const std::vector<GenerationTask>& tasks,
                                             const DecodeConfig& config,
                                             const BatchOptions& options = {});

// One generation record as JSON. wall_ms is deliberately absent so the
// serialized form is identical across reruns of the same inputs.
nlohmann::json generation_record_to_json(const GenerationRecord& record);
GenerationRecord generation_record_from_json(const nlohmann::json& record,
                                             const std::string& where = "");

// Generations file: one record per line.
void write_generations(const std::filesystem::path& path,
                       const std::vector<GenerationRecord>& records);
std::vector<GenerationRecord> read_generations(const std::filesystem::path& path);

} // namespace ragbench::generation

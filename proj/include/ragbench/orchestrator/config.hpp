#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ragbench::orchestrator {

enum class PromptMode { Rag, ClosedBook, Oracle };

std::string to_string(PromptMode mode);
PromptMode prompt_mode_from_string(const std::string& name);

struct RetrieverSpec {
    std::string kind = "bm25"; // bm25 | sparse | dense | oracle | random
    double k1 = 0.9;           // bm25
    double b = 0.4;            // bm25
    std::string vectors;       // sparse/dense: passage vectors file
    std::string queries;       // sparse/dense: query vectors file
    unsigned seed = 1;         // random
};

struct RerankerSpec {
    std::string name; // logical identity; the URL comes from the environment
    std::size_t max_batch = 32;
    std::size_t max_in_flight = 4;
};

struct GeneratorSpec {
    std::string model;
    int max_new_tokens = 128;
    double temperature = 0.0;
    std::size_t max_in_flight = 4;
};

struct LanguageSettings {
    std::string expected = "en";
    std::string variant = "basic";
    std::string translations; // prompt resource file; needed by non-basic variants
};

struct ExperimentConfig {
    std::string name; // row label in reports; defaults to the evaluate run id
    std::string dataset;
    std::string corpus; // passage store directory; unused by closed_book
    RetrieverSpec retriever;
    std::optional<RerankerSpec> reranker;
    GeneratorSpec generator;
    PromptMode mode = PromptMode::Rag;
    std::size_t top_retrieve = 50;
    std::size_t top_context = 5;
    std::vector<std::string> metrics = {"match", "em", "f1", "rouge", "char3"};
    LanguageSettings language;
    std::string judge_model; // required when metrics include llmeval
};

ExperimentConfig parse_config(const nlohmann::json& root);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json config_to_json(const ExperimentConfig& config);

// Static checks (limits ordering, oracle judgments, endpoints for the chosen
// stages). An empty list means the config is runnable. `dataset_has_judgments`
// is nullopt when the dataset was not inspected.
std::vector<std::string> validate_config(const ExperimentConfig& config,
                                         std::optional<bool> dataset_has_judgments);

// The per-sample metric columns a metric list expands to (f1 brings
// precision/recall, rouge brings the three variants).
std::vector<std::string> expand_metrics(const std::vector<std::string>& metrics);

} // namespace ragbench::orchestrator

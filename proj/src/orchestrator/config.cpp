#include "ragbench/orchestrator/config.hpp"

#include "ragbench/core/error.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>

namespace ragbench::orchestrator {

std::string to_string(PromptMode mode) {
    switch (mode) {
        case PromptMode::Rag: return "rag";
        case PromptMode::ClosedBook: return "closed_book";
        case PromptMode::Oracle: return "oracle";
    }
    throw Error::config("UnknownMode", "unreachable prompt mode");
}

PromptMode prompt_mode_from_string(const std::string& name) {
    if (name == "rag") return PromptMode::Rag;
    if (name == "closed_book") return PromptMode::ClosedBook;
    if (name == "oracle") return PromptMode::Oracle;
    throw Error::config("UnknownMode", "no prompt mode named '" + name + "'");
}

namespace {

const std::set<std::string> kKnownMetrics = {"match", "em",   "f1",      "rouge",
                                             "char3", "llmeval", "clr",  "recall_at_k"};

template <typename T>
T field_or(const nlohmann::json& object, const char* key, T fallback) {
    if (!object.contains(key)) return fallback;
    try {
        return object[key].get<T>();
    } catch (const nlohmann::json::exception&) {
        throw Error::config("BadField", std::string("config field '") + key +
                                            "' has the wrong type");
    }
}

} // namespace

ExperimentConfig parse_config(const nlohmann::json& root) {
    if (!root.is_object()) {
        throw Error::config("BadConfig", "experiment config must be a JSON object");
    }
    ExperimentConfig config;
    config.name = field_or<std::string>(root, "name", "");
    config.dataset = field_or<std::string>(root, "dataset", "");
    config.corpus = field_or<std::string>(root, "corpus", "");
    config.mode = prompt_mode_from_string(field_or<std::string>(root, "mode", "rag"));
    config.top_retrieve = field_or<std::size_t>(root, "top_retrieve", 50);
    config.top_context = field_or<std::size_t>(root, "top_context", 5);
    if (root.contains("metrics")) {
        config.metrics = field_or<std::vector<std::string>>(root, "metrics", {});
    }

    if (root.contains("retriever")) {
        const auto& retriever = root["retriever"];
        if (!retriever.is_object()) {
            throw Error::config("BadField", "'retriever' must be an object");
        }
        config.retriever.kind = field_or<std::string>(retriever, "kind", "bm25");
        config.retriever.k1 = field_or<double>(retriever, "k1", 0.9);
        config.retriever.b = field_or<double>(retriever, "b", 0.4);
        config.retriever.vectors = field_or<std::string>(retriever, "vectors", "");
        config.retriever.queries = field_or<std::string>(retriever, "queries", "");
        config.retriever.seed = field_or<unsigned>(retriever, "seed", 1);
    }
    if (root.contains("reranker") && !root["reranker"].is_null()) {
        const auto& reranker = root["reranker"];
        if (!reranker.is_object()) {
            throw Error::config("BadField", "'reranker' must be an object");
        }
        RerankerSpec spec;
        spec.name = field_or<std::string>(reranker, "name", "");
        spec.max_batch = field_or<std::size_t>(reranker, "max_batch", 32);
        spec.max_in_flight = field_or<std::size_t>(reranker, "max_in_flight", 4);
        config.reranker = spec;
    }
    if (root.contains("generator")) {
        const auto& generator = root["generator"];
        if (!generator.is_object()) {
            throw Error::config("BadField", "'generator' must be an object");
        }
        config.generator.model = field_or<std::string>(generator, "model", "");
        config.generator.max_new_tokens = field_or<int>(generator, "max_new_tokens", 128);
        config.generator.temperature = field_or<double>(generator, "temperature", 0.0);
        config.generator.max_in_flight = field_or<std::size_t>(generator, "max_in_flight", 4);
    }
    if (root.contains("language")) {
        const auto& language = root["language"];
        if (!language.is_object()) {
            throw Error::config("BadField", "'language' must be an object");
        }
        config.language.expected = field_or<std::string>(language, "expected", "en");
        config.language.variant = field_or<std::string>(language, "variant", "basic");
        config.language.translations = field_or<std::string>(language, "translations", "");
    }
    if (root.contains("judge")) {
        const auto& judge = root["judge"];
        if (!judge.is_object()) {
            throw Error::config("BadField", "'judge' must be an object");
        }
        config.judge_model = field_or<std::string>(judge, "model", "");
    }
    return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::config("ConfigMissing", "cannot open " + path.string());
    }
    auto root = nlohmann::json::parse(in, nullptr, false);
    if (root.is_discarded()) {
        throw Error::config("BadConfig", path.string() + " is not valid JSON");
    }
    return parse_config(root);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    nlohmann::json root = {{"dataset", config.dataset},
                           {"corpus", config.corpus},
                           {"mode", to_string(config.mode)},
                           {"top_retrieve", config.top_retrieve},
                           {"top_context", config.top_context},
                           {"metrics", config.metrics}};
    if (!config.name.empty()) root["name"] = config.name;
    root["retriever"] = {{"kind", config.retriever.kind}};
    if (config.retriever.kind == "bm25") {
        root["retriever"]["k1"] = config.retriever.k1;
        root["retriever"]["b"] = config.retriever.b;
    }
    if (!config.retriever.vectors.empty()) root["retriever"]["vectors"] = config.retriever.vectors;
    if (!config.retriever.queries.empty()) root["retriever"]["queries"] = config.retriever.queries;
    if (config.retriever.kind == "random") root["retriever"]["seed"] = config.retriever.seed;
    if (config.reranker) {
        root["reranker"] = {{"name", config.reranker->name},
                            {"max_batch", config.reranker->max_batch},
                            {"max_in_flight", config.reranker->max_in_flight}};
    }
    root["generator"] = {{"model", config.generator.model},
                         {"max_new_tokens", config.generator.max_new_tokens},
                         {"temperature", config.generator.temperature},
                         {"max_in_flight", config.generator.max_in_flight}};
    root["language"] = {{"expected", config.language.expected},
                        {"variant", config.language.variant}};
    if (!config.language.translations.empty()) {
        root["language"]["translations"] = config.language.translations;
    }
    if (!config.judge_model.empty()) root["judge"] = {{"model", config.judge_model}};
    return root;
}

std::vector<std::string> validate_config(const ExperimentConfig& config,
                                         std::optional<bool> dataset_has_judgments) {
    std::vector<std::string> findings;
    if (config.dataset.empty()) {
        findings.push_back("dataset path is empty");
    }
    if (config.top_context > config.top_retrieve) {
        findings.push_back("top_context (" + std::to_string(config.top_context) +
                           ") exceeds top_retrieve (" + std::to_string(config.top_retrieve) +
                           ")");
    }
    if (config.top_context < 1) findings.push_back("top_context must be >= 1");
    if (config.top_retrieve < 1) findings.push_back("top_retrieve must be >= 1");
    if (config.generator.model.empty()) findings.push_back("generator.model is empty");
    if (config.generator.max_new_tokens < 1) {
        findings.push_back("generator.max_new_tokens must be >= 1");
    }
    if (config.generator.temperature < 0.0) {
        findings.push_back("generator.temperature must be >= 0");
    }

    const bool needs_corpus = config.mode != PromptMode::ClosedBook;
    if (needs_corpus && config.corpus.empty()) {
        findings.push_back("corpus store path is empty but mode needs context");
    }
    if (config.mode != PromptMode::ClosedBook) {
        const std::set<std::string> kinds = {"bm25", "sparse", "dense", "oracle", "random"};
        if (config.mode == PromptMode::Rag && !kinds.count(config.retriever.kind)) {
            findings.push_back("unknown retriever kind '" + config.retriever.kind + "'");
        }
        if (config.retriever.kind == "sparse" || config.retriever.kind == "dense") {
            if (config.retriever.vectors.empty()) {
                findings.push_back(config.retriever.kind + " retriever needs a vectors file");
            }
            if (config.retriever.queries.empty()) {
                findings.push_back(config.retriever.kind + " retriever needs a queries file");
            }
        }
    }
    const bool oracle_context_needed =
        config.mode == PromptMode::Oracle ||
        (config.mode == PromptMode::Rag && config.retriever.kind == "oracle");
    if (oracle_context_needed && dataset_has_judgments.has_value() && !*dataset_has_judgments) {
        findings.push_back("oracle context requested but the dataset has no relevance judgments");
    }
    if (config.reranker && config.mode != PromptMode::Rag) {
        findings.push_back("reranker configured but mode '" + to_string(config.mode) +
                           "' never retrieves");
    }
    if (config.reranker && config.reranker->max_batch < 1) {
        findings.push_back("reranker.max_batch must be >= 1");
    }
    if (config.reranker && std::getenv("RAGBENCH_RERANKER_URL") == nullptr) {
        findings.push_back("reranker configured but RAGBENCH_RERANKER_URL is not set");
    }
    if (std::getenv("RAGBENCH_LLM_URL") == nullptr) {
        findings.push_back("RAGBENCH_LLM_URL is not set");
    }

    for (const auto& metric : config.metrics) {
        if (!kKnownMetrics.count(metric)) {
            findings.push_back("unknown metric '" + metric + "'");
        }
    }
    const bool wants_judge =
        std::find(config.metrics.begin(), config.metrics.end(), "llmeval") !=
        config.metrics.end();
    if (wants_judge && config.judge_model.empty()) {
        findings.push_back("metric llmeval needs judge.model");
    }
    if (wants_judge && std::getenv("RAGBENCH_JUDGE_URL") == nullptr) {
        findings.push_back("metric llmeval needs RAGBENCH_JUDGE_URL");
    }
    const bool wants_clr =
        std::find(config.metrics.begin(), config.metrics.end(), "clr") != config.metrics.end();
    if (wants_clr && config.language.expected.empty()) {
        findings.push_back("metric clr needs language.expected");
    }
    if (config.language.variant != "basic" && config.language.translations.empty()) {
        findings.push_back("non-basic prompt variant needs language.translations");
    }
    return findings;
}

std::vector<std::string> expand_metrics(const std::vector<std::string>& metrics) {
    std::vector<std::string> columns;
    auto add = [&](const std::string& id) {
        if (std::find(columns.begin(), columns.end(), id) == columns.end()) {
            columns.push_back(id);
        }
    };
    for (const auto& metric : metrics) {
        if (metric == "f1") {
            add("precision");
            add("recall");
            add("f1");
        } else if (metric == "rouge") {
            add("rouge1");
            add("rouge2");
            add("rougel");
        } else if (metric == "char3") {
            add("char3_recall");
        } else {
            add(metric);
        }
    }
    return columns;
}

} // namespace ragbench::orchestrator

#include "ragbench/generation/client.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/hash.hpp"
#include "ragbench/core/jsonl.hpp"
#include "ragbench/core/parallel.hpp"

#include <algorithm>
#include <chrono>

namespace ragbench::generation {

std::string decode_config_hash(const DecodeConfig& config) {
    nlohmann::json canonical = {{"max_new_tokens", config.max_new_tokens},
                                {"model_id", config.model_id},
                                {"temperature", config.temperature}};
    return sha256_hex(canonical.dump()).substr(0, 16);
}

nlohmann::json chat_request_body(const PromptBundle& bundle, const DecodeConfig& config) {
    return {{"model", config.model_id},
            {"messages",
             {{{"role", "system"}, {"content", bundle.system}},
              {{"role", "user"}, {"content", bundle.user}}}},
            {"temperature", config.temperature},
            {"max_tokens", config.max_new_tokens}};
}

namespace {

bool looks_like_context_overflow(const nlohmann::json& body) {
    if (!body.is_object() || !body.contains("error")) return false;
    const auto& error = body["error"];
    if (!error.is_object()) return false;
    if (error.contains("code") && error["code"].is_string() &&
        error["code"].get<std::string>() == "context_length_exceeded") {
        return true;
    }
    if (error.contains("message") && error["message"].is_string()) {
        auto message = error["message"].get<std::string>();
        std::transform(message.begin(), message.end(), message.begin(),
                       [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        return message.find("context length") != std::string::npos ||
               message.find("maximum context") != std::string::npos;
    }
    return false;
}

} // namespace

std::string chat_complete(const net::HttpEndpoint& endpoint, const PromptBundle& bundle,
                          const DecodeConfig& config, const std::string& query_id) {
    const auto response = net::post_json(endpoint, "/v1/chat/completions",
                                         chat_request_body(bundle, config), "chat service");
    auto body = nlohmann::json::parse(response.body, nullptr, false);
    if (response.status != 200) {
        if (looks_like_context_overflow(body)) {
            throw Error::data("ContextTooLong",
                              "prompt for query '" + query_id + "' exceeds the model context");
        }
        throw Error::service("RequestRejected", "chat service returned status " +
                                                    std::to_string(response.status) +
                                                    " for query '" + query_id + "'");
    }
    if (body.is_discarded() || !body.is_object() || !body.contains("choices") ||
        !body["choices"].is_array() || body["choices"].empty()) {
        throw Error::service("MalformedResponse",
                             "chat service sent an unusable body for query '" + query_id + "'");
    }
    const auto& first = body["choices"][0];
    if (!first.is_object() || !first.contains("message") || !first["message"].is_object() ||
        !first["message"].contains("content") || !first["message"]["content"].is_string()) {
        throw Error::service("MalformedResponse",
                             "chat choice lacks message content for query '" + query_id + "'");
    }
    return first["message"]["content"].get<std::string>();
}

GenerationRecord generate(const net::HttpEndpoint& endpoint, const GenerationTask& task,
                          const DecodeConfig& config) {
    GenerationRecord record;
    record.query_id = task.query_id;
    record.prompt = task.bundle;
    record.model_id = config.model_id;
    record.decode_hash = decode_config_hash(config);
    const auto start = std::chrono::steady_clock::now();
    record.response = chat_complete(endpoint, task.bundle, config, task.query_id);
    const auto stop = std::chrono::steady_clock::now();
    record.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    return record;
}

std::vector<GenerationRecord> generate_batch(const net::HttpEndpoint& endpoint,
                                             const std::vector<GenerationTask>& tasks,
                                             const DecodeConfig& config,
                                             const BatchOptions& options) {
    const auto workers = std::max<std::size_t>(1, options.max_in_flight);
    return parallel::map_indexed(tasks.size(), workers, [&](std::size_t i) {
        try {
            return generate(endpoint, tasks[i], config);
        } catch (const Error& e) {
            if (options.fail_fast) throw;
            GenerationRecord record;
            record.query_id = tasks[i].query_id;
            record.prompt = tasks[i].bundle;
            record.model_id = config.model_id;
            record.decode_hash = decode_config_hash(config);
            record.failed = true;
            record.error = e.code();
            return record;
        }
    });
}

nlohmann::json generation_record_to_json(const GenerationRecord& record) {
    return {{"query_id", record.query_id},
            {"prompt",
             {{"system", record.prompt.system},
              {"user", record.prompt.user},
              {"language", record.prompt.language},
              {"variant", to_string(record.prompt.variant)},
              {"kind", to_string(record.prompt.kind)}}},
            {"response", record.response},
            {"model_id", record.model_id},
            {"decode_hash", record.decode_hash},
            {"retrieval_run_id", record.retrieval_run_id},
            {"rerank_run_id", record.rerank_run_id},
            {"failed", record.failed},
            {"error", record.error}};
}

GenerationRecord generation_record_from_json(const nlohmann::json& record,
                                             const std::string& where) {
    const std::string at = where.empty() ? "" : where + ": ";
    const auto need = [&](const char* key) -> const nlohmann::json& {
        if (!record.is_object() || !record.contains(key)) {
            throw Error::data("SchemaError",
                              at + "generation record lacks '" + std::string(key) + "'");
        }
        return record[key];
    };
    try {
        GenerationRecord out;
        out.query_id = need("query_id").get<std::string>();
        const auto& prompt = need("prompt");
        out.prompt.system = prompt.at("system").get<std::string>();
        out.prompt.user = prompt.at("user").get<std::string>();
        out.prompt.language = prompt.at("language").get<std::string>();
        out.prompt.variant = variant_from_string(prompt.at("variant").get<std::string>());
        out.prompt.kind = prompt_kind_from_string(prompt.at("kind").get<std::string>());
        out.response = need("response").get<std::string>();
        out.model_id = need("model_id").get<std::string>();
        out.decode_hash = need("decode_hash").get<std::string>();
        out.retrieval_run_id = need("retrieval_run_id").get<std::string>();
        out.rerank_run_id = need("rerank_run_id").get<std::string>();
        out.failed = need("failed").get<bool>();
        out.error = need("error").get<std::string>();
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw Error::data("SchemaError", at + "bad generation record: " + e.what());
    }
}

void write_generations(const std::filesystem::path& path,
                       const std::vector<GenerationRecord>& records) {
    std::vector<nlohmann::json> lines;
    lines.reserve(records.size());
    for (const auto& record : records) lines.push_back(generation_record_to_json(record));
    jsonl::write_all(path, lines);
}

std::vector<GenerationRecord> read_generations(const std::filesystem::path& path) {
    std::vector<GenerationRecord> records;
    jsonl::for_each(path, [&](std::size_t line_no, const nlohmann::json& record) {
        records.push_back(generation_record_from_json(
            record, path.string() + ":" + std::to_string(line_no)));
    });
    return records;
}

} // namespace ragbench::generation

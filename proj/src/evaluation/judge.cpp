#include "ragbench/evaluation/judge.hpp"

#include "ragbench/core/error.hpp"

#include <algorithm>

namespace ragbench::evaluation {

std::string judge_prompt(const std::string& question, const std::string& answer,
                         const std::string& prediction) {
    std::string prompt =
        "You are an evaluation tool. Just answer by {Yes} or {No}. Here is a question, "
        "a golden answer and an AI-generated answer. Judge whether the AI-generated answer "
        "is correct according to the question and golden answer, answer with {Yes} or {No}.";
    prompt += "\nQuestion: ";
    prompt += question;
    prompt += ".\nGolden answer: ";
    prompt += answer;
    prompt += "\nGenerated answer: ";
    prompt += prediction;
    prompt += " Response: {";
    return prompt;
}

nlohmann::json judge_request_body(const JudgeEndpoint& endpoint, const std::string& question,
                                  const std::string& answer, const std::string& prediction) {
    return {{"model", endpoint.model_id},
            {"messages",
             {{{"role", "user"}, {"content", judge_prompt(question, answer, prediction)}}}},
            {"temperature", 0.0},
            {"max_tokens", endpoint.max_new_tokens}};
}

int parse_judge_verdict(const std::string& completion) {
    std::string lowered = completion;
    std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    const auto earliest = [&](const char* token) {
        return lowered.find(token);
    };
    const auto accept = std::min(earliest("yes"), earliest("true"));
    const auto reject = std::min(earliest("no"), earliest("false"));
    if (accept == std::string::npos) return 0; // includes the no-token default
    if (reject == std::string::npos) return 1;
    return accept < reject ? 1 : 0;
}

JudgeOutcome llmeval(const JudgeEndpoint& endpoint, const std::string& question,
                     const std::vector<std::string>& references, const std::string& response) {
    if (references.empty()) {
        throw Error::data("NoReferences", "judging needs at least one reference");
    }
    const auto http_response =
        net::post_json(endpoint.http, "/v1/chat/completions",
                       judge_request_body(endpoint, question, references.front(), response),
                       "judge service");
    if (http_response.status != 200) {
        throw Error::service("RequestRejected", "judge service returned status " +
                                                    std::to_string(http_response.status));
    }
    auto body = nlohmann::json::parse(http_response.body, nullptr, false);
    if (body.is_discarded() || !body.is_object() || !body.contains("choices") ||
        !body["choices"].is_array() || body["choices"].empty() ||
        !body["choices"][0].contains("message") ||
        !body["choices"][0]["message"].contains("content") ||
        !body["choices"][0]["message"]["content"].is_string()) {
        throw Error::service("MalformedResponse", "judge service sent an unusable body");
    }
    JudgeOutcome outcome;
    outcome.raw = body["choices"][0]["message"]["content"].get<std::string>();
    outcome.verdict = parse_judge_verdict(outcome.raw);
    return outcome;
}

} // namespace ragbench::evaluation

#pragma once

#include "ragbench/net/http.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace ragbench::evaluation {

struct JudgeEndpoint {
    net::HttpEndpoint http;
    std::string model_id;
    int max_new_tokens = 16; // the verdict is a single token either way
};

// The grading instruction with question / golden answer / prediction filled
// in. Pinned byte-for-byte by golden fixtures; never edit the template.
std::string judge_prompt(const std::string& question, const std::string& answer,
                         const std::string& prediction);

// Chat-completions body carrying the grading instruction as a single user
// message; exposed so tests can pin the exact wire format.
nlohmann::json judge_request_body(const JudgeEndpoint& endpoint, const std::string& question,
                                  const std::string& answer, const std::string& prediction);

// Scans the completion case-insensitively and takes the earliest accept
// ("yes"/"true") or reject ("no"/"false") token; anything else counts as a
// reject, so unparseable verdicts default to 0.
int parse_judge_verdict(const std::string& completion);

struct JudgeOutcome {
    int verdict = 0;
    std::string raw; // persisted for audit
};

// Grades one answer; only the first reference fills the golden-answer slot.
// Service failures propagate (the caller records the sample as unscored).
JudgeOutcome llmeval(const JudgeEndpoint& endpoint, const std::string& question,
                     const std::vector<std::string>& references, const std::string& response);

} // namespace ragbench::evaluation

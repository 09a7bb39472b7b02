#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace ragbench::testkit {

// Deterministic loopback chat-completions stand-in. Modes:
//   Echo       — reply with the last user message verbatim
//   Fixed      — always reply `fixed_response`
//   Script     — reply script[i] to the i-th call (fallback beyond the end)
//   Extractive — pull the Background block out of the prompt and reply with
//                the first candidate answer found inside it (fallback
//                otherwise), imitating a model that answers from context
// `by_content_hash` (sha256 of the raw request body -> reply) overrides the
// mode when it has an entry. `fail_first` makes the first N calls return 503.
struct MockChatBehavior {
    enum class Mode { Echo, Fixed, Script, Extractive };
    Mode mode = Mode::Echo;
    std::string fixed_response;
    std::vector<std::string> script;
    std::map<std::string, std::string> by_content_hash;
    std::vector<std::string> candidate_answers;
    std::string fallback = "I don't know.";
    int fail_first = 0;
    int latency_max_ms = 0; // uniform in [0, max], drawn from the seeded rng
    unsigned seed = 1;
};

// Deterministic rerank scoring stand-in. Modes:
//   ByIndex          — scores [0, 1, 2, ...] in request order
//   DescendingByIndex— scores [n, n-1, ...]: keeps the input order a fixed point
//   ById             — scores_by_id lookup (0.0 when absent)
//   ContainsAnswer   — 1.0 when the passage text contains any candidate answer
//   CountMismatch    — drops the last score (malformed on purpose)
//   NonFinite        — emits an out-of-range literal so clients see a bad score
struct MockRerankBehavior {
    enum class Mode { ByIndex, DescendingByIndex, ById, ContainsAnswer, CountMismatch, NonFinite };
    Mode mode = Mode::ByIndex;
    std::map<std::string, double> scores_by_id;
    std::vector<std::string> candidate_answers;
    int fail_first = 0;
    int latency_max_ms = 0;
    unsigned seed = 1;
};

// A running loopback service. The call log answers both in-process queries
// and GET /calls ({"count": n, "bodies": [...]}).
class MockService {
public:
    virtual ~MockService() = default;
    virtual std::string base_url() const = 0;
    virtual int port() const = 0;
    virtual std::size_t call_count() const = 0;
    virtual std::vector<std::string> request_bodies() const = 0;
    virtual void reset_log() = 0;
};

std::unique_ptr<MockService> start_mock_chat_service(const MockChatBehavior& behavior);
std::unique_ptr<MockService> start_mock_rerank_service(const MockRerankBehavior& behavior);

} // namespace ragbench::testkit

#include "ragbench/testkit/mock.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/hash.hpp"

#include <httplib.h>
#include <nlohmann/json.hpp>

#include <atomic>
#include <chrono>
#include <mutex>
#include <random>
#include <thread>

namespace ragbench::testkit {

namespace {

using nlohmann::json;

class LoopbackService : public MockService {
public:
    LoopbackService() = default;

    ~LoopbackService() override {
        server_.stop();
        if (thread_.joinable()) thread_.join();
    }

    void start() {
        server_.Get("/calls", [this](const httplib::Request&, httplib::Response& res) {
            json bodies = json::array();
            {
                std::lock_guard<std::mutex> lock(mutex_);
                for (const auto& body : bodies_) bodies.push_back(body);
            }
            res.set_content(
                json{{"count", bodies.size()}, {"bodies", std::move(bodies)}}.dump(),
                "application/json");
        });

        port_ = server_.bind_to_any_port("127.0.0.1");
        if (port_ <= 0) {
            throw Error::service("PortUnavailable", "no free loopback port for mock service");
        }
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
    }

    std::string base_url() const override { return "http://127.0.0.1:" + std::to_string(port_); }
    int port() const override { return port_; }

    std::size_t call_count() const override {
        std::lock_guard<std::mutex> lock(mutex_);
        return bodies_.size();
    }

    std::vector<std::string> request_bodies() const override {
        std::lock_guard<std::mutex> lock(mutex_);
        return bodies_;
    }

    void reset_log() override {
        std::lock_guard<std::mutex> lock(mutex_);
        bodies_.clear();
        calls_before_reset_ += served_.exchange(0);
    }

protected:
    // Returns the 0-based call number and logs the body.
    std::size_t log_call(const std::string& body) {
        std::lock_guard<std::mutex> lock(mutex_);
        bodies_.push_back(body);
        return served_.fetch_add(1) + calls_before_reset_;
    }

    void apply_latency(int max_ms) {
        if (max_ms <= 0) return;
        int wait = 0;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            wait = std::uniform_int_distribution<int>(0, max_ms)(rng_);
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(wait));
    }

    void seed(unsigned value) { rng_.seed(value); }

    httplib::Server server_;

private:
    std::thread thread_;
    int port_ = 0;
    mutable std::mutex mutex_;
    std::vector<std::string> bodies_;
    std::atomic<std::size_t> served_{0};
    std::size_t calls_before_reset_ = 0;
    std::mt19937 rng_;
};

std::string last_user_message(const json& body) {
    if (!body.is_object() || !body.contains("messages") || !body["messages"].is_array()) {
        return "";
    }
    std::string content;
    for (const auto& message : body["messages"]) {
        if (message.is_object() && message.value("role", "") == "user" &&
            message.contains("content") && message["content"].is_string()) {
            content = message["content"].get<std::string>();
        }
    }
    return content;
}

class ChatMock : public LoopbackService {
public:
    explicit ChatMock(MockChatBehavior behavior) : behavior_(std::move(behavior)) {
        seed(behavior_.seed);
        server_.Post("/v1/chat/completions",
                     [this](const httplib::Request& req, httplib::Response& res) {
                         handle(req, res);
                     });
        start();
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        const auto call_index = log_call(req.body);
        apply_latency(behavior_.latency_max_ms);
        if (call_index < static_cast<std::size_t>(behavior_.fail_first)) {
            res.status = 503;
            res.set_content(R"({"error":{"message":"temporarily unavailable"}})",
                            "application/json");
            return;
        }
        res.set_content(json{{"choices",
                              {{{"message",
                                 {{"role", "assistant"}, {"content", reply(req.body, call_index)}}}}}}}
                            .dump(),
                        "application/json");
    }

    std::string reply(const std::string& raw_body, std::size_t call_index) const {
        if (!behavior_.by_content_hash.empty()) {
            const auto it = behavior_.by_content_hash.find(sha256_hex(raw_body));
            if (it != behavior_.by_content_hash.end()) return it->second;
        }
        const auto body = json::parse(raw_body, nullptr, false);
        switch (behavior_.mode) {
            case MockChatBehavior::Mode::Echo:
                return last_user_message(body);
            case MockChatBehavior::Mode::Fixed:
                return behavior_.fixed_response;
            case MockChatBehavior::Mode::Script:
                return call_index < behavior_.script.size() ? behavior_.script[call_index]
                                                            : behavior_.fallback;
            case MockChatBehavior::Mode::Extractive: {
                const auto prompt = last_user_message(body);
                const auto begin = prompt.find("Background:\n");
                const auto end = prompt.find("\n\nQuestion:");
                if (begin == std::string::npos || end == std::string::npos || end <= begin) {
                    return behavior_.fallback;
                }
                const auto background =
                    prompt.substr(begin + 12, end - (begin + 12));
                for (const auto& answer : behavior_.candidate_answers) {
                    if (background.find(answer) != std::string::npos) return answer;
                }
                return behavior_.fallback;
            }
        }
        return behavior_.fallback;
    }

    MockChatBehavior behavior_;
};

class RerankMock : public LoopbackService {
public:
    explicit RerankMock(MockRerankBehavior behavior) : behavior_(std::move(behavior)) {
        seed(behavior_.seed);
        server_.Post("/rerank", [this](const httplib::Request& req, httplib::Response& res) {
            handle(req, res);
        });
        start();
    }

private:
    void handle(const httplib::Request& req, httplib::Response& res) {
        const auto call_index = log_call(req.body);
        apply_latency(behavior_.latency_max_ms);
        if (call_index < static_cast<std::size_t>(behavior_.fail_first)) {
            res.status = 503;
            res.set_content(R"({"error":{"message":"temporarily unavailable"}})",
                            "application/json");
            return;
        }

        const auto body = json::parse(req.body, nullptr, false);
        std::vector<std::pair<std::string, std::string>> passages;
        if (body.is_object() && body.contains("passages") && body["passages"].is_array()) {
            for (const auto& passage : body["passages"]) {
                passages.emplace_back(passage.value("id", ""), passage.value("text", ""));
            }
        }

        if (behavior_.mode == MockRerankBehavior::Mode::NonFinite) {
            // 1e999 overflows double parsing, so clients must reject it.
            res.set_content(R"({"scores":[1e999]})", "application/json");
            return;
        }

        std::vector<double> scores;
        scores.reserve(passages.size());
        for (std::size_t i = 0; i < passages.size(); ++i) {
            switch (behavior_.mode) {
                case MockRerankBehavior::Mode::ByIndex:
                    scores.push_back(static_cast<double>(i));
                    break;
                case MockRerankBehavior::Mode::DescendingByIndex:
                    scores.push_back(static_cast<double>(passages.size() - i));
                    break;
                case MockRerankBehavior::Mode::ById: {
                    const auto it = behavior_.scores_by_id.find(passages[i].first);
                    scores.push_back(it == behavior_.scores_by_id.end() ? 0.0 : it->second);
                    break;
                }
                case MockRerankBehavior::Mode::ContainsAnswer: {
                    double score = 0.0;
                    for (const auto& answer : behavior_.candidate_answers) {
                        if (passages[i].second.find(answer) != std::string::npos) {
                            score = 1.0;
                            break;
                        }
                    }
                    scores.push_back(score);
                    break;
                }
                case MockRerankBehavior::Mode::CountMismatch:
                case MockRerankBehavior::Mode::NonFinite:
                    scores.push_back(0.0);
                    break;
            }
        }
        if (behavior_.mode == MockRerankBehavior::Mode::CountMismatch && !scores.empty()) {
            scores.pop_back();
        }

        res.set_content(json{{"scores", scores}}.dump(), "application/json");
    }

    MockRerankBehavior behavior_;
};

} // namespace

std::unique_ptr<MockService> start_mock_chat_service(const MockChatBehavior& behavior) {
    return std::make_unique<ChatMock>(behavior);
}

std::unique_ptr<MockService> start_mock_rerank_service(const MockRerankBehavior& behavior) {
    return std::make_unique<RerankMock>(behavior);
}

} // namespace ragbench::testkit

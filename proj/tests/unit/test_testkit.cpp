#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ragbench/core/hash.hpp"
#include "ragbench/generation/client.hpp"
#include "ragbench/generation/prompt.hpp"
#include "ragbench/net/http.hpp"
#include "ragbench/testkit/mock.hpp"
#include "ragbench/testkit/oracle.hpp"

#include "../support.hpp"

#include <httplib.h>

#include <cmath>

using namespace ragbench;
using namespace ragbench::testkit;
using ragbench::tests::error_code_of;

namespace {

std::string chat_once(const MockService& service, const std::string& user_message) {
    net::HttpEndpoint endpoint;
    endpoint.base_url = service.base_url();
    generation::PromptBundle bundle;
    bundle.system = "s";
    bundle.user = user_message;
    generation::DecodeConfig config;
    config.model_id = "m";
    return generation::chat_complete(endpoint, bundle, config, "q");
}

} // namespace

TEST_CASE("echo and fixed chat mocks answer deterministically") {
    auto echo = start_mock_chat_service({});
    CHECK(chat_once(*echo, "hello there") == "hello there");
    CHECK(echo->call_count() == 1);

    MockChatBehavior fixed;
    fixed.mode = MockChatBehavior::Mode::Fixed;
    fixed.fixed_response = "always this";
    auto fixed_service = start_mock_chat_service(fixed);
    CHECK(chat_once(*fixed_service, "a") == "always this");
    CHECK(chat_once(*fixed_service, "b") == "always this");
}

TEST_CASE("scripted chat mock replies in call order with a fallback") {
    MockChatBehavior behavior;
    behavior.mode = MockChatBehavior::Mode::Script;
    behavior.script = {"first", "second"};
    behavior.fallback = "done";
    auto service = start_mock_chat_service(behavior);
    CHECK(chat_once(*service, "x") == "first");
    CHECK(chat_once(*service, "x") == "second");
    CHECK(chat_once(*service, "x") == "done");
}

TEST_CASE("extractive chat mock answers from the Background block") {
    MockChatBehavior behavior;
    behavior.mode = MockChatBehavior::Mode::Extractive;
    behavior.candidate_answers = {"Paris", "Berlin"};
    auto service = start_mock_chat_service(behavior);

    const auto bundle = generation::build_rag_prompt(
        "Capital of France?", {"Paris is the capital of France.", "filler"});
    CHECK(chat_once(*service, bundle.user) == "Paris");

    const auto miss = generation::build_rag_prompt("Capital?", {"no city names here"});
    CHECK(chat_once(*service, miss.user) == "I don't know.");

    CHECK(chat_once(*service, "no background block") == "I don't know.");
}

TEST_CASE("content-hash overrides beat the mode") {
    generation::PromptBundle bundle;
    bundle.system = "s";
    bundle.user = "trigger";
    generation::DecodeConfig config;
    config.model_id = "m";
    const auto body = generation::chat_request_body(bundle, config).dump();

    MockChatBehavior behavior; // echo otherwise
    behavior.by_content_hash[sha256_hex(body)] = "special";
    auto service = start_mock_chat_service(behavior);
    CHECK(chat_once(*service, "trigger") == "special");
    CHECK(chat_once(*service, "other") == "other");
}

TEST_CASE("identical request sequences produce identical logs") {
    MockChatBehavior behavior;
    behavior.mode = MockChatBehavior::Mode::Script;
    behavior.script = {"one", "two", "three"};
    behavior.latency_max_ms = 3;
    behavior.seed = 99;

    auto first = start_mock_chat_service(behavior);
    auto second = start_mock_chat_service(behavior);
    for (const auto* msg : {"a", "b", "c"}) {
        chat_once(*first, msg);
        chat_once(*second, msg);
    }
    CHECK(first->request_bodies() == second->request_bodies());
    CHECK(first->call_count() == second->call_count());
}

TEST_CASE("the call log is queryable over the wire and resettable") {
    auto service = start_mock_chat_service({});
    chat_once(*service, "logged");

    httplib::Client client("127.0.0.1", service->port());
    const auto result = client.Get("/calls");
    REQUIRE(result);
    CHECK(result->status == 200);
    const auto body = nlohmann::json::parse(result->body);
    CHECK(body["count"] == 1);
    REQUIRE(body["bodies"].size() == 1);
    CHECK(body["bodies"][0].get<std::string>().find("logged") != std::string::npos);

    service->reset_log();
    CHECK(service->call_count() == 0);
    CHECK(service->request_bodies().empty());
}

TEST_CASE("fault schedules fail then recover") {
    MockChatBehavior behavior;
    behavior.fail_first = 2;
    auto service = start_mock_chat_service(behavior);

    net::HttpEndpoint impatient;
    impatient.base_url = service->base_url();
    impatient.retry_budget = 0;
    generation::PromptBundle bundle;
    bundle.system = "s";
    bundle.user = "u";
    generation::DecodeConfig config;
    config.model_id = "m";

    CHECK(error_code_of([&] { generation::chat_complete(impatient, bundle, config, "q"); }) ==
          "ServiceUnavailable");
    CHECK(error_code_of([&] { generation::chat_complete(impatient, bundle, config, "q"); }) ==
          "ServiceUnavailable");
    CHECK(generation::chat_complete(impatient, bundle, config, "q") == "u");
}

TEST_CASE("brute-force tau matches hand values") {
    CHECK(*brute_force_tau({1, 2}, {2, 1}) == -1.0);
    CHECK(*brute_force_tau({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_FALSE(brute_force_tau({1, 1}, {1, 2}).has_value());
}

TEST_CASE("brute-force bm25 reproduces the closed-form single-document score") {
    const auto scores = brute_force_bm25({{"d", "apple"}}, 0.9, 0.4, "apple");
    REQUIRE(scores.size() == 1);
    CHECK(scores.at("d") == doctest::Approx(std::log(4.0 / 3.0) / 1.9).epsilon(1e-12));

    // Unmatched passages stay in the map at zero.
    const auto with_zero = brute_force_bm25({{"d", "apple"}, {"e", "pear"}}, 0.9, 0.4, "apple");
    CHECK(with_zero.at("e") == 0.0);
}

TEST_CASE("brute-force top-k dot picks the max coordinate for identity vectors") {
    std::vector<std::pair<std::string, std::vector<float>>> rows{
        {"r0", {1.0f, 0.0f, 0.0f}},
        {"r1", {0.0f, 1.0f, 0.0f}},
        {"r2", {0.0f, 0.0f, 1.0f}},
    };
    const auto top = brute_force_topk_dot(rows, {0.1f, 0.9f, 0.3f}, 2);
    REQUIRE(top.size() == 2);
    CHECK(top[0].first == "r1");
    CHECK(top[1].first == "r2");

    const auto sparse_top = brute_force_topk_dot(
        {{"a", {{"t", 1.0}}}, {"b", {{"t", 2.0}}}}, {{"t", 1.0}}, 1);
    REQUIRE(sparse_top.size() == 1);
    CHECK(sparse_top[0].first == "b");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ragbench/generation/client.hpp"
#include "ragbench/generation/prompt.hpp"
#include "ragbench/testkit/mock.hpp"

#include "../support.hpp"

#include <httplib.h>

#include <atomic>
#include <thread>

using namespace ragbench;
using namespace ragbench::generation;
using ragbench::tests::error_code_of;
using ragbench::tests::golden;
using ragbench::tests::TempDir;

TEST_CASE("context prompts assemble the pinned template") {
    const auto bundle = build_rag_prompt(
        "What is the capital of France?",
        {"Paris Paris is the capital and most populous city of France.",
         "France France is a country in Western Europe."});
    CHECK(bundle.system == golden("rag_system.txt"));
    CHECK(bundle.user == golden("rag_user.txt"));
    CHECK(bundle.kind == PromptKind::Rag);
    CHECK(bundle.variant == PromptVariant::Basic);

    CHECK(error_code_of([] { build_rag_prompt("Q?", {}); }) == "NoContext");
}

TEST_CASE("closed-book prompts assemble the pinned template") {
    const auto bundle = build_closed_book_prompt("What is the capital of France?");
    CHECK(bundle.system == golden("closed_book_system.txt"));
    CHECK(bundle.user == golden("closed_book_user.txt"));
    CHECK(bundle.kind == PromptKind::ClosedBook);
}

TEST_CASE("variant and kind names round-trip") {
    for (const auto variant : {PromptVariant::Basic, PromptVariant::ReplyInUL,
                               PromptVariant::BasicTranslated, PromptVariant::ReplyInULTranslated}) {
        CHECK(variant_from_string(to_string(variant)) == variant);
    }
    CHECK(error_code_of([] { variant_from_string("nope"); }) == "UnknownVariant");
    CHECK(prompt_kind_from_string("rag") == PromptKind::Rag);
    CHECK(prompt_kind_from_string("closed_book") == PromptKind::ClosedBook);
    CHECK(error_code_of([] { prompt_kind_from_string("open_book"); }) == "UnknownPromptKind");
}

TEST_CASE("language variants rewrite system prompts from the translation table") {
    TranslationTable table;
    table["fr"] = LanguagePrompts{"SYSTEME RAG", "SYSTEME LIVRE FERME", "Answer in French.",
                                  "Répondez en français."};

    const auto base = build_rag_prompt("Q?", {"passage"});

    const auto reply = apply_language_variant(base, "fr", PromptVariant::ReplyInUL, table);
    CHECK(reply.system == std::string(kRagSystemPrompt) + " Answer in French.");
    CHECK(reply.user == base.user);
    CHECK(reply.language == "fr");
    CHECK(reply.variant == PromptVariant::ReplyInUL);

    const auto translated =
        apply_language_variant(base, "fr", PromptVariant::BasicTranslated, table);
    CHECK(translated.system == "SYSTEME RAG");
    CHECK(translated.user == base.user);

    const auto both =
        apply_language_variant(base, "fr", PromptVariant::ReplyInULTranslated, table);
    CHECK(both.system == "SYSTEME RAG Répondez en français.");

    const auto closed = build_closed_book_prompt("Q?");
    CHECK(apply_language_variant(closed, "fr", PromptVariant::BasicTranslated, table).system ==
          "SYSTEME LIVRE FERME");

    // Basic is a no-op apart from the language tag.
    const auto basic = apply_language_variant(base, "fr", PromptVariant::Basic, table);
    CHECK(basic.system == base.system);

    CHECK(error_code_of([&] {
              apply_language_variant(base, "en", PromptVariant::ReplyInUL, table);
          }) == "VariantNeedsLanguage");
    CHECK_NOTHROW(apply_language_variant(base, "en",
                                         PromptVariant::ReplyInUL,
                                         TranslationTable{{"en", LanguagePrompts{
                                                                     "s", "s", "Answer in English.",
                                                                     "Answer in English."}}},
                                         true));
    CHECK(error_code_of([&] {
              apply_language_variant(base, "de", PromptVariant::ReplyInUL, table);
          }) == "MissingTranslation");
    CHECK(error_code_of([&] {
              TranslationTable incomplete;
              incomplete["fr"] = LanguagePrompts{"", "", "", ""};
              apply_language_variant(base, "fr", PromptVariant::BasicTranslated, incomplete);
          }) == "MissingTranslation");
}

TEST_CASE("the shipped translation table covers all detector languages") {
    const auto table =
        load_translations(ragbench::tests::source_dir() / "data" / "prompt_translations.json");
    for (const auto* lang : {"en", "fr", "de", "es", "it", "pt", "fi", "ru", "ar", "ko", "ja",
                             "zh", "th"}) {
        REQUIRE(table.count(lang) == 1);
        const auto& prompts = table.at(lang);
        CHECK_FALSE(prompts.rag_system.empty());
        CHECK_FALSE(prompts.closed_book_system.empty());
        CHECK_FALSE(prompts.reply_instruction_en.empty());
        CHECK_FALSE(prompts.reply_instruction.empty());
    }
}

TEST_CASE("chat request body pins the wire format") {
    DecodeConfig config;
    config.model_id = "model-x";
    config.max_new_tokens = 64;
    config.temperature = 0.25;
    const auto body = chat_request_body(build_closed_book_prompt("Q?"), config);
    CHECK(body["model"] == "model-x");
    CHECK(body["temperature"] == 0.25);
    CHECK(body["max_tokens"] == 64);
    REQUIRE(body["messages"].size() == 2);
    CHECK(body["messages"][0]["role"] == "system");
    CHECK(body["messages"][1]["role"] == "user");
    CHECK(body["messages"][1]["content"] == "Question: Q?");
}

TEST_CASE("decode hashes fingerprint the decoding knobs") {
    DecodeConfig a{128, 0.0, "m1"};
    CHECK(decode_config_hash(a) == decode_config_hash(a));
    DecodeConfig b = a;
    b.temperature = 0.5;
    CHECK(decode_config_hash(a) != decode_config_hash(b));
    DecodeConfig c = a;
    c.model_id = "m2";
    CHECK(decode_config_hash(a) != decode_config_hash(c));
    DecodeConfig d = a;
    d.max_new_tokens = 32;
    CHECK(decode_config_hash(a) != decode_config_hash(d));
}

TEST_CASE("chat client round-trips against the echo mock") {
    auto service = testkit::start_mock_chat_service({});
    net::HttpEndpoint endpoint;
    endpoint.base_url = service->base_url();

    DecodeConfig config;
    config.model_id = "m";
    const auto reply = chat_complete(endpoint, build_closed_book_prompt("ping"), config, "q1");
    CHECK(reply == "Question: ping"); // echo returns the user message
    CHECK(service->call_count() == 1);
}

TEST_CASE("generate_batch keeps input order under concurrency") {
    auto service = testkit::start_mock_chat_service({}); // echo
    net::HttpEndpoint endpoint;
    endpoint.base_url = service->base_url();

    std::vector<GenerationTask> tasks;
    for (int i = 0; i < 24; ++i) {
        tasks.push_back({"q" + std::to_string(i),
                         build_closed_book_prompt("question " + std::to_string(i))});
    }
    DecodeConfig config;
    config.model_id = "m";
    BatchOptions options;
    options.max_in_flight = 8;
    const auto records = generate_batch(endpoint, tasks, config, options);
    REQUIRE(records.size() == tasks.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(records[i].query_id == tasks[i].query_id);
        CHECK(records[i].response == tasks[i].bundle.user);
        CHECK_FALSE(records[i].failed);
        CHECK(records[i].model_id == "m");
        CHECK(records[i].wall_ms >= 0.0);
    }
    CHECK(service->call_count() == tasks.size());
}

TEST_CASE("transient failures are retried, persistent ones recorded per item") {
    testkit::MockChatBehavior flaky;
    flaky.fail_first = 2;
    auto service = testkit::start_mock_chat_service(flaky);
    net::HttpEndpoint endpoint;
    endpoint.base_url = service->base_url();
    endpoint.retry_budget = 3;
    endpoint.backoff_ms = 1;

    DecodeConfig config;
    config.model_id = "m";
    const auto record = generate(endpoint, {"q1", build_closed_book_prompt("hi")}, config);
    CHECK_FALSE(record.failed);
    CHECK(service->call_count() == 3); // two 503s then success

    testkit::MockChatBehavior dead;
    dead.fail_first = 1000;
    auto dead_service = testkit::start_mock_chat_service(dead);
    net::HttpEndpoint dead_endpoint;
    dead_endpoint.base_url = dead_service->base_url();
    dead_endpoint.retry_budget = 1;
    dead_endpoint.backoff_ms = 1;

    const auto records =
        generate_batch(dead_endpoint, {{"q1", build_closed_book_prompt("hi")}}, config);
    REQUIRE(records.size() == 1);
    CHECK(records[0].failed);
    CHECK(records[0].error == "ServiceUnavailable");
    CHECK(records[0].response.empty());

    BatchOptions fail_fast;
    fail_fast.fail_fast = true;
    CHECK(error_code_of([&] {
              generate_batch(dead_endpoint, {{"q1", build_closed_book_prompt("hi")}}, config,
                             fail_fast);
          }) == "ServiceUnavailable");
}

TEST_CASE("context overflow surfaces as a data error naming the query") {
    httplib::Server server;
    server.Post("/v1/chat/completions", [](const httplib::Request&, httplib::Response& res) {
        res.status = 400;
        res.set_content(R"({"error": {"code": "context_length_exceeded",)"
                        R"( "message": "too long"}})",
                        "application/json");
    });
    const int port = server.bind_to_any_port("127.0.0.1");
    std::thread thread([&] { server.listen_after_bind(); });
    server.wait_until_ready();

    net::HttpEndpoint endpoint;
    endpoint.base_url = "http://127.0.0.1:" + std::to_string(port);

    DecodeConfig config;
    config.model_id = "m";
    try {
        chat_complete(endpoint, build_closed_book_prompt("hi"), config, "q42");
        FAIL("expected ContextTooLong");
    } catch (const Error& e) {
        CHECK(e.code() == "ContextTooLong");
        CHECK(e.kind() == ErrorKind::Data);
        CHECK(std::string(e.what()).find("q42") != std::string::npos);
    }

    server.stop();
    thread.join();
}

TEST_CASE("generation records round-trip without wall time") {
    TempDir dir;
    GenerationRecord record;
    record.query_id = "q1";
    record.prompt = build_rag_prompt("Q?", {"ctx"});
    record.response = "A.";
    record.model_id = "m";
    record.decode_hash = "abc123";
    record.retrieval_run_id = "retrieve-1";
    record.rerank_run_id = "rerank-1";
    record.wall_ms = 123.0;

    GenerationRecord failed;
    failed.query_id = "q2";
    failed.prompt = build_closed_book_prompt("Q2?");
    failed.model_id = "m";
    failed.decode_hash = "abc123";
    failed.retrieval_run_id = "closed_book";
    failed.failed = true;
    failed.error = "ServiceUnavailable";

    write_generations(dir / "gen.jsonl", {record, failed});
    const auto loaded = read_generations(dir / "gen.jsonl");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].query_id == "q1");
    CHECK(loaded[0].response == "A.");
    CHECK(loaded[0].prompt.user == record.prompt.user);
    CHECK(loaded[0].prompt.kind == PromptKind::Rag);
    CHECK(loaded[0].rerank_run_id == "rerank-1");
    CHECK(loaded[0].wall_ms == 0.0); // timing stays out of the artifact
    CHECK(loaded[1].failed);
    CHECK(loaded[1].error == "ServiceUnavailable");

    const auto as_json = generation_record_to_json(record);
    CHECK_FALSE(as_json.contains("wall_ms"));
    CHECK(error_code_of([&] {
              generation_record_from_json(nlohmann::json{{"query_id", "q"}});
          }) == "SchemaError");
}

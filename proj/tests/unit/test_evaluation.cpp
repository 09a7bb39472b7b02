#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ragbench/evaluation/judge.hpp"
#include "ragbench/evaluation/kendall.hpp"
#include "ragbench/evaluation/language.hpp"
#include "ragbench/evaluation/metrics.hpp"
#include "ragbench/evaluation/normalize.hpp"
#include "ragbench/evaluation/report.hpp"
#include "ragbench/testkit/mock.hpp"
#include "ragbench/testkit/oracle.hpp"

#include "../support.hpp"

#include <cmath>
#include <random>

using namespace ragbench;
using namespace ragbench::evaluation;
using ragbench::tests::error_code_of;
using ragbench::tests::golden;
using ragbench::tests::TempDir;

TEST_CASE("normalize lowercases, strips punctuation and articles, collapses spaces") {
    CHECK(normalize("The Quick,  brown fox!") == "quick brown fox");
    CHECK(normalize("An apple a day") == "apple day");
    CHECK(normalize("another theory") == "another theory"); // articles only when standalone
    CHECK(normalize("can't stop") == "cant stop");          // punctuation deleted, not replaced
    CHECK(normalize("ÉCOLE Française") == "école française");
    CHECK(normalize("  spaced \t out \n") == "spaced out");
    CHECK(normalize("") == "");
    CHECK(normalize("The A An") == "");
}

TEST_CASE("rouge tokenization keeps articles") {
    CHECK(rouge_tokens("The cat") == std::vector<std::string>{"the", "cat"});
    CHECK(normalize_tokens("The cat") == std::vector<std::string>{"cat"});
}

TEST_CASE("match is substring containment, exact match is equality") {
    CHECK(match_metric({"Paris"}, "The capital is Paris.") == 1);
    CHECK(exact_match({"Paris"}, "The capital is Paris.") == 0);
    CHECK(exact_match({"Paris"}, "paris") == 1);
    CHECK(match_metric({"New York", "NYC"}, "nyc!") == 1);
    CHECK(exact_match({"New York", "NYC"}, "nyc!") == 1);
    CHECK(match_metric({"Berlin"}, "I do not know.") == 0);
    // Match can only be more permissive than ExactMatch.
    CHECK(match_metric({"a cat"}, "cat") == 1); // both normalize to "cat"
}

TEST_CASE("token precision/recall/F1 uses multiset overlap and the best reference") {
    const auto both_empty = token_prf({""}, " ");
    CHECK(both_empty.precision == 1.0);
    CHECK(both_empty.recall == 1.0);
    CHECK(both_empty.f1 == 1.0);

    const auto one_empty = token_prf({"fox"}, "");
    CHECK(one_empty.f1 == 0.0);
    CHECK(one_empty.precision == 0.0);

    const auto multiset = token_prf({"x x y"}, "x y y");
    CHECK(multiset.precision == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(multiset.recall == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(multiset.f1 == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    const auto best = token_prf({"x", "x y"}, "x y");
    CHECK(best.f1 == 1.0);
}

TEST_CASE("rouge scores n-gram and LCS overlap") {
    CHECK(rouge_n({"the cat sat"}, "the cat", 1) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(rouge_n({"the cat sat"}, "the cat", 2) ==
          doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(rouge_l({"x y z w"}, "x q y w") == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(rouge_n({"x"}, "x", 2) == 0.0); // too short for bigrams
    CHECK(rouge_n({"x y"}, "x y", 2) == 1.0);
    CHECK(rouge_l({"x y"}, "x y") == 1.0);
    CHECK(rouge_l({"zz"}, "yy") == 0.0);
}

TEST_CASE("char3 recall works on per-token scalar trigram sets") {
    // Transliteration pair: 9 of the reference's 13 distinct grams survive.
    CHECK(char3_recall({"sofya kovalevskaya"}, "sofia kovalevskaia") == 9.0 / 13.0);

    CHECK(char3_grams("héllo") == std::vector<std::string>{"hél", "éll", "llo"});
    CHECK(char3_grams("ab cd") == std::vector<std::string>{"ab", "cd"}); // short tokens verbatim
    CHECK(char3_recall({"aaaa"}, "aaa") == 1.0); // grams deduplicate per side

    CHECK(char3_recall({"zzz", "hello"}, "hello") == 1.0); // max over references

    // A gramless reference only matches a byte-identical non-empty response.
    CHECK(char3_recall({" "}, " ") == 1.0);
    CHECK(char3_recall({""}, "") == 0.0);
    CHECK(char3_recall({""}, "x") == 0.0);
}

TEST_CASE("kendall tau matches hand-computed values and handles degenerate input") {
    CHECK(*kendall_tau({1, 2}, {2, 1}) == -1.0);
    CHECK(*kendall_tau({1, 2, 3}, {1, 2, 3}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*kendall_tau({1, 1, 2}, {1, 2, 3}) ==
          doctest::Approx(2.0 / std::sqrt(6.0)).epsilon(1e-12));
    CHECK_FALSE(kendall_tau({5, 5, 5}, {1, 2, 3}).has_value());
    CHECK(error_code_of([] { kendall_tau({1, 2}, {1, 2, 3}); }) == "LengthMismatch");
    CHECK(error_code_of([] { kendall_tau({1}, {2}); }) == "InsufficientSamples");
}

TEST_CASE("kendall tau agrees with the quadratic oracle on random ties") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> len(2, 60);
    std::uniform_int_distribution<int> value(0, 6); // small range forces ties
    for (int round = 0; round < 100; ++round) {
        const auto n = len(rng);
        std::vector<double> xs(n), ys(n);
        for (auto& x : xs) x = value(rng);
        for (auto& y : ys) y = value(rng);
        const auto fast = kendall_tau(xs, ys);
        const auto slow = testkit::brute_force_tau(xs, ys);
        REQUIRE(fast.has_value() == slow.has_value());
        if (fast) CHECK(*fast == doctest::Approx(*slow).epsilon(1e-12));
    }
}

TEST_CASE("correlate_metrics aligns examples pairwise") {
    const std::map<std::string, std::map<std::string, double>> by_metric{
        {"up", {{"e1", 1}, {"e2", 2}, {"e3", 3}}},
        {"down", {{"e1", 3}, {"e2", 2}, {"e3", 1}}},
        {"flat", {{"e1", 1}, {"e2", 1}, {"e3", 1}}},
        {"partial", {{"e1", 1}, {"e3", 2}, {"missing", 9}}},
    };
    const std::map<std::string, double> judge{{"e1", 0}, {"e2", 1}, {"e3", 2}};
    const auto taus = correlate_metrics(by_metric, judge);
    CHECK(*taus.at("up") == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(*taus.at("down") == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK_FALSE(taus.at("flat").has_value());
    CHECK(*taus.at("partial") == doctest::Approx(1.0).epsilon(1e-12)); // e2, "missing" dropped pairwise

    CHECK(error_code_of([&] {
              correlate_metrics({{"lonely", {{"e1", 1}}}}, judge);
          }) == "InsufficientSamples");
}

TEST_CASE("judge prompt matches the pinned template byte for byte") {
    const auto prompt = judge_prompt("What is the capital of France?", "Paris",
                                     "The capital of France is Paris.");
    CHECK(prompt == golden("judge_prompt.txt"));
}

TEST_CASE("judge request body carries one user message at temperature zero") {
    JudgeEndpoint endpoint;
    endpoint.model_id = "judge-1";
    const auto body = judge_request_body(endpoint, "Q", "A", "P");
    CHECK(body["model"] == "judge-1");
    CHECK(body["temperature"] == 0.0);
    CHECK(body["max_tokens"] == 16);
    REQUIRE(body["messages"].size() == 1);
    CHECK(body["messages"][0]["role"] == "user");
    CHECK(body["messages"][0]["content"] == judge_prompt("Q", "A", "P"));
}

TEST_CASE("verdict parsing takes the earliest token and defaults to reject") {
    CHECK(parse_judge_verdict("{Yes}") == 1);
    CHECK(parse_judge_verdict("yes") == 1);
    CHECK(parse_judge_verdict("True.") == 1);
    CHECK(parse_judge_verdict("{No}") == 0);
    CHECK(parse_judge_verdict("false") == 0);
    CHECK(parse_judge_verdict("") == 0);
    CHECK(parse_judge_verdict("I cannot decide.") == 0);
    CHECK(parse_judge_verdict("{Maybe}") == 0);
    CHECK(parse_judge_verdict("No, but yes") == 0);  // earliest wins
    CHECK(parse_judge_verdict("Yes, not no") == 1);
    CHECK(parse_judge_verdict("It is true that no") == 1); // "true" at 6 beats "no" at 16
    CHECK(parse_judge_verdict("nothing helpful") == 0);    // "no" inside a word still rejects
}

TEST_CASE("llmeval grades through the chat protocol using the first reference") {
    testkit::MockChatBehavior behavior;
    behavior.mode = testkit::MockChatBehavior::Mode::Fixed;
    behavior.fixed_response = "Yes}";
    auto service = testkit::start_mock_chat_service(behavior);

    JudgeEndpoint endpoint;
    endpoint.http.base_url = service->base_url();
    endpoint.model_id = "judge-1";

    const auto outcome = llmeval(endpoint, "Q?", {"first", "second"}, "resp");
    CHECK(outcome.verdict == 1);
    CHECK(outcome.raw == "Yes}");

    REQUIRE(service->call_count() == 1);
    const auto sent = nlohmann::json::parse(service->request_bodies()[0]);
    const std::string content = sent["messages"][0]["content"];
    CHECK(content == judge_prompt("Q?", "first", "resp"));
    CHECK(content.find("second") == std::string::npos);

    CHECK(error_code_of([&] { llmeval(endpoint, "Q?", {}, "resp"); }) == "NoReferences");
}

TEST_CASE("llmeval surfaces service exhaustion") {
    testkit::MockChatBehavior behavior;
    behavior.fail_first = 100;
    auto service = testkit::start_mock_chat_service(behavior);

    JudgeEndpoint endpoint;
    endpoint.http.base_url = service->base_url();
    endpoint.http.retry_budget = 1;
    endpoint.http.backoff_ms = 1;

    CHECK(error_code_of([&] { llmeval(endpoint, "Q?", {"a"}, "r"); }) == "ServiceUnavailable");
}

TEST_CASE("language detection spans scripts and close Latin neighbours") {
    TrigramLanguageDetector detector;
    CHECK(detector.supports("en"));
    CHECK(detector.supports("th"));
    CHECK_FALSE(detector.supports("xx"));
    CHECK(detector.languages().size() == 13);

    CHECK(detector.detect("The quick brown fox jumps over the lazy dog far away.") == "en");
    CHECK(detector.detect("Paris est la capitale de la France et une très belle ville.") ==
          "fr");
    CHECK(detector.detect("Berlin ist die Hauptstadt von Deutschland und sehr groß.") == "de");
    CHECK(detector.detect("Москва является столицей России и крупнейшим городом.") == "ru");
    CHECK(detector.detect("서울은 대한민국의 수도이며 가장 큰 도시입니다.") == "ko");
    CHECK(detector.detect("東京は日本の首都であり、最も大きな都市です。") == "ja");
    CHECK(detector.detect("北京是中国的首都，也是这个国家最大的城市之一。") == "zh");

    // A custom profile takes part in detection like any built-in.
    detector.add_profile("xx", "zzzq zzzq zzzq qzzz zqzz zzqz zzzq qqzz");
    CHECK(detector.supports("xx"));
    CHECK(detector.detect("zzzq qzzz zzqz zzzq") == "xx");
}

TEST_CASE("correct language rate skips short responses") {
    TrigramLanguageDetector detector;
    const std::vector<std::string> responses{
        "Paris est la capitale de la France et une très belle ville.", // fr, judged
        "The weather is lovely today in the mountains.",               // en, judged
        "oui",                                                         // 3 scalars, skipped
    };
    const auto result = correct_language_rate(responses, "fr", detector);
    CHECK(result.included == 2);
    CHECK(*result.rate == 0.5);

    // The threshold counts Unicode scalars, not bytes.
    const auto boundary = correct_language_rate(
        {std::string(20, 'x'), "ééééééééééééééééééééé"}, "fr", detector); // 20 and 21 scalars
    CHECK(boundary.included == 1);

    const auto nothing = correct_language_rate({"oui", "no"}, "fr", detector);
    CHECK(nothing.included == 0);
    CHECK_FALSE(nothing.rate.has_value());

    CHECK(error_code_of([&] { correct_language_rate({}, "xx", detector); }) ==
          "UnsupportedLanguage");
}

TEST_CASE("report aggregation averages per metric and tracks exclusions") {
    std::vector<MetricScore> scores{
        {"e1", "match", 1.0},
        {"e2", "match", 0.0},
        {"e1", "f1", 0.5},
    };
    const auto report = build_report("run-1", scores, {{"match", 0}, {"f1", 1}, {"clr", 2}});
    CHECK(report.run_id == "run-1");
    CHECK(report.aggregates.at("match").mean == 0.5);
    CHECK(report.aggregates.at("match").count == 2);
    CHECK(report.aggregates.at("f1").mean == 0.5);
    CHECK(report.aggregates.at("f1").excluded == 1);
    CHECK(report.aggregates.at("clr").count == 0);
    CHECK(report.aggregates.at("clr").excluded == 2);

    CHECK(error_code_of([&] {
              build_report("r", {{"e1", "match", 1.0}, {"e1", "match", 0.0}});
          }) == "DuplicateScore");
    CHECK(error_code_of([&] { build_report("r", {{"e1", "match", 1.5}}); }) ==
          "InvalidScore");
}

TEST_CASE("metrics files round-trip and reject tampered summaries") {
    TempDir dir;
    const auto report =
        build_report("run-7", {{"e1", "match", 1.0}, {"e2", "match", 0.0}, {"e1", "em", 0.0}});
    const auto path = dir / "metrics.jsonl";
    write_metrics(path, report);

    const auto loaded = read_metrics(path);
    CHECK(loaded.run_id == "run-7");
    CHECK(loaded.scores.size() == report.scores.size());
    CHECK(loaded.aggregates.at("match").mean == 0.5);

    const auto content = metrics_to_jsonl(report);
    CHECK(metrics_from_jsonl(content).aggregates.at("em").count == 1);

    auto tampered = content;
    const auto pos = tampered.find("0.5");
    REQUIRE(pos != std::string::npos);
    tampered.replace(pos, 3, "0.9");
    CHECK(error_code_of([&] { metrics_from_jsonl(tampered); }) == "AggregateMismatch");
}

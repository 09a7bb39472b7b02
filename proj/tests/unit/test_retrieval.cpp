#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ragbench/corpus/store.hpp"
#include "ragbench/retrieval/analyze.hpp"
#include "ragbench/retrieval/bm25.hpp"
#include "ragbench/retrieval/dense.hpp"
#include "ragbench/retrieval/oracle.hpp"
#include "ragbench/retrieval/sparse.hpp"
#include "ragbench/retrieval/types.hpp"
#include "ragbench/testkit/oracle.hpp"

#include "../support.hpp"

#include <cmath>
#include <random>

using namespace ragbench;
using namespace ragbench::retrieval;
using ragbench::tests::error_code_of;
using ragbench::tests::TempDir;

namespace {

// One-passage-per-document store whose passage ids are "<id>::0".
corpus::CorpusStore make_store(const TempDir& dir,
                               const std::vector<std::pair<std::string, std::string>>& docs,
                               std::uint32_t chunk_words = 1000) {
    std::vector<corpus::Document> documents;
    for (const auto& [id, text] : docs) {
        documents.push_back(corpus::Document{id, "", text, "en"});
    }
    corpus::VectorSource source(std::move(documents));
    const auto path = dir / ("store-" + std::to_string(rand()));
    corpus::ingest_collection(source, corpus::ChunkPolicy{corpus::ChunkMode::Words, chunk_words},
                              path);
    return corpus::CorpusStore::open(path);
}

} // namespace

TEST_CASE("analyze lowercases and splits at non-alphanumeric boundaries") {
    CHECK(analyze("Hello, World-2") == std::vector<std::string>{"hello", "world", "2"});
    CHECK(analyze("café au lait") == std::vector<std::string>{"café", "au", "lait"});
    CHECK(analyze("") == std::vector<std::string>{});
    CHECK(analyze("...") == std::vector<std::string>{});
}

TEST_CASE("bm25 single-document score matches the closed form") {
    TempDir dir;
    const auto store = make_store(dir, {{"d", "apple"}});
    const auto index = Bm25Index::build(store, Bm25Params{});
    CHECK(index.passage_count() == 1);
    CHECK(index.average_length() == 1.0);
    CHECK(index.df("apple") == 1);
    CHECK(index.df("pear") == 0);

    const auto run = index.search("apple", 10, "q");
    REQUIRE(run.entries.size() == 1);
    CHECK(run.entries[0].first == "d::0");
    // idf = ln(1 + (1 - 1 + 0.5) / (1 + 0.5)); denom = tf + k1*(1 - b + b*len/avg).
    const double expected = std::log(4.0 / 3.0) / 1.9;
    CHECK(run.entries[0].second == doctest::Approx(expected).epsilon(1e-12));

    // Query terms contribute per occurrence.
    const auto doubled = index.search("apple apple", 10, "q");
    CHECK(doubled.entries[0].second == doctest::Approx(2 * expected).epsilon(1e-12));
}

TEST_CASE("bm25 returns matched passages only, ties broken by id") {
    TempDir dir;
    const auto store = make_store(dir, {
                                           {"a", "apple banana apple"},
                                           {"b", "banana cherry"},
                                           {"c", "durian"},
                                           {"twin1", "same words"},
                                           {"twin2", "same words"},
                                       });
    const auto index = Bm25Index::build(store, Bm25Params{});

    const auto none = index.search("zzz", 5, "q");
    CHECK(none.entries.empty());

    const auto banana = index.search("banana", 5, "q");
    REQUIRE(banana.entries.size() == 2); // c, twin1, twin2 never match
    CHECK(banana.producer == Producer::Bm25);

    const auto twins = index.search("same words", 5, "q");
    REQUIRE(twins.entries.size() == 2);
    CHECK(twins.entries[0].first == "twin1::0"); // equal scores -> ascending id
    CHECK(twins.entries[1].first == "twin2::0");
    CHECK(twins.entries[0].second == twins.entries[1].second);

    const auto capped = index.search("banana", 1, "q");
    CHECK(capped.entries.size() == 1);
}

TEST_CASE("bm25 save/load round-trips the index") {
    TempDir dir;
    const auto store = make_store(dir, {{"a", "apple banana"}, {"b", "banana cherry"}});
    const auto index = Bm25Index::build(store, Bm25Params{1.2, 0.75});
    index.save(dir / "bm25.idx");

    const auto loaded = Bm25Index::load(dir / "bm25.idx");
    CHECK(loaded.params().k1 == 1.2);
    CHECK(loaded.params().b == 0.75);
    CHECK(loaded.passage_count() == index.passage_count());
    CHECK(loaded.average_length() == index.average_length());
    CHECK(loaded.df("banana") == 2);

    const auto before = index.search("apple banana", 5, "q");
    const auto after = loaded.search("apple banana", 5, "q");
    REQUIRE(before.entries.size() == after.entries.size());
    for (std::size_t i = 0; i < before.entries.size(); ++i) {
        CHECK(before.entries[i].first == after.entries[i].first);
        CHECK(before.entries[i].second == after.entries[i].second);
    }

    CHECK(error_code_of([&] { Bm25Index::load(dir / "absent.idx"); }) != "");
}

TEST_CASE("bm25 agrees with the brute-force oracle on random corpora") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> doc_count(1, 60);
    std::uniform_int_distribution<int> doc_len(1, 30);
    std::uniform_int_distribution<int> query_len(1, 8);
    for (int round = 0; round < 20; ++round) {
        TempDir dir;
        std::vector<std::pair<std::string, std::string>> docs;
        const int n = doc_count(rng);
        for (int i = 0; i < n; ++i) {
            docs.emplace_back("doc" + std::to_string(i),
                              ragbench::tests::random_words(rng, doc_len(rng), 25));
        }
        const auto store = make_store(dir, docs);
        const auto index = Bm25Index::build(store, Bm25Params{});
        const auto query = ragbench::tests::random_words(rng, query_len(rng), 30);

        std::vector<std::pair<std::string, std::string>> oracle_corpus;
        store.for_each([&](const corpus::Passage& p) {
            oracle_corpus.emplace_back(p.passage_id, p.prompt_text());
        });
        const auto truth = testkit::brute_force_bm25(oracle_corpus, 0.9, 0.4, query);
        std::vector<std::pair<std::string, double>> expected;
        for (const auto& [id, score] : truth) {
            if (score > 0.0) expected.emplace_back(id, score);
        }
        std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (expected.size() > 10) expected.resize(10);

        const auto run = index.search(query, 10, "q");
        REQUIRE(run.entries.size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(run.entries[i].first == expected[i].first);
            CHECK(run.entries[i].second == doctest::Approx(expected[i].second).epsilon(1e-9));
        }
    }
}

TEST_CASE("sparse search scores dot products over the inverted index") {
    const std::map<std::string, SparseVector> vectors{
        {"p1", {{"alpha", 1.0}, {"beta", 2.0}}},
        {"p2", {{"beta", 1.0}, {"gamma", 3.0}}},
        {"p3", {{"delta", 4.0}}},
    };
    const auto index = SparseIndex::build(vectors);
    CHECK(index.passage_count() == 3);

    const auto run = index.search({{"beta", 2.0}, {"gamma", 1.0}}, 5, "q");
    REQUIRE(run.entries.size() == 2);
    CHECK(run.producer == Producer::Sparse);
    CHECK(run.entries[0].first == "p2"); // 2*1 + 1*3 = 5
    CHECK(run.entries[0].second == 5.0);
    CHECK(run.entries[1].first == "p1"); // 2*2 = 4
    CHECK(run.entries[1].second == 4.0);

    CHECK(index.search({{"zeta", 1.0}}, 5, "q").entries.empty());
    CHECK(error_code_of([&] { index.search({{"beta", -1.0}}, 5, "q"); }) == "InvalidVector");

    CHECK(error_code_of([&] { SparseIndex::build(vectors, {"p1", "p9"}); }) ==
          "MissingVectors");
}

TEST_CASE("sparse search matches the brute-force oracle bit for bit") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> n_vec(1, 40);
    std::uniform_int_distribution<int> n_term(1, 6);
    std::uniform_int_distribution<int> term(0, 14);
    std::uniform_real_distribution<double> weight(0.0, 4.0);
    for (int round = 0; round < 25; ++round) {
        std::map<std::string, SparseVector> vectors;
        const int n = n_vec(rng);
        for (int i = 0; i < n; ++i) {
            SparseVector v;
            const int terms = n_term(rng);
            for (int t = 0; t < terms; ++t) v["t" + std::to_string(term(rng))] = weight(rng);
            vectors["p" + std::to_string(i)] = std::move(v);
        }
        SparseVector query;
        const int terms = n_term(rng);
        for (int t = 0; t < terms; ++t) query["t" + std::to_string(term(rng))] = weight(rng);

        const auto run = SparseIndex::build(vectors).search(query, 7, "q");
        const auto truth = testkit::brute_force_topk_dot(vectors, query, 7);
        REQUIRE(run.entries.size() == truth.size());
        for (std::size_t i = 0; i < truth.size(); ++i) {
            CHECK(run.entries[i].first == truth[i].first);
            CHECK(run.entries[i].second == truth[i].second); // identical summation order
        }
    }
}

TEST_CASE("dense search is exact top-k by inner product") {
    DenseMatrix matrix;
    matrix.dim = 2;
    matrix.ids = {"a", "b", "c"};
    matrix.data = {1.0f, 0.0f, 0.0f, 1.0f, -1.0f, -1.0f};

    const auto run = search_dense(matrix, {2.0f, 1.0f}, 3, "q");
    REQUIRE(run.entries.size() == 3);
    CHECK(run.producer == Producer::Dense);
    CHECK(run.entries[0].first == "a"); // 2
    CHECK(run.entries[1].first == "b"); // 1
    CHECK(run.entries[2].first == "c"); // -3, negatives included
    CHECK(run.entries[2].second == -3.0);

    CHECK(search_dense(matrix, {1.0f, 1.0f}, 2, "q").entries.size() == 2);
    CHECK(error_code_of([&] { search_dense(matrix, {1.0f}, 2, "q"); }) == "DimensionMismatch");
}

TEST_CASE("dense files round-trip raw little-endian rows") {
    TempDir dir;
    DenseMatrix matrix;
    matrix.dim = 3;
    matrix.ids = {"x", "y"};
    matrix.data = {0.5f, -1.25f, 3.0f, 0.0f, 2.5f, -0.75f};
    write_dense_vectors(dir / "dense.bin", matrix);

    const auto loaded = read_dense_vectors(dir / "dense.bin");
    CHECK(loaded.dim == 3);
    CHECK(loaded.ids == matrix.ids);
    CHECK(loaded.data == matrix.data);

    CHECK(error_code_of([&] { read_dense_vectors(dir / "missing.bin"); }) != "");
}

TEST_CASE("sparse files round-trip") {
    TempDir dir;
    const std::map<std::string, SparseVector> vectors{
        {"p1", {{"alpha", 1.5}}},
        {"p2", {{"beta", 2.0}, {"gamma", 0.25}}},
    };
    write_sparse_vectors(dir / "sparse.jsonl", vectors);
    CHECK(read_sparse_vectors(dir / "sparse.jsonl") == vectors);
}

TEST_CASE("ranking invariants are enforced in both directions") {
    RankedList list;
    list.query_id = "q";
    list.entries = {{"b", 1.0}, {"a", 1.0}, {"c", 2.0}};
    finalize_ranking(list);
    CHECK(list.entries == decltype(list.entries){{"c", 2.0}, {"a", 1.0}, {"b", 1.0}});
    CHECK_NOTHROW(validate_ranking(list));

    RankedList unsorted;
    unsorted.query_id = "q";
    unsorted.entries = {{"a", 1.0}, {"b", 2.0}};
    CHECK(error_code_of([&] { validate_ranking(unsorted); }) != "");

    RankedList dup;
    dup.query_id = "q";
    dup.entries = {{"a", 1.0}, {"a", 1.0}};
    CHECK(error_code_of([&] { finalize_ranking(dup); }) == "InvalidRun");

    const auto record = ranked_run_to_json(list);
    const auto back = ranked_run_from_json(record);
    CHECK(back.query_id == list.query_id);
    CHECK(back.entries == list.entries);
    CHECK(back.producer == list.producer);

    auto bad = record;
    bad["entries"] = nlohmann::json::array({{"a", 1.0}, {"b", 2.0}});
    CHECK(error_code_of([&] { ranked_run_from_json(bad); }) != "");
}

TEST_CASE("ranked runs files round-trip") {
    TempDir dir;
    RankedList one;
    one.query_id = "q1";
    one.entries = {{"p2", 2.0}, {"p1", 1.0}};
    one.producer = Producer::Dense;
    RankedList two;
    two.query_id = "q2";
    two.producer = Producer::Oracle;
    write_ranked_runs(dir / "runs.jsonl", {one, two});

    const auto loaded = read_ranked_runs(dir / "runs.jsonl");
    REQUIRE(loaded.size() == 2);
    CHECK(loaded[0].query_id == "q1");
    CHECK(loaded[0].entries == one.entries);
    CHECK(loaded[0].producer == Producer::Dense);
    CHECK(loaded[1].entries.empty());
    CHECK(loaded[1].producer == Producer::Oracle);
}

TEST_CASE("producer names round-trip") {
    for (const auto producer : {Producer::Bm25, Producer::Sparse, Producer::Dense,
                                Producer::Reranked, Producer::Oracle, Producer::Random}) {
        CHECK(producer_from_string(to_string(producer)) == producer);
    }
    CHECK(error_code_of([] { producer_from_string("guess"); }) != "");
}

TEST_CASE("recall@k covers judged documents through their passages") {
    RankedList run;
    run.query_id = "q";
    run.entries = {{"gold::2", 5.0}, {"noise::0", 4.0}, {"other::1", 3.0}, {"gold::0", 2.0}};

    RelevanceJudgment judgment;
    judgment.query_id = "q";
    judgment.relevant_doc_ids = {"gold"};
    judgment.relevant_passage_ids = {"other::7"}; // judges doc "other" via its passage

    CHECK(recall_at_k(run, judgment, 1) == 0.5);  // gold::2 covers "gold"
    CHECK(recall_at_k(run, judgment, 3) == 1.0);  // other::1 covers "other"
    CHECK(recall_at_k(run, judgment, 100) == 1.0);

    RelevanceJudgment missing;
    missing.query_id = "q";
    missing.relevant_doc_ids = {"absent"};
    CHECK(recall_at_k(run, missing, 4) == 0.0);

    CHECK(error_code_of([&] { recall_at_k(run, RelevanceJudgment{"q", {}, {}}, 3); }) ==
          "EmptyJudgment");
}

TEST_CASE("oracle context prefers judged passages, then answer-bearing chunks") {
    TempDir dir;
    const auto store = make_store(dir,
                                  {
                                      {"gold", "aa bb cc dd Paris xx yy zz"},
                                      {"other", "mm nn"},
                                  },
                                  4); // -> gold::0 "aa bb cc dd", gold::1 "Paris xx yy zz"

    RelevanceJudgment doc_level;
    doc_level.query_id = "q";
    doc_level.relevant_doc_ids = {"gold"};
    const auto by_doc = oracle_context("q", {"Paris"}, doc_level, store, 3);
    REQUIRE(by_doc.entries.size() == 2);
    CHECK(by_doc.producer == Producer::Oracle);
    CHECK(by_doc.entries[0] == std::pair<std::string, double>{"gold::1", 1.0});
    CHECK(by_doc.entries[1] == std::pair<std::string, double>{"gold::0", 0.5});

    const auto capped = oracle_context("q", {"Paris"}, doc_level, store, 1);
    REQUIRE(capped.entries.size() == 1);
    CHECK(capped.entries[0].first == "gold::1");

    RelevanceJudgment passage_level;
    passage_level.query_id = "q";
    passage_level.relevant_passage_ids = {"other::0", "gone::9"};
    passage_level.relevant_doc_ids = {"gold"}; // ignored when passages are named
    const auto by_passage = oracle_context("q", {"Paris"}, passage_level, store, 3);
    REQUIRE(by_passage.entries.size() == 1); // unknown ids are skipped
    CHECK(by_passage.entries[0] == std::pair<std::string, double>{"other::0", 1.0});

    CHECK(error_code_of([&] {
              oracle_context("q", {"Paris"}, RelevanceJudgment{"q", {}, {}}, store, 3);
          }) == "NoOracleAvailable");
}

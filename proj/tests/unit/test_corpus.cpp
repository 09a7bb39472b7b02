#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ragbench/corpus/chunker.hpp"
#include "ragbench/corpus/store.hpp"
#include "ragbench/core/jsonl.hpp"
#include "ragbench/core/unicode.hpp"

#include "../support.hpp"

#include <random>

using namespace ragbench;
using namespace ragbench::corpus;
using ragbench::tests::error_code_of;
using ragbench::tests::read_file;
using ragbench::tests::TempDir;

namespace {

Document doc(std::string id, std::string title, std::string text) {
    return Document{std::move(id), std::move(title), std::move(text), "en"};
}

} // namespace

TEST_CASE("passage ids recover their document id at the last separator") {
    CHECK(doc_id_of("d::3") == "d");
    CHECK(doc_id_of("a::b::2") == "a::b");
    CHECK(doc_id_of("plain") == "plain");
    CHECK(make_passage_id("d", 3) == "d::3");
}

TEST_CASE("word chunking packs fixed word counts and rejoins with single spaces") {
    ChunkPolicy policy{ChunkMode::Words, 3};
    const auto passages = chunk_document(doc("d1", "T", "one  two\tthree\nfour five"), policy);
    REQUIRE(passages.size() == 2);
    CHECK(passages[0].passage_id == "d1::0");
    CHECK(passages[0].doc_id == "d1");
    CHECK(passages[0].chunk_index == 0);
    CHECK(passages[0].title == "T");
    CHECK(passages[0].body == "one two three"); // whitespace runs collapse
    CHECK(passages[1].passage_id == "d1::1");
    CHECK(passages[1].body == "four five"); // final passage may run short
    CHECK(passages[0].language == "en");
    CHECK(passages[0].prompt_text() == "T one two three");
}

TEST_CASE("word chunking boundary cases") {
    ChunkPolicy policy{ChunkMode::Words, 3};
    CHECK(chunk_document(doc("d", "", "a b c"), policy).size() == 1); // exactly one chunk
    CHECK(chunk_document(doc("d", "", "a b c d"), policy).size() == 2);
    CHECK(chunk_document(doc("d", "", "tiny"), policy).size() == 1);

    // The title never counts toward the word budget.
    const auto titled = chunk_document(doc("d", "long title of many words", "a b c"), policy);
    REQUIRE(titled.size() == 1);
    CHECK(titled[0].body == "a b c");

    CHECK(error_code_of([&] { chunk_document(doc("d", "T", "   \t\n"), policy); }) ==
          "EmptyDocument");
    CHECK(error_code_of([&] { chunk_document(doc("d", "T", ""), policy); }) == "EmptyDocument");
}

TEST_CASE("character chunking slices trimmed text by Unicode scalars") {
    ChunkPolicy policy{ChunkMode::Characters, 5};
    const auto passages = chunk_document(doc("d", "", "  héllo wörld  "), policy);
    // Trimmed text "héllo wörld" has 11 scalars -> 5 + 5 + 1.
    REQUIRE(passages.size() == 3);
    CHECK(passages[0].body == "héllo");
    CHECK(passages[1].body == " wörl");
    CHECK(passages[2].body == "d");
    CHECK(unicode::scalar_count(passages[0].body) == 5);
}

TEST_CASE("ingest writes an immutable store that reads back passages") {
    TempDir dir;
    std::vector<Document> docs{
        doc("alpha", "Alpha", "one two three four"),
        doc("beta", "Beta", "five six"),
    };
    VectorSource source(docs);
    const auto summary =
        ingest_collection(source, ChunkPolicy{ChunkMode::Words, 3}, dir / "store");
    CHECK(summary.documents == 2);
    CHECK(summary.passages == 3);
    CHECK(summary.checksum.size() == 64);

    const auto store = CorpusStore::open(dir / "store");
    CHECK(store.doc_count() == 2);
    CHECK(store.passage_count() == 3);
    CHECK(store.checksum() == summary.checksum);
    CHECK(store.policy().size == 3);

    CHECK(store.contains("alpha::0"));
    CHECK(store.contains("beta::0"));
    CHECK_FALSE(store.contains("gamma::0"));

    const auto passage = store.get("alpha::1");
    CHECK(passage.body == "four");
    CHECK(passage.title == "Alpha");
    CHECK(passage.doc_id == "alpha");

    CHECK(error_code_of([&] { store.get("gamma::0"); }) == "UnknownPassage");

    // Iteration and the id list share the stored order.
    std::vector<std::string> seen;
    store.for_each([&](const Passage& p) { seen.push_back(p.passage_id); });
    CHECK(seen == store.passage_ids());
    CHECK(seen == std::vector<std::string>{"alpha::0", "alpha::1", "beta::0"});
}

TEST_CASE("parallel ingest produces byte-identical stores") {
    std::mt19937 rng(11);
    std::uniform_int_distribution<int> words(1, 40);
    std::vector<Document> docs;
    for (int i = 0; i < 200; ++i) {
        docs.push_back(doc("doc" + std::to_string(i), "title " + std::to_string(i),
                           ragbench::tests::random_words(rng, words(rng), 50)));
    }

    TempDir dir;
    VectorSource serial_source(docs);
    VectorSource parallel_source(docs);
    const auto serial = ingest_collection(serial_source, ChunkPolicy{ChunkMode::Words, 10},
                                          dir / "serial", 1);
    const auto parallel = ingest_collection(parallel_source, ChunkPolicy{ChunkMode::Words, 10},
                                            dir / "parallel", 8);
    CHECK(serial.checksum == parallel.checksum);
    CHECK(serial.passages == parallel.passages);

    for (const auto& entry : std::filesystem::directory_iterator(dir / "serial")) {
        const auto name = entry.path().filename();
        CHECK(read_file(entry.path()) == read_file(dir / "parallel" / name));
    }
}

TEST_CASE("jsonl collections ingest with schema checking") {
    TempDir dir;
    const auto collection = dir / "collection.jsonl";
    jsonl::write_file_atomic(collection,
                             R"({"id": "a", "title": "A", "text": "one two three"})"
                             "\n"
                             R"({"id": "b", "title": "B", "text": "four five six", "lang": "fr"})"
                             "\n");
    JsonlCollectionSource source(collection);
    const auto summary =
        ingest_collection(source, ChunkPolicy{ChunkMode::Words, 100}, dir / "store");
    CHECK(summary.documents == 2);

    const auto store = CorpusStore::open(dir / "store");
    CHECK(store.get("b::0").language == "fr");
    CHECK(store.get("a::0").language == "en"); // default when lang is absent

    const auto bad = dir / "bad.jsonl";
    jsonl::write_file_atomic(bad, R"({"title": "no id"})"
                                  "\n");
    CHECK(error_code_of([&] {
              JsonlCollectionSource s(bad);
              ingest_collection(s, ChunkPolicy{}, dir / "store2");
          }) == "SchemaError");
}

TEST_CASE("opening a missing or damaged store fails loudly") {
    TempDir dir;
    CHECK(error_code_of([&] { CorpusStore::open(dir / "absent"); }) != "");

    VectorSource source({doc("a", "", "one two")});
    ingest_collection(source, ChunkPolicy{}, dir / "store");
    // Truncate the content file behind the index's back.
    for (const auto& entry : std::filesystem::directory_iterator(dir / "store")) {
        if (entry.path().extension() == ".bin" ||
            entry.path().filename().string().find("passages") != std::string::npos) {
            std::filesystem::resize_file(entry.path(), 4);
        }
    }
    CHECK(error_code_of([&] {
              const auto store = CorpusStore::open(dir / "store");
              store.get("a::0");
          }) != "");
}

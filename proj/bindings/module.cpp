#include "ragbench/core/error.hpp"
#include "ragbench/corpus/chunker.hpp"
#include "ragbench/corpus/store.hpp"
#include "ragbench/evaluation/judge.hpp"
#include "ragbench/evaluation/kendall.hpp"
#include "ragbench/evaluation/language.hpp"
#include "ragbench/evaluation/metrics.hpp"
#include "ragbench/evaluation/normalize.hpp"
#include "ragbench/generation/prompt.hpp"
#include "ragbench/retrieval/analyze.hpp"
#include "ragbench/retrieval/bm25.hpp"
#include "ragbench/retrieval/oracle.hpp"
#include "ragbench/retrieval/types.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <set>
#include <string>
#include <vector>

namespace py = pybind11;

namespace {

using namespace ragbench;

corpus::ChunkPolicy make_policy(const std::string& mode, std::uint32_t size) {
    corpus::ChunkPolicy policy;
    if (mode == "words") policy.mode = corpus::ChunkMode::Words;
    else if (mode == "characters") policy.mode = corpus::ChunkMode::Characters;
    else throw Error::config("InvalidPolicy", "unknown chunk mode: " + mode);
    policy.size = size;
    return policy;
}

void bind_corpus(py::module_& m) {
    py::class_<corpus::Document>(m, "Document")
        .def(py::init([](std::string id, std::string title, std::string text,
                         std::string language) {
                 return corpus::Document{std::move(id), std::move(title), std::move(text),
                                         std::move(language)};
             }),
             py::arg("id"), py::arg("title") = "", py::arg("text") = "",
             py::arg("language") = "en")
        .def_readwrite("id", &corpus::Document::id)
        .def_readwrite("title", &corpus::Document::title)
        .def_readwrite("text", &corpus::Document::text)
        .def_readwrite("language", &corpus::Document::language);

    py::class_<corpus::Passage>(m, "Passage")
        .def_readonly("passage_id", &corpus::Passage::passage_id)
        .def_readonly("doc_id", &corpus::Passage::doc_id)
        .def_readonly("chunk_index", &corpus::Passage::chunk_index)
        .def_readonly("title", &corpus::Passage::title)
        .def_readonly("body", &corpus::Passage::body)
        .def_readonly("language", &corpus::Passage::language)
        .def("prompt_text", &corpus::Passage::prompt_text);

    m.def(
        "chunk_document",
        [](const corpus::Document& doc, const std::string& mode, std::uint32_t size) {
            return corpus::chunk_document(doc, make_policy(mode, size));
        },
        py::arg("document"), py::arg("mode") = "words", py::arg("size") = 100,
        "Split a document into passages (mode 'words' or 'characters').");

    m.def("doc_id_of", [](const std::string& passage_id) { return corpus::doc_id_of(passage_id); },
          py::arg("passage_id"));

    py::class_<corpus::CorpusStore>(m, "CorpusStore")
        .def_static(
            "open", [](const std::string& dir) { return corpus::CorpusStore::open(dir); },
            py::arg("dir"))
        .def("get", [](const corpus::CorpusStore& s, const std::string& id) { return s.get(id); },
             py::arg("passage_id"))
        .def("contains",
             [](const corpus::CorpusStore& s, const std::string& id) { return s.contains(id); },
             py::arg("passage_id"))
        .def("passage_ids", &corpus::CorpusStore::passage_ids)
        .def_property_readonly("doc_count", &corpus::CorpusStore::doc_count)
        .def_property_readonly("passage_count", &corpus::CorpusStore::passage_count)
        .def_property_readonly("checksum", &corpus::CorpusStore::checksum);

    m.def(
        "ingest_collection",
        [](const std::string& collection, const std::string& store_dir, const std::string& mode,
           std::uint32_t size, std::size_t workers) {
            corpus::JsonlCollectionSource source(collection);
            auto summary =
                corpus::ingest_collection(source, make_policy(mode, size), store_dir, workers);
            return py::make_tuple(summary.documents, summary.passages, summary.checksum);
        },
        py::arg("collection"), py::arg("store_dir"), py::arg("mode") = "words",
        py::arg("size") = 100, py::arg("workers") = 0,
        "Chunk a JSONL collection into a passage store; returns (documents, passages, checksum).");

    m.def(
        "ingest_documents",
        [](std::vector<corpus::Document> docs, const std::string& store_dir,
           const std::string& mode, std::uint32_t size, std::size_t workers) {
            corpus::VectorSource source(std::move(docs));
            auto summary =
                corpus::ingest_collection(source, make_policy(mode, size), store_dir, workers);
            return py::make_tuple(summary.documents, summary.passages, summary.checksum);
        },
        py::arg("documents"), py::arg("store_dir"), py::arg("mode") = "words",
        py::arg("size") = 100, py::arg("workers") = 0);
}

void bind_retrieval(py::module_& m) {
    py::class_<retrieval::RankedList>(m, "RankedList")
        .def(py::init([](std::string query_id,
                         std::vector<std::pair<std::string, double>> entries,
                         const std::string& producer) {
                 retrieval::RankedList list{std::move(query_id), std::move(entries),
                                            retrieval::producer_from_string(producer)};
                 retrieval::validate_ranking(list);
                 return list;
             }),
             py::arg("query_id"), py::arg("entries"), py::arg("producer") = "bm25")
        .def_readonly("query_id", &retrieval::RankedList::query_id)
        .def_readonly("entries", &retrieval::RankedList::entries)
        .def_property_readonly("producer", [](const retrieval::RankedList& r) {
            return retrieval::to_string(r.producer);
        });

    m.def("analyze", [](const std::string& text) { return retrieval::analyze(text); },
          py::arg("text"), "Index-side tokenization: lowercase alphanumeric terms.");

    py::class_<retrieval::Bm25Index>(m, "Bm25Index")
        .def_static(
            "build",
            [](const corpus::CorpusStore& store, double k1, double b) {
                return retrieval::Bm25Index::build(store, retrieval::Bm25Params{k1, b});
            },
            py::arg("store"), py::arg("k1") = 0.9, py::arg("b") = 0.4)
        .def_static(
            "load", [](const std::string& path) { return retrieval::Bm25Index::load(path); },
            py::arg("path"))
        .def("save",
             [](const retrieval::Bm25Index& index, const std::string& path) { index.save(path); },
             py::arg("path"))
        .def("search", &retrieval::Bm25Index::search, py::arg("query"), py::arg("k"),
             py::arg("query_id") = "")
        .def("df", &retrieval::Bm25Index::df, py::arg("term"))
        .def_property_readonly("passage_count", &retrieval::Bm25Index::passage_count)
        .def_property_readonly("average_length", &retrieval::Bm25Index::average_length);

    m.def(
        "recall_at_k",
        [](const retrieval::RankedList& run, std::set<std::string> relevant_doc_ids,
           std::set<std::string> relevant_passage_ids, std::size_t k) {
            retrieval::RelevanceJudgment judgment{run.query_id, std::move(relevant_doc_ids),
                                                  std::move(relevant_passage_ids)};
            return retrieval::recall_at_k(run, judgment, k);
        },
        py::arg("run"), py::arg("relevant_doc_ids"), py::arg("relevant_passage_ids"),
        py::arg("k"),
        "Fraction of judged-relevant documents with a passage in the top k.");

    m.def(
        "oracle_context",
        [](const std::string& query_id, const std::vector<std::string>& references,
           std::set<std::string> relevant_doc_ids, std::set<std::string> relevant_passage_ids,
           const corpus::CorpusStore& store, std::size_t k) {
            retrieval::RelevanceJudgment judgment{query_id, std::move(relevant_doc_ids),
                                                  std::move(relevant_passage_ids)};
            return retrieval::oracle_context(query_id, references, judgment, store, k);
        },
        py::arg("query_id"), py::arg("references"), py::arg("relevant_doc_ids"),
        py::arg("relevant_passage_ids"), py::arg("store"), py::arg("k"));
}

void bind_generation(py::module_& m) {
    py::class_<generation::PromptBundle>(m, "PromptBundle")
        .def_readonly("system", &generation::PromptBundle::system)
        .def_readonly("user", &generation::PromptBundle::user)
        .def_readonly("language", &generation::PromptBundle::language)
        .def_property_readonly(
            "variant",
            [](const generation::PromptBundle& b) { return generation::to_string(b.variant); })
        .def_property_readonly("kind", [](const generation::PromptBundle& b) {
            return generation::to_string(b.kind);
        });

    m.def("build_rag_prompt", &generation::build_rag_prompt, py::arg("question"),
          py::arg("passages"));
    m.def("build_closed_book_prompt", &generation::build_closed_book_prompt, py::arg("question"));
    m.def(
        "adapt_prompt",
        [](const generation::PromptBundle& bundle, const std::string& language,
           const std::string& variant, const std::string& translations_path, bool allow_english) {
            const auto table = generation::load_translations(translations_path);
            return generation::apply_language_variant(
                bundle, language, generation::variant_from_string(variant), table, allow_english);
        },
        py::arg("bundle"), py::arg("language"), py::arg("variant"), py::arg("translations_path"),
        py::arg("allow_english") = false,
        "Rewrite a prompt bundle for a user language using a translation table file.");
}

void bind_evaluation(py::module_& m) {
    m.def("normalize", [](const std::string& text) { return evaluation::normalize(text); },
          py::arg("text"));
    m.def("normalize_tokens",
          [](const std::string& text) { return evaluation::normalize_tokens(text); },
          py::arg("text"));
    m.def("rouge_tokens", [](const std::string& text) { return evaluation::rouge_tokens(text); },
          py::arg("text"));

    m.def("match", &evaluation::match_metric, py::arg("references"), py::arg("response"));
    m.def("exact_match", &evaluation::exact_match, py::arg("references"), py::arg("response"));
    m.def(
        "token_prf",
        [](const std::vector<std::string>& references, const std::string& response) {
            const auto prf = evaluation::token_prf(references, response);
            return py::make_tuple(prf.precision, prf.recall, prf.f1);
        },
        py::arg("references"), py::arg("response"),
        "Best (precision, recall, f1) over the references.");
    m.def("rouge_n", &evaluation::rouge_n, py::arg("references"), py::arg("response"),
          py::arg("n"));
    m.def("rouge_l", &evaluation::rouge_l, py::arg("references"), py::arg("response"));
    m.def("char3_recall", &evaluation::char3_recall, py::arg("references"), py::arg("response"));
    m.def("char3_grams", &evaluation::char3_grams, py::arg("text"));

    m.def("kendall_tau", &evaluation::kendall_tau, py::arg("xs"), py::arg("ys"),
          "Tie-corrected Kendall tau; None when either vector is constant.");
    m.def("correlate_metrics", &evaluation::correlate_metrics, py::arg("by_metric"),
          py::arg("judge_scores"));

    m.def("judge_prompt", &evaluation::judge_prompt, py::arg("question"), py::arg("answer"),
          py::arg("prediction"));
    m.def("parse_judge_verdict", &evaluation::parse_judge_verdict, py::arg("completion"));

    py::class_<evaluation::TrigramLanguageDetector>(m, "LanguageDetector")
        .def(py::init<>())
        .def("detect", &evaluation::TrigramLanguageDetector::detect, py::arg("text"))
        .def("supports", &evaluation::TrigramLanguageDetector::supports, py::arg("language"))
        .def("languages", &evaluation::TrigramLanguageDetector::languages)
        .def("add_profile", &evaluation::TrigramLanguageDetector::add_profile,
             py::arg("language"), py::arg("sample"));

    m.def(
        "correct_language_rate",
        [](const std::vector<std::string>& responses, const std::string& expected) {
            evaluation::TrigramLanguageDetector detector;
            const auto result = evaluation::correct_language_rate(responses, expected, detector);
            return py::make_tuple(result.rate, result.included);
        },
        py::arg("responses"), py::arg("expected"),
        "Returns (rate or None, judged_count); responses of 20 or fewer scalars are skipped.");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "RAG benchmarking toolkit core";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ragbench::Error>(m, "Error");

    bind_corpus(m);
    bind_retrieval(m);
    bind_generation(m);
    bind_evaluation(m);
}

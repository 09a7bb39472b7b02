#include "ragbench/retrieval/bm25.hpp"

#include "ragbench/core/binio.hpp"
#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"
#include "ragbench/retrieval/analyze.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

namespace ragbench::retrieval {

namespace {
constexpr char kMagic[4] = {'R', 'B', 'B', 'M'};
constexpr std::uint32_t kVersion = 1;
} // namespace

Bm25Index Bm25Index::build(const corpus::CorpusStore& store, const Bm25Params& params) {
    if (store.passage_count() == 0) {
        throw Error::data("EmptyCorpus", "cannot index an empty passage store");
    }
    if (!(params.k1 > 0.0) || params.b < 0.0 || params.b > 1.0) {
        throw Error::config("InvalidParams", "k1 must be > 0 and b in [0,1]");
    }

    Bm25Index index;
    index.params_ = params;
    index.ids_ = store.passage_ids();
    std::sort(index.ids_.begin(), index.ids_.end());
    std::map<std::string, std::uint32_t> ordinal_of;
    for (std::uint32_t i = 0; i < index.ids_.size(); ++i) ordinal_of[index.ids_[i]] = i;

    index.lengths_.assign(index.ids_.size(), 0);
    // term -> ordinal -> tf; the outer map keeps terms sorted so the
    // persisted image is byte-identical across rebuilds.
    std::map<std::string, std::map<std::uint32_t, std::uint32_t>> tf;
    store.for_each([&](const corpus::Passage& p) {
        const auto ordinal = ordinal_of.at(p.passage_id);
        const auto terms = analyze(p.prompt_text());
        index.lengths_[ordinal] = static_cast<std::uint32_t>(terms.size());
        for (const auto& term : terms) ++tf[term][ordinal];
    });

    std::uint64_t total_len = 0;
    for (const auto len : index.lengths_) total_len += len;
    index.avgdl_ = static_cast<double>(total_len) / static_cast<double>(index.ids_.size());

    for (auto& [term, by_ordinal] : tf) {
        auto& postings = index.postings_[term];
        postings.reserve(by_ordinal.size());
        for (const auto& [ordinal, count] : by_ordinal) {
            postings.push_back({ordinal, count});
        }
    }
    return index;
}

RankedList Bm25Index::search(const std::string& query, std::size_t k,
                             const std::string& query_id) const {
    if (k < 1) {
        throw Error::config("InvalidK", "k must be >= 1");
    }
    const auto n = static_cast<double>(ids_.size());
    std::vector<double> scores(ids_.size(), 0.0);
    std::vector<std::uint32_t> touched;

    // Contributions accumulate in query-occurrence order per passage, so a
    // straightforward per-passage re-evaluation reproduces scores exactly.
    for (const auto& term : analyze(query)) {
        const auto it = postings_.find(term);
        if (it == postings_.end()) continue;
        const auto df = static_cast<double>(it->second.size());
        const auto idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
        for (const auto& posting : it->second) {
            const auto tf = static_cast<double>(posting.tf);
            const auto len = static_cast<double>(lengths_[posting.ordinal]);
            const auto denom =
                tf + params_.k1 * (1.0 - params_.b + params_.b * len / avgdl_);
            if (scores[posting.ordinal] == 0.0) touched.push_back(posting.ordinal);
            scores[posting.ordinal] += idf * tf / denom;
        }
    }

    std::sort(touched.begin(), touched.end());
    touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
    // Ordinals ascend with passage_id, so equal scores already tie-break right.
    std::stable_sort(touched.begin(), touched.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] > scores[b];
    });
    if (touched.size() > k) touched.resize(k);

    RankedList out;
    out.query_id = query_id;
    out.producer = Producer::Bm25;
    out.entries.reserve(touched.size());
    for (const auto ordinal : touched) {
        out.entries.emplace_back(ids_[ordinal], scores[ordinal]);
    }
    return out;
}

std::uint64_t Bm25Index::df(const std::string& term) const {
    const auto it = postings_.find(term);
    return it == postings_.end() ? 0 : it->second.size();
}

void Bm25Index::save(const std::filesystem::path& path) const {
    std::string out;
    out.append(kMagic, 4);
    binio::put_u32(out, kVersion);
    binio::put_f64(out, params_.k1);
    binio::put_f64(out, params_.b);
    binio::put_u64(out, ids_.size());
    binio::put_f64(out, avgdl_);
    for (std::size_t i = 0; i < ids_.size(); ++i) {
        binio::put_str(out, ids_[i]);
        binio::put_u32(out, lengths_[i]);
    }
    binio::put_u64(out, postings_.size());
    for (const auto& [term, postings] : postings_) {
        binio::put_str(out, term);
        binio::put_u64(out, postings.size());
        for (const auto& posting : postings) {
            binio::put_u32(out, posting.ordinal);
            binio::put_u32(out, posting.tf);
        }
    }
    jsonl::write_file_atomic(path, out);
}

Bm25Index Bm25Index::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("IndexMissing", "no index file at " + path.string());
    }
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    binio::Reader reader(raw, "index file " + path.string());
    if (reader.bytes(4) != std::string(kMagic, 4) || reader.u32() != kVersion) {
        throw Error::data("IndexCorrupt", "bad index header in " + path.string());
    }
    Bm25Index index;
    index.params_.k1 = reader.f64();
    index.params_.b = reader.f64();
    const auto count = reader.u64();
    index.avgdl_ = reader.f64();
    index.ids_.reserve(count);
    index.lengths_.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        index.ids_.push_back(reader.str());
        index.lengths_.push_back(reader.u32());
    }
    const auto term_count = reader.u64();
    for (std::uint64_t t = 0; t < term_count; ++t) {
        auto term = reader.str();
        const auto posting_count = reader.u64();
        auto& postings = index.postings_[std::move(term)];
        postings.reserve(posting_count);
        for (std::uint64_t p = 0; p < posting_count; ++p) {
            const auto ordinal = reader.u32();
            const auto tf = reader.u32();
            postings.push_back({ordinal, tf});
        }
    }
    if (!reader.done()) {
        throw Error::data("IndexCorrupt", "trailing bytes in " + path.string());
    }
    return index;
}

} // namespace ragbench::retrieval

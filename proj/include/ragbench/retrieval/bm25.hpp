#pragma once

#include "ragbench/corpus/store.hpp"
#include "ragbench/retrieval/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ragbench::retrieval {

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;
};

// Inverted index over analyzed passage prompt text (title + space + body).
// Scoring: sum over query term occurrences of idf(t) * tf / (tf + k1 * (1 - b
// + b * len/avglen)) with idf(t) = ln(1 + (N - df + 0.5) / (df + 0.5)).
// Passages that match no query term are never returned.
class Bm25Index {
public:
    struct Posting {
        std::uint32_t ordinal; // into ids_, which is sorted ascending
        std::uint32_t tf;
    };

    static Bm25Index build(const corpus::CorpusStore& store, const Bm25Params& params);
    static Bm25Index load(const std::filesystem::path& path);
    void save(const std::filesystem::path& path) const;

    RankedList search(const std::string& query, std::size_t k,
                      const std::string& query_id = "") const;

    const Bm25Params& params() const { return params_; }
    std::uint64_t passage_count() const { return ids_.size(); }
    double average_length() const { return avgdl_; }
    // Document frequency of an analyzed term (0 when absent).
    std::uint64_t df(const std::string& term) const;

private:
    Bm25Params params_;
    double avgdl_ = 0.0;
    std::vector<std::string> ids_;      // ascending passage_id; ordinal order
    std::vector<std::uint32_t> lengths_; // analyzed term count per passage
    std::map<std::string, std::vector<Posting>> postings_; // term-sorted
};

} // namespace ragbench::retrieval

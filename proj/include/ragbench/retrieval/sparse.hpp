#pragma once

#include "ragbench/retrieval/types.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace ragbench::retrieval {

// Learned-sparse representation: term -> non-negative finite weight.
// Zero-weight entries are dropped at construction time.
using SparseVector = std::map<std::string, double>;

// Inverted index over sparse vectors; score is the dot product accumulated
// term by term in sorted-term order.
class SparseIndex {
public:
    // `expected_ids` (when non-empty) lists every passage that must have a
    // vector; a gap raises MissingVectors.
    static SparseIndex build(const std::map<std::string, SparseVector>& vectors,
                             const std::vector<std::string>& expected_ids = {});

    RankedList search(const SparseVector& query, std::size_t k,
                      const std::string& query_id = "") const;

    std::uint64_t passage_count() const { return ids_.size(); }

private:
    std::vector<std::string> ids_; // ascending passage_id; ordinal order
    std::map<std::string, std::vector<std::pair<std::uint32_t, double>>> inverted_;
};

// Sparse vectors file: one {id, weights: {term: weight}} record per line.
std::map<std::string, SparseVector> read_sparse_vectors(const std::filesystem::path& path);
void write_sparse_vectors(const std::filesystem::path& path,
                          const std::map<std::string, SparseVector>& vectors);

} // namespace ragbench::retrieval

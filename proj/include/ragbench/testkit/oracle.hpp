#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ragbench::testkit {

// Reference implementations for cross-checking the production code. They
// evaluate the defining formulas directly, share no code with the indexes or
// metric implementations, and are only meant for desk-scale inputs.

// Full score map (every passage, zeros included) of the BM25 formula
// idf(t)*tf/(tf + k1*(1-b+b*len/avg)) with idf = ln(1+(N-df+0.5)/(df+0.5)),
// summed per query term occurrence. Tokenization: lowercased maximal
// ASCII-alphanumeric runs.
std::map<std::string, double> brute_force_bm25(
    const std::vector<std::pair<std::string, std::string>>& corpus, // (id, text)
    double k1, double b, const std::string& query);

// Top-k sparse dot products, positive scores only, sorted by score
// descending then id ascending.
std::vector<std::pair<std::string, double>> brute_force_topk_dot(
    const std::map<std::string, std::map<std::string, double>>& vectors,
    const std::map<std::string, double>& query, std::size_t k);

// Top-k dense inner products over all rows (negatives included).
std::vector<std::pair<std::string, double>> brute_force_topk_dot(
    const std::vector<std::pair<std::string, std::vector<float>>>& rows,
    const std::vector<float>& query, std::size_t k);

// Tie-corrected Kendall tau by O(n^2) pair enumeration; nullopt when a
// vector is constant.
std::optional<double> brute_force_tau(const std::vector<double>& xs,
                                      const std::vector<double>& ys);

} // namespace ragbench::testkit

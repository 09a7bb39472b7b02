#pragma once

#include <string>
#include <vector>

namespace ragbench::evaluation {

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// 1 iff any normalized reference is a substring of the normalized response.
int match_metric(const std::vector<std::string>& references, const std::string& response);

// 1 iff the normalized response equals any normalized reference.
int exact_match(const std::vector<std::string>& references, const std::string& response);

// Token-multiset precision/recall/F1; reports the triple of the reference
// with the highest F1. Both sides empty → (1,1,1); exactly one empty → (0,0,0).
Prf token_prf(const std::vector<std::string>& references, const std::string& response);

// N-gram overlap F-measure (n in {1,2}) over ROUGE tokens, max over references.
// Strings with fewer than n tokens have no n-grams and score 0 against them.
double rouge_n(const std::vector<std::string>& references, const std::string& response, int n);

// Longest-common-subsequence F-measure over ROUGE tokens, max over references.
double rouge_l(const std::vector<std::string>& references, const std::string& response);

// Character 3-gram recall: lowercase, split on whitespace, take every
// contiguous 3-scalar gram within a token (tokens shorter than 3 scalars
// contribute themselves); grams deduplicated per side. Recall against each
// reference's gram set, max over references. A reference with no grams scores
// 1 only on a non-empty byte-identical response and is skipped otherwise;
// when every reference is skipped the result is 0.
double char3_recall(const std::vector<std::string>& references, const std::string& response);

// Gram extraction behind char3_recall, in occurrence order without dedup.
std::vector<std::string> char3_grams(const std::string& text);

} // namespace ragbench::evaluation

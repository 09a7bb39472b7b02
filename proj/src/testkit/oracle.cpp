#include "ragbench/testkit/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace ragbench::testkit {

namespace {

// Intentionally self-contained tokenizer (ASCII only): the corpora these
// oracles see in tests are ASCII by construction.
std::vector<std::string> ascii_terms(const std::string& text) {
    std::vector<std::string> terms;
    std::string current;
    for (const char c : text) {
        const auto uc = static_cast<unsigned char>(c);
        if (std::isalnum(uc)) {
            current.push_back(static_cast<char>(std::tolower(uc)));
        } else if (!current.empty()) {
            terms.push_back(current);
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(current);
    return terms;
}

} // namespace

std::map<std::string, double> brute_force_bm25(
    const std::vector<std::pair<std::string, std::string>>& corpus, double k1, double b,
    const std::string& query) {
    std::vector<std::vector<std::string>> tokenized;
    tokenized.reserve(corpus.size());
    double total_len = 0.0;
    for (const auto& [id, text] : corpus) {
        tokenized.push_back(ascii_terms(text));
        total_len += static_cast<double>(tokenized.back().size());
    }
    const auto n = static_cast<double>(corpus.size());
    const auto avg_len = corpus.empty() ? 0.0 : total_len / n;
    const auto query_terms = ascii_terms(query);

    std::map<std::string, double> scores;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        double score = 0.0;
        for (const auto& term : query_terms) {
            double tf = 0.0;
            for (const auto& token : tokenized[i]) {
                if (token == term) tf += 1.0;
            }
            if (tf == 0.0) continue;
            double df = 0.0;
            for (const auto& doc : tokenized) {
                for (const auto& token : doc) {
                    if (token == term) {
                        df += 1.0;
                        break;
                    }
                }
            }
            const auto idf = std::log(1.0 + (n - df + 0.5) / (df + 0.5));
            const auto len = static_cast<double>(tokenized[i].size());
            score += idf * tf / (tf + k1 * (1.0 - b + b * len / avg_len));
        }
        scores[corpus[i].first] = score;
    }
    return scores;
}

std::vector<std::pair<std::string, double>> brute_force_topk_dot(
    const std::map<std::string, std::map<std::string, double>>& vectors,
    const std::map<std::string, double>& query, std::size_t k) {
    std::vector<std::pair<std::string, double>> scored;
    for (const auto& [id, vector] : vectors) {
        double score = 0.0;
        for (const auto& [term, q_weight] : query) {
            const auto it = vector.find(term);
            if (it != vector.end() && q_weight != 0.0 && it->second != 0.0) {
                score += q_weight * it->second;
            }
        }
        if (score > 0.0) scored.emplace_back(id, score);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::vector<std::pair<std::string, double>> brute_force_topk_dot(
    const std::vector<std::pair<std::string, std::vector<float>>>& rows,
    const std::vector<float>& query, std::size_t k) {
    std::vector<std::pair<std::string, double>> scored;
    scored.reserve(rows.size());
    for (const auto& [id, row] : rows) {
        double score = 0.0;
        for (std::size_t d = 0; d < row.size() && d < query.size(); ++d) {
            score += static_cast<double>(query[d]) * static_cast<double>(row[d]);
        }
        scored.emplace_back(id, score);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    if (scored.size() > k) scored.resize(k);
    return scored;
}

std::optional<double> brute_force_tau(const std::vector<double>& xs,
                                      const std::vector<double>& ys) {
    const auto n = std::min(xs.size(), ys.size());
    long long concordant = 0, discordant = 0, tied_x_only = 0, tied_y_only = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto dx = xs[i] - xs[j];
            const auto dy = ys[i] - ys[j];
            if (dx == 0.0 && dy == 0.0) continue;
            if (dx == 0.0) {
                ++tied_x_only;
            } else if (dy == 0.0) {
                ++tied_y_only;
            } else if ((dx > 0.0) == (dy > 0.0)) {
                ++concordant;
            } else {
                ++discordant;
            }
        }
    }
    const auto cd = concordant + discordant;
    const auto denom_x = static_cast<double>(cd + tied_y_only); // pairs untied in x
    const auto denom_y = static_cast<double>(cd + tied_x_only); // pairs untied in y
    if (denom_x == 0.0 || denom_y == 0.0) return std::nullopt;
    return static_cast<double>(concordant - discordant) /
           (std::sqrt(denom_x) * std::sqrt(denom_y));
}

} // namespace ragbench::testkit

#include "ragbench/evaluation/metrics.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/unicode.hpp"
#include "ragbench/evaluation/normalize.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace ragbench::evaluation {

namespace {

void require_references(const std::vector<std::string>& references) {
    if (references.empty()) {
        throw Error::data("NoReferences", "metric needs at least one reference");
    }
}

std::map<std::string, std::size_t> counts(const std::vector<std::string>& tokens) {
    std::map<std::string, std::size_t> out;
    for (const auto& t : tokens) ++out[t];
    return out;
}

std::size_t overlap(const std::map<std::string, std::size_t>& a,
                    const std::map<std::string, std::size_t>& b) {
    std::size_t total = 0;
    for (const auto& [token, n] : a) {
        const auto it = b.find(token);
        if (it != b.end()) total += std::min(n, it->second);
    }
    return total;
}

double f_measure(double precision, double recall) {
    const auto denom = precision + recall;
    return denom == 0.0 ? 0.0 : 2.0 * precision * recall / denom;
}

std::vector<std::string> ngrams(const std::vector<std::string>& tokens, int n) {
    std::vector<std::string> out;
    if (tokens.size() < static_cast<std::size_t>(n)) return out;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (int j = 1; j < n; ++j) {
            gram += '\x1F'; // unit separator keeps ("ab","c") distinct from ("a","bc")
            gram += tokens[i + j];
        }
        out.push_back(std::move(gram));
    }
    return out;
}

std::size_t lcs_length(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() || b.empty()) return 0;
    std::vector<std::size_t> prev(b.size() + 1, 0), curr(b.size() + 1, 0);
    for (std::size_t i = 1; i <= a.size(); ++i) {
        for (std::size_t j = 1; j <= b.size(); ++j) {
            curr[j] = a[i - 1] == b[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], curr[j - 1]);
        }
        std::swap(prev, curr);
    }
    return prev[b.size()];
}

} // namespace

int match_metric(const std::vector<std::string>& references, const std::string& response) {
    require_references(references);
    const auto resp = normalize(response);
    for (const auto& ref : references) {
        if (resp.find(normalize(ref)) != std::string::npos) return 1;
    }
    return 0;
}

int exact_match(const std::vector<std::string>& references, const std::string& response) {
    require_references(references);
    const auto resp = normalize(response);
    for (const auto& ref : references) {
        if (resp == normalize(ref)) return 1;
    }
    return 0;
}

Prf token_prf(const std::vector<std::string>& references, const std::string& response) {
    require_references(references);
    const auto resp_tokens = normalize_tokens(response);
    const auto resp_counts = counts(resp_tokens);
    Prf best;
    bool first = true;
    for (const auto& ref : references) {
        const auto ref_tokens = normalize_tokens(ref);
        Prf current;
        if (ref_tokens.empty() && resp_tokens.empty()) {
            current = {1.0, 1.0, 1.0};
        } else if (ref_tokens.empty() || resp_tokens.empty()) {
            current = {0.0, 0.0, 0.0};
        } else {
            const auto shared = overlap(counts(ref_tokens), resp_counts);
            current.precision = static_cast<double>(shared) / resp_tokens.size();
            current.recall = static_cast<double>(shared) / ref_tokens.size();
            current.f1 = f_measure(current.precision, current.recall);
        }
        if (first || current.f1 > best.f1) {
            best = current;
            first = false;
        }
    }
    return best;
}

double rouge_n(const std::vector<std::string>& references, const std::string& response, int n) {
    require_references(references);
    if (n < 1) throw Error::config("InvalidNgram", "rouge order must be >= 1");
    const auto resp_grams = counts(ngrams(rouge_tokens(response), n));
    std::size_t resp_total = 0;
    for (const auto& [gram, c] : resp_grams) resp_total += c;
    double best = 0.0;
    for (const auto& ref : references) {
        const auto ref_counts = counts(ngrams(rouge_tokens(ref), n));
        std::size_t ref_total = 0;
        for (const auto& [gram, c] : ref_counts) ref_total += c;
        if (ref_total == 0 || resp_total == 0) continue;
        const auto shared = overlap(ref_counts, resp_grams);
        const auto precision = static_cast<double>(shared) / resp_total;
        const auto recall = static_cast<double>(shared) / ref_total;
        best = std::max(best, f_measure(precision, recall));
    }
    return best;
}

double rouge_l(const std::vector<std::string>& references, const std::string& response) {
    require_references(references);
    const auto resp_tokens = rouge_tokens(response);
    double best = 0.0;
    for (const auto& ref : references) {
        const auto ref_tokens = rouge_tokens(ref);
        if (ref_tokens.empty() || resp_tokens.empty()) continue;
        const auto lcs = lcs_length(ref_tokens, resp_tokens);
        const auto precision = static_cast<double>(lcs) / resp_tokens.size();
        const auto recall = static_cast<double>(lcs) / ref_tokens.size();
        best = std::max(best, f_measure(precision, recall));
    }
    return best;
}

std::vector<std::string> char3_grams(const std::string& text) {
    std::vector<std::string> grams;
    const auto lowered = unicode::decode(unicode::lowercase(text));
    std::vector<char32_t> token;
    auto flush = [&] {
        if (token.empty()) return;
        if (token.size() < 3) {
            grams.push_back(unicode::encode(token));
        } else {
            for (std::size_t i = 0; i + 3 <= token.size(); ++i) {
                std::string gram;
                unicode::append_utf8(gram, token[i]);
                unicode::append_utf8(gram, token[i + 1]);
                unicode::append_utf8(gram, token[i + 2]);
                grams.push_back(std::move(gram));
            }
        }
        token.clear();
    };
    for (char32_t cp : lowered) {
        if (unicode::is_space(cp)) {
            flush();
        } else {
            token.push_back(cp);
        }
    }
    flush();
    return grams;
}

double char3_recall(const std::vector<std::string>& references, const std::string& response) {
    require_references(references);
    const auto resp_list = char3_grams(response);
    const std::set<std::string> resp_grams(resp_list.begin(), resp_list.end());
    double best = 0.0;
    bool any_scored = false;
    for (const auto& ref : references) {
        const auto ref_list = char3_grams(ref);
        const std::set<std::string> ref_grams(ref_list.begin(), ref_list.end());
        if (ref_grams.empty()) {
            if (!response.empty() && response == ref) {
                best = 1.0;
                any_scored = true;
            }
            continue;
        }
        std::size_t shared = 0;
        for (const auto& g : ref_grams) shared += resp_grams.count(g);
        best = std::max(best, static_cast<double>(shared) / ref_grams.size());
        any_scored = true;
    }
    return any_scored ? best : 0.0;
}

} // namespace ragbench::evaluation

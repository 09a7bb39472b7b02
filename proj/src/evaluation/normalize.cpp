#include "ragbench/evaluation/normalize.hpp"

#include "ragbench/core/unicode.hpp"

namespace ragbench::evaluation {

namespace {

std::vector<std::string> tokens_impl(std::string_view text, bool drop_articles) {
    std::vector<std::string> tokens;
    std::string current;
    for (char32_t cp : unicode::decode(text)) {
        cp = unicode::to_lower(cp);
        if (unicode::is_space(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
        } else if (!unicode::is_punct(cp)) {
            unicode::append_utf8(current, cp);
        }
        // Punctuation is deleted in place, so "don't" becomes one token "dont".
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    if (drop_articles) {
        std::vector<std::string> kept;
        kept.reserve(tokens.size());
        for (auto& t : tokens) {
            if (t != "a" && t != "an" && t != "the") kept.push_back(std::move(t));
        }
        return kept;
    }
    return tokens;
}

} // namespace

std::vector<std::string> normalize_tokens(std::string_view text) {
    return tokens_impl(text, /*drop_articles=*/true);
}

std::vector<std::string> rouge_tokens(std::string_view text) {
    return tokens_impl(text, /*drop_articles=*/false);
}

std::string normalize(std::string_view text) {
    const auto tokens = normalize_tokens(text);
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i > 0) out += ' ';
        out += tokens[i];
    }
    return out;
}

} // namespace ragbench::evaluation

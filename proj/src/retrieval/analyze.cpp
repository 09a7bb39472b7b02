#include "ragbench/retrieval/analyze.hpp"

#include "ragbench/core/unicode.hpp"

namespace ragbench::retrieval {

namespace {

bool is_term_char(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
    }
    return !unicode::is_space(cp) && !unicode::is_punct(cp);
}

} // namespace

std::vector<std::string> analyze(std::string_view text) {
    std::vector<std::string> terms;
    std::string current;
    for (char32_t cp : unicode::decode(text)) {
        if (is_term_char(cp)) {
            unicode::append_utf8(current, unicode::to_lower(cp));
        } else if (!current.empty()) {
            terms.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) terms.push_back(std::move(current));
    return terms;
}

} // namespace ragbench::retrieval

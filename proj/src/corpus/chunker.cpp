#include "ragbench/corpus/chunker.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/unicode.hpp"

namespace ragbench::corpus {

std::string doc_id_of(std::string_view passage_id) {
    const auto pos = passage_id.rfind("::");
    if (pos == std::string_view::npos) return std::string(passage_id);
    return std::string(passage_id.substr(0, pos));
}

namespace {

Passage make_passage(const Document& doc, std::uint32_t index, std::string body) {
    Passage p;
    p.doc_id = doc.id;
    p.chunk_index = index;
    p.passage_id = make_passage_id(doc.id, index);
    p.title = doc.title;
    p.body = std::move(body);
    p.language = doc.language;
    return p;
}

std::vector<Passage> chunk_words(const Document& doc, std::uint32_t size) {
    const auto scalars = unicode::decode(doc.text);
    std::vector<std::string> words;
    std::string current;
    for (char32_t cp : scalars) {
        if (unicode::is_space(cp)) {
            if (!current.empty()) {
                words.push_back(std::move(current));
                current.clear();
            }
        } else {
            unicode::append_utf8(current, cp);
        }
    }
    if (!current.empty()) words.push_back(std::move(current));
    if (words.empty()) {
        throw Error::data("EmptyDocument", "document '" + doc.id + "' has no content");
    }

    std::vector<Passage> out;
    for (std::size_t start = 0; start < words.size(); start += size) {
        const auto end = std::min(words.size(), start + size);
        std::string body = words[start];
        for (std::size_t i = start + 1; i < end; ++i) {
            body += ' ';
            body += words[i];
        }
        out.push_back(make_passage(doc, static_cast<std::uint32_t>(out.size()), std::move(body)));
    }
    return out;
}

std::vector<Passage> chunk_characters(const Document& doc, std::uint32_t size) {
    auto scalars = unicode::decode(doc.text);
    std::size_t begin = 0;
    std::size_t end = scalars.size();
    while (begin < end && unicode::is_space(scalars[begin])) ++begin;
    while (end > begin && unicode::is_space(scalars[end - 1])) --end;
    if (begin == end) {
        throw Error::data("EmptyDocument", "document '" + doc.id + "' has no content");
    }

    std::vector<Passage> out;
    for (std::size_t start = begin; start < end; start += size) {
        const auto stop = std::min(end, start + size);
        std::string body;
        for (std::size_t i = start; i < stop; ++i) unicode::append_utf8(body, scalars[i]);
        out.push_back(make_passage(doc, static_cast<std::uint32_t>(out.size()), std::move(body)));
    }
    return out;
}

} // namespace

std::vector<Passage> chunk_document(const Document& doc, const ChunkPolicy& policy) {
    if (policy.size == 0) {
        throw Error::config("InvalidPolicy", "chunk size must be positive");
    }
    return policy.mode == ChunkMode::Words ? chunk_words(doc, policy.size)
                                           : chunk_characters(doc, policy.size);
}

} // namespace ragbench::corpus

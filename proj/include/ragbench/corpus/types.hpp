#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace ragbench::corpus {

struct Document {
    std::string id;
    std::string title;
    std::string text;
    std::string language = "en";
};

struct Passage {
    std::string passage_id; // doc_id + "::" + chunk_index
    std::string doc_id;
    std::uint32_t chunk_index = 0;
    std::string title;
    std::string body;
    std::string language = "en";

    // Text used for indexing, reranking and prompt context: title, one space, body.
    std::string prompt_text() const { return title + " " + body; }
};

enum class ChunkMode { Words, Characters };

struct ChunkPolicy {
    ChunkMode mode = ChunkMode::Words;
    std::uint32_t size = 100;
};

inline std::string make_passage_id(const std::string& doc_id, std::uint32_t chunk_index) {
    return doc_id + "::" + std::to_string(chunk_index);
}

// Recovers the document id from a passage id by splitting at the last "::".
// Ids without a separator map to themselves, so document-level inputs pass through.
std::string doc_id_of(std::string_view passage_id);

} // namespace ragbench::corpus

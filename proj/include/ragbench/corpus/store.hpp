#pragma once

#include "ragbench/corpus/types.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ragbench::corpus {

struct IngestSummary {
    std::uint64_t documents = 0;
    std::uint64_t passages = 0;
    std::string checksum; // sha256 of the passage content file
};

// Pull-based stream of documents, so ingest never needs the whole collection
// in memory.
class DocumentSource {
public:
    virtual ~DocumentSource() = default;
    virtual std::optional<Document> next() = 0;
};

// Reads a line-delimited collection file with records {id, title, text, lang?}.
class JsonlCollectionSource : public DocumentSource {
public:
    explicit JsonlCollectionSource(const std::filesystem::path& path);
    ~JsonlCollectionSource() override;
    std::optional<Document> next() override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

class VectorSource : public DocumentSource {
public:
    explicit VectorSource(std::vector<Document> docs) : docs_(std::move(docs)) {}
    std::optional<Document> next() override {
        if (pos_ >= docs_.size()) return std::nullopt;
        return docs_[pos_++];
    }

private:
    std::vector<Document> docs_;
    std::size_t pos_ = 0;
};

// Immutable on-disk passage store: a content file of length-prefixed records
// plus an offset index keyed by passage id. Safe to share across threads.
class CorpusStore {
public:
    static CorpusStore open(const std::filesystem::path& dir);

    CorpusStore(CorpusStore&&) noexcept;
    CorpusStore& operator=(CorpusStore&&) noexcept;
    CorpusStore(const CorpusStore&) = delete;
    CorpusStore& operator=(const CorpusStore&) = delete;
    ~CorpusStore();

    Passage get(std::string_view passage_id) const; // Error::data on unknown id
    bool contains(std::string_view passage_id) const;
    const std::vector<std::string>& passage_ids() const; // stored order
    void for_each(const std::function<void(const Passage&)>& fn) const; // stored order

    std::uint64_t doc_count() const;
    std::uint64_t passage_count() const;
    const std::string& checksum() const;
    ChunkPolicy policy() const;
    const std::filesystem::path& path() const;

private:
    CorpusStore();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Chunks every document and writes the store. Chunking fans out across
// `workers` threads in bounded windows; records land in (input order,
// chunk_index) order regardless of scheduling, so ingest output is
// byte-identical for any worker count.
IngestSummary ingest_collection(DocumentSource& source, const ChunkPolicy& policy,
                                const std::filesystem::path& store_dir,
                                std::size_t workers = 0);

} // namespace ragbench::corpus

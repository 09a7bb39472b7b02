#include "ragbench/corpus/store.hpp"

#include "ragbench/core/binio.hpp"
#include "ragbench/core/error.hpp"
#include "ragbench/core/hash.hpp"
#include "ragbench/core/jsonl.hpp"
#include "ragbench/core/parallel.hpp"
#include "ragbench/corpus/chunker.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <cstring>
#include <fstream>
#include <unordered_set>

namespace ragbench::corpus {

namespace {

constexpr char kMagic[4] = {'R', 'B', 'I', 'X'};
constexpr std::uint32_t kVersion = 1;
constexpr const char* kContentFile = "passages.bin";
constexpr const char* kIndexFile = "passages.idx";

using binio::get_u32;
using binio::get_u64;
using binio::put_str;
using binio::put_u32;
using binio::put_u64;

// Record layout after the leading total-length word:
// doc_id | chunk_index | title | body | language, strings length-prefixed.
std::string serialize(const Passage& p) {
    std::string payload;
    put_str(payload, p.doc_id);
    put_u32(payload, p.chunk_index);
    put_str(payload, p.title);
    put_str(payload, p.body);
    put_str(payload, p.language);
    std::string record;
    put_u32(record, static_cast<std::uint32_t>(payload.size()));
    record += payload;
    return record;
}

Passage parse_record(const char* data, std::size_t len, const std::filesystem::path& dir) {
    std::size_t pos = 0;
    auto read_str = [&](std::string& out) {
        if (pos + 4 > len) throw Error::data("StoreCorrupt", "truncated record in " + dir.string());
        const auto n = get_u32(data + pos);
        pos += 4;
        if (pos + n > len) throw Error::data("StoreCorrupt", "truncated record in " + dir.string());
        out.assign(data + pos, n);
        pos += n;
    };
    Passage p;
    read_str(p.doc_id);
    if (pos + 4 > len) throw Error::data("StoreCorrupt", "truncated record in " + dir.string());
    p.chunk_index = get_u32(data + pos);
    pos += 4;
    read_str(p.title);
    read_str(p.body);
    read_str(p.language);
    p.passage_id = make_passage_id(p.doc_id, p.chunk_index);
    return p;
}

} // namespace

// --- JSONL collection source ---------------------------------------------

struct JsonlCollectionSource::Impl {
    std::filesystem::path path;
    std::ifstream in;
    std::size_t line_no = 0;
};

JsonlCollectionSource::JsonlCollectionSource(const std::filesystem::path& path)
    : impl_(std::make_unique<Impl>()) {
    impl_->path = path;
    impl_->in.open(path, std::ios::binary);
    if (!impl_->in) {
        throw Error::data("FileUnreadable", "cannot open " + path.string());
    }
}

JsonlCollectionSource::~JsonlCollectionSource() = default;

std::optional<Document> JsonlCollectionSource::next() {
    std::string line;
    while (std::getline(impl_->in, line)) {
        ++impl_->line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto value = nlohmann::json::parse(line, nullptr, false);
        const auto where = impl_->path.string() + ":" + std::to_string(impl_->line_no);
        if (value.is_discarded() || !value.is_object()) {
            throw Error::data("MalformedJson", where + ": invalid document record");
        }
        if (!value.contains("id") || !value["id"].is_string() || !value.contains("text") ||
            !value["text"].is_string()) {
            throw Error::data("SchemaError", where + ": document needs string fields id, text");
        }
        Document doc;
        doc.id = value["id"].get<std::string>();
        doc.text = value["text"].get<std::string>();
        if (value.contains("title")) {
            if (!value["title"].is_string()) {
                throw Error::data("SchemaError", where + ": title must be a string");
            }
            doc.title = value["title"].get<std::string>();
        }
        if (value.contains("lang")) {
            if (!value["lang"].is_string()) {
                throw Error::data("SchemaError", where + ": lang must be a string");
            }
            doc.language = value["lang"].get<std::string>();
        }
        return doc;
    }
    return std::nullopt;
}

// --- ingest ----------------------------------------------------------------

IngestSummary ingest_collection(DocumentSource& source, const ChunkPolicy& policy,
                                const std::filesystem::path& store_dir, std::size_t workers) {
    if (workers == 0) workers = parallel::default_workers();
    std::filesystem::create_directories(store_dir);
    const auto content_path = store_dir / kContentFile;
    const auto index_path = store_dir / kIndexFile;
    const auto content_tmp = content_path.string() + ".tmp";

    std::ofstream out(content_tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error::data("FileUnwritable", "cannot open " + content_tmp);
    }

    Sha256 content_hash;
    std::string index_entries;
    std::unordered_set<std::string> seen_docs;
    IngestSummary summary;
    std::uint64_t offset = 0;

    // Chunking fans out per window; the single writer appends windows in
    // input order so the byte stream is independent of the worker count.
    constexpr std::size_t kWindow = 256;
    while (true) {
        std::vector<Document> window;
        window.reserve(kWindow);
        while (window.size() < kWindow) {
            auto doc = source.next();
            if (!doc) break;
            window.push_back(std::move(*doc));
        }
        if (window.empty()) break;

        for (const auto& doc : window) {
            if (!seen_docs.insert(doc.id).second) {
                throw Error::data("DuplicateDocId", "document id '" + doc.id + "' repeats");
            }
        }

        auto chunked = parallel::map_indexed(window.size(), workers, [&](std::size_t i) {
            return chunk_document(window[i], policy);
        });

        for (const auto& passages : chunked) {
            ++summary.documents;
            for (const auto& p : passages) {
                const auto record = serialize(p);
                out.write(record.data(), static_cast<std::streamsize>(record.size()));
                content_hash.update(record);
                put_u32(index_entries, static_cast<std::uint32_t>(p.passage_id.size()));
                index_entries += p.passage_id;
                put_u64(index_entries, offset);
                offset += record.size();
                ++summary.passages;
            }
        }
    }

    out.flush();
    if (!out) {
        throw Error::data("FileUnwritable", "write failed for " + content_tmp);
    }
    out.close();
    summary.checksum = content_hash.hex_digest();

    std::string index;
    index.append(kMagic, 4);
    put_u32(index, kVersion);
    index.push_back(policy.mode == ChunkMode::Words ? '\0' : '\1');
    put_u32(index, policy.size);
    put_u64(index, summary.documents);
    put_u64(index, summary.passages);
    put_u64(index, offset);
    index += summary.checksum;
    index += index_entries;

    std::filesystem::rename(content_tmp, content_path);
    jsonl::write_file_atomic(index_path, index);
    return summary;
}

// --- store -----------------------------------------------------------------

struct CorpusStore::Impl {
    std::filesystem::path dir;
    int fd = -1;
    ChunkPolicy policy;
    std::uint64_t doc_count = 0;
    std::uint64_t content_size = 0;
    std::string checksum;
    std::vector<std::string> ids;
    std::unordered_map<std::string, std::uint64_t> offsets;

    ~Impl() {
        if (fd >= 0) ::close(fd);
    }
};

CorpusStore::CorpusStore() : impl_(std::make_unique<Impl>()) {}
CorpusStore::CorpusStore(CorpusStore&&) noexcept = default;
CorpusStore& CorpusStore::operator=(CorpusStore&&) noexcept = default;
CorpusStore::~CorpusStore() = default;

CorpusStore CorpusStore::open(const std::filesystem::path& dir) {
    const auto index_path = dir / kIndexFile;
    const auto content_path = dir / kContentFile;

    std::ifstream idx(index_path, std::ios::binary);
    if (!idx) {
        throw Error::data("StoreMissing", "no passage store at " + dir.string());
    }
    std::string raw((std::istreambuf_iterator<char>(idx)), std::istreambuf_iterator<char>());
    constexpr std::size_t kHeader = 4 + 4 + 1 + 4 + 8 + 8 + 8 + 64;
    if (raw.size() < kHeader || std::memcmp(raw.data(), kMagic, 4) != 0) {
        throw Error::data("StoreCorrupt", "bad index header in " + index_path.string());
    }
    std::size_t pos = 4;
    const auto version = get_u32(raw.data() + pos);
    pos += 4;
    if (version != kVersion) {
        throw Error::data("StoreCorrupt", "unsupported store version in " + index_path.string());
    }

    CorpusStore store;
    auto& impl = *store.impl_;
    impl.dir = dir;
    impl.policy.mode = raw[pos] == '\0' ? ChunkMode::Words : ChunkMode::Characters;
    pos += 1;
    impl.policy.size = get_u32(raw.data() + pos);
    pos += 4;
    impl.doc_count = get_u64(raw.data() + pos);
    pos += 8;
    const auto passage_count = get_u64(raw.data() + pos);
    pos += 8;
    impl.content_size = get_u64(raw.data() + pos);
    pos += 8;
    impl.checksum = raw.substr(pos, 64);
    pos += 64;

    impl.ids.reserve(passage_count);
    impl.offsets.reserve(passage_count);
    for (std::uint64_t i = 0; i < passage_count; ++i) {
        if (pos + 4 > raw.size()) {
            throw Error::data("StoreCorrupt", "truncated index in " + index_path.string());
        }
        const auto id_len = get_u32(raw.data() + pos);
        pos += 4;
        if (pos + id_len + 8 > raw.size()) {
            throw Error::data("StoreCorrupt", "truncated index in " + index_path.string());
        }
        std::string id = raw.substr(pos, id_len);
        pos += id_len;
        const auto off = get_u64(raw.data() + pos);
        pos += 8;
        impl.offsets.emplace(id, off);
        impl.ids.push_back(std::move(id));
    }

    // Whole-file checksum guards against partial or mixed-up store files.
    {
        std::ifstream content(content_path, std::ios::binary);
        if (!content) {
            throw Error::data("StoreMissing", "no content file at " + content_path.string());
        }
        Sha256 hash;
        char buf[1 << 16];
        std::uint64_t total = 0;
        while (content) {
            content.read(buf, sizeof(buf));
            const auto n = content.gcount();
            if (n > 0) {
                hash.update(buf, static_cast<std::size_t>(n));
                total += static_cast<std::uint64_t>(n);
            }
        }
        if (total != impl.content_size || hash.hex_digest() != impl.checksum) {
            throw Error::data("StoreCorrupt", "checksum mismatch in " + dir.string());
        }
    }

    impl.fd = ::open(content_path.c_str(), O_RDONLY);
    if (impl.fd < 0) {
        throw Error::data("StoreMissing", "cannot open " + content_path.string());
    }
    return store;
}

Passage CorpusStore::get(std::string_view passage_id) const {
    const auto it = impl_->offsets.find(std::string(passage_id));
    if (it == impl_->offsets.end()) {
        throw Error::data("UnknownPassage", "no passage '" + std::string(passage_id) + "'");
    }
    const auto offset = it->second;
    char len_buf[4];
    if (::pread(impl_->fd, len_buf, 4, static_cast<off_t>(offset)) != 4) {
        throw Error::data("StoreCorrupt", "short read in " + impl_->dir.string());
    }
    const auto len = get_u32(len_buf);
    std::string payload(len, '\0');
    if (::pread(impl_->fd, payload.data(), len, static_cast<off_t>(offset + 4)) !=
        static_cast<ssize_t>(len)) {
        throw Error::data("StoreCorrupt", "short read in " + impl_->dir.string());
    }
    return parse_record(payload.data(), payload.size(), impl_->dir);
}

bool CorpusStore::contains(std::string_view passage_id) const {
    return impl_->offsets.count(std::string(passage_id)) > 0;
}

const std::vector<std::string>& CorpusStore::passage_ids() const { return impl_->ids; }

void CorpusStore::for_each(const std::function<void(const Passage&)>& fn) const {
    std::ifstream in(impl_->dir / kContentFile, std::ios::binary);
    if (!in) {
        throw Error::data("StoreMissing", "cannot open content file in " + impl_->dir.string());
    }
    std::uint64_t consumed = 0;
    while (consumed < impl_->content_size) {
        char len_buf[4];
        in.read(len_buf, 4);
        if (in.gcount() != 4) {
            throw Error::data("StoreCorrupt", "truncated content in " + impl_->dir.string());
        }
        const auto len = get_u32(len_buf);
        std::string payload(len, '\0');
        in.read(payload.data(), len);
        if (in.gcount() != static_cast<std::streamsize>(len)) {
            throw Error::data("StoreCorrupt", "truncated content in " + impl_->dir.string());
        }
        fn(parse_record(payload.data(), payload.size(), impl_->dir));
        consumed += 4 + len;
    }
}

std::uint64_t CorpusStore::doc_count() const { return impl_->doc_count; }
std::uint64_t CorpusStore::passage_count() const { return impl_->ids.size(); }
const std::string& CorpusStore::checksum() const { return impl_->checksum; }
ChunkPolicy CorpusStore::policy() const { return impl_->policy; }
const std::filesystem::path& CorpusStore::path() const { return impl_->dir; }

} // namespace ragbench::corpus

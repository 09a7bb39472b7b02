#include "ragbench/retrieval/dense.hpp"

#include "ragbench/core/binio.hpp"
#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

namespace ragbench::retrieval {

RankedList search_dense(const DenseMatrix& matrix, const DenseVector& query, std::size_t k,
                        const std::string& query_id) {
    if (k < 1) {
        throw Error::config("InvalidK", "k must be >= 1");
    }
    if (query.size() != matrix.dim) {
        throw Error::data("DimensionMismatch",
                          "query has " + std::to_string(query.size()) + " dims, index has " +
                              std::to_string(matrix.dim));
    }
    for (const auto v : query) {
        if (!std::isfinite(v)) {
            throw Error::data("InvalidVector", "query vector must be finite");
        }
    }

    std::vector<double> scores(matrix.ids.size(), 0.0);
    for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
        const float* row = matrix.row(i);
        double acc = 0.0;
        for (std::uint32_t d = 0; d < matrix.dim; ++d) {
            acc += static_cast<double>(query[d]) * static_cast<double>(row[d]);
        }
        scores[i] = acc;
    }

    std::vector<std::size_t> order(matrix.ids.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return matrix.ids[a] < matrix.ids[b];
    });
    if (order.size() > k) order.resize(k);

    RankedList out;
    out.query_id = query_id;
    out.producer = Producer::Dense;
    out.entries.reserve(order.size());
    for (const auto i : order) {
        out.entries.emplace_back(matrix.ids[i], scores[i]);
    }
    return out;
}

namespace {
constexpr char kMagic[4] = {'R', 'B', 'D', 'V'};
} // namespace

DenseMatrix read_dense_vectors(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("FileUnreadable", "cannot open " + path.string());
    }
    std::string raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    binio::Reader reader(raw, "dense vectors file " + path.string());
    if (reader.bytes(4) != std::string(kMagic, 4)) {
        throw Error::data("SchemaError", "bad dense vectors header in " + path.string());
    }
    DenseMatrix matrix;
    matrix.dim = reader.u32();
    const auto count = reader.u64();
    if (matrix.dim == 0) {
        throw Error::data("SchemaError", "dense vectors need a positive dimension");
    }
    matrix.ids.reserve(count);
    matrix.data.reserve(count * matrix.dim);
    for (std::uint64_t i = 0; i < count; ++i) {
        matrix.ids.push_back(reader.str());
        for (std::uint32_t d = 0; d < matrix.dim; ++d) {
            const auto v = reader.f32();
            if (!std::isfinite(v)) {
                throw Error::data("InvalidVector",
                                  "non-finite embedding for '" + matrix.ids.back() + "'");
            }
            matrix.data.push_back(v);
        }
    }
    if (!reader.done()) {
        throw Error::data("SchemaError", "trailing bytes in " + path.string());
    }
    return matrix;
}

void write_dense_vectors(const std::filesystem::path& path, const DenseMatrix& matrix) {
    if (matrix.data.size() != matrix.ids.size() * matrix.dim) {
        throw Error::data("InvalidVector", "dense matrix shape mismatch");
    }
    std::string out;
    out.append(kMagic, 4);
    binio::put_u32(out, matrix.dim);
    binio::put_u64(out, matrix.ids.size());
    for (std::size_t i = 0; i < matrix.ids.size(); ++i) {
        binio::put_str(out, matrix.ids[i]);
        const float* row = matrix.row(i);
        for (std::uint32_t d = 0; d < matrix.dim; ++d) {
            binio::put_f32(out, row[d]);
        }
    }
    jsonl::write_file_atomic(path, out);
}

} // namespace ragbench::retrieval

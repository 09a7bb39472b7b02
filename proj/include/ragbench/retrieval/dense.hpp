#pragma once

#include "ragbench/retrieval/types.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ragbench::retrieval {

using DenseVector = std::vector<float>;

// Row-major passage embedding matrix for exact inner-product search.
struct DenseMatrix {
    std::uint32_t dim = 0;
    std::vector<std::string> ids;
    std::vector<float> data; // ids.size() * dim entries

    const float* row(std::size_t i) const { return data.data() + i * dim; }
};

// Exact top-k by inner product (accumulated in double); every row is scored,
// negative scores included.
RankedList search_dense(const DenseMatrix& matrix, const DenseVector& query, std::size_t k,
                        const std::string& query_id = "");

// Dense vectors file: header {dim, count} then, per row, the id and dim raw
// little-endian 32-bit floats.
DenseMatrix read_dense_vectors(const std::filesystem::path& path);
void write_dense_vectors(const std::filesystem::path& path, const DenseMatrix& matrix);

} // namespace ragbench::retrieval

#include "ragbench/retrieval/sparse.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"

#include <algorithm>
#include <cmath>

namespace ragbench::retrieval {

SparseIndex SparseIndex::build(const std::map<std::string, SparseVector>& vectors,
                               const std::vector<std::string>& expected_ids) {
    for (const auto& id : expected_ids) {
        if (vectors.find(id) == vectors.end()) {
            throw Error::data("MissingVectors", "no sparse vector for passage '" + id + "'");
        }
    }

    SparseIndex index;
    index.ids_.reserve(vectors.size());
    for (const auto& [id, vector] : vectors) {
        const auto ordinal = static_cast<std::uint32_t>(index.ids_.size());
        index.ids_.push_back(id); // map iteration is ascending, so ordinals are too
        for (const auto& [term, weight] : vector) {
            if (!std::isfinite(weight) || weight < 0.0) {
                throw Error::data("InvalidVector",
                                  "weight for term '" + term + "' of '" + id +
                                      "' must be finite and non-negative");
            }
            if (weight == 0.0) continue;
            index.inverted_[term].emplace_back(ordinal, weight);
        }
    }
    return index;
}

RankedList SparseIndex::search(const SparseVector& query, std::size_t k,
                               const std::string& query_id) const {
    if (k < 1) {
        throw Error::config("InvalidK", "k must be >= 1");
    }
    std::vector<double> scores(ids_.size(), 0.0);
    std::vector<std::uint32_t> touched;
    for (const auto& [term, q_weight] : query) {
        if (!std::isfinite(q_weight) || q_weight < 0.0) {
            throw Error::data("InvalidVector", "query weight for term '" + term +
                                                   "' must be finite and non-negative");
        }
        if (q_weight == 0.0) continue;
        const auto it = inverted_.find(term);
        if (it == inverted_.end()) continue;
        for (const auto& [ordinal, d_weight] : it->second) {
            if (scores[ordinal] == 0.0) touched.push_back(ordinal);
            scores[ordinal] += q_weight * d_weight;
        }
    }

    std::sort(touched.begin(), touched.end());
    std::stable_sort(touched.begin(), touched.end(), [&](std::uint32_t a, std::uint32_t b) {
        return scores[a] > scores[b];
    });
    if (touched.size() > k) touched.resize(k);

    RankedList out;
    out.query_id = query_id;
    out.producer = Producer::Sparse;
    out.entries.reserve(touched.size());
    for (const auto ordinal : touched) {
        out.entries.emplace_back(ids_[ordinal], scores[ordinal]);
    }
    return out;
}

std::map<std::string, SparseVector> read_sparse_vectors(const std::filesystem::path& path) {
    std::map<std::string, SparseVector> out;
    jsonl::for_each(path, [&](std::size_t line_no, const nlohmann::json& record) {
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (!record.is_object() || !record.contains("id") || !record["id"].is_string() ||
            !record.contains("weights") || !record["weights"].is_object()) {
            throw Error::data("SchemaError", where + ": sparse record needs id and weights");
        }
        auto id = record["id"].get<std::string>();
        if (out.count(id)) {
            throw Error::data("DuplicateVector", where + ": repeated id '" + id + "'");
        }
        SparseVector vector;
        for (const auto& [term, weight] : record["weights"].items()) {
            if (!weight.is_number()) {
                throw Error::data("SchemaError", where + ": weight for '" + term +
                                                     "' must be a number");
            }
            const auto w = weight.get<double>();
            if (w != 0.0) vector[term] = w;
        }
        out.emplace(std::move(id), std::move(vector));
    });
    return out;
}

void write_sparse_vectors(const std::filesystem::path& path,
                          const std::map<std::string, SparseVector>& vectors) {
    std::vector<nlohmann::json> records;
    records.reserve(vectors.size());
    for (const auto& [id, vector] : vectors) {
        nlohmann::json weights = nlohmann::json::object();
        for (const auto& [term, weight] : vector) weights[term] = weight;
        records.push_back({{"id", id}, {"weights", std::move(weights)}});
    }
    jsonl::write_all(path, records);
}

} // namespace ragbench::retrieval

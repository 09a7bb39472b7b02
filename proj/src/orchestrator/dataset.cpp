#include "ragbench/orchestrator/dataset.hpp"

#include "ragbench/core/error.hpp"
#include "ragbench/core/jsonl.hpp"

#include <unordered_set>

namespace ragbench::orchestrator {

std::vector<QAExample> load_dataset(const std::filesystem::path& path) {
    std::vector<QAExample> examples;
    std::unordered_set<std::string> seen;

    jsonl::for_each(path, [&](std::size_t line_no, const nlohmann::json& record) {
        const auto where = path.string() + ":" + std::to_string(line_no);
        if (!record.is_object()) {
            throw Error::data("SchemaError", where + ": example must be an object");
        }
        QAExample example;
        if (!record.contains("id") || !record["id"].is_string()) {
            throw Error::data("SchemaError", where + ": missing string field 'id'");
        }
        example.example_id = record["id"].get<std::string>();
        if (!record.contains("question") || !record["question"].is_string() ||
            record["question"].get<std::string>().empty()) {
            throw Error::data("SchemaError", where + ": missing non-empty 'question'");
        }
        example.question = record["question"].get<std::string>();
        if (!record.contains("references") || !record["references"].is_array() ||
            record["references"].empty()) {
            throw Error::data("SchemaError", where + ": 'references' must be a non-empty array");
        }
        for (const auto& reference : record["references"]) {
            if (!reference.is_string()) {
                throw Error::data("SchemaError", where + ": references must be strings");
            }
            example.references.push_back(reference.get<std::string>());
        }
        auto read_ids = [&](const char* key, std::set<std::string>& out) {
            if (!record.contains(key)) return;
            if (!record[key].is_array()) {
                throw Error::data("SchemaError",
                                  where + ": '" + key + "' must be an array of ids");
            }
            for (const auto& id : record[key]) {
                if (!id.is_string()) {
                    throw Error::data("SchemaError", where + ": '" + key +
                                                         "' entries must be strings");
                }
                out.insert(id.get<std::string>());
            }
        };
        read_ids("relevant_doc_ids", example.relevant_doc_ids);
        read_ids("relevant_passage_ids", example.relevant_passage_ids);
        if (record.contains("lang")) {
            if (!record["lang"].is_string()) {
                throw Error::data("SchemaError", where + ": 'lang' must be a string");
            }
            example.language = record["lang"].get<std::string>();
        }
        if (!seen.insert(example.example_id).second) {
            throw Error::data("DuplicateExampleId",
                              where + ": id '" + example.example_id + "' repeats");
        }
        examples.push_back(std::move(example));
    });
    return examples;
}

void write_dataset(const std::filesystem::path& path, const std::vector<QAExample>& examples) {
    std::vector<nlohmann::json> records;
    records.reserve(examples.size());
    for (const auto& example : examples) {
        nlohmann::json record = {{"id", example.example_id},
                                 {"question", example.question},
                                 {"references", example.references}};
        if (!example.relevant_doc_ids.empty()) {
            record["relevant_doc_ids"] = example.relevant_doc_ids;
        }
        if (!example.relevant_passage_ids.empty()) {
            record["relevant_passage_ids"] = example.relevant_passage_ids;
        }
        if (example.language != "en") record["lang"] = example.language;
        records.push_back(std::move(record));
    }
    jsonl::write_all(path, records);
}

} // namespace ragbench::orchestrator

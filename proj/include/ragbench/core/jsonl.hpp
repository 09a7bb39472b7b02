#pragma once

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace ragbench::jsonl {

using json = nlohmann::json;

// Parses every non-empty line of `path` as a JSON object and invokes
// `fn(line_number, value)` with 1-based line numbers. Throws Error::data
// on unreadable files or malformed JSON.
void for_each(const std::filesystem::path& path,
              const std::function<void(std::size_t, const json&)>& fn);

// Same contract over an in-memory buffer; `what` names it in errors.
void for_each_line(const std::string& content, const std::string& what,
                   const std::function<void(std::size_t, const json&)>& fn);

// One record per line, as a string (the building block behind write_all).
std::string to_lines(const std::vector<json>& records);

// Loads all records at once; convenience wrapper over for_each.
std::vector<json> read_all(const std::filesystem::path& path);

// Writes one record per line. The file is staged under a temporary name and
// renamed into place so readers never observe a partial file.
void write_all(const std::filesystem::path& path, const std::vector<json>& records);

// Atomic full-file write for non-JSONL payloads (reports, manifests).
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

} // namespace ragbench::jsonl

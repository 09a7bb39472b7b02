#include "ragbench/core/jsonl.hpp"

#include "ragbench/core/error.hpp"

#include <fstream>
#include <sstream>

namespace ragbench::jsonl {

namespace {

void for_each_stream(std::istream& in, const std::string& what,
                     const std::function<void(std::size_t, const json&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        json value = json::parse(line, nullptr, false);
        if (value.is_discarded()) {
            throw Error::data("MalformedJson",
                              what + ":" + std::to_string(line_no) + ": invalid JSON");
        }
        fn(line_no, value);
    }
}

} // namespace

void for_each(const std::filesystem::path& path,
              const std::function<void(std::size_t, const json&)>& fn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error::data("FileUnreadable", "cannot open " + path.string());
    }
    for_each_stream(in, path.string(), fn);
}

void for_each_line(const std::string& content, const std::string& what,
                   const std::function<void(std::size_t, const json&)>& fn) {
    std::istringstream in(content);
    for_each_stream(in, what, fn);
}

std::string to_lines(const std::vector<json>& records) {
    std::ostringstream buf;
    for (const auto& record : records) {
        buf << record.dump() << '\n';
    }
    return buf.str();
}

std::vector<json> read_all(const std::filesystem::path& path) {
    std::vector<json> out;
    for_each(path, [&](std::size_t, const json& value) { out.push_back(value); });
    return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto parent = path.parent_path();
    if (!parent.empty()) std::filesystem::create_directories(parent);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error::data("FileUnwritable", "cannot open " + tmp.string());
        }
        out << content;
        out.flush();
        if (!out) {
            throw Error::data("FileUnwritable", "write failed for " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

void write_all(const std::filesystem::path& path, const std::vector<json>& records) {
    write_file_atomic(path, to_lines(records));
}

} // namespace ragbench::jsonl

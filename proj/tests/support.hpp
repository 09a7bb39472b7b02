#pragma once

#include "ragbench/core/error.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace ragbench::tests {

// Repository root, injected by ctest so tests find checked-in fixtures.
inline std::filesystem::path source_dir() {
    if (const char* dir = std::getenv("RAGBENCH_SOURCE_DIR")) return dir;
    return std::filesystem::current_path();
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

inline std::string golden(const std::string& name) {
    return read_file(source_dir() / "tests" / "golden" / name);
}

// Self-deleting scratch directory; every test gets a fresh one.
class TempDir {
public:
    TempDir() {
        auto base = std::filesystem::temp_directory_path() / "ragbench-test-XXXXXX";
        std::string templ = base.string();
        if (!mkdtemp(templ.data())) throw std::runtime_error("mkdtemp failed");
        path_ = templ;
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

// Runs `fn` and reports the Error code it threw ("" when it did not throw).
template <typename Fn>
std::string error_code_of(Fn&& fn) {
    try {
        fn();
    } catch (const ragbench::Error& e) {
        return e.code();
    }
    return "";
}

// Deterministic word soup for synthetic corpora and queries.
inline std::string random_words(std::mt19937& rng, std::size_t count, std::size_t vocab) {
    std::uniform_int_distribution<std::size_t> pick(0, vocab - 1);
    std::string out;
    for (std::size_t i = 0; i < count; ++i) {
        if (i) out += ' ';
        out += "w" + std::to_string(pick(rng));
    }
    return out;
}

} // namespace ragbench::tests

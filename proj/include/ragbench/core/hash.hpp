#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>

namespace ragbench {

// SHA-256 as a lowercase hex string.
std::string sha256_hex(std::string_view data);

// Incremental SHA-256 for content that is produced in pieces.
class Sha256 {
public:
    Sha256();
    ~Sha256();
    Sha256(const Sha256&) = delete;
    Sha256& operator=(const Sha256&) = delete;

    void update(const void* data, std::size_t len);
    void update(std::string_view data) { update(data.data(), data.size()); }
    // Finalizes and returns the lowercase hex digest; the hasher may not be reused.
    std::string hex_digest();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace ragbench

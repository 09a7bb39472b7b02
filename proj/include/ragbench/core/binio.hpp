#pragma once

#include "ragbench/core/error.hpp"

#include <cstdint>
#include <cstring>
#include <string>

namespace ragbench::binio {

// Little-endian primitives for the on-disk index formats.

inline void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

inline void put_f64(std::string& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u64(out, bits);
}

inline void put_f32(std::string& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, sizeof(bits));
    put_u32(out, bits);
}

inline void put_str(std::string& out, const std::string& s) {
    put_u32(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

inline std::uint32_t get_u32(const char* p) {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

inline std::uint64_t get_u64(const char* p) {
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
}

inline double get_f64(const char* p) {
    const auto bits = get_u64(p);
    double v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

inline float get_f32(const char* p) {
    const auto bits = get_u32(p);
    float v;
    std::memcpy(&v, &bits, sizeof(v));
    return v;
}

// Bounds-checked sequential reader over an in-memory buffer; throws
// Error::data("Truncated") naming `context` on underrun.
class Reader {
public:
    Reader(const std::string& data, std::string context)
        : data_(data.data()), size_(data.size()), context_(std::move(context)) {}

    std::uint32_t u32() { return get_u32(take(4)); }
    std::uint64_t u64() { return get_u64(take(8)); }
    double f64() { return get_f64(take(8)); }
    float f32() { return get_f32(take(4)); }
    std::string str() {
        const auto len = u32();
        return std::string(take(len), len);
    }
    std::string bytes(std::size_t n) { return std::string(take(n), n); }
    bool done() const { return pos_ == size_; }

private:
    const char* take(std::size_t n) {
        if (pos_ + n > size_) {
            throw Error::data("Truncated", "unexpected end of " + context_);
        }
        const char* p = data_ + pos_;
        pos_ += n;
        return p;
    }

    const char* data_;
    std::size_t size_;
    std::string context_;
    std::size_t pos_ = 0;
};

} // namespace ragbench::binio

#include "ragbench/core/unicode.hpp"

namespace ragbench::unicode {

std::vector<char32_t> decode(std::string_view utf8) {
    std::vector<char32_t> out;
    out.reserve(utf8.size());
    std::size_t i = 0;
    const auto n = utf8.size();
    while (i < n) {
        const auto b0 = static_cast<unsigned char>(utf8[i]);
        char32_t cp = 0xFFFD;
        std::size_t len = 1;
        if (b0 < 0x80) {
            cp = b0;
        } else if ((b0 & 0xE0) == 0xC0 && i + 1 < n) {
            const auto b1 = static_cast<unsigned char>(utf8[i + 1]);
            if ((b1 & 0xC0) == 0x80) {
                cp = (char32_t(b0 & 0x1F) << 6) | (b1 & 0x3F);
                len = cp >= 0x80 ? 2 : 1;
                if (cp < 0x80) cp = 0xFFFD; // overlong
            }
        } else if ((b0 & 0xF0) == 0xE0 && i + 2 < n) {
            const auto b1 = static_cast<unsigned char>(utf8[i + 1]);
            const auto b2 = static_cast<unsigned char>(utf8[i + 2]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80) {
                const char32_t v = (char32_t(b0 & 0x0F) << 12) | (char32_t(b1 & 0x3F) << 6) | (b2 & 0x3F);
                if (v >= 0x800 && !(v >= 0xD800 && v <= 0xDFFF)) {
                    cp = v;
                    len = 3;
                }
            }
        } else if ((b0 & 0xF8) == 0xF0 && i + 3 < n) {
            const auto b1 = static_cast<unsigned char>(utf8[i + 1]);
            const auto b2 = static_cast<unsigned char>(utf8[i + 2]);
            const auto b3 = static_cast<unsigned char>(utf8[i + 3]);
            if ((b1 & 0xC0) == 0x80 && (b2 & 0xC0) == 0x80 && (b3 & 0xC0) == 0x80) {
                const char32_t v = (char32_t(b0 & 0x07) << 18) | (char32_t(b1 & 0x3F) << 12) |
                                   (char32_t(b2 & 0x3F) << 6) | (b3 & 0x3F);
                if (v >= 0x10000 && v <= 0x10FFFF) {
                    cp = v;
                    len = 4;
                }
            }
        }
        out.push_back(cp);
        i += len;
    }
    return out;
}

void append_utf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

std::string encode(const std::vector<char32_t>& scalars) {
    std::string out;
    out.reserve(scalars.size());
    for (char32_t cp : scalars) append_utf8(out, cp);
    return out;
}

bool is_space(char32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D:
        case 0x20: case 0x85: case 0xA0:
        case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F:
        case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punct(char32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    if (cp >= 0xA1 && cp <= 0xBF) return true;          // Latin-1 punctuation and signs
    if (cp == 0xD7 || cp == 0xF7) return true;
    if (cp >= 0x2000 && cp <= 0x206F) return !is_space(cp); // general punctuation
    if (cp >= 0x3001 && cp <= 0x303F) return true;      // CJK symbols and punctuation
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;      // fullwidth forms
    if (cp >= 0xFF1A && cp <= 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF40) return true;
    if (cp >= 0xFF5B && cp <= 0xFF65) return true;
    return false;
}

char32_t to_lower(char32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20; // Latin-1 supplement
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;             // Cyrillic
    if (cp == 0x401) return 0x451;                                // Ё
    return cp;
}

std::string lowercase(std::string_view utf8) {
    auto scalars = decode(utf8);
    for (auto& cp : scalars) cp = to_lower(cp);
    return encode(scalars);
}

std::size_t scalar_count(std::string_view utf8) {
    return decode(utf8).size();
}

} // namespace ragbench::unicode

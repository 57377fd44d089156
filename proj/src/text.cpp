#include "histdoc/text.hpp"

namespace histdoc {

std::vector<std::string> utf8_symbols(std::string_view text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        const unsigned char lead = static_cast<unsigned char>(text[i]);
        std::size_t len = 1;
        if ((lead & 0x80) == 0x00) len = 1;
        else if ((lead & 0xE0) == 0xC0) len = 2;
        else if ((lead & 0xF0) == 0xE0) len = 3;
        else if ((lead & 0xF8) == 0xF0) len = 4;
        if (i + len > text.size()) len = 1;
        // Continuation bytes must match, else fall back to a single byte.
        for (std::size_t k = 1; k < len; ++k) {
            if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
                len = 1;
                break;
            }
        }
        out.emplace_back(text.substr(i, len));
        i += len;
    }
    return out;
}

std::string strip_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case ' ': case '\t': case '\n': case '\r': case '\f': case '\v':
                break;
            default:
                out.push_back(c);
        }
    }
    return out;
}

}  // namespace histdoc

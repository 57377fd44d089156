#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace histdoc {

/// Splits UTF-8 text into one string per code point. Malformed bytes
/// are passed through as single-byte symbols.
std::vector<std::string> utf8_symbols(std::string_view text);

/// Removes ASCII whitespace (space, tab, CR, LF, FF, VT).
std::string strip_whitespace(std::string_view text);

}  // namespace histdoc

#pragma once

#include <string>
#include <string_view>

namespace sociohub {

/// Decodes UTF-8 into scalar values; malformed sequences become U+FFFD.
std::u32string decode_utf8(std::string_view text);

std::string encode_utf8(std::u32string_view text);

/// Simple (one-to-one) Unicode case folding.
char32_t simple_case_fold(char32_t c) noexcept;

std::u32string case_fold(std::u32string_view text);

/// Strips leading and trailing ASCII whitespace.
std::string_view trim(std::string_view text) noexcept;

/// trim, decode, case_fold: the form strings take before any comparison.
std::u32string fold_for_matching(std::string_view text);

}  // namespace sociohub

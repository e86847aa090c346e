#pragma once

// Text format for pc presentations:
//
//   group NAME {
//     gens a, b, c;
//     order a = 5;
//     pow a^5 = c;
//     comm [b, a] = c^-1;   # key is [later, earlier]
//   }
//
// word := "1" | term ("*" term)*,  term := IDENT ("^" SINT)?

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "b0/pcgroup.hpp"

namespace b0 {

// Structurally validated presentation; consistency is not checked.
PcPresentation parse_pc(std::string_view text);

// Emits text that parse_pc maps back to an identical presentation.
std::string emit_pc(const PcPresentation &pres);

// Symbolic exponents (e.g. p) may be supplied; an exponent token may then
// be an integer, a symbol, or either with a leading minus sign.
using ExponentSymbols = std::map<std::string, std::int64_t>;

Word parse_word(std::string_view text, const std::vector<std::string> &names,
                const ExponentSymbols &symbols = {});

std::string format_word(const Word &w, const std::vector<std::string> &names);

} // namespace b0

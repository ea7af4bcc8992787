#pragma once

#include <string_view>

#include "compsemi/apsymbol.hpp"
#include "compsemi/operators.hpp"

namespace compsemi {

/// Grammar (whitespace ignored between tokens):
///
///   combination := term (('+' | '-') term)*
///   term        := number ['*' product] | product
///   product     := 'I' | letter+
///   letter      := 'C' ['*'] '(' s ')'
///
/// s is a decimal or p/q in (0, 1]; juxtaposed letters compose, leftmost
/// applied last. Identity terms and bare numbers are collected into c0.
/// Throws ParseError carrying the 0-based character offset.
Combination parse_combination(std::string_view text);

/// A single product of letters (no scalars, no sums).
Word parse_word(std::string_view text);

}  // namespace compsemi

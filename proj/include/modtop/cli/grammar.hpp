#pragma once

#include <string_view>

#include "modtop/exponent.hpp"
#include "modtop/function.hpp"
#include "modtop/sequence.hpp"

namespace modtop::cli {

/// Exponents: `table:2,3,2.5`, `affine:1,0` (p_n = n), `affine:2,2@0,1`
/// (p(x) = 2x + 2 on (0,1)), `identity`, `reciprocal:0,0.5`,
/// `piecewise:0,0.5,1;2,3`, `custom:log1p` (1 + log(n+1)) and
/// `custom:sqrt1p` (1 + sqrt(n)). Throws ConfigError.
ExponentSpec parse_exponent(std::string_view text);

/// `runs=[(1..2,0.5),(4..4,-1)];tail=zero` or `...;tail=const:0.5`.
SequenceVec parse_sequence(std::string_view text);

/// `pieces=[(0..0.5,1),(0.5..1,2)]`, or `catalog=v` optionally followed by
/// `;cells=<sequence>`.
PiecewiseFunction parse_function(std::string_view text);

}  // namespace modtop::cli

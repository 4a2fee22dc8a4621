#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace causal {

/// Exact probabilities. Every table and formula value is an mpq_class kept in
/// canonical (reduced) form.
using Rational = mpq_class;

/// Parses "3/10", "1", "0" or "-5". Throws FormatError.
Rational parse_rational(std::string_view text);

/// Renders as "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& value);

}  // namespace causal

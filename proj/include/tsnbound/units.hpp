#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "tsnbound/errors.hpp"

namespace tsnb {

// Quantity dimensions. Internal canonical units are seconds, bits and
// bits per second; every parsed value is normalized on ingest.
enum class Dimension { Time, Data, Rate };

const char* dimension_name(Dimension dim);

// Multiplier that converts one unit of `unit` into the canonical unit of
// its dimension, e.g. "us" -> 1e-6, "B" -> 8, "Mbps" -> 1e6.
// Returns nullopt for unknown unit names.
std::optional<double> unit_factor(Dimension dim, std::string_view unit);

// True when `unit` belongs to any dimension (used for mismatch diagnostics).
bool known_unit_any_dimension(std::string_view unit);

// Rescales a decimal numeral by 10^pow10 (and optionally by 8) with a single
// correctly-rounded decimal-to-binary conversion, so "10" scaled by -6 equals
// the literal 10e-6 exactly.
double scale_decimal(const std::string& numeral, int pow10, bool times8);

// Parses "10us", "4Mbps", "0.5" (with a default unit), ... into canonical
// units. `default_unit` applies when the text carries no unit suffix; a bare
// number with no default in scope is an error, as are unknown units and
// units of the wrong dimension.
double parse_quantity(std::string_view text, Dimension dim,
                      std::optional<std::string> default_unit = std::nullopt);

// Same for a value that arrived as a plain number.
double parse_quantity(double value, Dimension dim,
                      std::optional<std::string> default_unit = std::nullopt);

// Shortest decimal representation that parses back to exactly `v`.
std::string format_double(double v);

// The numeral that re-normalizes to exactly `value` when read in `unit`,
// or nullopt when no shortest representation does.
std::optional<std::string> exact_in_unit(double value, Dimension dim, const std::string& unit);

// Renders a canonical value with a unit suffix, preferring `pretty_unit`
// when the scaled numeral re-normalizes exactly, falling back to the
// canonical unit otherwise. The result always re-parses to exactly `value`.
std::string format_quantity(double value, Dimension dim, const std::string& pretty_unit);

} // namespace tsnb

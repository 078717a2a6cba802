#include "tsnbound/units.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace tsnb {

namespace {

struct UnitEntry {
    const char* name;
    int pow10;
    bool times8;
};

constexpr std::array<UnitEntry, 4> kTimeUnits{
    {{"s", 0, false}, {"ms", -3, false}, {"us", -6, false}, {"ns", -9, false}}};
constexpr std::array<UnitEntry, 6> kDataUnits{{{"b", 0, false},
                                               {"B", 0, true},
                                               {"kB", 3, true},
                                               {"MB", 6, true},
                                               {"kb", 3, false},
                                               {"Mb", 6, false}}};
constexpr std::array<UnitEntry, 4> kRateUnits{
    {{"bps", 0, false}, {"kbps", 3, false}, {"Mbps", 6, false}, {"Gbps", 9, false}}};

template <std::size_t N>
const UnitEntry* lookup(const std::array<UnitEntry, N>& table, std::string_view unit) {
    for (const auto& e : table) {
        if (unit == e.name) return &e;
    }
    return nullptr;
}

const UnitEntry* find_unit(Dimension dim, std::string_view unit) {
    switch (dim) {
    case Dimension::Time: return lookup(kTimeUnits, unit);
    case Dimension::Data: return lookup(kDataUnits, unit);
    case Dimension::Rate: return lookup(kRateUnits, unit);
    }
    return nullptr;
}

const char* canonical_unit(Dimension dim) {
    switch (dim) {
    case Dimension::Time: return "s";
    case Dimension::Data: return "b";
    case Dimension::Rate: return "bps";
    }
    return "";
}

const UnitEntry& resolve_unit(Dimension dim, std::string_view unit_text,
                              const std::optional<std::string>& default_unit) {
    std::string_view unit = unit_text;
    if (unit.empty()) {
        if (!default_unit) {
            throw ParseError("bare number with no " + std::string(dimension_name(dim)) +
                             " unit in scope");
        }
        unit = *default_unit;
    }
    if (const UnitEntry* entry = find_unit(dim, unit)) return *entry;
    if (known_unit_any_dimension(unit)) {
        throw ParseError("unit '" + std::string(unit) + "' is not a " + dimension_name(dim) +
                         " unit");
    }
    throw ParseError("unknown unit '" + std::string(unit) + "'");
}

double checked(double value) {
    if (!std::isfinite(value) || value < 0.0) {
        throw ParseError("quantity value must be finite and >= 0");
    }
    return value;
}

} // namespace

const char* dimension_name(Dimension dim) {
    switch (dim) {
    case Dimension::Time: return "time";
    case Dimension::Data: return "data";
    case Dimension::Rate: return "rate";
    }
    return "?";
}

std::optional<double> unit_factor(Dimension dim, std::string_view unit) {
    const UnitEntry* entry = find_unit(dim, unit);
    if (!entry) return std::nullopt;
    return std::pow(10.0, entry->pow10) * (entry->times8 ? 8.0 : 1.0);
}

bool known_unit_any_dimension(std::string_view unit) {
    return find_unit(Dimension::Time, unit) || find_unit(Dimension::Data, unit) ||
           find_unit(Dimension::Rate, unit);
}

double scale_decimal(const std::string& numeral, int pow10, bool times8) {
    std::size_t epos = numeral.find_first_of("eE");
    std::string mantissa = epos == std::string::npos ? numeral : numeral.substr(0, epos);
    long exponent = 0;
    if (epos != std::string::npos) {
        exponent = std::strtol(numeral.c_str() + epos + 1, nullptr, 10);
    }
    std::string adjusted = mantissa + "e" + std::to_string(exponent + pow10);
    double value = std::strtod(adjusted.c_str(), nullptr);
    return times8 ? value * 8.0 : value; // the factor 8 is a power of two: exact
}

double parse_quantity(std::string_view text, Dimension dim,
                      std::optional<std::string> default_unit) {
    std::string s(text);
    std::size_t begin = s.find_first_not_of(" \t");
    std::size_t end = s.find_last_not_of(" \t");
    if (begin == std::string::npos) throw ParseError("empty quantity");
    s = s.substr(begin, end - begin + 1);

    const char* cstr = s.c_str();
    char* rest = nullptr;
    double value = std::strtod(cstr, &rest);
    if (rest == cstr) throw ParseError("malformed quantity '" + s + "'");
    std::string numeral(cstr, static_cast<std::size_t>(rest - cstr));
    if (numeral.find_first_of("xX") != std::string::npos) {
        throw ParseError("malformed quantity '" + s + "'");
    }
    checked(value);

    const UnitEntry& unit = resolve_unit(dim, rest, default_unit);
    return checked(scale_decimal(numeral, unit.pow10, unit.times8));
}

double parse_quantity(double value, Dimension dim, std::optional<std::string> default_unit) {
    checked(value);
    const UnitEntry& unit = resolve_unit(dim, {}, default_unit);
    return checked(scale_decimal(format_double(value), unit.pow10, unit.times8));
}

std::string format_double(double v) {
    char buf[40];
    if (v == std::floor(v) && std::fabs(v) < 1e15) {
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::optional<std::string> exact_in_unit(double value, Dimension dim, const std::string& unit) {
    const UnitEntry* entry = find_unit(dim, unit);
    if (!entry) return std::nullopt;
    double factor = *unit_factor(dim, unit);
    std::string numeral = format_double(value / factor);
    if (scale_decimal(numeral, entry->pow10, entry->times8) == value) return numeral;
    return std::nullopt;
}

std::string format_quantity(double value, Dimension dim, const std::string& pretty_unit) {
    if (auto numeral = exact_in_unit(value, dim, pretty_unit)) return *numeral + pretty_unit;
    return format_double(value) + canonical_unit(dim);
}

} // namespace tsnb

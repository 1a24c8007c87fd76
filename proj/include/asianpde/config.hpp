#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asianpde/strategy.hpp"

namespace asianpde {

/// Parsed `[section]` / `key = value` text. `#` and `;` start comments.
struct ConfigDocument {
    std::map<std::string, std::map<std::string, std::string>> sections;

    bool has(const std::string& section, const std::string& key) const;
    const std::string& get(const std::string& section, const std::string& key) const;
};

/// Throws ConfigError with the offending line number on malformed input.
ConfigDocument parse_config(std::string_view text);
ConfigDocument load_config(const std::string& path);

double parse_real(std::string_view text, std::string_view what);
std::size_t parse_count(std::string_view text, std::string_view what);
std::uint64_t parse_u64(std::string_view text, std::string_view what);
/// Comma- or whitespace-separated reals.
std::vector<double> parse_real_list(std::string_view text, std::string_view what);
/// "(t0, v0) (t1, v1) ..." with optional commas between pairs.
std::vector<PiecewiseConstant::Piece> parse_pieces(std::string_view text, std::string_view what);

/// Builds the market from [market], [dividend_density] and
/// [weighting_density]; absent densities default to 0 and 1.
MarketSpec market_from_config(const ConfigDocument& doc);

}  // namespace asianpde

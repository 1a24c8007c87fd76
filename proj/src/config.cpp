#include "asianpde/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "asianpde/errors.hpp"

namespace asianpde {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::string_view what, std::string_view text, std::string_view expected) {
    throw ConfigError(std::string(what) + ": cannot parse '" + std::string(text) + "' as " +
                      std::string(expected));
}

}  // namespace

bool ConfigDocument::has(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    return it != sections.end() && it->second.count(key) > 0;
}

const std::string& ConfigDocument::get(const std::string& section, const std::string& key) const {
    auto it = sections.find(section);
    if (it == sections.end() || !it->second.count(key))
        throw ConfigError("missing key '" + key + "' in section [" + section + "]");
    return it->second.at(key);
}

ConfigDocument parse_config(std::string_view text) {
    ConfigDocument doc;
    std::string current;
    std::size_t line_no = 0;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        std::string_view line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (const auto c = line.find_first_of("#;"); c != std::string_view::npos) line = line.substr(0, c);
        line = trim(line);
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(line_no);
        if (line.front() == '[') {
            if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
            current = std::string(trim(line.substr(1, line.size() - 2)));
            if (current.empty()) throw ConfigError(where + ": empty section name");
            if (doc.sections.count(current)) throw ConfigError(where + ": duplicate section [" + current + "]");
            doc.sections[current];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) throw ConfigError(where + ": expected 'key = value'");
        if (current.empty()) throw ConfigError(where + ": key outside of any section");
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty()) throw ConfigError(where + ": empty key");
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (!doc.sections[current].emplace(key, value).second)
            throw ConfigError(where + ": duplicate key '" + key + "'");
    }
    return doc;
}

ConfigDocument load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

double parse_real(std::string_view text, std::string_view what) {
    text = trim(text);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v))
        fail(what, text, "a finite real");
    return v;
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
    text = trim(text);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail(what, text, "an unsigned integer");
    return v;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
    return static_cast<std::size_t>(parse_u64(text, what));
}

std::vector<double> parse_real_list(std::string_view text, std::string_view what) {
    std::vector<double> out;
    std::string token;
    auto flush = [&] {
        if (!token.empty()) out.push_back(parse_real(token, what));
        token.clear();
    };
    for (char ch : text) {
        if (ch == ',' || std::isspace(static_cast<unsigned char>(ch)))
            flush();
        else
            token.push_back(ch);
    }
    flush();
    if (out.empty()) fail(what, text, "a list of reals");
    return out;
}

std::vector<PiecewiseConstant::Piece> parse_pieces(std::string_view text, std::string_view what) {
    std::vector<PiecewiseConstant::Piece> out;
    std::string_view rest = trim(text);
    while (!rest.empty()) {
        if (rest.front() == ',') {
            rest = trim(rest.substr(1));
            continue;
        }
        if (rest.front() != '(') fail(what, text, "a list of (t_start, value) pairs");
        const auto close = rest.find(')');
        if (close == std::string_view::npos) fail(what, text, "a list of (t_start, value) pairs");
        const auto vals = parse_real_list(rest.substr(1, close - 1), what);
        if (vals.size() != 2) fail(what, text, "a list of (t_start, value) pairs");
        out.push_back({vals[0], vals[1]});
        rest = trim(rest.substr(close + 1));
    }
    if (out.empty()) fail(what, text, "a nonempty list of pairs");
    return out;
}

MarketSpec market_from_config(const ConfigDocument& doc) {
    static const std::map<std::string, std::vector<std::string>> allowed = {
        {"market", {"rate", "maturity", "volatility", "strike"}},
        {"dividend_density", {"pieces"}},
        {"weighting_density", {"pieces"}},
    };
    for (const auto& [section, keys] : allowed) {
        auto it = doc.sections.find(section);
        if (it == doc.sections.end()) continue;
        for (const auto& [key, value] : it->second)
            if (std::find(keys.begin(), keys.end(), key) == keys.end())
                throw ConfigError("unknown key '" + key + "' in section [" + section + "]");
    }
    if (!doc.sections.count("market")) throw ConfigError("missing section [market]");

    MarketSpec m;
    m.rate = parse_real(doc.get("market", "rate"), "market.rate");
    m.maturity = parse_real(doc.get("market", "maturity"), "market.maturity");
    m.volatility = doc.has("market", "volatility")
                       ? parse_real(doc.get("market", "volatility"), "market.volatility")
                       : 1.0;
    m.strike = doc.has("market", "strike") ? parse_real(doc.get("market", "strike"), "market.strike") : 0.0;
    if (!(m.maturity > 0.0)) throw ConfigError("market.maturity must be > 0");

    m.dividend_density = doc.has("dividend_density", "pieces")
                             ? PiecewiseConstant(parse_pieces(doc.get("dividend_density", "pieces"),
                                                              "dividend_density.pieces"),
                                                 m.maturity)
                             : PiecewiseConstant::constant(0.0, m.maturity);
    m.weighting_density = doc.has("weighting_density", "pieces")
                              ? PiecewiseConstant(parse_pieces(doc.get("weighting_density", "pieces"),
                                                               "weighting_density.pieces"),
                                                  m.maturity)
                              : PiecewiseConstant::constant(1.0, m.maturity);
    m.validate();
    return m;
}

}  // namespace asianpde

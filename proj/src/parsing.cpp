#include "fwals/parsing.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include "fwals/errors.hpp"

namespace fwals {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (;;) {
        const std::size_t pos = text.find(sep, start);
        if (pos == std::string::npos) {
            parts.push_back(trim(text.substr(start)));
            return parts;
        }
        parts.push_back(trim(text.substr(start, pos - start)));
        start = pos + 1;
    }
}

double parse_double(const std::string& token, const std::string& what) {
    const std::string t = trim(token);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(value))
        throw ConfigError(what + ": expected a finite number, got '" + token + "'");
    return value;
}

int parse_int(const std::string& token, const std::string& what) {
    const std::string t = trim(token);
    int value = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError(what + ": expected an integer, got '" + token + "'");
    return value;
}

}  // namespace

FocusSpec parse_focus(const std::string& text) {
    const std::size_t colon = text.find(':');
    const std::string kind = trim(colon == std::string::npos ? text : text.substr(0, colon));
    const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);

    if (kind == "linear") {
        if (trim(rest).empty())
            throw ConfigError("focus: 'linear' needs coefficients, e.g. linear:1,1,1");
        const auto tokens = split(rest, ',');
        Eigen::VectorXd coeffs(static_cast<Eigen::Index>(tokens.size()));
        for (std::size_t i = 0; i < tokens.size(); ++i)
            coeffs[static_cast<Eigen::Index>(i)] = parse_double(tokens[i], "focus coefficient");
        return LinearFocus{std::move(coeffs)};
    }
    if (kind == "irf") {
        const std::string arg = trim(rest);
        std::string value = arg;
        if (arg.rfind("h=", 0) == 0) value = arg.substr(2);
        if (trim(value).empty())
            throw ConfigError("focus: 'irf' needs a horizon, e.g. irf:h=5");
        const int h = parse_int(value, "focus horizon");
        if (h < 0) throw ConfigError("focus: horizon must be >= 0");
        return IrfFocus{h};
    }
    throw ConfigError("focus: unknown kind '" + kind + "' (expected linear:... or irf:h=...)");
}

std::vector<double> parse_grid(const std::string& text) {
    const std::string t = trim(text);
    if (t.empty()) throw ConfigError("grid: empty specification");

    const std::size_t colons = static_cast<std::size_t>(std::count(t.begin(), t.end(), ':'));
    if (colons == 2) {
        const auto parts = split(t, ':');
        const double start = parse_double(parts[0], "grid start");
        const double end = parse_double(parts[1], "grid end");
        const int count = parse_int(parts[2], "grid count");
        if (count < 1) throw ConfigError("grid: count must be >= 1");
        if (count == 1) {
            if (start != end)
                throw ConfigError("grid: count 1 requires start == end");
            return {start};
        }
        std::vector<double> grid(static_cast<std::size_t>(count));
        const double step = (end - start) / (count - 1);
        for (int i = 0; i < count; ++i) grid[static_cast<std::size_t>(i)] = start + step * i;
        grid.back() = end;  // land exactly on the endpoint
        return grid;
    }
    if (colons != 0) throw ConfigError("grid: expected start:end:count, a comma list, or one value");

    std::vector<double> grid;
    for (const auto& token : split(t, ','))
        grid.push_back(parse_double(token, "grid value"));
    return grid;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> values;
    for (const auto& token : split(text, ','))
        values.push_back(parse_int(token, "list value"));
    if (values.empty()) throw ConfigError("list: empty");
    return values;
}

ColumnRef parse_column(const std::string& token) {
    const std::string t = trim(token);
    if (t.empty()) throw ConfigError("column: empty selector");
    const bool all_digits = std::all_of(t.begin(), t.end(),
                                        [](unsigned char c) { return std::isdigit(c); });
    if (all_digits) return ColumnRef{parse_int(t, "column index")};
    return ColumnRef{t};
}

std::vector<ColumnRef> parse_columns(const std::string& text) {
    std::vector<ColumnRef> cols;
    for (const auto& token : split(text, ','))
        cols.push_back(parse_column(token));
    if (cols.empty()) throw ConfigError("columns: empty selection");
    return cols;
}

}  // namespace fwals

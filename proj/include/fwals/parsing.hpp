#pragma once

#include <string>
#include <vector>

#include "fwals/dataset.hpp"
#include "fwals/focus.hpp"

namespace fwals {

// Focus grammar:  "linear:c1,c2,..."  |  "irf:h=<int>"
// Linear coefficient count is validated against k1 at use time.
FocusSpec parse_focus(const std::string& text);

// Grid grammar: "start:end:count" (inclusive linear spacing), a comma list
// "a,b,c", or a single value.
std::vector<double> parse_grid(const std::string& text);
std::vector<int> parse_int_list(const std::string& text);

// Column selectors: comma list of names or 0-based indices (all-digit tokens
// are treated as indices).
std::vector<ColumnRef> parse_columns(const std::string& text);
ColumnRef parse_column(const std::string& token);

}  // namespace fwals

#pragma once

#include <stdexcept>
#include <string>

namespace fwals {

// Error taxonomy, mirrored by the CLI exit codes:
//   ConfigError  -> exit 2 (bad flags, grammar, capacity requests)
//   DataError    -> exit 3 (unreadable/ill-formed input, rank problems)
//   NumericError -> exit 4 (singularities, failed factorizations, domain)
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct NumericError : std::runtime_error {
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace fwals

#pragma once

#include <stdexcept>
#include <string>

namespace contactnet {

// Configuration problems: bad run-config values, infeasible budgets,
// missing inputs detected before any simulation starts.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file. Carries file and 1-based line number.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& file, std::size_t line, const std::string& what)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + what),
          file_(file),
          line_(line) {}

    const std::string& file() const { return file_; }
    std::size_t line() const { return line_; }

private:
    std::string file_;
    std::size_t line_;
};

} // namespace contactnet

#ifndef BVSMC_ERRORS_HPP_
#define BVSMC_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace bvsmc {

// Numerical breakdown in the linear-algebra core (singular system,
// degenerate fit, Bayes-factor domain error). Samplers catch this and
// reject the offending move.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

// Invalid run configuration or precondition violation.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// Malformed input file; carries 1-based line / column where known.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line = 0, long column = 0)
      : std::runtime_error(format(what, line, column)), line_(line), column_(column) {}
  long line() const { return line_; }
  long column() const { return column_; }

 private:
  static std::string format(const std::string& what, long line, long column) {
    std::string s = what;
    if (line > 0) s += " (line " + std::to_string(line);
    if (line > 0 && column > 0) s += ", column " + std::to_string(column);
    if (line > 0) s += ")";
    return s;
  }
  long line_;
  long column_;
};

}  // namespace bvsmc

#endif  // BVSMC_ERRORS_HPP_

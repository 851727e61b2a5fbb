#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace mcover {

/// Malformed or out-of-range input: graph files, PDDL text, edge lists.
/// Carries an optional source location for file-based input.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}

  InputError(const std::string& source, std::size_t line, std::size_t column,
             const std::string& what)
      : std::runtime_error(format(source, line, column, what)),
        source_(source),
        line_(line),
        column_(column) {}

  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& source, std::size_t line,
                            std::size_t column, const std::string& what) {
    std::string out = source.empty() ? std::string("<input>") : source;
    out += ':' + std::to_string(line);
    if (column != 0) out += ':' + std::to_string(column);
    return out + ": " + what;
  }

  std::string source_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// Raised when a covering cannot be rendered as a program (e.g. missing symbol).
class EncodingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The planning problem has no solution (e.g. a goal fluent is unreachable).
class UnsolvableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// External solver misbehaved: could not be started, crashed, or printed
/// output that is neither a model nor an UNSAT verdict.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller broke a documented precondition.
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace mcover

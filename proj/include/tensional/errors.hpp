#ifndef TENSIONAL_ERRORS_HPP
#define TENSIONAL_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace tensional {

// Root of the library's error hierarchy. Everything thrown on purpose
// derives from this, so callers can catch one type at the boundary.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class ParseErrorKind { Syntax, UnknownVariable, UnknownFunction };

// Parse failure with a 1-based byte offset into the source string.
struct ParseError : Error {
  ParseError(ParseErrorKind k, std::size_t byte_offset, const std::string& msg,
             std::string expected_tokens = {})
      : Error("parse error at offset " + std::to_string(byte_offset) + ": " + msg +
              (expected_tokens.empty() ? "" : " (expected " + expected_tokens + ")")),
        kind(k),
        offset(byte_offset),
        expected(std::move(expected_tokens)) {}

  ParseErrorKind kind;
  std::size_t offset;  // 1-based
  std::string expected;
};

struct DomainError : Error {
  using Error::Error;
};

struct OrderTooLarge : Error {
  using Error::Error;
};

struct IndexTooDeep : Error {
  using Error::Error;
};

struct ExpansionTooLarge : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  NotPositiveDefinite(const std::string& msg, double eigenvalue)
      : Error(msg), offending_eigenvalue(eigenvalue) {}
  double offending_eigenvalue;
};

struct ImageOutOfChart : Error {
  using Error::Error;
};

struct ModeUnsupported : Error {
  using Error::Error;
};

struct RankDeficient : Error {
  using Error::Error;
};

struct NotIsometric : Error {
  using Error::Error;
};

struct NotNormal : Error {
  using Error::Error;
};

struct NotHypersurface : Error {
  using Error::Error;
};

struct NotArclength : Error {
  using Error::Error;
};

struct DegenerateFrame : Error {
  using Error::Error;
};

struct UnknownCase : Error {
  using Error::Error;
};

// Config loading reports every problem it found, not just the first.
struct ValidationError : Error {
  explicit ValidationError(std::vector<std::string> problems)
      : Error(join(problems)), issues(std::move(problems)) {}
  explicit ValidationError(const std::string& problem)
      : Error(problem), issues{problem} {}

  std::vector<std::string> issues;

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string s = "config validation failed:";
    for (const auto& p : v) {
      s += "\n  ";
      s += p;
    }
    return s;
  }
};

}  // namespace tensional

#endif

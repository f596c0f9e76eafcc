#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace knotlab {

/// Base of every domain error. `code()` is the stable wire code.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &what, std::string detail = {})
      : std::runtime_error(what), code_(std::move(code)), detail_(std::move(detail)) {}

  const std::string &code() const noexcept { return code_; }
  const std::string &detail() const noexcept { return detail_; }

private:
  std::string code_;
  std::string detail_;
};

class SyntaxError : public Error {
public:
  SyntaxError(const std::string &what, std::size_t offset)
      : Error("SYNTAX", what + " at byte " + std::to_string(offset), "offset=" + std::to_string(offset)),
        offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

private:
  std::size_t offset_;
};

class StructureError : public Error {
public:
  explicit StructureError(const std::string &what, std::string detail = {})
      : Error("STRUCTURE", what, std::move(detail)) {}
};

class NotFound : public Error {
public:
  explicit NotFound(const std::string &what, std::string detail = {})
      : Error("NOT_FOUND", what, std::move(detail)) {}
};

class InvalidSite : public Error {
public:
  explicit InvalidSite(const std::string &what, std::string detail = {})
      : Error("INVALID_SITE", what, std::move(detail)) {}
};

/// Raised when a computation would exceed a configured size cap
/// (bracket crossing budget, session move budget).
class BudgetExceeded : public Error {
public:
  explicit BudgetExceeded(const std::string &what, std::string detail = {})
      : Error("BUDGET", what, std::move(detail)) {}
};

/// Well-formed input that names something meaningless for the diagram
/// (bad component id, partial coloring, malformed payload).
class BadRequest : public Error {
public:
  explicit BadRequest(const std::string &what, std::string detail = {})
      : Error("BAD_REQUEST", what, std::move(detail)) {}
};

} // namespace knotlab

#pragma once

// Reading JSON job files with line/column diagnostics.

#include <optional>
#include <stdexcept>
#include <string>

#include "tdpkit/polynomial.hpp"
#include "tdpkit/serialize.hpp"

namespace tdp::cli {

using io::Json;
using Pointer = Json::json_pointer;

/// An input problem located in the source file.
class InputError : public std::runtime_error {
 public:
  InputError(const std::string& where, const std::string& what) : std::runtime_error(where + ": " + what) {}
};

/// Line and column (both 1-based) of the value at `ptr` in `text`, or of the
/// closest enclosing value that exists.
std::pair<std::size_t, std::size_t> locate(const std::string& text, const Pointer& ptr);

class Document {
 public:
  /// Reads and parses the file; InputError with the parser's position on
  /// malformed JSON.
  static Document load(const std::string& path);
  static Document from_text(std::string text, std::string path);

  const Json& root() const { return root_; }
  [[noreturn]] void error(const Pointer& at, const std::string& what) const;
  [[noreturn]] void error_at_column(const Pointer& at, std::size_t extra_columns, const std::string& what) const;

  const Json& require(const Pointer& at, const std::string& key) const;
  const Json* optional(const Pointer& at, const std::string& key) const;
  void require_object(const Pointer& at) const;

  /// Field from the "field" key and the --field flag; they must agree when
  /// both are present. Q if neither is.
  Field field(const std::optional<std::string>& flag) const;

  /// Scalars may be strings in exactfield syntax or JSON integers.
  FieldElement scalar(const Pointer& at, const Field& f) const;
  std::vector<FieldElement> scalars(const Pointer& at, const Field& f) const;
  ExactMatrix matrix(const Pointer& at, const Field& f) const;
  long long integer(const Pointer& at) const;
  std::size_t count(const Pointer& at) const;
  Polynomial polynomial(const Pointer& at) const;

 private:
  std::string text_, path_;
  Json root_;
};

}  // namespace tdp::cli

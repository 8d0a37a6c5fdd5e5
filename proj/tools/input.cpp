#include "input.hpp"

#include <fstream>
#include <sstream>

namespace tdp::cli {

namespace {

std::size_t skip_ws(const std::string& t, std::size_t i) {
  while (i < t.size() && (t[i] == ' ' || t[i] == '\t' || t[i] == '\n' || t[i] == '\r')) ++i;
  return i;
}

std::size_t skip_string(const std::string& t, std::size_t i) {
  for (++i; i < t.size(); ++i) {
    if (t[i] == '\\') {
      ++i;
    } else if (t[i] == '"') {
      return i + 1;
    }
  }
  return i;
}

std::size_t skip_value(const std::string& t, std::size_t i) {
  if (i >= t.size()) return i;
  if (t[i] == '"') return skip_string(t, i);
  if (t[i] == '{' || t[i] == '[') {
    int depth = 0;
    while (i < t.size()) {
      char c = t[i];
      if (c == '"') {
        i = skip_string(t, i);
        continue;
      }
      if (c == '{' || c == '[') ++depth;
      if (c == '}' || c == ']') {
        if (--depth == 0) return i + 1;
      }
      ++i;
    }
    return i;
  }
  while (i < t.size() && t[i] != ',' && t[i] != ']' && t[i] != '}' && t[i] != ' ' && t[i] != '\n' && t[i] != '\t' &&
         t[i] != '\r')
    ++i;
  return i;
}

std::vector<std::string> tokens_of(Pointer p) {
  std::vector<std::string> out;
  while (!p.empty()) {
    out.insert(out.begin(), p.back());
    p.pop_back();
  }
  return out;
}

// Offset of the value at the path, or of the deepest container on it.
std::size_t locate_offset(const std::string& t, const std::vector<std::string>& tokens) {
  std::size_t i = skip_ws(t, 0);
  for (const auto& token : tokens) {
    std::size_t start = i;
    if (i >= t.size()) return start;
    if (t[i] == '{') {
      i = skip_ws(t, i + 1);
      bool found = false;
      while (i < t.size() && t[i] == '"') {
        std::size_t end = skip_string(t, i);
        std::string key = t.substr(i + 1, end - i - 2);
        i = skip_ws(t, end);
        if (i < t.size() && t[i] == ':') i = skip_ws(t, i + 1);
        if (key == token) {
          found = true;
          break;
        }
        i = skip_ws(t, skip_value(t, i));
        if (i < t.size() && t[i] == ',') i = skip_ws(t, i + 1);
      }
      if (!found) return start;
    } else if (t[i] == '[') {
      if (token.empty() || token.find_first_not_of("0123456789") != std::string::npos || token.size() > 9)
        return start;
      std::size_t index = std::stoul(token);
      i = skip_ws(t, i + 1);
      for (std::size_t k = 0; k < index; ++k) {
        if (i >= t.size() || t[i] == ']') return start;
        i = skip_ws(t, skip_value(t, i));
        if (i < t.size() && t[i] == ',') i = skip_ws(t, i + 1);
      }
      if (i >= t.size() || t[i] == ']') return start;
    } else {
      return start;
    }
  }
  return i;
}

std::pair<std::size_t, std::size_t> line_col(const std::string& t, std::size_t offset) {
  std::size_t line = 1, col = 1;
  for (std::size_t k = 0; k < offset && k < t.size(); ++k) {
    if (t[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace

std::pair<std::size_t, std::size_t> locate(const std::string& text, const Pointer& ptr) {
  return line_col(text, locate_offset(text, tokens_of(ptr)));
}

Document Document::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str(), path);
}

Document Document::from_text(std::string text, std::string path) {
  Document d;
  d.text_ = std::move(text);
  d.path_ = std::move(path);
  try {
    d.root_ = Json::parse(d.text_);
  } catch (const Json::parse_error& e) {
    auto [line, col] = line_col(d.text_, e.byte == 0 ? 0 : e.byte - 1);
    std::string msg = e.what();
    auto pos = msg.find("syntax error");
    throw InputError(d.path_ + ":" + std::to_string(line) + ":" + std::to_string(col),
                     pos == std::string::npos ? msg : msg.substr(pos));
  }
  return d;
}

void Document::error(const Pointer& at, const std::string& what) const { error_at_column(at, 0, what); }

void Document::error_at_column(const Pointer& at, std::size_t extra_columns, const std::string& what) const {
  auto [line, col] = locate(text_, at);
  std::string where = at.empty() ? "document" : at.to_string();
  throw InputError(path_ + ":" + std::to_string(line) + ":" + std::to_string(col + extra_columns),
                   what + " (at " + where + ")");
}

void Document::require_object(const Pointer& at) const {
  if (!root_.contains(at) || !root_.at(at).is_object()) error(at, "expected an object");
}

const Json& Document::require(const Pointer& at, const std::string& key) const {
  require_object(at);
  const Json& obj = root_.at(at);
  auto it = obj.find(key);
  if (it == obj.end()) error(at, "missing required key \"" + key + "\"");
  return *it;
}

const Json* Document::optional(const Pointer& at, const std::string& key) const {
  require_object(at);
  const Json& obj = root_.at(at);
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

Field Document::field(const std::optional<std::string>& flag) const {
  std::optional<Field> from_file, from_flag;
  if (const Json* j = optional(Pointer(), "field")) {
    try {
      from_file = io::field_from_json(*j);
    } catch (const Error& e) {
      error(Pointer("/field"), e.what());
    }
  }
  if (flag) {
    try {
      from_flag = io::field_from_flag(*flag);
    } catch (const Error& e) {
      throw InputError("--field", e.what());
    }
  }
  if (from_file && from_flag && *from_file != *from_flag)
    error(Pointer("/field"), "field " + from_file->name() + " disagrees with --field " + from_flag->name());
  if (from_file) return *from_file;
  if (from_flag) return *from_flag;
  return Field::rational();
}

FieldElement Document::scalar(const Pointer& at, const Field& f) const {
  if (!root_.contains(at)) error(at, "missing value");
  const Json& j = root_.at(at);
  if (j.is_number_integer()) return f.from_int(j.get<long long>());
  if (!j.is_string()) error(at, "scalars must be strings or integers");
  try {
    return parse_scalar(j.get<std::string>(), f);
  } catch (const Error& e) {
    error(at, e.what());
  }
}

std::vector<FieldElement> Document::scalars(const Pointer& at, const Field& f) const {
  if (!root_.contains(at) || !root_.at(at).is_array()) error(at, "expected an array of scalars");
  std::vector<FieldElement> out;
  for (std::size_t i = 0; i < root_.at(at).size(); ++i) out.push_back(scalar(at / i, f));
  return out;
}

ExactMatrix Document::matrix(const Pointer& at, const Field& f) const {
  if (!root_.contains(at) || !root_.at(at).is_array()) error(at, "expected a matrix (array of rows)");
  const Json& rows = root_.at(at);
  std::size_t n = rows.size();
  if (n == 0) error(at, "matrix must have at least one row");
  std::vector<Vector> out;
  for (std::size_t r = 0; r < n; ++r) {
    Vector row = scalars(at / r, f);
    if (row.size() != n) error(at / r, "row has " + std::to_string(row.size()) + " entries, expected " +
                                           std::to_string(n) + " for a square matrix");
    out.push_back(std::move(row));
  }
  return ExactMatrix::from_rows(f, out);
}

long long Document::integer(const Pointer& at) const {
  if (!root_.contains(at) || !root_.at(at).is_number_integer()) error(at, "expected an integer");
  return root_.at(at).get<long long>();
}

std::size_t Document::count(const Pointer& at) const {
  long long v = integer(at);
  if (v < 0) error(at, "expected a nonnegative integer");
  return static_cast<std::size_t>(v);
}

Polynomial Document::polynomial(const Pointer& at) const {
  if (!root_.contains(at) || !root_.at(at).is_string()) error(at, "expected a polynomial string");
  try {
    return Polynomial::parse(root_.at(at).get<std::string>());
  } catch (const Error& e) {
    std::string msg = e.what();
    std::size_t column = 1;
    if (auto pos = msg.find("at column "); pos != std::string::npos) column = std::stoul(msg.substr(pos + 10));
    error_at_column(at, column, msg);
  }
}

}  // namespace tdp::cli

#pragma once

// JSON helpers for scenario files and reports: location-aware readers and a
// writer that prints every double with 17 significant digits.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ncprob/errors.hpp"
#include "ncprob/linalg.hpp"

namespace ncprob::cli {

using Json = nlohmann::ordered_json;

// A scenario that fails to parse or validate. `where` is a JSON pointer into
// the scenario document.
class ScenarioError : public Error {
 public:
  ScenarioError(std::string where, const std::string& what)
      : Error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline std::string escape_pointer_token(const std::string& token) {
  std::string out;
  for (char c : token) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

// Read-only view of a JSON node that remembers its location.
class Node {
 public:
  Node(const Json& j, std::string where) : j_(&j), where_(std::move(where)) {}

  const Json& json() const { return *j_; }
  const std::string& where() const { return where_; }
  [[noreturn]] void fail(const std::string& what) const { throw ScenarioError(where_.empty() ? "/" : where_, what); }

  bool is_object() const { return j_->is_object(); }
  bool is_array() const { return j_->is_array(); }
  bool is_string() const { return j_->is_string(); }
  bool is_number() const { return j_->is_number(); }
  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) const {
    if (!j_->is_object()) fail("expected an object");
    auto it = j_->find(key);
    if (it == j_->end()) fail("missing required field '" + key + "'");
    return {*it, where_ + "/" + escape_pointer_token(key)};
  }

  Node at(std::size_t i) const {
    if (!j_->is_array()) fail("expected an array");
    if (i >= j_->size()) fail("index " + std::to_string(i) + " out of range");
    return {(*j_)[i], where_ + "/" + std::to_string(i)};
  }

  std::size_t size() const {
    if (!j_->is_array() && !j_->is_object()) fail("expected an array or object");
    return j_->size();
  }

  std::vector<std::string> keys() const {
    if (!j_->is_object()) fail("expected an object");
    std::vector<std::string> out;
    for (auto it = j_->begin(); it != j_->end(); ++it) out.push_back(it.key());
    return out;
  }

  // Rejects keys outside `allowed`, catching typos early.
  void allow_only(std::initializer_list<const char*> allowed) const {
    for (const auto& k : keys()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) at(k).fail("unknown field '" + k + "'");
    }
  }

  std::string as_string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  double as_double() const {
    if (!j_->is_number()) fail("expected a number");
    const double v = j_->get<double>();
    if (!std::isfinite(v)) fail("expected a finite number");
    return v;
  }

  long long as_int() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long long>();
  }

  long long as_int(long long lo, long long hi) const {
    const long long v = as_int();
    if (v < lo || v > hi) fail("expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  bool as_bool() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }

  std::vector<double> as_doubles() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < size_of_array(); ++i) out.push_back(at(i).as_double());
    return out;
  }

  std::vector<std::string> as_strings() const {
    std::vector<std::string> out;
    for (std::size_t i = 0; i < size_of_array(); ++i) out.push_back(at(i).as_string());
    return out;
  }

  // A number or a two-element [re, im] array.
  Complex as_complex() const {
    if (j_->is_number()) return {as_double(), 0.0};
    if (!j_->is_array() || j_->size() != 2) fail("expected a number or a [re, im] pair");
    return {at(0).as_double(), at(1).as_double()};
  }

  Vector as_vector() const {
    const auto n = size_of_array();
    if (n == 0) fail("expected a non-empty array");
    Vector v(static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) v(static_cast<Eigen::Index>(i)) = at(i).as_complex();
    return v;
  }

  // Row-major nested arrays; square unless `square` is false.
  Matrix as_matrix(bool square = true) const {
    const auto rows = size_of_array();
    if (rows == 0) fail("expected a non-empty matrix");
    const auto cols = at(0).size_of_array();
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
      const Node row = at(r);
      if (row.size_of_array() != cols) row.fail("ragged matrix row");
      for (std::size_t c = 0; c < cols; ++c) {
        m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = row.at(c).as_complex();
      }
    }
    if (square && rows != cols) fail("expected a square matrix");
    return m;
  }

  RealMatrix as_real_matrix() const {
    const Matrix m = as_matrix(false);
    if (m.imag().cwiseAbs().maxCoeff() != 0.0) fail("expected real entries");
    return m.real();
  }

 private:
  std::size_t size_of_array() const {
    if (!j_->is_array()) fail("expected an array");
    return j_->size();
  }

  const Json* j_;
  std::string where_;
};

// Report encoding. Complex numbers are [re, im] pairs.
inline Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(to_json(v(i)));
  return out;
}

inline Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(Vector(m.row(r).transpose())));
  return out;
}

inline Json to_json(const RealVector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline Json to_json(const RealMatrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(to_json(RealVector(m.row(r).transpose())));
  return out;
}

namespace detail {

inline void format_double(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string s(buf);
  // Keep the value a JSON float so integers and doubles stay distinguishable.
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  out += s;
}

inline void dump_into(std::string& out, const Json& j, int indent, int depth) {
  const auto newline = [&](int d) {
    if (indent < 0) return;
    out += '\n';
    out.append(static_cast<std::size_t>(indent * d), ' ');
  };
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ',';
        first = false;
        newline(depth + 1);
        out += Json(it.key()).dump();
        out += indent < 0 ? ":" : ": ";
        dump_into(out, it.value(), indent, depth + 1);
      }
      newline(depth);
      out += '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // Arrays of scalars stay on one line.
      const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
      out += '[';
      bool first = true;
      for (const auto& e : j) {
        if (!first) out += flat && indent >= 0 ? ", " : ",";
        first = false;
        if (!flat) newline(depth + 1);
        dump_into(out, e, indent, depth + 1);
      }
      if (!flat) newline(depth);
      out += ']';
      return;
    }
    case Json::value_t::number_float:
      format_double(out, j.get<double>());
      return;
    default:
      out += j.dump();
  }
}

}  // namespace detail

// Serializes with 17 significant digits per double so that parsing the text
// reproduces every value bit for bit.
inline std::string dump(const Json& j, int indent = 2) {
  std::string out;
  detail::dump_into(out, j, indent, 0);
  return out;
}

}  // namespace ncprob::cli

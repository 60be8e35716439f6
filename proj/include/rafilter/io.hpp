#pragma once

// JSON interchange.  An algebra is
//
//   {"signature": [{"name": "add", "arity": 2}, {"name": "zero", "arity": 0}],
//    "size": 2,
//    "ops": {"add": [[0, 1], [1, 0]], "zero": 0}}
//
// with each table nested to depth = arity.  An embedding is
//
//   {"domain": <algebra or path>, "factors": [<algebra or path>, ...],
//    "maps": [[f_0(0), f_0(1), ...], ...]}
//
// where paths are resolved relative to the embedding file.

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rafilter/algebra.hpp"
#include "rafilter/config.hpp"
#include "rafilter/embedding.hpp"
#include "rafilter/error.hpp"

namespace rafilter {

namespace detail {

inline nlohmann::json nest_table(std::vector<element> const& table, std::size_t n,
                                 std::size_t arity, std::size_t offset, std::size_t stride) {
  if (arity == 0) {
    return table[offset];
  }
  nlohmann::json out = nlohmann::json::array();
  std::size_t inner = stride / n;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(nest_table(table, n, arity - 1, offset + i * inner, inner));
  }
  return out;
}

// Out-of-range entries go to `problems` when given (and read as 0), so a
// validator can list all of them; otherwise the first one throws.
inline void flatten_table(nlohmann::json const& j, std::size_t n, std::size_t arity,
                          std::string const& path, std::vector<element>& out,
                          std::vector<std::string>* problems = nullptr) {
  if (arity == 0) {
    if (!j.is_number_integer()) {
      throw input_error(path + ": expected an integer");
    }
    auto v = j.get<long long>();
    if (v < 0 || static_cast<std::size_t>(v) >= n) {
      std::string msg = path + " = " + std::to_string(v) + " is outside 0.." +
                        std::to_string(n - 1);
      if (!problems) {
        throw input_error(msg);
      }
      problems->push_back(std::move(msg));
      v = 0;
    }
    out.push_back(static_cast<element>(v));
    return;
  }
  if (!j.is_array() || j.size() != n) {
    throw input_error(path + ": expected an array of " + std::to_string(n) + " entries");
  }
  for (std::size_t i = 0; i < n; ++i) {
    flatten_table(j[i], n, arity - 1, path + "[" + std::to_string(i) + "]", out, problems);
  }
}

inline std::size_t get_count(nlohmann::json const& j, std::string const& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw input_error(path + ": expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

}  // namespace detail

inline nlohmann::json algebra_to_json(FiniteAlgebra const& a, Caps const& caps = {}) {
  auto t = a.tabulate(caps);
  nlohmann::json sig = nlohmann::json::array();
  nlohmann::json ops = nlohmann::json::object();
  for (std::size_t s = 0; s < t.signature().size(); ++s) {
    auto const& sym = t.signature()[s];
    sig.push_back({{"name", sym.name}, {"arity", sym.arity}});
    ops[sym.name] = detail::nest_table(t.table(s), t.size(), sym.arity, 0,
                                       t.table(s).size());
  }
  return {{"signature", std::move(sig)}, {"size", t.size()}, {"ops", std::move(ops)}};
}

namespace detail {

inline FiniteAlgebra parse_algebra(nlohmann::json const& j, Caps const& caps,
                                   std::vector<std::string>* problems) {
  if (!j.is_object()) {
    throw input_error("algebra: expected an object");
  }
  for (char const* key : {"signature", "size", "ops"}) {
    if (!j.contains(key)) {
      throw input_error(std::string("algebra: missing field '") + key + "'");
    }
  }
  auto const& js = j["signature"];
  if (!js.is_array()) {
    throw input_error("signature: expected an array");
  }
  std::vector<Symbol> symbols;
  for (std::size_t i = 0; i < js.size(); ++i) {
    std::string path = "signature[" + std::to_string(i) + "]";
    auto const& e = js[i];
    if (!e.is_object() || !e.contains("name") || !e["name"].is_string() ||
        !e.contains("arity")) {
      throw input_error(path + ": expected {name, arity}");
    }
    symbols.push_back({e["name"].get<std::string>(), detail::get_count(e["arity"], path + ".arity")});
  }
  Signature sig(std::move(symbols));
  std::size_t n = detail::get_count(j["size"], "size");
  if (n == 0) {
    throw input_error("size: must be positive");
  }
  auto const& jo = j["ops"];
  if (!jo.is_object()) {
    throw input_error("ops: expected an object");
  }
  for (auto const& [name, _] : jo.items()) {
    if (!sig.find(name)) {
      throw input_error("ops." + name + ": symbol not in the signature");
    }
  }
  std::vector<std::vector<element>> tables;
  for (auto const& sym : sig.symbols()) {
    if (!jo.contains(sym.name)) {
      throw input_error("ops: missing table for symbol '" + sym.name + "'");
    }
    if (!detail::checked_pow(n, sym.arity, caps.max_table_entries)) {
      throw cap_exceeded("ops." + sym.name + ": table exceeds the table cap");
    }
    std::vector<element> flat;
    detail::flatten_table(jo[sym.name], n, sym.arity, "ops." + sym.name, flat, problems);
    tables.push_back(std::move(flat));
  }
  return FiniteAlgebra::from_tables(std::move(sig), n, std::move(tables), caps);
}

}  // namespace detail

inline FiniteAlgebra algebra_from_json(nlohmann::json const& j, Caps const& caps = {}) {
  return detail::parse_algebra(j, caps, nullptr);
}

/// Every problem found in an algebra document: all out-of-range table
/// entries, or else the first structural error.  Empty iff the document
/// parses.
inline std::vector<std::string> algebra_problems(nlohmann::json const& j, Caps const& caps = {}) {
  std::vector<std::string> problems;
  try {
    detail::parse_algebra(j, caps, &problems);
  } catch (error const& e) {
    problems.push_back(e.what());
  }
  return problems;
}

/// Reads and parses a JSON file; parse errors carry line and column.
inline nlohmann::json load_json_file(std::filesystem::path const& path) {
  std::ifstream in(path);
  if (!in) {
    throw input_error(path.string() + ": cannot open file");
  }
  try {
    return nlohmann::json::parse(in);
  } catch (nlohmann::json::parse_error const& e) {
    throw input_error(path.string() + ": " + e.what());
  }
}

inline bool is_embedding_json(nlohmann::json const& j) {
  return j.is_object() && j.contains("maps");
}

namespace detail {

inline FiniteAlgebra algebra_or_reference(nlohmann::json const& j,
                                          std::filesystem::path const& base,
                                          std::string const& path, Caps const& caps) {
  try {
    if (j.is_string()) {
      return algebra_from_json(load_json_file(base / j.get<std::string>()), caps);
    }
    return algebra_from_json(j, caps);
  } catch (input_error const& e) {
    throw input_error(path + ": " + e.what());
  }
}

}  // namespace detail

/// Validates homomorphism and joint injectivity; errors name the offending
/// map and argument tuple or the colliding pair.
inline ProductEmbedding embedding_from_json(nlohmann::json const& j,
                                            std::filesystem::path const& base = ".",
                                            Caps const& caps = {}) {
  if (!j.is_object()) {
    throw input_error("embedding: expected an object");
  }
  for (char const* key : {"domain", "factors", "maps"}) {
    if (!j.contains(key)) {
      throw input_error(std::string("embedding: missing field '") + key + "'");
    }
  }
  auto domain = detail::algebra_or_reference(j["domain"], base, "domain", caps);
  auto const& jf = j["factors"];
  auto const& jm = j["maps"];
  if (!jf.is_array() || !jm.is_array()) {
    throw input_error("embedding: 'factors' and 'maps' must be arrays");
  }
  if (jf.size() != jm.size()) {
    throw input_error("embedding: " + std::to_string(jf.size()) + " factors but " +
                      std::to_string(jm.size()) + " maps");
  }
  std::vector<AlgebraMap> coords;
  for (std::size_t i = 0; i < jf.size(); ++i) {
    std::string fpath = "factors[" + std::to_string(i) + "]";
    auto factor = detail::algebra_or_reference(jf[i], base, fpath, caps);
    if (factor.signature() != domain.signature()) {
      throw input_error(fpath + ": signature differs from the domain");
    }
    std::string mpath = "maps[" + std::to_string(i) + "]";
    if (!jm[i].is_array() || jm[i].size() != domain.size()) {
      throw input_error(mpath + ": expected " + std::to_string(domain.size()) + " values");
    }
    std::vector<element> values;
    for (std::size_t a = 0; a < domain.size(); ++a) {
      auto const& v = jm[i][a];
      std::string vpath = mpath + "[" + std::to_string(a) + "]";
      if (!v.is_number_integer() || v.get<long long>() < 0 ||
          v.get<std::size_t>() >= factor.size()) {
        throw input_error(vpath + ": expected an element of factor " + std::to_string(i) +
                          " (0.." + std::to_string(factor.size() - 1) + ")");
      }
      values.push_back(v.get<element>());
    }
    coords.emplace_back(domain, factor, std::move(values));
  }
  if (auto v = find_embedding_violation(domain, coords, caps)) {
    throw input_error(v->message);
  }
  return ProductEmbedding(std::move(domain), std::move(coords), caps);
}

inline nlohmann::json embedding_to_json(ProductEmbedding const& f, Caps const& caps = {}) {
  nlohmann::json factors = nlohmann::json::array();
  nlohmann::json maps = nlohmann::json::array();
  for (std::size_t i = 0; i < f.index_count(); ++i) {
    factors.push_back(algebra_to_json(f.factors()[i], caps));
    maps.push_back(f.coords()[i].values());
  }
  return {{"domain", algebra_to_json(f.domain(), caps)},
          {"factors", std::move(factors)},
          {"maps", std::move(maps)}};
}

}  // namespace rafilter

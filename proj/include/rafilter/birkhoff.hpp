#pragma once

// Free algebras of the variety generated by a finite algebra A, realized as
// algebras of term functions A^k → A, and their inclusion into the direct
// power A^(A^k).

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rafilter/algebra.hpp"
#include "rafilter/config.hpp"
#include "rafilter/embedding.hpp"
#include "rafilter/error.hpp"
#include "rafilter/ultraproduct.hpp"

namespace rafilter {

struct FreeAlgebraResult {
  FiniteAlgebra free;
  /// Index of the i-th free generator (the i-th projection A^k → A).
  std::vector<element> generators;
  /// functions[e][c] is the value of term function e at the input tuple with
  /// mixed-radix code c (first variable most significant).
  std::vector<std::vector<element>> functions;
  /// free ↪ A^(A^k), coordinate c evaluating at input tuple c.
  ProductEmbedding power_embedding;
};

/// Closure of the k projections and the constants under pointwise
/// operations, computed semi-naively: each round only applies operations to
/// tuples that involve an element found in the previous round.
inline FreeAlgebraResult free_algebra(FiniteAlgebra const& a, std::size_t k,
                                      Caps const& caps = {}) {
  if (k == 0) {
    throw input_error("free_algebra: k must be positive");
  }
  auto coord_count = detail::checked_pow(a.size(), k, caps.max_free_coordinates);
  if (!coord_count) {
    throw cap_exceeded("free_algebra: |A|^k exceeds " +
                       std::to_string(caps.max_free_coordinates) + " coordinates");
  }
  std::size_t n_coords = *coord_count;
  auto const& sig = a.signature();
  std::size_t max_arity = sig.max_arity();

  std::vector<std::vector<element>> functions;
  std::map<std::vector<element>, element> index;
  auto intern = [&](std::vector<element> fn) {
    auto [it, inserted] = index.try_emplace(fn, static_cast<element>(functions.size()));
    if (inserted) {
      functions.push_back(std::move(fn));
      if (!detail::checked_pow(functions.size(), std::max<std::size_t>(max_arity, 1),
                               caps.max_table_entries)) {
        throw cap_exceeded("free_algebra: the free algebra outgrows the table cap");
      }
    }
    return it->second;
  };

  std::vector<element> generators;
  for (std::size_t j = 0; j < k; ++j) {
    std::vector<element> proj(n_coords);
    for (std::size_t c = 0; c < n_coords; ++c) {
      std::size_t v = c;
      for (std::size_t skip = k - 1; skip > j; --skip) {
        v /= a.size();
      }
      proj[c] = static_cast<element>(v % a.size());
    }
    generators.push_back(intern(std::move(proj)));
  }
  for (std::size_t s = 0; s < sig.size(); ++s) {
    if (sig[s].arity == 0) {
      intern(std::vector<element>(n_coords, a.apply(s, {})));
    }
  }

  std::vector<element> point;
  auto pointwise = [&](std::size_t s, std::span<const element> args) {
    std::vector<element> out(n_coords);
    point.resize(args.size());
    for (std::size_t c = 0; c < n_coords; ++c) {
      for (std::size_t j = 0; j < args.size(); ++j) {
        point[j] = functions[args[j]][c];
      }
      out[c] = a.apply(s, point);
    }
    return out;
  };

  std::size_t processed = 0;
  while (processed < functions.size()) {
    std::size_t current = functions.size();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      std::size_t arity = sig[s].arity;
      if (arity == 0) {
        continue;
      }
      for_each_tuple(current, arity, [&](std::span<const element> args) {
        bool fresh = false;
        for (element x : args) {
          fresh = fresh || x >= processed;
        }
        if (fresh) {
          intern(pointwise(s, args));
        }
      });
    }
    processed = current;
  }

  auto free = FiniteAlgebra::from_function(
      sig, functions.size(),
      [&](std::size_t s, std::span<const element> args) { return index.at(pointwise(s, args)); },
      caps);

  std::vector<AlgebraMap> coords;
  for (std::size_t c = 0; c < n_coords; ++c) {
    std::vector<element> values(functions.size());
    for (std::size_t e = 0; e < functions.size(); ++e) {
      values[e] = functions[e][c];
    }
    coords.emplace_back(free, a, std::move(values));
  }
  ProductEmbedding power(free, std::move(coords), caps);
  return {free, std::move(generators), std::move(functions), std::move(power)};
}

/// The homomorphism free → A sending generator j to assignment[j]:
/// evaluation of every term function at that input tuple.
inline AlgebraMap evaluate_at(FreeAlgebraResult const& fr, FiniteAlgebra const& a,
                              std::span<const element> assignment) {
  if (assignment.size() != fr.generators.size()) {
    throw input_error("evaluate_at: need one value per generator");
  }
  std::size_t c = 0;
  for (element v : assignment) {
    if (v >= a.size()) {
      throw input_error("evaluate_at: value outside the algebra");
    }
    c = c * a.size() + v;
  }
  std::vector<element> values(fr.functions.size());
  for (std::size_t e = 0; e < values.size(); ++e) {
    values[e] = fr.functions[e][c];
  }
  return AlgebraMap(fr.free, a, std::move(values));
}

/// Builds the free algebra on k generators, thins its power embedding to an
/// indecomposable one and runs the theorem pipeline on it.  A full pass
/// means the free algebra embeds into an ultrapower of A.
inline PipelineReport corollary_harness(FiniteAlgebra const& a, std::size_t k,
                                        PipelineConfig const& config = {}) {
  PipelineReport report;
  report.expected_stages = 11;
  auto add = [&](std::string name, bool passed, nlohmann::json w) {
    report.stages.push_back({std::move(name), passed, std::move(w)});
    return passed;
  };

  std::optional<FreeAlgebraResult> fr;
  try {
    fr = free_algebra(a, k, config.caps);
  } catch (error const& e) {
    add("free_algebra", false, {{"error", e.what()}});
    return report;
  }
  nlohmann::json fw = {{"size", fr->free.size()},
                       {"generators", fr->generators},
                       {"coordinates", fr->power_embedding.index_count()}};
  if (fr->free.size() < 2) {
    fw["reason"] = "free algebra is trivial";
  }
  if (!add("free_algebra", fr->free.size() >= 2, std::move(fw))) {
    return report;
  }

  try {
    auto split = find_diagonal_splitting(fr->free, config.caps);
    nlohmann::json w = {{"size", fr->free.size()}};
    if (split) {
      w["splitting_pair"] = {split->first.to_string(), split->second.to_string()};
    }
    if (!add("free_finitely_subdirectly_irreducible", !split, std::move(w))) {
      return report;
    }
  } catch (error const& e) {
    add("free_finitely_subdirectly_irreducible", false, {{"error", e.what()}});
    return report;
  }

  std::optional<ThinResult> thin;
  try {
    thin = thin_to_indecomposable(fr->power_embedding, config.caps);
    auto cls = classify(thin->thinned, config.caps);
    if (!add("thinning",
             cls.kind == EmbeddingClass::Kind::indecomposable,
             {{"j0", subset_json(thin->j0)}, {"class", to_string(cls.kind)}})) {
      return report;
    }
  } catch (error const& e) {
    add("thinning", false, {{"error", e.what()}});
    return report;
  }

  auto inner = theorem_pipeline(thin->thinned, config);
  for (auto& s : inner.stages) {
    report.stages.push_back(std::move(s));
  }
  if (!inner.passed()) {
    return report;
  }

  bool power = true;
  for (auto const& b : thin->thinned.factors()) {
    power = power && b == a;
  }
  add("ultrapower", power,
      {{"factors", thin->thinned.index_count()}, {"all_factors_equal_a", power}});
  return report;
}

}  // namespace rafilter

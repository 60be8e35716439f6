#pragma once

// Ultraproducts over ultrafilters on a finite index set, and the pipeline
// that replays the embedding theorem on a concrete instance: U(f) is shown
// to be an ultrafilter, complete for every partition of the index set, and
// A embeds into ∏_{U(f)} B_i.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rafilter/algebra.hpp"
#include "rafilter/congruence.hpp"
#include "rafilter/config.hpp"
#include "rafilter/embedding.hpp"
#include "rafilter/error.hpp"
#include "rafilter/product.hpp"
#include "rafilter/rng.hpp"
#include "rafilter/subset.hpp"

namespace rafilter {

/// An ultrafilter on 0..n-1 whose filter properties were checked on
/// construction, with its generating point.
class VerifiedUltrafilter {
 public:
  explicit VerifiedUltrafilter(SubsetFamily family)
      : family_(std::move(family)), report_(filter_properties(family_)) {
    if (!report_.ultra || !report_.principal_witness) {
      throw precondition_error("family is not an ultrafilter");
    }
    principal_ = *report_.principal_witness;
  }

  static std::optional<VerifiedUltrafilter> try_verify(SubsetFamily family) {
    if (!filter_properties(family).ultra) {
      return std::nullopt;
    }
    return VerifiedUltrafilter(std::move(family));
  }

  SubsetFamily const& family() const noexcept { return family_; }
  std::size_t ground_size() const noexcept { return family_.ground_size(); }
  /// Least i0 with {i0} in the family.
  std::size_t principal() const noexcept { return principal_; }
  FilterReport const& report() const noexcept { return report_; }

 private:
  SubsetFamily family_;
  FilterReport report_;
  std::size_t principal_ = 0;
};

/// a θ b iff {i : a(i) = b(i)} ∈ u, on ∏ family.
///
/// Classes are found first-fit against the representatives found so far,
/// which is sound because θ is an equivalence whenever u is a filter, and
/// costs |∏| · (number of classes) agreement tests.
inline Congruence theta_congruence(Signature const& signature,
                                   std::span<const FiniteAlgebra> family,
                                   VerifiedUltrafilter const& u, Caps const& caps = {}) {
  if (u.ground_size() != family.size()) {
    throw input_error("theta_congruence: ultrafilter on " + std::to_string(u.ground_size()) +
                      " indices for a family of " + std::to_string(family.size()));
  }
  auto prod = FiniteAlgebra::product(signature, {family.begin(), family.end()}, caps);
  std::vector<element> reps(prod.size());
  std::vector<std::pair<element, std::vector<element>>> classes;
  for (element x = 0; x < prod.size(); ++x) {
    auto cx = prod.coordinates(x);
    bool placed = false;
    for (auto const& [r, cr] : classes) {
      mask_type agree = 0;
      for (std::size_t i = 0; i < cx.size(); ++i) {
        if (cx[i] == cr[i]) {
          agree |= mask_type{1} << i;
        }
      }
      if (u.family().contains(agree)) {
        reps[x] = r;
        placed = true;
        break;
      }
    }
    if (!placed) {
      reps[x] = x;
      classes.emplace_back(x, std::move(cx));
    }
  }
  return Congruence::assume_compatible(std::move(prod), Partition(std::move(reps)));
}

struct UltraproductResult {
  FiniteAlgebra algebra;
  AlgebraMap canonical;  // ∏ B_i → ∏_u B_i
  Congruence theta;
  std::size_t factor_index;  // the generating point i0
  AlgebraMap to_factor;      // ∏_u B_i → B_{i0}
  bool isomorphism_verified;
};

inline UltraproductResult ultraproduct(Signature const& signature,
                                       std::span<const FiniteAlgebra> family,
                                       VerifiedUltrafilter const& u, Caps const& caps = {}) {
  auto theta = theta_congruence(signature, family, u, caps);
  auto q = quotient(theta.algebra(), theta, caps);
  std::size_t i0 = u.principal();
  auto const& prod = theta.algebra();
  std::vector<element> values(q.algebra.size());
  for (element x = 0; x < prod.size(); ++x) {
    if (theta.partition().rep(x) == x) {
      values[q.map(x)] = prod.coordinates(x)[i0];
    }
  }
  AlgebraMap to_factor(q.algebra, family[i0], std::move(values));
  bool verified = is_injective(to_factor) && is_surjective(to_factor) &&
                  is_homomorphism(to_factor);
  return {q.algebra, q.map, std::move(theta), i0, std::move(to_factor), verified};
}

struct CompletenessResult {
  bool complete = false;
  std::optional<IndexSubset> witness;
};

/// Some block of the partition belongs to u; the witness is the member
/// block with the least bitmask.
inline CompletenessResult kappa_complete_on(SubsetFamily const& u,
                                            std::span<const IndexSubset> blocks) {
  mask_type seen = 0;
  for (auto const& b : blocks) {
    if (b.ground_size() != u.ground_size()) {
      throw input_error("kappa_complete_on: block over the wrong ground set");
    }
    if (b.is_empty()) {
      throw input_error("kappa_complete_on: empty block");
    }
    if ((seen & b.mask()) != 0) {
      throw input_error("kappa_complete_on: blocks overlap at " + (b & IndexSubset(u.ground_size(), seen)).to_string());
    }
    seen |= b.mask();
  }
  if (seen != IndexSubset::full_mask(u.ground_size())) {
    throw input_error("kappa_complete_on: blocks do not cover the index set");
  }
  CompletenessResult r;
  for (auto const& b : blocks) {
    if (u.contains(b) && (!r.witness || b.mask() < r.witness->mask())) {
      r.witness = b;
    }
  }
  r.complete = r.witness.has_value();
  return r;
}

inline CompletenessResult kappa_complete_on(VerifiedUltrafilter const& u,
                                            std::span<const IndexSubset> blocks) {
  return kappa_complete_on(u.family(), blocks);
}

/// Calls fn(blocks) for every set partition of 0..n-1 (restricted growth
/// strings, so each partition once).
inline void for_each_set_partition(std::size_t n,
                                   std::function<void(std::span<const IndexSubset>)> const& fn) {
  std::vector<std::size_t> label(n, 0);
  std::vector<IndexSubset> blocks;
  std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t used) {
    if (i == n) {
      std::vector<mask_type> masks(used, 0);
      for (std::size_t k = 0; k < n; ++k) {
        masks[label[k]] |= mask_type{1} << k;
      }
      blocks.clear();
      for (auto m : masks) {
        blocks.emplace_back(n, m);
      }
      fn(blocks);
      return;
    }
    for (std::size_t l = 0; l <= used && l < n; ++l) {
      label[i] = l;
      rec(i + 1, std::max(used, l + 1));
    }
  };
  rec(0, 0);
}

inline std::vector<IndexSubset> random_set_partition(std::size_t n, Rng& rng) {
  std::vector<mask_type> masks(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    masks[rng.below(n)] |= mask_type{1} << k;
  }
  std::vector<IndexSubset> blocks;
  for (auto m : masks) {
    if (m != 0) {
      blocks.emplace_back(n, m);
    }
  }
  return blocks;
}

/// True iff no two distinct elements of A agree on a member of u, i.e.
/// θ pulled back along f is the diagonal.
inline bool restricted_theta_is_diagonal(ProductEmbedding const& f, SubsetFamily const& u) {
  if (u.ground_size() != f.index_count()) {
    throw input_error("restricted_theta_is_diagonal: family over the wrong index set");
  }
  for (element a = 0; a < f.domain().size(); ++a) {
    for (element b = a + 1; b < f.domain().size(); ++b) {
      if (u.contains(f.agreement(a, b))) {
        return false;
      }
    }
  }
  return true;
}

struct StageResult {
  std::string stage;
  bool passed = false;
  nlohmann::json witnesses = nlohmann::json::object();
};

struct PipelineReport {
  std::vector<StageResult> stages;
  /// Number of stages a complete run has; the report is a pass only if all
  /// of them ran and passed.
  std::size_t expected_stages = 7;

  bool passed() const {
    if (stages.size() != expected_stages) {
      return false;
    }
    for (auto const& s : stages) {
      if (!s.passed) {
        return false;
      }
    }
    return true;
  }

  std::optional<std::string> failed_stage() const {
    for (auto const& s : stages) {
      if (!s.passed) {
        return s.stage;
      }
    }
    return std::nullopt;
  }
};

inline nlohmann::json subset_json(IndexSubset const& j) {
  return {{"mask", j.mask()}, {"indices", j.indices()}};
}

inline nlohmann::json subset_json(std::size_t ground, mask_type m) {
  return subset_json(IndexSubset(ground, m));
}

inline nlohmann::json report_json(PipelineReport const& report) {
  nlohmann::json stages = nlohmann::json::array();
  for (auto const& s : report.stages) {
    stages.push_back({{"stage", s.stage}, {"passed", s.passed}, {"witnesses", s.witnesses}});
  }
  nlohmann::json out = {{"passed", report.passed()}, {"stages", std::move(stages)}};
  if (auto failed = report.failed_stage()) {
    out["failed_stage"] = *failed;
  }
  return out;
}

inline std::string stage_name(std::size_t number) {
  static constexpr char const* names[] = {
      "finitely_subdirectly_irreducible", "classification", "factoring_family", "ultrafilter",
      "kappa_completeness", "ultraproduct", "embedding"};
  return names[number - 1];
}

/// Runs the seven proof stages in order, stopping at the first failure.
/// Hypothesis failures and cap overruns are recorded in the report, never
/// thrown.
inline PipelineReport theorem_pipeline(ProductEmbedding const& f,
                                       PipelineConfig const& config = {}) {
  PipelineReport report;
  Caps const& caps = config.caps;
  std::size_t n = f.index_count();
  auto add = [&](std::size_t number, bool passed, nlohmann::json witnesses) {
    report.stages.push_back({stage_name(number), passed, std::move(witnesses)});
    return passed;
  };
  auto fail_with = [&](std::size_t number, std::string const& reason) {
    return add(number, false, {{"error", reason}});
  };

  // 1. The domain is non-trivial and finitely subdirectly irreducible.
  try {
    auto const& a = f.domain();
    if (a.size() < 2) {
      add(1, false, {{"size", a.size()}, {"reason", "trivial algebra"}});
      return report;
    }
    auto lattice = all_congruences(a, caps);
    auto split = find_diagonal_splitting(a, caps);
    nlohmann::json w = {{"size", a.size()}, {"congruences", lattice.size()}};
    if (split) {
      w["splitting_pair"] = {split->first.to_string(), split->second.to_string()};
    }
    if (!add(1, !split, std::move(w))) {
      return report;
    }
  } catch (error const& e) {
    fail_with(1, e.what());
    return report;
  }

  // 2. f is indecomposable.
  SubsetFamily u(0);
  try {
    u = factoring_family(f, caps);
    auto cls = classify(u);
    nlohmann::json w = {{"class", to_string(cls.kind)}};
    if (cls.witness) {
      w["witness"] = subset_json(*cls.witness);
    }
    if (!add(2, cls.kind == EmbeddingClass::Kind::indecomposable, std::move(w))) {
      return report;
    }
  } catch (error const& e) {
    fail_with(2, e.what());
    return report;
  }

  // 3. U(f): contains I, excludes ∅, upward closed.
  {
    nlohmann::json members = nlohmann::json::array();
    for (auto m : u.masks()) {
      members.push_back(subset_json(n, m));
    }
    bool has_all = u.contains(IndexSubset::full_mask(n));
    bool upward = is_upward_closed(u);
    bool no_empty = !u.contains(mask_type{0});
    nlohmann::json w = {{"members", std::move(members)},
                        {"size", u.size()},
                        {"contains_index_set", has_all},
                        {"upward_closed", upward},
                        {"excludes_empty", no_empty}};
    if (!add(3, has_all && upward && no_empty, std::move(w))) {
      return report;
    }
  }

  // 4. U(f) is an ultrafilter.
  auto fr = filter_properties(u);
  {
    nlohmann::json w = {{"upward_closed", fr.upward_closed},
                        {"intersection_closed", fr.intersection_closed},
                        {"proper", fr.proper},
                        {"ultra", fr.ultra}};
    if (fr.principal_witness) {
      w["principal"] = *fr.principal_witness;
    }
    if (fr.missing_intersection) {
      w["missing_intersection"] = {subset_json(n, fr.missing_intersection->first),
                                   subset_json(n, fr.missing_intersection->second)};
    }
    if (fr.undecided) {
      w["undecided"] = subset_json(n, *fr.undecided);
    }
    if (!add(4, fr.ultra && fr.principal_witness.has_value(), std::move(w))) {
      return report;
    }
  }
  VerifiedUltrafilter uf(u);
  std::size_t i0 = uf.principal();

  // 5. Some block of every partition of I lies in U(f).
  {
    std::size_t checked = 0;
    std::size_t failures = 0;
    std::optional<std::vector<IndexSubset>> counterexample;
    auto check = [&](std::span<const IndexSubset> blocks) {
      ++checked;
      auto r = kappa_complete_on(uf, blocks);
      if (!r.complete || !r.witness->contains(i0)) {
        ++failures;
        if (!counterexample) {
          counterexample.emplace(blocks.begin(), blocks.end());
        }
      }
    };
    bool exhaustive = n <= config.exhaustive_partition_limit;
    if (exhaustive) {
      for_each_set_partition(n, check);
    } else {
      Rng rng(config.seed);
      for (std::size_t s = 0; s < config.sampled_partitions; ++s) {
        check(random_set_partition(n, rng));
      }
    }
    nlohmann::json w = {{"partitions_checked", checked},
                        {"exhaustive", exhaustive},
                        {"failures", failures}};
    if (counterexample) {
      nlohmann::json blocks = nlohmann::json::array();
      for (auto const& b : *counterexample) {
        blocks.push_back(subset_json(b));
      }
      w["counterexample"] = std::move(blocks);
    }
    if (!add(5, failures == 0, std::move(w))) {
      return report;
    }
  }

  // 6. θ and the ultraproduct ∏_{U(f)} B_i ≅ B_{i0}.
  std::optional<UltraproductResult> up;
  try {
    up = ultraproduct(f.signature(), f.factors(), uf, caps);
    auto const& prod = up->theta.algebra();
    std::vector<element> coordinate(prod.size());
    for (element x = 0; x < prod.size(); ++x) {
      coordinate[x] = prod.coordinates(x)[i0];
    }
    bool matches_projection =
        Partition::from_labels(std::span<const element>(coordinate)) == up->theta.partition();
    nlohmann::json w = {{"product_size", prod.size()},
                        {"theta_blocks", up->theta.partition().block_count()},
                        {"theta_is_projection_kernel", matches_projection},
                        {"ultraproduct_size", up->algebra.size()},
                        {"factor_index", i0},
                        {"isomorphism_verified", up->isomorphism_verified}};
    if (!add(6, matches_projection && up->isomorphism_verified, std::move(w))) {
      return report;
    }
  } catch (error const& e) {
    fail_with(6, e.what());
    return report;
  }

  // 7. f followed by the canonical surjection is injective, and θ ∩ (A×A)
  //    is the diagonal.
  try {
    auto joint = f.joint_map(caps);
    auto composed = compose(joint, up->canonical);
    bool pointwise = true;
    for (element a = 0; a < f.domain().size(); ++a) {
      pointwise = pointwise && composed(a) == up->canonical(joint(a));
    }
    bool injective = is_injective(composed);
    bool homomorphism = is_homomorphism(composed);
    bool diagonal = restricted_theta_is_diagonal(f, u);
    nlohmann::json w = {{"map", composed.values()},
                        {"injective", injective},
                        {"homomorphism", homomorphism},
                        {"restricted_theta_is_diagonal", diagonal},
                        {"composition_matches", pointwise}};
    add(7, injective && homomorphism && diagonal && pointwise, std::move(w));
  } catch (error const& e) {
    fail_with(7, e.what());
  }
  return report;
}

}  // namespace rafilter

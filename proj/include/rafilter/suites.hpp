#pragma once

// Property suites over seeded random embeddings.  Every instance gets its
// own generator seeded from (run seed, instance index), so results do not
// depend on how instances are spread over threads.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rafilter/birkhoff.hpp"
#include "rafilter/congruence.hpp"
#include "rafilter/embedding.hpp"
#include "rafilter/io.hpp"
#include "rafilter/random.hpp"
#include "rafilter/rng.hpp"
#include "rafilter/ultraproduct.hpp"

namespace rafilter {

enum class Verdict { pass, fail, skip };

struct CheckOutcome {
  Verdict verdict = Verdict::skip;
  std::string detail;
  /// Number of embeddings the check actually exercised (doubling adds some).
  std::size_t exercised = 0;

  static CheckOutcome pass(std::size_t n = 1) { return {Verdict::pass, {}, n}; }
  static CheckOutcome fail(std::string why) { return {Verdict::fail, std::move(why), 0}; }
  static CheckOutcome skip(std::string why) { return {Verdict::skip, std::move(why), 0}; }
};

/// Facts about one instance shared by the checks.
struct InstanceFacts {
  bool nontrivial_fsi = false;
  SubsetFamily family;
  EmbeddingClass cls;
};

inline InstanceFacts instance_facts(ProductEmbedding const& f, Caps const& caps = {}) {
  auto u = factoring_family(f, caps);
  auto cls = classify(u);
  bool fsi = f.domain().size() >= 2 && is_finitely_subdirectly_irreducible(f.domain(), caps);
  return {fsi, std::move(u), cls};
}

/// U(f) is upward closed, agrees with factors_through on every J, contains
/// I, and contains ∅ iff A is trivial.
inline CheckOutcome check_lemma(ProductEmbedding const& f, InstanceFacts const& facts,
                                Caps const& caps = {}) {
  auto const& u = facts.family;
  if (!is_upward_closed(u)) {
    return CheckOutcome::fail("factoring family is not upward closed");
  }
  if (!u.contains(f.all_indices())) {
    return CheckOutcome::fail("factoring family misses the whole index set");
  }
  if (u.contains(mask_type{0}) != (f.domain().size() == 1)) {
    return CheckOutcome::fail("empty set membership does not match triviality");
  }
  mask_type full = IndexSubset::full_mask(f.index_count());
  for (std::size_t m = 0; m <= full; ++m) {
    IndexSubset j(f.index_count(), static_cast<mask_type>(m));
    if (factors_through(f, j, caps).has_value() != u.contains(j)) {
      return CheckOutcome::fail("factoring family disagrees with factors_through at " +
                                j.to_string());
    }
  }
  return CheckOutcome::pass();
}

/// Δ ∘ g = f for the diagonal factorization of a decomposable embedding.
inline std::optional<std::string> verify_diagonal_factorization(ProductEmbedding const& h,
                                                                IndexSubset const& witness,
                                                                Caps const& caps = {}) {
  auto g = diagonal_factorization(h, witness, caps);
  auto through_g = compose(diagonal_map(h.domain(), caps), g);
  if (through_g.values() != h.joint_map(caps).values()) {
    return "diagonal followed by g differs from f";
  }
  if (!is_injective(g)) {
    return "g is not injective";
  }
  if (!is_homomorphism(g)) {
    return "g is not a homomorphism";
  }
  return std::nullopt;
}

/// Whether the doubled embedding stays within the index and product caps.
inline bool doubling_fits(ProductEmbedding const& f, Caps const& caps) {
  if (2 * f.index_count() > std::min(caps.max_index_set, hard_index_set_limit)) {
    return false;
  }
  std::size_t size = 1;
  for (std::size_t round = 0; round < 2; ++round) {
    for (auto const& b : f.factors()) {
      if (size > caps.max_product_size / b.size()) {
        return false;
      }
      size *= b.size();
    }
  }
  return true;
}

/// Diagonal factorization on f (when decomposable) and on its double (when
/// the doubled product fits the cap).
inline CheckOutcome check_diagonal_factorization(ProductEmbedding const& f,
                                                 InstanceFacts const& facts,
                                                 Caps const& caps = {}) {
  std::size_t exercised = 0;
  auto run = [&](ProductEmbedding const& h, SubsetFamily const& u,
                 EmbeddingClass const& cls) -> std::optional<std::string> {
    if (cls.kind != EmbeddingClass::Kind::decomposable) {
      return std::nullopt;
    }
    ++exercised;
    if (filter_properties(u).ultra) {
      return "a decomposable embedding has an ultrafilter as factoring family";
    }
    return verify_diagonal_factorization(h, *cls.witness, caps);
  };
  if (auto err = run(f, facts.family, facts.cls)) {
    return CheckOutcome::fail(*err);
  }
  if (doubling_fits(f, caps)) {
    auto d = doubled_embedding(f, caps);
    auto du = factoring_family(d, caps);
    auto dcls = classify(du);
    if (dcls.kind != EmbeddingClass::Kind::decomposable) {
      return CheckOutcome::fail("doubled embedding is not decomposable");
    }
    mask_type first_half = IndexSubset::full_mask(f.index_count());
    if (!is_decomposition_witness(du, du.subset(first_half))) {
      return CheckOutcome::fail("first half of the doubled embedding is not a witness");
    }
    if (auto err = run(d, du, dcls)) {
      return CheckOutcome::fail("doubled: " + *err);
    }
  }
  if (exercised == 0) {
    return CheckOutcome::skip("no decomposable embedding");
  }
  return CheckOutcome::pass(exercised);
}

/// Thinning of f and of its double.  Requires a non-trivial finitely
/// subdirectly irreducible domain.
inline CheckOutcome check_thinning(ProductEmbedding const& f, InstanceFacts const& facts,
                                   Caps const& caps = {}) {
  if (!facts.nontrivial_fsi) {
    return CheckOutcome::skip("domain is not finitely subdirectly irreducible");
  }
  std::size_t exercised = 0;
  auto run = [&](ProductEmbedding const& h) -> std::optional<std::string> {
    ++exercised;
    auto u = factoring_family(h, caps);
    auto r = thin_to_indecomposable(h, caps);
    if (!u.contains(r.j0)) {
      return "J0 = " + r.j0.to_string() + " is not in U(f)";
    }
    if (classify(r.thinned, caps).kind != EmbeddingClass::Kind::indecomposable) {
      return "thinned embedding is not indecomposable";
    }
    bool s_empty = classify(u).kind != EmbeddingClass::Kind::decomposable;
    if (s_empty) {
      return r.j0 == h.all_indices() ? std::nullopt
                                     : std::optional<std::string>("empty S but J0 != I");
    }
    if (!is_decomposition_witness(u, r.j0)) {
      return "J0 is not in S";
    }
    for (auto m : u.masks()) {
      IndexSubset j(h.index_count(), m);
      if (j != r.j0 && j.subset_of(r.j0) && is_decomposition_witness(u, j)) {
        return "J0 is not minimal in S";
      }
    }
    return std::nullopt;
  };
  if (auto err = run(f)) {
    return CheckOutcome::fail(*err);
  }
  if (2 * f.index_count() <= std::min(caps.max_index_set, hard_index_set_limit)) {
    if (auto err = run(doubled_embedding(f, caps))) {
      return CheckOutcome::fail("doubled: " + *err);
    }
  }
  return CheckOutcome::pass(exercised);
}

/// Full pipeline plus the four-set decomposition and the intersection
/// equation for every pair J, K in U(f).  Requires a non-trivial finitely
/// subdirectly irreducible domain and an indecomposable embedding.
inline CheckOutcome check_theorem(ProductEmbedding const& f, InstanceFacts const& facts,
                                  PipelineConfig const& config = {}) {
  if (!facts.nontrivial_fsi) {
    return CheckOutcome::skip("domain is not finitely subdirectly irreducible");
  }
  if (facts.cls.kind != EmbeddingClass::Kind::indecomposable) {
    return CheckOutcome::skip("embedding is not indecomposable");
  }
  auto report = theorem_pipeline(f, config);
  if (!report.passed()) {
    return CheckOutcome::fail("pipeline failed at stage " +
                              report.failed_stage().value_or("(incomplete)"));
  }
  auto const& u = facts.family;
  auto fr = filter_properties(u);
  if (!fr.ultra || !fr.principal_witness) {
    return CheckOutcome::fail("U(f) is not a principal ultrafilter");
  }
  if (!restricted_theta_is_diagonal(f, u)) {
    return CheckOutcome::fail("restricted theta is not the diagonal");
  }
  if (auto v = find_four_set_violation(u)) {
    return CheckOutcome::fail("four-set decomposition fails at J=" + std::to_string(v->first) +
                              ", K=" + std::to_string(v->second));
  }
  for (auto j : u.masks()) {
    for (auto k : u.masks()) {
      if (!check_intersection_factorization(f, u.subset(j), u.subset(k), config.caps)) {
        return CheckOutcome::fail("intersection equation fails at J=" + std::to_string(j) +
                                  ", K=" + std::to_string(k));
      }
    }
  }
  return CheckOutcome::pass();
}

enum class Suite { lemma, props, theorem, all };

inline std::optional<Suite> parse_suite(std::string const& s) {
  static const std::map<std::string, Suite> names = {
      {"lemma", Suite::lemma}, {"props", Suite::props},
      {"theorem", Suite::theorem}, {"all", Suite::all}};
  auto it = names.find(s);
  return it == names.end() ? std::nullopt : std::optional<Suite>(it->second);
}

inline char const* to_string(Suite s) {
  switch (s) {
    case Suite::lemma:
      return "lemma";
    case Suite::props:
      return "props";
    case Suite::theorem:
      return "theorem";
    case Suite::all:
      return "all";
  }
  return "?";
}

struct RunConfig {
  std::uint64_t seed = 42;
  Caps caps{};
  std::size_t count = 100;
  Suite suite = Suite::all;
  std::size_t jobs = 1;
  GeneratorOptions generator{};
};

struct Tally {
  std::size_t passed = 0;
  std::size_t failed = 0;
  std::size_t skipped = 0;
};

struct RunSummary {
  std::uint64_t seed = 0;
  std::size_t count = 0;
  Suite suite = Suite::all;
  std::map<std::string, Tally> tallies;  // ordered, so output is stable
  std::optional<nlohmann::json> counterexample;

  bool ok() const {
    for (auto const& [_, t] : tallies) {
      if (t.failed != 0) {
        return false;
      }
    }
    return true;
  }
};

namespace detail {

struct InstanceRecord {
  std::vector<std::pair<std::string, CheckOutcome>> outcomes;
  std::optional<nlohmann::json> instance;
};

inline InstanceRecord run_instance(RunConfig const& cfg, std::size_t index) {
  InstanceRecord rec;
  Rng rng(derive_seed(cfg.seed, index));
  std::optional<ProductEmbedding> f;
  try {
    f = random_embedding(rng, cfg.generator, cfg.caps);
  } catch (error const& e) {
    rec.outcomes.emplace_back("generator", CheckOutcome::fail(e.what()));
    return rec;
  }
  PipelineConfig pc;
  pc.caps = cfg.caps;
  pc.seed = derive_seed(cfg.seed, index);
  auto guarded = [&](std::string const& name, auto&& check) {
    try {
      rec.outcomes.emplace_back(name, check());
    } catch (error const& e) {
      rec.outcomes.emplace_back(name, CheckOutcome::fail(std::string("exception: ") + e.what()));
    }
  };
  auto facts = instance_facts(*f, cfg.caps);
  bool all = cfg.suite == Suite::all;
  if (all || cfg.suite == Suite::lemma) {
    guarded("lemma", [&] { return check_lemma(*f, facts, cfg.caps); });
  }
  if (all || cfg.suite == Suite::props) {
    guarded("prop1", [&] { return check_diagonal_factorization(*f, facts, cfg.caps); });
    guarded("prop2", [&] { return check_thinning(*f, facts, cfg.caps); });
  }
  if (all || cfg.suite == Suite::theorem) {
    guarded("theorem", [&] { return check_theorem(*f, facts, pc); });
  }
  for (auto const& [_, o] : rec.outcomes) {
    if (o.verdict == Verdict::fail) {
      rec.instance = embedding_to_json(*f, cfg.caps);
      break;
    }
  }
  return rec;
}

}  // namespace detail

inline RunSummary run_random(RunConfig const& cfg) {
  std::vector<detail::InstanceRecord> records(cfg.count);
  std::size_t jobs = std::max<std::size_t>(1, std::min(cfg.jobs, cfg.count));
  auto worker = [&](std::size_t w) {
    for (std::size_t i = w; i < cfg.count; i += jobs) {
      records[i] = detail::run_instance(cfg, i);
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < jobs; ++w) {
      threads.emplace_back(worker, w);
    }
    for (auto& t : threads) {
      t.join();
    }
  }

  RunSummary s{cfg.seed, cfg.count, cfg.suite, {}, std::nullopt};
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (auto const& [name, o] : records[i].outcomes) {
      auto& t = s.tallies[name];
      switch (o.verdict) {
        case Verdict::pass:
          ++t.passed;
          break;
        case Verdict::skip:
          ++t.skipped;
          break;
        case Verdict::fail:
          ++t.failed;
          if (!s.counterexample) {
            s.counterexample = nlohmann::json{{"instance", i},
                                              {"seed", derive_seed(cfg.seed, i)},
                                              {"check", name},
                                              {"detail", o.detail},
                                              {"embedding", records[i].instance.value_or(nullptr)}};
          }
          break;
      }
    }
  }
  return s;
}

inline nlohmann::json summary_json(RunSummary const& s) {
  nlohmann::json results = nlohmann::json::object();
  for (auto const& [name, t] : s.tallies) {
    results[name] = {{"passed", t.passed}, {"failed", t.failed}, {"skipped", t.skipped}};
  }
  return {{"seed", s.seed},
          {"count", s.count},
          {"suite", to_string(s.suite)},
          {"results", std::move(results)},
          {"ok", s.ok()},
          {"counterexample", s.counterexample.value_or(nullptr)}};
}

}  // namespace rafilter

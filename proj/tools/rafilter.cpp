// Command-line front end.
//
//   rafilter check <file>            validate an algebra or embedding file
//   rafilter congruences <file>      list the congruence lattice
//   rafilter si <file>               finite subdirect irreducibility
//   rafilter family <embedding>      the factoring family U(f)
//   rafilter classify <embedding>    decomposable / indecomposable / neither
//   rafilter thin <embedding>        restrict to an indecomposable embedding
//   rafilter pipeline <embedding>    run the seven-stage check
//   rafilter free <file> -k <n>      free algebra on n generators
//   rafilter random                  seeded property suites
//
// Exit status: 0 on success, 1 on input errors, 2 when a pipeline stage
// fails.  `check` and `random` return 1 when they find a violation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rafilter/rafilter.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace rafilter;

namespace {

struct Globals {
  bool json_out = false;
  std::size_t jobs = 1;
  std::size_t max_index_set = Caps{}.max_index_set;

  Caps caps() const {
    Caps c;
    c.max_index_set = max_index_set;
    return c;
  }
};

void emit(json const& j) { std::cout << j.dump(2) << "\n"; }

FiniteAlgebra load_algebra(std::string const& path, Caps const& caps) {
  auto j = load_json_file(path);
  if (is_embedding_json(j)) {
    throw input_error(path + ": expected an algebra, found an embedding");
  }
  try {
    return algebra_from_json(j, caps);
  } catch (input_error const& e) {
    throw input_error(path + ": " + e.what());
  }
}

ProductEmbedding load_embedding(std::string const& path, Caps const& caps) {
  auto j = load_json_file(path);
  if (!is_embedding_json(j)) {
    throw input_error(path + ": expected an embedding (no \"maps\" field)");
  }
  try {
    return embedding_from_json(j, fs::path(path).parent_path(), caps);
  } catch (input_error const& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::string indices_text(IndexSubset const& j) { return j.to_string(); }

json partition_json(Partition const& p) { return p.blocks(); }

int cmd_check(Globals const& g, std::string const& path) {
  Caps caps = g.caps();
  std::vector<std::string> problems;
  std::string kind = "algebra";
  try {
    auto j = load_json_file(path);
    if (is_embedding_json(j)) {
      kind = "embedding";
      embedding_from_json(j, fs::path(path).parent_path(), caps);
    } else {
      problems = algebra_problems(j, caps);
    }
  } catch (error const& e) {
    problems.push_back(e.what());
  }
  if (g.json_out) {
    emit({{"file", path}, {"kind", kind}, {"valid", problems.empty()}, {"errors", problems}});
  } else if (problems.empty()) {
    std::cout << "ok\n";
  } else {
    for (auto const& p : problems) {
      std::cout << "error: " << p << "\n";
    }
  }
  return problems.empty() ? 0 : 1;
}

int cmd_congruences(Globals const& g, std::string const& path) {
  auto caps = g.caps();
  auto a = load_algebra(path, caps);
  auto lattice = all_congruences(a, caps);
  if (g.json_out) {
    json list = json::array();
    for (auto const& c : lattice) {
      list.push_back(partition_json(c.partition()));
    }
    emit({{"size", a.size()}, {"count", lattice.size()}, {"congruences", std::move(list)}});
  } else {
    std::cout << lattice.size() << " congruences\n";
    for (auto const& c : lattice) {
      std::cout << "  " << c.partition().to_string() << "\n";
    }
  }
  return 0;
}

int cmd_si(Globals const& g, std::string const& path) {
  auto caps = g.caps();
  auto a = load_algebra(path, caps);
  auto split = a.size() >= 2 ? find_diagonal_splitting(a, caps) : std::nullopt;
  bool fsi = a.size() >= 2 && !split;
  std::optional<Partition> monolith;
  if (fsi) {
    // The least non-diagonal congruence; the lattice is sorted finest first.
    monolith = all_congruences(a, caps)[1].partition();
  }
  if (g.json_out) {
    json out = {{"size", a.size()}, {"subdirectly_irreducible", fsi}};
    if (split) {
      out["splitting_pair"] = {partition_json(split->first), partition_json(split->second)};
    }
    if (monolith) {
      out["monolith"] = partition_json(*monolith);
    }
    emit(out);
  } else if (a.size() < 2) {
    std::cout << "trivial algebra: not subdirectly irreducible\n";
  } else if (split) {
    std::cout << "not subdirectly irreducible: " << split->first.to_string() << " meets "
              << split->second.to_string() << " in the diagonal\n";
  } else {
    std::cout << "subdirectly irreducible, monolith " << monolith->to_string() << "\n";
  }
  return 0;
}

int cmd_family(Globals const& g, std::string const& path) {
  auto caps = g.caps();
  auto f = load_embedding(path, caps);
  auto u = factoring_family(f, caps);
  auto fr = filter_properties(u);
  if (g.json_out) {
    json members = json::array();
    for (auto m : u.masks()) {
      members.push_back(subset_json(u.subset(m)));
    }
    json report = {{"upward_closed", fr.upward_closed},
                   {"intersection_closed", fr.intersection_closed},
                   {"proper", fr.proper},
                   {"ultra", fr.ultra}};
    if (fr.principal_witness) {
      report["principal"] = *fr.principal_witness;
    }
    emit({{"index_count", f.index_count()}, {"members", std::move(members)},
          {"filter", std::move(report)}});
  } else {
    std::cout << u.size() << " of " << (std::size_t{1} << f.index_count())
              << " subsets factor injectively\n";
    for (auto m : u.masks()) {
      std::cout << "  " << m << " " << indices_text(u.subset(m)) << "\n";
    }
    std::cout << "upward closed: " << (fr.upward_closed ? "yes" : "no")
              << ", intersection closed: " << (fr.intersection_closed ? "yes" : "no")
              << ", proper: " << (fr.proper ? "yes" : "no")
              << ", ultra: " << (fr.ultra ? "yes" : "no");
    if (fr.principal_witness) {
      std::cout << ", principal at " << *fr.principal_witness;
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_classify(Globals const& g, std::string const& path) {
  auto caps = g.caps();
  auto f = load_embedding(path, caps);
  auto cls = classify(f, caps);
  if (g.json_out) {
    json out = {{"class", to_string(cls.kind)}};
    out["witness"] = cls.witness ? subset_json(*cls.witness) : json(nullptr);
    emit(out);
  } else {
    std::cout << to_string(cls.kind);
    if (cls.witness) {
      std::cout << " (witness " << cls.witness->mask() << " " << indices_text(*cls.witness) << ")";
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_thin(Globals const& g, std::string const& path, std::string const& out_path) {
  auto caps = g.caps();
  auto f = load_embedding(path, caps);
  ThinResult r = [&] {
    try {
      return thin_to_indecomposable(f, caps);
    } catch (precondition_error const& e) {
      throw input_error(e.what());
    }
  }();
  auto doc = embedding_to_json(r.thinned, caps);
  if (!out_path.empty()) {
    std::ofstream(out_path) << doc.dump(2) << "\n";
  }
  if (g.json_out) {
    emit({{"j0", subset_json(r.j0)}, {"embedding", doc}});
  } else {
    std::cout << "J0 = " << r.j0.mask() << " " << indices_text(r.j0) << ", "
              << r.thinned.index_count() << " coordinates kept, "
              << to_string(classify(r.thinned, caps).kind) << "\n";
    if (!out_path.empty()) {
      std::cout << "wrote " << out_path << "\n";
    }
  }
  return 0;
}

void print_report(PipelineReport const& report) {
  for (std::size_t i = 0; i < report.stages.size(); ++i) {
    auto const& s = report.stages[i];
    std::cout << (s.passed ? "[pass] " : "[FAIL] ") << i + 1 << " " << s.stage << "  "
              << s.witnesses.dump() << "\n";
  }
  if (report.passed()) {
    std::cout << "all " << report.expected_stages << " stages passed\n";
  } else {
    std::cout << "stopped at " << report.failed_stage().value_or("(incomplete)") << "\n";
  }
}

int cmd_pipeline(Globals const& g, std::string const& path, std::uint64_t seed) {
  PipelineConfig config;
  config.caps = g.caps();
  config.seed = seed;
  auto f = load_embedding(path, config.caps);
  auto report = theorem_pipeline(f, config);
  if (g.json_out) {
    emit(report_json(report));
  } else {
    print_report(report);
  }
  return report.passed() ? 0 : 2;
}

int cmd_free(Globals const& g, std::string const& path, std::size_t k,
             std::string const& out_path, bool corollary, std::uint64_t seed) {
  auto caps = g.caps();
  auto a = load_algebra(path, caps);
  if (corollary) {
    PipelineConfig config;
    config.caps = caps;
    config.seed = seed;
    auto report = corollary_harness(a, k, config);
    if (g.json_out) {
      emit(report_json(report));
    } else {
      print_report(report);
    }
    return report.passed() ? 0 : 2;
  }
  auto fr = free_algebra(a, k, caps);
  auto doc = algebra_to_json(fr.free, caps);
  if (!out_path.empty()) {
    fs::path out(out_path);
    fs::path sidecar = out;
    sidecar.replace_extension(".generators.json");
    std::ofstream(out) << doc.dump(2) << "\n";
    std::ofstream(sidecar) << json{{"algebra", out.filename().string()},
                                   {"generators", fr.generators}}
                                  .dump(2)
                           << "\n";
  }
  if (g.json_out) {
    emit({{"size", fr.free.size()},
          {"generators", fr.generators},
          {"functions", fr.functions},
          {"algebra", doc}});
  } else {
    std::cout << "free algebra on " << k << " generator" << (k == 1 ? "" : "s") << ": "
              << fr.free.size() << " elements\n";
    for (std::size_t e = 0; e < fr.functions.size(); ++e) {
      std::cout << "  " << e << " " << json(fr.functions[e]).dump() << "\n";
    }
    std::cout << "generators " << json(fr.generators).dump() << "\n";
    if (!out_path.empty()) {
      std::cout << "wrote " << out_path << "\n";
    }
  }
  return 0;
}

int cmd_random(Globals const& g, std::uint64_t seed, std::size_t count,
               std::string const& suite, std::string const& out_path) {
  auto parsed = parse_suite(suite);
  if (!parsed) {
    throw input_error("unknown suite '" + suite + "' (lemma, props, theorem, all)");
  }
  RunConfig cfg;
  cfg.seed = seed;
  cfg.caps = g.caps();
  cfg.count = count;
  cfg.suite = *parsed;
  cfg.jobs = g.jobs;
  cfg.generator.max_index = std::min(cfg.generator.max_index, cfg.caps.max_index_set);
  auto summary = run_random(cfg);
  if (!out_path.empty() && summary.counterexample) {
    std::ofstream(out_path) << (*summary.counterexample)["embedding"].dump(2) << "\n";
  }
  if (g.json_out) {
    emit(summary_json(summary));
  } else {
    std::cout << "seed " << seed << ", " << count << " instances, suite " << suite << "\n";
    for (auto const& [name, t] : summary.tallies) {
      std::cout << "  " << name << ": " << t.passed << " passed, " << t.failed << " failed, "
                << t.skipped << " skipped\n";
    }
    if (summary.counterexample) {
      auto const& c = *summary.counterexample;
      std::cout << "first counterexample: instance " << c["instance"] << ", check "
                << c["check"].get<std::string>() << ": " << c["detail"].get<std::string>()
                << "\n"
                << c["embedding"].dump() << "\n";
    }
  }
  return summary.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Factoring families, ultrafilters and ultraproducts of finite algebras"};
  app.require_subcommand(1);
  Globals g;
  app.add_flag("--json", g.json_out, "Machine-readable output");
  app.add_option("--jobs", g.jobs, "Concurrent instances for random")->check(CLI::PositiveNumber);
  app.add_option("--max-index-set", g.max_index_set, "Largest index set accepted")
      ->check(CLI::Range(std::size_t{1}, hard_index_set_limit));

  std::string file;
  auto add_file_command = [&](char const* name, char const* help, char const* what) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    sub->add_option("file", file, what)->required();
    return sub;
  };
  auto* check = add_file_command("check", "Validate an algebra or embedding file", "JSON file");
  auto* congruences = add_file_command("congruences", "List all congruences", "Algebra file");
  auto* si = add_file_command("si", "Test finite subdirect irreducibility", "Algebra file");
  auto* family = add_file_command("family", "Compute the factoring family", "Embedding file");
  auto* classify_cmd = add_file_command("classify", "Classify an embedding", "Embedding file");
  auto* thin = add_file_command("thin", "Thin to an indecomposable embedding", "Embedding file");
  auto* pipeline = add_file_command("pipeline", "Run the seven-stage check", "Embedding file");
  auto* free = add_file_command("free", "Free algebra in the generated variety", "Algebra file");

  std::string out_path;
  thin->add_option("--out", out_path, "Write the thinned embedding here");
  std::size_t k = 1;
  bool corollary = false;
  free->add_option("-k", k, "Number of generators")->required()->check(CLI::PositiveNumber);
  free->add_option("--out", out_path, "Write the free algebra here (plus a generators sidecar)");
  free->add_flag("--corollary", corollary, "Thin the power embedding and run the pipeline on it");

  std::uint64_t seed = PipelineConfig{}.seed;
  pipeline->add_option("--seed", seed, "Seed for sampled partitions");
  free->add_option("--seed", seed, "Seed for sampled partitions");

  auto* random = app.add_subcommand("random", "Run seeded property suites");
  random->fallthrough();
  std::size_t count = 100;
  std::string suite = "all";
  random->add_option("--seed", seed, "Run seed");
  random->add_option("--count", count, "Number of instances");
  random->add_option("--suite", suite, "lemma, props, theorem or all");
  random->add_option("--out", out_path, "Write the first counterexample here");

  try {
    app.parse(argc, argv);
  } catch (CLI::CallForHelp const& e) {
    return app.exit(e);
  } catch (CLI::ParseError const& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*check) return cmd_check(g, file);
    if (*congruences) return cmd_congruences(g, file);
    if (*si) return cmd_si(g, file);
    if (*family) return cmd_family(g, file);
    if (*classify_cmd) return cmd_classify(g, file);
    if (*thin) return cmd_thin(g, file, out_path);
    if (*pipeline) return cmd_pipeline(g, file, seed);
    if (*free) return cmd_free(g, file, k, out_path, corollary, seed);
    if (*random) return cmd_random(g, seed, count, suite, out_path);
  } catch (error const& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

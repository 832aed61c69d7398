#pragma once

// Command implementations behind the `exforge` executable. Each command
// writes to the given streams and returns the process exit code:
//   0 success, 1 sieve found absent witnesses, 2 usage or parse error,
//   3 size budget exceeded, 4 numerical failure.

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "exforge/constructions.hpp"
#include "exforge/errors.hpp"
#include "exforge/graph.hpp"
#include "exforge/numtheory.hpp"
#include "exforge/pipeline.hpp"
#include "exforge/spectrum.hpp"

namespace exforge::cli {

enum ExitCode : int {
  kOk = 0,
  kAbsentWitness = 1,
  kUsage = 2,
  kBudget = 3,
  kNumerical = 4,
};

struct RunConfig {
  double tolerance = kDefaultTolerance;
  std::size_t dense_threshold = kDefaultDenseThreshold;
  std::size_t size_budget = kDefaultSizeBudget;
  std::uint64_t seed = kDefaultSeed;
  std::string output_dir; ///< empty: write to stdout

  SolverOptions solver() const { return {tolerance, dense_threshold, seed}; }

  void check() const {
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (dense_threshold == 0) throw std::invalid_argument("dense threshold must be positive");
    if (size_budget == 0) throw std::invalid_argument("size budget must be positive");
  }

  /// Provenance line echoed into every artifact.
  std::string describe() const {
    return "config: tolerance=" + pipeline::format_real(tolerance) +
           " dense_threshold=" + std::to_string(dense_threshold) +
           " budget=" + std::to_string(size_budget) + " seed=" + std::to_string(seed);
  }
};

/// Runs `body`, translating exceptions into exit codes.
inline int guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const budget_error& e) {
    err << "error: " << e.what() << '\n';
    return kBudget;
  } catch (const convergence_error& e) {
    err << "error: " << e.what() << " (residual " << e.residual() << ", iterations "
        << e.iterations() << ")\n";
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

inline std::uint64_t parse_uint(const std::string& s, const std::string& what) {
  if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 18) {
    throw parse_error(what + ": expected a nonnegative integer, got '" + s + "'");
  }
  return std::stoull(s);
}

} // namespace detail

/// Constructor strings with an optional trailing `+k2` / `+k2^s` suffix:
///   complete:M  cycle:M  paley:Q  lps:P,Q  petersen  hypercube:D
///   pipeline:K,STRATEGY,M
struct ConstructorSpec {
  std::string name;
  std::vector<std::string> args;
  unsigned augmentations = 0;
};

inline ConstructorSpec parse_constructor(const std::string& text) {
  static const std::regex suffix(R"(^(.*)\+k2(\^([0-9]+))?$)");
  ConstructorSpec spec;
  std::string body = text;
  std::smatch m;
  while (std::regex_match(body, m, suffix)) {
    spec.augmentations += m[3].matched ? static_cast<unsigned>(detail::parse_uint(m[3].str(), "augmentation count")) : 1U;
    body = m[1].str();
  }
  const auto colon = body.find(':');
  spec.name = body.substr(0, colon);
  if (colon != std::string::npos) spec.args = detail::split(body.substr(colon + 1), ',');
  return spec;
}

struct Constructed {
  RegularGraph graph;
  std::vector<std::string> provenance;
};

inline Constructed construct(const std::string& text, const RunConfig& cfg) {
  const ConstructorSpec spec = parse_constructor(text);
  auto need = [&](std::size_t count) {
    if (spec.args.size() != count) {
      throw parse_error("constructor '" + spec.name + "' takes " + std::to_string(count) +
                        " parameter(s), got " + std::to_string(spec.args.size()));
    }
  };
  auto arg = [&](std::size_t i) { return detail::parse_uint(spec.args[i], spec.name + " parameter"); };

  std::optional<RegularGraph> g;
  std::vector<std::string> provenance{"construct: " + text};
  if (spec.name == "complete") {
    need(1);
    check_budget(arg(0), cfg.size_budget, "complete graph");
    g = constructions::complete_graph(arg(0));
  } else if (spec.name == "cycle") {
    need(1);
    check_budget(arg(0), cfg.size_budget, "cycle graph");
    g = constructions::cycle_graph(arg(0));
  } else if (spec.name == "paley") {
    need(1);
    check_budget(arg(0), cfg.size_budget, "paley graph");
    g = constructions::paley_graph(arg(0));
  } else if (spec.name == "hypercube") {
    need(1);
    g = constructions::hypercube(static_cast<unsigned>(arg(0)));
    check_budget(g->vertex_count(), cfg.size_budget, "hypercube");
  } else if (spec.name == "petersen") {
    need(0);
    g = constructions::petersen_graph();
  } else if (spec.name == "lps") {
    need(2);
    const auto params = constructions::make_lps_parameters(arg(0), arg(1));
    g = constructions::lps_graph(params, cfg.size_budget);
    provenance.push_back(std::string("lps kind: ") + constructions::to_string(params.kind));
  } else if (spec.name == "pipeline") {
    need(3);
    const auto plan = pipeline::plan(static_cast<unsigned>(arg(0)),
                                     pipeline::parse_strategy(spec.args[1]), cfg.size_budget);
    const std::size_t member = arg(2);
    g = pipeline::build(plan, member, cfg.size_budget);
    provenance.push_back("plan: k=" + std::to_string(plan.k) + " q_base=" +
                         std::to_string(plan.q_base) + " steps=" + std::to_string(plan.steps) +
                         " member=" + std::to_string(member));
  } else {
    throw parse_error("unknown constructor '" + spec.name + "'");
  }
  RegularGraph out = augment_iterated(*g, spec.augmentations, cfg.size_budget);
  return {std::move(out), std::move(provenance)};
}

/// Recovers the base graph and augmentation count a graph's label claims,
/// verifying the claim by rebuilding. Returns nothing for unknown or
/// inconsistent provenance.
struct Provenance {
  RegularGraph base;
  unsigned steps;
};

inline std::optional<Provenance> recover_provenance(const RegularGraph& g, const RunConfig& cfg) {
  if (g.label().empty()) return std::nullopt;
  auto [base_label, steps] = exforge::detail::split_augment_label(g.label());
  if (steps == 0) {
    // A bare constructor label: the graph is its own base once the label checks out.
    try {
      if (construct(base_label, cfg).graph == g) return Provenance{g, 0};
    } catch (const std::exception&) {
    }
    return std::nullopt;
  }
  try {
    RegularGraph base = construct(base_label, cfg).graph;
    if (augment_iterated(base, steps, cfg.size_budget) == g) return Provenance{std::move(base), steps};
  } catch (const std::exception&) {
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Commands

inline int cmd_sieve(std::uint64_t lo, std::uint64_t hi, std::uint64_t stride, const RunConfig& cfg,
                     std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.check();
    if (lo < 16 || lo > hi || stride == 0) {
      throw std::invalid_argument("sieve: need 16 <= lo <= hi and stride >= 1");
    }
    const auto result = numtheory::wu_scan(lo, hi, stride);
    std::ostringstream body;
    for (const auto& w : result.witnesses) {
      if (w.q) {
        body << w.x << ' ' << *w.q << ' ' << *w.gap() << '\n';
      } else {
        body << w.x << " - -\n";
      }
    }
    body << "# records=" << result.witnesses.size() << " absent=" << result.absent
         << " exponent=101/232\n";
    if (cfg.output_dir.empty()) {
      out << body.str();
    } else {
      const auto path = std::filesystem::path(cfg.output_dir) /
                        ("sieve_" + std::to_string(lo) + "_" + std::to_string(hi) + "_" +
                         std::to_string(stride) + ".txt");
      std::filesystem::create_directories(cfg.output_dir);
      std::ofstream(path) << body.str();
      out << path.string() << '\n';
    }
    return result.absent == 0 ? kOk : kAbsentWitness;
  });
}

inline int cmd_construct(const std::string& spec, const std::string& path, const RunConfig& cfg,
                         std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.check();
    const Constructed c = construct(spec, cfg);
    auto comments = c.provenance;
    comments.push_back(cfg.describe());
    std::ofstream file(path, std::ios::binary);
    if (!file) throw std::invalid_argument("cannot open '" + path + "' for writing");
    write_graph(file, c.graph, comments);
    out << "wrote " << c.graph.vertex_count() << " vertices, degree " << c.graph.degree() << " to "
        << path << '\n';
    return kOk;
  });
}

inline RegularGraph load_graph(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw parse_error("cannot open graph file '" + path + "'");
  return read_graph(file);
}

inline int cmd_certify(const std::string& path, const RunConfig& cfg, std::ostream& out,
                       std::ostream& err) {
  return guarded(err, [&] {
    cfg.check();
    const RegularGraph g = load_graph(path);
    const auto prov = recover_provenance(g, cfg);
    pipeline::CertificationReport report;
    if (prov && prov->steps == 0) {
      report = pipeline::certify_unaugmented(g, cfg.solver());
    } else if (prov) {
      const double base_l2 = leading_spectrum(prov->base, cfg.solver()).lambda2();
      report = pipeline::certify(g, prov->steps, base_l2, cfg.solver());
    } else {
      report = pipeline::certify(g, 0, std::nullopt, cfg.solver());
    }
    std::vector<std::string> preamble{cfg.describe(),
                                      std::string("provenance: ") + (prov ? "verified" : "unknown")};
    std::ostringstream doc;
    pipeline::write_report(doc, report, preamble);
    if (cfg.output_dir.empty()) {
      out << doc.str();
    } else {
      std::filesystem::create_directories(cfg.output_dir);
      const auto dest = std::filesystem::path(cfg.output_dir) /
                        (std::filesystem::path(path).stem().string() + ".report");
      std::ofstream(dest) << doc.str();
      out << dest.string() << '\n';
    }
    return kOk;
  });
}

inline int cmd_survey(unsigned k_lo, unsigned k_hi, const std::string& strategy,
                      const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    cfg.check();
    const auto strat = pipeline::parse_strategy(strategy);
    const auto rows = pipeline::survey(k_lo, k_hi, strat, cfg.size_budget, cfg.solver());
    std::ostringstream csv;
    pipeline::write_survey_csv(csv, rows);
    if (cfg.output_dir.empty()) {
      out << csv.str();
    } else {
      std::filesystem::create_directories(cfg.output_dir);
      const auto dest = std::filesystem::path(cfg.output_dir) /
                        ("survey_" + std::to_string(k_lo) + "_" + std::to_string(k_hi) + "_" +
                         pipeline::to_string(strat) + ".csv");
      std::ofstream(dest) << csv.str();
      out << dest.string() << '\n';
    }
    return kOk;
  });
}

/// One eigenvalue per line, 17 significant digits; dense below the
/// threshold, otherwise the two largest.
inline int cmd_spectrum(const std::string& path, const RunConfig& cfg, std::ostream& out,
                        std::ostream& err) {
  return guarded(err, [&] {
    cfg.check();
    const RegularGraph g = load_graph(path);
    const Spectrum s = g.vertex_count() <= cfg.dense_threshold
                           ? spectrum_dense(g, cfg.tolerance, cfg.dense_threshold)
                           : top2_eigenvalues(g, cfg.tolerance, cfg.seed);
    out << "# method=" << to_string(s.method) << " residual=" << pipeline::format_real(s.residual)
        << '\n';
    for (double v : s.values) out << pipeline::format_real(v) << '\n';
    return kOk;
  });
}

} // namespace exforge::cli

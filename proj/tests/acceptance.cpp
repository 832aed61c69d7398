// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "exforge/exforge.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
namespace nt = exforge::numtheory;
namespace c = exforge::constructions;
namespace pl = exforge::pipeline;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

std::vector<double> dense_values(const exforge::RegularGraph& g) {
  return exforge::spectrum_dense(g, exforge::kDefaultTolerance, 1u << 14).values;
}

Outcome product_law() {
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<std::size_t> half(2, 32);
  std::uniform_int_distribution<unsigned> degree(1, 8);
  const auto k2 = c::complete_graph(2);
  const auto c3 = c::cycle_graph(3);
  double worst = 0.0;
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 * half(rng);
    const unsigned k = std::min<unsigned>(degree(rng), static_cast<unsigned>(n - 1));
    const auto x = oracle::random_regular(n, k, rng);
    const auto sx = dense_values(x);
    for (const auto* y : {&k2, &c3}) {
      const auto expected = exforge::sum_spectrum(sx, dense_values(*y));
      const auto got = dense_values(exforge::cartesian_product(x, *y));
      const double tol = 1e-8 * (x.degree() + y->degree());
      if (!exforge::spectra_match(got, expected, tol)) {
        return {false, "trial " + std::to_string(trial) + " n=" + std::to_string(n) +
                           " k=" + std::to_string(k) + " mismatch"};
      }
      for (std::size_t i = 0; i < got.size(); ++i) worst = std::max(worst, std::abs(got[i] - expected[i]));
      ++checked;
    }
  }
  return {true, std::to_string(checked) + " products, max deviation " + fmt(worst)};
}

Outcome prism_exhibit() {
  const auto g = exforge::augment_with_k2(c::complete_graph(4));
  const std::vector<double> expected{4, 2, 0, 0, 0, -2, -2, -2};
  const auto got = dense_values(g);
  if (!exforge::spectra_match(got, expected, 1e-9)) return {false, "spectrum mismatch"};
  const auto r = pl::certify(g, 1, -1.0);
  if (r.theorem4_iterated_claim_holds != false) return {false, "theorem4 claim not reported false"};
  if (!r.ramanujan_holds) return {false, "ramanujan flag false"};
  return {true, "lambda2=" + fmt(r.lambda2) + " claimed<=" + fmt(*r.theorem4_claimed_bound)};
}

double lps_5_13_dense_lambda2 = std::nan("");

Outcome lps_base() {
  const auto g = c::lps_graph(c::make_lps_parameters(5, 13));
  if (g.vertex_count() != 2184) return {false, "vertex count " + std::to_string(g.vertex_count())};
  if (g.degree() != 6) return {false, "degree " + std::to_string(g.degree())};
  if (!exforge::is_connected(g)) return {false, "disconnected"};
  if (!exforge::is_bipartite(g)) return {false, "not bipartite"};

  const auto t0 = std::chrono::steady_clock::now();
  const auto top2 = exforge::top2_eigenvalues(g);
  const double iter_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (iter_s >= 10.0) return {false, "iterative path took " + fmt(iter_s) + " s"};

  const auto t1 = std::chrono::steady_clock::now();
  const auto dense = exforge::spectrum_dense(g);
  const double dense_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t1).count();
  if (dense_s >= 300.0) return {false, "dense path took " + fmt(dense_s) + " s"};

  const double bound = 2.0 * std::sqrt(5.0) + 1e-6;
  lps_5_13_dense_lambda2 = dense.lambda2();
  if (!(dense.lambda2() <= bound)) return {false, "dense lambda2 " + fmt(dense.lambda2())};
  if (std::abs(top2.lambda2() - dense.lambda2()) > 1e-8) {
    return {false, "iterative lambda2 " + fmt(top2.lambda2()) + " disagrees"};
  }
  return {true, "lambda2=" + fmt(dense.lambda2()) + " dense " + fmt(dense_s) + " s, iterative " +
                    fmt(iter_s) + " s"};
}

Outcome paley() {
  std::string detail;
  for (unsigned q : {13u, 17u}) {
    const double expected = (-1.0 + std::sqrt(static_cast<double>(q))) / 2.0;
    const double got = exforge::spectrum_dense(c::paley_graph(q)).lambda2();
    if (std::abs(got - expected) > 1e-8) return {false, "paley(" + std::to_string(q) + ") " + fmt(got)};
    detail += "paley(" + std::to_string(q) + ")=" + fmt(got) + " ";
  }
  return {true, detail};
}

Outcome wu_scan_range() {
  const auto r = nt::wu_scan(16, 1'000'000, 1);
  if (r.witnesses.size() != 1'000'000 - 15) return {false, "record count " + std::to_string(r.witnesses.size())};
  if (r.absent != 0) return {false, std::to_string(r.absent) + " absent witnesses"};
  return {true, std::to_string(r.witnesses.size()) + " x checked, 0 absent"};
}

Outcome p2_selection() {
  if (nt::find_p2_at_or_below(100).q != 97) return {false, "100 -> " + std::to_string(nt::find_p2_at_or_below(100).q)};
  if (nt::find_p2_at_or_below(50).q != 49) return {false, "50 -> " + std::to_string(nt::find_p2_at_or_below(50).q)};
  std::mt19937_64 rng(977);
  std::uniform_int_distribution<std::uint64_t> dist(2, 1'000'000'000);
  for (int i = 0; i < 1000; ++i) {
    const auto x = dist(rng);
    const auto got = nt::find_p2_at_or_below(x).q;
    const auto want = oracle::downward_scan_p2(x);
    if (got != want) return {false, std::to_string(x) + " -> " + std::to_string(got) + ", expected " + std::to_string(want)};
  }
  return {true, "1000 random x agree; 100->97, 50->49"};
}

Outcome pipeline_k8() {
  const auto p = pl::plan(8, pl::Strategy::lps);
  const auto g = pl::build(p, 1);
  if (g.vertex_count() != 8736) return {false, "vertex count " + std::to_string(g.vertex_count())};
  if (g.degree() != 8) return {false, "degree " + std::to_string(g.degree())};
  double base = lps_5_13_dense_lambda2;
  if (std::isnan(base)) base = exforge::spectrum_dense(pl::build_base(p, 1)).lambda2();
  const auto r = pl::certify(g, p, base);
  const double deviation = std::abs(r.lambda2 - (base + 2.0));
  if (deviation > 1e-6 * 8) return {false, "lambda2 " + fmt(r.lambda2) + " vs base+2 " + fmt(base + 2.0)};
  const double expected_bound = 4.0 * std::sqrt(7.0) + std::pow(8.0, 101.0 / 232.0);
  if (std::abs(r.paper_bound - expected_bound) > 1e-12) return {false, "paper_bound " + fmt(r.paper_bound)};
  if (std::abs(r.paper_bound - 13.06) > 0.005) return {false, "paper_bound " + fmt(r.paper_bound) + " not ~13.06"};
  if (!r.theorem2_bound_holds) return {false, "theorem2 flag false"};
  return {true, "lambda2=" + fmt(r.lambda2) + " (base+2 within " + fmt(deviation) + "), paper_bound=" +
                    fmt(r.paper_bound)};
}

Outcome four_squares_counts() {
  int primes = 0;
  for (std::int64_t p = 5; p <= 10'000; p += 4) {
    if (!oracle::trial_is_prime(static_cast<std::uint64_t>(p))) continue;
    const auto sols = nt::four_squares(static_cast<std::uint64_t>(p));
    if (static_cast<std::int64_t>(sols.size()) != p + 1) {
      return {false, "p=" + std::to_string(p) + " gave " + std::to_string(sols.size())};
    }
    for (const auto& a : sols) {
      if (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + a[3] * a[3] != p || a[0] <= 0 || a[0] % 2 == 0) {
        return {false, "p=" + std::to_string(p) + " invalid tuple"};
      }
    }
    ++primes;
  }
  if (oracle::exhaustive_four_squares(1009).size() != nt::four_squares(1009).size()) {
    return {false, "exhaustive count disagrees at 1009"};
  }
  return {true, std::to_string(primes) + " primes"};
}

Outcome bound_arithmetic() {
  const double pizer = c::pizer_bound(7);
  if (std::abs(pizer - 4.0 * std::sqrt(7.0)) > 1e-12) return {false, "pizer_bound(7)=" + fmt(pizer)};
  const double expected = 4.0 * std::sqrt(99.0) + std::exp(std::log(100.0) * 101.0 / 232.0);
  const double got = pl::paper_bound(100);
  if (std::abs(got - expected) > 1e-9) return {false, "paper_bound(100)=" + fmt(got)};
  return {true, "pizer_bound(7)=" + fmt(pizer) + " paper_bound(100)=" + fmt(got)};
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / ("exforge_acceptance_" + std::to_string(::getpid()));
  std::vector<std::string> graphs, reports;
  for (int run = 0; run < 2; ++run) {
    const fs::path dir = root / std::to_string(run);
    fs::create_directories(dir);
    const std::string bin = EXFORGE_CLI_PATH;
    const std::string graph = (dir / "pipeline8.g").string();
    const std::string report = (dir / "pipeline8.report").string();
    const std::string construct = bin + " construct pipeline:8,lps,1 " + graph + " > /dev/null";
    const std::string certify = bin + " certify " + graph + " > " + report;
    if (std::system(construct.c_str()) != 0) return {false, "construct failed on run " + std::to_string(run)};
    if (std::system(certify.c_str()) != 0) return {false, "certify failed on run " + std::to_string(run)};
    graphs.push_back(slurp(graph));
    reports.push_back(slurp(report));
  }
  fs::remove_all(root);
  if (graphs[0].empty() || reports[0].empty()) return {false, "empty output"};
  if (graphs[0] != graphs[1]) return {false, "graph files differ"};
  if (reports[0] != reports[1]) return {false, "reports differ"};
  return {true, "graph " + std::to_string(graphs[0].size()) + " bytes, report " +
                    std::to_string(reports[0].size()) + " bytes, identical"};
}

} // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "product spectrum law", 60, product_law},
      {2, "K4 x K2 spectrum and flags", 1, prism_exhibit},
      {3, "lps(5,13) base graph", 300, lps_base},
      {4, "Paley cross-check", 1, paley},
      {5, "almost-prime interval scan to 1e6", 300, wu_scan_range},
      {6, "P2 selection", 60, p2_selection},
      {7, "pipeline at k=8", 600, pipeline_k8},
      {8, "four-squares counts", 60, four_squares_counts},
      {9, "bound arithmetic", 1, bound_arithmetic},
      {10, "determinism", 600, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o{false, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (o.pass && secs > c.time_limit_s) {
      o = {false, o.detail + "; over time limit of " + fmt(c.time_limit_s) + " s"};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %2d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}

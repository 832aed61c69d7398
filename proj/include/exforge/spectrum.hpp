#pragma once

// Adjacency spectra: full dense diagonalization for small graphs and a
// restarted Lanczos iteration for the two largest eigenvalues of large ones.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "exforge/errors.hpp"
#include "exforge/graph.hpp"

namespace exforge {

enum class SpectrumMethod { dense, iterative_top2 };

inline const char* to_string(SpectrumMethod m) {
  return m == SpectrumMethod::dense ? "dense" : "iterative-top2";
}

/// Eigenvalues sorted descending, with the residual the solver achieved.
struct Spectrum {
  std::vector<double> values;
  SpectrumMethod method = SpectrumMethod::dense;
  double residual = 0.0;  ///< max ||A v - lambda v||_2 over reported pairs
  double tolerance = 0.0; ///< requested bound, relative to the degree

  double lambda1() const { return values.at(0); }
  double lambda2() const { return values.at(1); }
};

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::size_t kDefaultDenseThreshold = 4096;
inline constexpr std::uint64_t kDefaultSeed = 0xDA7A;

struct SolverOptions {
  double tolerance = kDefaultTolerance;
  std::size_t dense_threshold = kDefaultDenseThreshold;
  std::uint64_t seed = kDefaultSeed;
};

inline Eigen::MatrixXd dense_adjacency(const RegularGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.vertex_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index u = 0; u < n; ++u) {
    for (const auto& e : g.neighbors(static_cast<vertex_t>(u))) a(u, e.vertex) = e.multiplicity;
  }
  return a;
}

/// All n eigenvalues. Every eigenpair is checked against tolerance * k.
inline Spectrum spectrum_dense(const RegularGraph& g, double tolerance = kDefaultTolerance,
                               std::size_t dense_threshold = kDefaultDenseThreshold) {
  if (g.vertex_count() > dense_threshold) {
    throw std::invalid_argument("spectrum_dense: " + std::to_string(g.vertex_count()) +
                                " vertices exceed the dense threshold " +
                                std::to_string(dense_threshold));
  }
  const Eigen::MatrixXd a = dense_adjacency(g);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw convergence_error("spectrum_dense: tridiagonal QR did not converge", -1.0, 0);
  }
  const Eigen::VectorXd& evals = solver.eigenvalues();
  const Eigen::MatrixXd& evecs = solver.eigenvectors();
  const Eigen::MatrixXd resid = a * evecs - evecs * evals.asDiagonal();
  const double worst = resid.colwise().norm().maxCoeff();
  const double bound = tolerance * g.degree();
  if (!(worst <= bound)) {
    throw convergence_error("spectrum_dense: residual " + std::to_string(worst) +
                                " exceeds " + std::to_string(bound),
                            worst, 0);
  }
  Spectrum s;
  s.method = SpectrumMethod::dense;
  s.residual = worst;
  s.tolerance = tolerance;
  s.values.assign(evals.data(), evals.data() + evals.size());
  std::sort(s.values.begin(), s.values.end(), std::greater<>());
  return s;
}

/// Largest two eigenvalues by thick-restart Lanczos with full
/// reorthogonalization. Deterministic for a fixed seed.
inline Spectrum top2_eigenvalues(const RegularGraph& g, double tolerance = kDefaultTolerance,
                                 std::uint64_t seed = kDefaultSeed) {
  using Eigen::Index;
  using Eigen::MatrixXd;
  using Eigen::VectorXd;

  const auto n = static_cast<Index>(g.vertex_count());
  const double target = tolerance * g.degree();
  const Index max_basis = std::min<Index>(n, 96);
  const Index keep = std::min<Index>(max_basis / 2, 24);
  constexpr std::size_t kMaxRestarts = 2000;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  auto random_vector = [&] {
    VectorXd v(n);
    for (Index i = 0; i < n; ++i) v[i] = unit(rng);
    return v;
  };

  MatrixXd basis(n, max_basis + 1);
  MatrixXd projected = MatrixXd::Zero(max_basis, max_basis);
  Index size = 0; // orthonormal columns in use

  // Orthogonalize w against basis columns [0, size) twice; returns coefficients.
  auto orthogonalize = [&](VectorXd& w) {
    VectorXd coeffs = VectorXd::Zero(size);
    for (int pass = 0; pass < 2; ++pass) {
      const VectorXd h = basis.leftCols(size).transpose() * w;
      w.noalias() -= basis.leftCols(size) * h;
      coeffs += h;
    }
    return coeffs;
  };

  auto fresh_direction = [&] {
    for (int attempt = 0; attempt < 8; ++attempt) {
      VectorXd w = random_vector();
      orthogonalize(w);
      const double norm = w.norm();
      if (norm > 1e-8) return VectorXd(w / norm);
    }
    throw convergence_error("top2_eigenvalues: could not extend the Krylov basis", -1.0, 0);
  };

  {
    VectorXd v0 = random_vector();
    basis.col(0) = v0 / v0.norm();
  }

  VectorXd w(n);
  double last_gap = 0.0;
  for (std::size_t restart = 0; restart <= kMaxRestarts; ++restart) {
    // Expand the basis up to max_basis columns.
    while (size < max_basis) {
      const Index next = size;
      g.apply({basis.col(next).data(), static_cast<std::size_t>(n)},
              {w.data(), static_cast<std::size_t>(n)});
      size = next + 1;
      const VectorXd h = orthogonalize(w);
      for (Index i = 0; i < size; ++i) {
        projected(i, next) = h[i];
        projected(next, i) = h[i];
      }
      if (size == max_basis) break;
      const double beta = w.norm();
      if (beta > 1e-13 * g.degree()) {
        basis.col(size) = w / beta;
      } else if (size < n) {
        basis.col(size) = fresh_direction();
      }
    }

    const double beta = (size < n) ? w.norm() : 0.0;
    Eigen::SelfAdjointEigenSolver<MatrixXd> ritz(projected.topLeftCorner(size, size));
    const VectorXd& theta = ritz.eigenvalues();      // ascending
    const MatrixXd& coords = ritz.eigenvectors();
    const Index top = size - 1;
    const Index second = size - 2;
    const double r1 = std::abs(beta * coords(size - 1, top));
    const double r2 = std::abs(beta * coords(size - 1, second));
    last_gap = theta[top] - theta[second];

    if (std::max(r1, r2) <= target || size == n) {
      Spectrum s;
      s.method = SpectrumMethod::iterative_top2;
      s.values = {theta[top], theta[second]};
      s.residual = std::max(r1, r2);
      s.tolerance = tolerance;
      return s;
    }

    // Thick restart: keep the `keep` largest Ritz vectors plus the residual direction.
    const MatrixXd kept_coords = coords.rightCols(keep);
    const MatrixXd kept = basis.leftCols(size) * kept_coords;
    basis.leftCols(keep) = kept;
    projected.setZero();
    for (Index i = 0; i < keep; ++i) projected(i, i) = theta[size - keep + i];
    size = keep;
    VectorXd residual_dir = w / beta;
    orthogonalize(residual_dir);
    residual_dir.normalize();
    basis.col(size) = residual_dir;
  }
  throw convergence_error("top2_eigenvalues: no convergence after " +
                              std::to_string(kMaxRestarts) + " restarts (last Ritz gap " +
                              std::to_string(last_gap) + ")",
                          -1.0, kMaxRestarts);
}

/// Dense path up to the threshold, iterative beyond it.
inline Spectrum leading_spectrum(const RegularGraph& g, const SolverOptions& opts = {}) {
  if (g.vertex_count() <= opts.dense_threshold) {
    return spectrum_dense(g, opts.tolerance, opts.dense_threshold);
  }
  return top2_eigenvalues(g, opts.tolerance, opts.seed);
}

inline double ramanujan_bound(unsigned k) { return 2.0 * std::sqrt(static_cast<double>(k) - 1.0); }

struct RamanujanCheck {
  bool holds;
  double margin; ///< 2 sqrt(k-1) - lambda2
  double lambda2;
};

inline RamanujanCheck ramanujan_check(const RegularGraph& g, const SolverOptions& opts = {}) {
  if (!is_connected(g)) throw std::invalid_argument("ramanujan_check: graph is not connected");
  const double l2 = leading_spectrum(g, opts).lambda2();
  const double margin = ramanujan_bound(g.degree()) - l2;
  return {margin >= -opts.tolerance, margin, l2};
}

inline double spectral_gap(const RegularGraph& g, const SolverOptions& opts = {}) {
  if (!is_connected(g)) throw std::invalid_argument("spectral_gap: graph is not connected");
  const Spectrum s = leading_spectrum(g, opts);
  return s.lambda1() - s.lambda2();
}

/// Multiset of pairwise sums, sorted descending.
inline std::vector<double> sum_spectrum(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> out;
  out.reserve(a.size() * b.size());
  for (double x : a) {
    for (double y : b) out.push_back(x + y);
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

/// Sorted-list multiset comparison.
inline bool spectra_match(std::vector<double> a, std::vector<double> b, double tolerance) {
  if (a.size() != b.size()) return false;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(std::abs(a[i] - b[i]) <= tolerance)) return false;
  }
  return true;
}

} // namespace exforge

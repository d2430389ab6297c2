#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "conformal/certify.hpp"
#include "conformal/error.hpp"
#include "conformal/graph.hpp"
#include "conformal/spectral.hpp"
#include "conformal/structure.hpp"

namespace conformal {

/// Normalized weights that beat the unweighted eigenvalue on one side.
struct Witness {
  Target side = Target::kLambda2;
  WeightVector weights;
  double achieved = 0;
  double baseline = 0;
  double margin = 0;  // positive means improvement on either side
  int iterations = 0;
  std::uint64_t seed = 0;
};

struct DisproveOptions {
  int iterations = 3000;
  int restarts = 5;
  std::uint64_t seed = 0;
  int patience = 500;  // stop a restart after this many iterations without improvement
  bool polish = true;  // orbit-averaged line-search finish when there are at most 4 edge orbits
};

struct AscentResult {
  std::optional<Witness> witness;
  double best = 0;
  double baseline = 0;
  WeightVector best_weights;
  int iterations = 0;
};

/// Euclidean projection onto {w >= 0, Σw = total}.
inline std::vector<double> project_to_simplex(const std::vector<double>& v, double total) {
  std::vector<double> u = v;
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0, theta = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    cumulative += u[i];
    const double t = (cumulative - total) / static_cast<double>(i + 1);
    if (u[i] - t > 0) theta = t;
  }
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::max(0.0, v[i] - theta);
  return out;
}

namespace detail {

// Unit-weight Laplacian of each edge orbit.
inline std::vector<Matrix> orbit_laplacians(const Graph& g, const EdgeOrbitPartition& orbits) {
  std::vector<Matrix> parts;
  for (const auto& orbit : orbits.orbits) {
    std::vector<double> w(g.m(), 0.0);
    for (auto e : orbit) w[e] = 1.0;
    parts.push_back(laplacian(g, WeightVector{w, false}));
  }
  return parts;
}

// Larger is better for both sides. x holds orbit fractions summing to 1.
inline double orbit_score(const Graph& g, const EdgeOrbitPartition& orbits, const std::vector<Matrix>& parts,
                          Target side, const std::vector<double>& x) {
  Matrix L = Matrix::Zero(g.n(), g.n());
  for (std::size_t i = 0; i < parts.size(); ++i)
    L += (x[i] * static_cast<double>(g.m()) / static_cast<double>(orbits.orbits[i].size())) * parts[i];
  const auto vals = jacobi_eigen(L).values;
  return side == Target::kLambda2 ? vals(1) : -vals(vals.size() - 1);
}

// Golden-section transfers of mass between orbit pairs; window <= 0 lets a transfer
// drain the whole donor orbit.
inline double refine_orbit_fractions(const Graph& g, const EdgeOrbitPartition& orbits, const std::vector<Matrix>& parts,
                                     Target side, std::vector<double>& x, double window) {
  const std::size_t k = x.size();
  double fx = orbit_score(g, orbits, parts, side, x);
  const double gr = (std::sqrt(5.0) - 1) / 2;
  for (int round = 0; round < 60; ++round) {
    bool moved = false;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) {
        if (i == j) continue;
        // Move δ from orbit j to orbit i.
        const double hi = window > 0 ? std::min(x[j], window) : x[j];
        if (hi <= 1e-15) continue;
        auto at = [&](double d) {
          auto y = x;
          y[i] += d;
          y[j] -= d;
          return orbit_score(g, orbits, parts, side, y);
        };
        double a = 0, b = hi;
        double c1 = b - gr * (b - a), c2 = a + gr * (b - a);
        double f1 = at(c1), f2 = at(c2);
        for (int it = 0; it < 100 && b - a > 1e-13; ++it) {
          if (f1 < f2) {
            a = c1; c1 = c2; f1 = f2; c2 = a + gr * (b - a); f2 = at(c2);
          } else {
            b = c2; c2 = c1; f2 = f1; c1 = b - gr * (b - a); f1 = at(c1);
          }
        }
        for (double d : {0.5 * (a + b), hi}) {
          const double fd = at(d);
          if (fd > fx + 1e-14) {
            x[i] += d;
            x[j] -= d;
            fx = fd;
            moved = true;
            break;
          }
        }
      }
    if (!moved) break;
  }
  return fx;
}

// Objective value (sign-adjusted so larger is better) and its supergradient.
inline double side_value(const EigenDecomposition& ed, Target side) {
  return side == Target::kLambda2 ? ed.values(1) : -ed.values(ed.values.size() - 1);
}

inline AscentResult ascend(const Graph& g, Target side, const DisproveOptions& opts) {
  const std::size_t m = g.m();
  const double total = static_cast<double>(m);
  const double step0 = total / static_cast<double>(g.max_degree());
  const Matrix L1 = laplacian(g);
  AscentResult res;
  {
    const auto ed = jacobi_eigen(L1);
    res.baseline = side == Target::kLambda2 ? ed.values(1) : ed.values(ed.values.size() - 1);
  }
  double best = -1e300;
  std::vector<double> best_w(m, 1.0);
  std::uint64_t best_seed = 0;
  int best_iter = 0;

  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    const std::uint64_t seed = opts.seed * 1000003ULL + static_cast<std::uint64_t>(restart);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> w(m, 1.0);
    if (restart > 0) {
      for (auto& x : w) x = unit(rng);
      const double s = std::accumulate(w.begin(), w.end(), 0.0);
      for (auto& x : w) x *= total / s;
    }
    double local = -1e300;
    int stale = 0;
    for (int it = 1; it <= opts.iterations; ++it) {
      ++res.iterations;
      const auto ed = jacobi_eigen(laplacian(g, WeightVector{w, false}));
      const double value = side_value(ed, side);
      if (value > local + 1e-13) {
        local = value;
        stale = 0;
      } else if (++stale >= opts.patience) {
        break;
      }
      if (value > best) {
        best = value;
        best_w = w;
        best_seed = seed;
        best_iter = it;
      }
      const Vector f = side == Target::kLambda2 ? Vector(ed.vectors.col(1)) : Vector(ed.vectors.col(ed.vectors.cols() - 1));
      const double sign = side == Target::kLambda2 ? 1.0 : -1.0;
      const double step = step0 / std::sqrt(static_cast<double>(it));
      for (std::size_t k = 0; k < m; ++k) {
        const auto [u, v] = g.edges()[k];
        const double d = f(u) - f(v);
        w[k] += step * sign * d * d;
      }
      w = project_to_simplex(w, total);
    }
  }

  if (opts.polish) {
    // λ2 is concave and invariant under automorphisms, so averaging over edge orbits
    // cannot lose, and the optimum is attained on orbit-constant weights.
    try {
      const auto orbits = edge_orbits(g, automorphism_generators(g));
      if (orbits.count() <= 4) {
        const auto parts = orbit_laplacians(g, orbits);
        std::vector<double> x(orbits.count(), 0.0);
        for (std::size_t i = 0; i < orbits.count(); ++i)
          for (auto e : orbits.orbits[i]) x[i] += best_w[e] / total;
        const double fx = refine_orbit_fractions(g, orbits, parts, side, x, 0.0);
        if (fx > best) {
          best = fx;
          for (std::size_t i = 0; i < orbits.count(); ++i)
            for (auto e : orbits.orbits[i]) best_w[e] = x[i] * total / static_cast<double>(orbits.orbits[i].size());
        }
      }
    } catch (const Error&) {
      // automorphism search over its cap: keep the ascent result
    }
  }

  WeightVector bw = normalize_weights(WeightVector{best_w, false}, m);
  const auto ed = jacobi_eigen(laplacian(g, bw));
  res.best = side == Target::kLambda2 ? ed.values(1) : ed.values(ed.values.size() - 1);
  res.best_weights = bw;
  const bool improved = side == Target::kLambda2 ? res.best > res.baseline + 1e-6 * res.baseline
                                                 : res.best < res.baseline - 1e-6 * res.baseline;
  if (improved) {
    Witness w;
    w.side = side;
    w.weights = bw;
    w.achieved = res.best;
    w.baseline = res.baseline;
    w.margin = side == Target::kLambda2 ? res.best - res.baseline : res.baseline - res.best;
    w.iterations = best_iter;
    w.seed = best_seed;
    res.witness = std::move(w);
  }
  return res;
}

}  // namespace detail

/// Projected supergradient ascent of λ2(w) over normalized weights.
inline AscentResult maximize_lambda2(const Graph& g, const DisproveOptions& opts = {}) {
  return detail::ascend(g, Target::kLambda2, opts);
}

/// Projected subgradient descent of λn(w) over normalized weights.
inline AscentResult minimize_lambdaN(const Graph& g, const DisproveOptions& opts = {}) {
  return detail::ascend(g, Target::kLambdaN, opts);
}

/// True when w is a genuine witness: nonnegative, sums to |E|, and a fresh
/// eigendecomposition reproduces the claimed improvement.
inline bool recheck_witness(const Graph& g, const Witness& w) {
  check_weights(g, w.weights);
  const double total = w.weights.sum();
  if (std::abs(total - static_cast<double>(g.m())) > 1e-12 * static_cast<double>(g.m())) return false;
  const auto ed = jacobi_eigen(laplacian(g, w.weights));
  const double value = w.side == Target::kLambda2 ? ed.values(1) : ed.values(ed.values.size() - 1);
  if (std::abs(value - w.achieved) > 1e-9) return false;
  return w.side == Target::kLambda2 ? value > w.baseline : value < w.baseline;
}

/// Eigenvalues λ_j = 4 - (2-ε)cos(2πj/n) - (2+ε)cos(4πj/n), j = 0..n-1, of C_n({1,2})
/// with weight 1 - ε/2 on step-1 edges and 1 + ε/2 on step-2 edges.
inline std::vector<double> circulant12_family(int n, double eps) {
  if (n < 5) throw Error(ErrorCode::kOutOfRange, "family needs n >= 5");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const double x = 2 * std::numbers::pi * j / n;
    out[j] = 4 - (2 - eps) * std::cos(x) - (2 + eps) * std::cos(2 * x);
  }
  return out;
}

/// Second-smallest value of the family (minimum over j != 0) and all j attaining it.
inline std::pair<double, std::vector<int>> circulant12_lambda2(int n, double eps) {
  const auto vals = circulant12_family(n, eps);
  double lo = 1e300;
  for (int j = 1; j < n; ++j) lo = std::min(lo, vals[j]);
  std::vector<int> arg;
  for (int j = 1; j < n; ++j)
    if (vals[j] <= lo + 1e-12) arg.push_back(j);
  return {lo, arg};
}

struct OrbitScanOptions {
  int resolution = 0;  // 0 selects 200 for up to three orbits, 50 for four
};

struct OrbitScanResult {
  Target side = Target::kLambda2;
  std::vector<std::size_t> orbit_sizes;
  std::vector<double> optimum_fractions;  // x_i = |O_i|·w_i/|E|
  std::vector<double> optimum_weights;    // per-edge weight on orbit i
  double optimum = 0;
  double constant_value = 0;
  bool constant_optimal = false;
  std::vector<std::vector<double>> alternative_optima;  // fractions away from the constant point
};

/// Optimizes λ2 (or λn) over orbit-constant weightings on a simplex grid, then refines by
/// golden-section transfers between pairs of orbits.
inline OrbitScanResult symmetry_reduced_scan(const Graph& g, const EdgeOrbitPartition& orbits, Target side,
                                             OrbitScanOptions opts = {}) {
  const int k = static_cast<int>(orbits.count());
  if (k > 4) throw Error(ErrorCode::kTooManyOrbits, std::to_string(k) + " orbits, at most 4 supported");
  const int res = opts.resolution > 0 ? opts.resolution : (k <= 3 ? 200 : 50);
  const double total = static_cast<double>(g.m());

  const auto parts = detail::orbit_laplacians(g, orbits);
  auto score = [&](const std::vector<double>& x) { return detail::orbit_score(g, orbits, parts, side, x); };

  OrbitScanResult out;
  out.side = side;
  out.orbit_sizes = orbits.sizes();
  std::vector<double> constant(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) constant[i] = static_cast<double>(orbits.orbits[i].size()) / total;
  const double constant_score = score(constant);

  std::vector<std::pair<std::vector<double>, double>> grid;
  std::vector<int> c(static_cast<std::size_t>(k), 0);
  auto visit = [&](auto&& self, int i, int left) -> void {
    if (i == k - 1) {
      c[i] = left;
      std::vector<double> x(static_cast<std::size_t>(k));
      for (int j = 0; j < k; ++j) x[j] = static_cast<double>(c[j]) / res;
      grid.emplace_back(x, score(x));
      return;
    }
    for (int a = 0; a <= left; ++a) {
      c[i] = a;
      self(self, i + 1, left - a);
    }
  };
  visit(visit, 0, res);

  auto best_it = std::max_element(grid.begin(), grid.end(), [](auto& a, auto& b) { return a.second < b.second; });
  std::vector<double> x = best_it->first;
  double fx = best_it->second;
  if (constant_score >= fx) {
    x = constant;
    fx = constant_score;
  }

  fx = std::max(fx, detail::refine_orbit_fractions(g, orbits, parts, side, x, 4.0 / res));

  const double sign = side == Target::kLambda2 ? 1.0 : -1.0;
  out.optimum = sign * fx;
  out.constant_value = sign * constant_score;
  out.constant_optimal = constant_score >= fx - 1e-9 * std::max(1.0, std::abs(fx));
  out.optimum_fractions = x;
  for (int i = 0; i < k; ++i) out.optimum_weights.push_back(x[i] * total / static_cast<double>(orbits.orbits[i].size()));

  std::vector<std::vector<double>> alts;
  for (const auto& [y, f] : grid) {
    if (f < fx - 1e-6 * std::max(1.0, std::abs(fx))) continue;
    double dist = 0;
    for (int i = 0; i < k; ++i) dist = std::max(dist, std::abs(y[i] - constant[i]));
    if (dist > 1e-3) alts.push_back(y);
  }
  auto zeros = [](const std::vector<double>& y) { return std::count(y.begin(), y.end(), 0.0); };
  std::stable_sort(alts.begin(), alts.end(), [&](auto& a, auto& b) { return zeros(a) > zeros(b); });
  if (alts.size() > 8) alts.resize(8);
  out.alternative_optima = std::move(alts);
  return out;
}

}  // namespace conformal

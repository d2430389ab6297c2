#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <vector>

#include "conformal/error.hpp"
#include "conformal/graph.hpp"
#include "conformal/spectral.hpp"

namespace conformal {

/// Per-generator sums Σ_g φ(g)φ(s∘g), matching the edge convention (g, s∘g).
struct CayleySumProfile {
  std::vector<int> gens;
  std::vector<double> sums;
  std::optional<std::vector<long long>> exact_sums;  // when φ is integral
  double spread = 0;
};

inline CayleySumProfile cayley_sums(const CayleyPresentation& p, const Vector& phi) {
  if (phi.size() != p.order) throw Error(ErrorCode::kDimensionMismatch, "phi must have one entry per group element");
  CayleySumProfile prof;
  prof.gens = p.gens;
  bool integral = true;
  for (Eigen::Index i = 0; i < phi.size() && integral; ++i)
    integral = std::abs(phi(i) - std::round(phi(i))) <= 1e-12 && std::abs(phi(i)) < 1e9;
  if (integral) prof.exact_sums.emplace();
  for (int s : p.gens) {
    double sum = 0;
    long long exact = 0;
    for (int g = 0; g < p.order; ++g) {
      const int h = p.table[s][g];
      sum += phi(g) * phi(h);
      if (integral) exact += std::llround(phi(g)) * std::llround(phi(h));
    }
    prof.sums.push_back(integral ? static_cast<double>(exact) : sum);
    if (integral) prof.exact_sums->push_back(exact);
  }
  if (!prof.sums.empty()) {
    auto [lo, hi] = std::minmax_element(prof.sums.begin(), prof.sums.end());
    prof.spread = *hi - *lo;
  }
  return prof;
}

namespace detail {

inline bool profile_constant(const CayleySumProfile& prof, const Vector& phi, double tol) {
  if (prof.exact_sums) return prof.spread == 0;
  return prof.spread <= tol * phi.squaredNorm();
}

inline bool is_cyclic_table(const CayleyPresentation& p) {
  for (int a = 0; a < p.order; ++a)
    for (int b = 0; b < p.order; ++b)
      if (p.table[a][b] != (a + b) % p.order) return false;
  return true;
}

// Normalized variance of the generator sums, smooth in φ.
inline double sum_variance(const CayleyPresentation& p, const Vector& phi) {
  const auto prof = cayley_sums(p, phi);
  double mean = 0;
  for (double s : prof.sums) mean += s;
  mean /= static_cast<double>(prof.sums.size());
  double var = 0;
  for (double s : prof.sums) var += (s - mean) * (s - mean);
  const double nn = phi.squaredNorm();
  return var / (nn * nn);
}

// Scales φ to a primitive integer vector when its entry ratios are rationals with
// denominator <= 60 and the scaled vector is an exact eigenvector of the integer Laplacian.
inline std::optional<Vector> integralize(const Graph& g, const Vector& phi, double lambda) {
  const long lam = std::lround(lambda);
  if (std::abs(lambda - static_cast<double>(lam)) > 1e-9) return std::nullopt;
  double pivot = 0;
  for (Eigen::Index i = 0; i < phi.size(); ++i)
    if (std::abs(phi(i)) > 1e-9 && (pivot == 0 || std::abs(phi(i)) < std::abs(pivot))) pivot = phi(i);
  if (pivot == 0) return std::nullopt;
  std::vector<Rational> q;
  mpz_class den = 1;
  for (Eigen::Index i = 0; i < phi.size(); ++i) {
    const double x = phi(i) / pivot;
    const Rational r = approximate(x, 60, 1e-7);
    if (std::abs(r.get_d() - x) > 1e-7) return std::nullopt;
    q.push_back(r);
    den = lcm(den, r.get_den());
  }
  std::vector<mpz_class> z;
  mpz_class common = 0;
  for (const auto& r : q) {
    z.push_back(mpz_class(r * den));
    common = gcd(common, z.back());
  }
  Vector out(phi.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    z[i] /= common;
    if (!z[i].fits_slong_p()) return std::nullopt;
    out(static_cast<Eigen::Index>(i)) = static_cast<double>(z[i].get_si());
  }
  for (int v = 0; v < g.n(); ++v) {
    mpz_class lhs = g.degree(v) * z[static_cast<std::size_t>(v)];
    for (int u : g.neighbors(v)) lhs -= z[static_cast<std::size_t>(u)];
    if (lhs != lam * z[static_cast<std::size_t>(v)]) return std::nullopt;
  }
  return out;
}

}  // namespace detail

/// λ_j of C_n(S) = Σ_s (2 - 2cos(2πjs/n)), with s = n/2 contributing 1 - cos(πj).
inline double circulant_eigenvalue(int n, const std::vector<int>& steps, int j) {
  std::set<int> folded;
  for (int s : steps) folded.insert(std::min(((s % n) + n) % n, n - ((s % n) + n) % n));
  double lam = 0;
  for (int s : folded) {
    if (s == 0) continue;
    const double c = std::cos(2 * std::numbers::pi * j * s / n);
    lam += (2 * s == n) ? 1 - c : 2 - 2 * c;
  }
  return lam;
}

struct EigenvectorSearchOptions {
  int budget = 5000;  // objective evaluations for the random phase
  int theta_steps = 360;
  std::uint64_t seed = 0;
};

/// Looks for φ in span(basis) whose generator sums coincide (spread <= 1e-8·|φ|²).
inline std::optional<Vector> search_eigenvector(const CayleyPresentation& p, const EigenspaceBasis& basis,
                                                const EigenvectorSearchOptions& opts = {}) {
  const double tol = 1e-8;
  const Graph g = cayley_graph(p);
  auto constant = [&](const Vector& phi) {
    return phi.squaredNorm() > 1e-20 && detail::profile_constant(cayley_sums(p, phi), phi, tol);
  };
  std::optional<Vector> hit;
  // Accepted vectors are reported in integer form whenever possible.
  auto accept = [&](const Vector& phi) {
    if (!constant(phi)) return false;
    auto z = detail::integralize(g, phi, basis.eigenvalue);
    hit = z && constant(*z) ? *z : phi;
    return true;
  };
  const Eigen::Index k = basis.U.cols();
  if (std::abs(basis.eigenvalue - std::round(basis.eigenvalue)) <= 1e-9)
    if (auto ib = exact_eigenbasis_if_integral(g, basis.eigenvalue, static_cast<int>(k)); ib && k <= 6) {
      const Matrix b = to_double(*ib);
      std::vector<int> c(static_cast<std::size_t>(k), -1);
      while (true) {
        Vector coeff(k);
        for (Eigen::Index i = 0; i < k; ++i) coeff(i) = c[static_cast<std::size_t>(i)];
        if (Vector phi = b * coeff; accept(phi)) return hit;
        std::size_t i = 0;
        while (i < c.size() && c[i] == 1) c[i++] = -1;
        if (i == c.size()) break;
        ++c[i];
      }
    }

  for (Eigen::Index j = 0; j < k; ++j)
    if (accept(basis.U.col(j))) return hit;

  if (detail::is_cyclic_table(p)) {
    const int n = p.order;
    for (int j = 1; j <= n / 2; ++j) {
      if (std::abs(circulant_eigenvalue(n, p.gens, j) - basis.eigenvalue) > 1e-8 * std::max(1.0, basis.eigenvalue))
        continue;
      for (int t = 0; t < opts.theta_steps; ++t) {
        const double theta = 2 * std::numbers::pi * t / opts.theta_steps;
        Vector phi(n);
        for (int v = 0; v < n; ++v) phi(v) = std::cos(2 * std::numbers::pi * j * v / n + theta);
        if (accept(phi)) return hit;
      }
    }
  }

  if (k < 2) return std::nullopt;
  // Random starts refined by Nelder-Mead on the sum variance over coefficient space.
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal;
  auto objective = [&](const Vector& c) { return c.norm() < 1e-12 ? 1e300 : detail::sum_variance(p, basis.U * c); };
  int evaluations = 0;
  while (evaluations < opts.budget) {
    std::vector<Vector> simplex;
    std::vector<double> values;
    Vector start(k);
    for (Eigen::Index i = 0; i < k; ++i) start(i) = normal(rng);
    start.normalize();
    simplex.push_back(start);
    for (Eigen::Index i = 0; i < k; ++i) {
      Vector v = start;
      v(i) += 0.3;
      simplex.push_back(v);
    }
    for (const auto& v : simplex) values.push_back(objective(v));
    evaluations += static_cast<int>(simplex.size());
    for (int it = 0; it < 400 && evaluations < opts.budget; ++it) {
      std::vector<std::size_t> order(simplex.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(), [&](auto a, auto b) { return values[a] < values[b]; });
      const std::size_t best = order.front(), worst = order.back(), second = order[order.size() - 2];
      if (values[best] < 1e-24) break;
      Vector centroid = Vector::Zero(k);
      for (std::size_t i = 0; i + 1 < order.size(); ++i) centroid += simplex[order[i]];
      centroid /= static_cast<double>(k);
      const Vector refl = centroid + (centroid - simplex[worst]);
      const double fr = objective(refl);
      ++evaluations;
      if (fr < values[best]) {
        const Vector exp = centroid + 2 * (centroid - simplex[worst]);
        const double fe = objective(exp);
        ++evaluations;
        if (fe < fr) { simplex[worst] = exp; values[worst] = fe; }
        else { simplex[worst] = refl; values[worst] = fr; }
      } else if (fr < values[second]) {
        simplex[worst] = refl;
        values[worst] = fr;
      } else {
        const Vector con = centroid + 0.5 * (simplex[worst] - centroid);
        const double fc = objective(con);
        ++evaluations;
        if (fc < values[worst]) {
          simplex[worst] = con;
          values[worst] = fc;
        } else {
          for (std::size_t i = 0; i < simplex.size(); ++i)
            if (i != best) {
              simplex[i] = simplex[best] + 0.5 * (simplex[i] - simplex[best]);
              values[i] = objective(simplex[i]);
              ++evaluations;
            }
        }
      }
    }
    const auto best = std::min_element(values.begin(), values.end()) - values.begin();
    if (accept(basis.U * simplex[static_cast<std::size_t>(best)])) return hit;
  }
  return std::nullopt;
}

/// Both vectors must be eigenvectors of the extreme eigenvalues; true when both sum
/// profiles are constant.
inline bool criterion_check(const CayleyPresentation& p, const Vector& phi2, const Vector& phiN, double tol = 1e-8) {
  const Graph g = cayley_graph(p);
  const Matrix L = laplacian(g);
  const Spectrum spec = eigendecompose(L);
  auto is_eigvec = [&](const Vector& phi, double lam) {
    return phi.size() == g.n() && phi.norm() > 0 && (L * phi - lam * phi).norm() <= 1e-8 * std::max(1.0, phi.norm()) * max_abs(L);
  };
  if (!is_eigvec(phi2, spec.lambda2())) throw Error(ErrorCode::kNotAnEigenvector, "phi2 is not a lambda2 eigenvector");
  if (!is_eigvec(phiN, spec.lambdaN())) throw Error(ErrorCode::kNotAnEigenvector, "phiN is not a lambdaN eigenvector");
  return detail::profile_constant(cayley_sums(p, phi2), phi2, tol) &&
         detail::profile_constant(cayley_sums(p, phiN), phiN, tol);
}

struct CriterionResult {
  bool satisfied = false;
  std::optional<Vector> phi2, phiN;
  std::optional<CayleySumProfile> sums2, sumsN;
};

/// Searches both extreme eigenspaces for vectors with constant generator sums.
inline CriterionResult cayley_criterion(const CayleyPresentation& p, const EigenvectorSearchOptions& opts = {}) {
  const Graph g = cayley_graph(p);
  const Spectrum spec = laplacian_spectrum(g);
  CriterionResult r;
  r.phi2 = search_eigenvector(p, {spec.lambda2_cluster().basis, spec.lambda2()}, opts);
  r.phiN = search_eigenvector(p, {spec.lambdaN_cluster().basis, spec.lambdaN()}, opts);
  if (r.phi2) r.sums2 = cayley_sums(p, *r.phi2);
  if (r.phiN) r.sumsN = cayley_sums(p, *r.phiN);
  r.satisfied = r.phi2 && r.phiN;
  return r;
}

}  // namespace conformal

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <vector>

#include "conformal/error.hpp"
#include "conformal/graph.hpp"
#include "conformal/matrix.hpp"
#include "conformal/rational.hpp"

namespace conformal {

struct EigenDecomposition {
  Vector values;   // ascending
  Matrix vectors;  // column i belongs to values(i)
  int sweeps = 0;
};

/// Cyclic Jacobi rotations. Stops once the off-diagonal Frobenius norm drops below
/// 1e-12 * ||A||_F; each eigenvector has its largest-magnitude entry made positive.
inline EigenDecomposition jacobi_eigen(const Matrix& input, int max_sweeps = 100) {
  const Eigen::Index n = input.rows();
  if (input.cols() != n) throw Error(ErrorCode::kDimensionMismatch, "eigensolver needs a square matrix");
  Matrix a = 0.5 * (input + input.transpose());
  Matrix v = Matrix::Identity(n, n);
  const double threshold = 1e-12 * a.norm();

  auto off_norm = [&] {
    double s = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) s += 2 * a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  int sweep = 0;
  for (; off_norm() > threshold; ++sweep) {
    if (sweep == max_sweeps) throw Error(ErrorCode::kNoConvergence, "Jacobi did not converge");
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1));
        const double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) { return a(i, i) < a(j, j); });
  EigenDecomposition out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  out.sweeps = sweep;
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    Vector col = v.col(order[k]);
    Eigen::Index arg = 0;
    for (Eigen::Index i = 1; i < n; ++i)
      if (std::abs(col(i)) > std::abs(col(arg)) + 1e-14) arg = i;
    if (col(arg) < 0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

struct Cluster {
  double value = 0;
  int multiplicity = 0;
  Eigen::Index first = 0;  // index of the first member in the ascending list
  Matrix basis;            // n x multiplicity, orthonormal
};

struct Spectrum {
  Vector eigenvalues;
  Matrix eigenvectors;
  std::vector<Cluster> clusters;
  bool near_disconnection = false;
  double cluster_tol = 0;

  const Cluster& cluster_of(Eigen::Index index) const {
    for (const auto& c : clusters)
      if (index >= c.first && index < c.first + c.multiplicity) return c;
    throw Error(ErrorCode::kOutOfRange, "eigenvalue index");
  }
  /// Cluster of the second-smallest eigenvalue (skips the forced zero cluster).
  const Cluster& lambda2_cluster() const { return cluster_of(1); }
  const Cluster& lambdaN_cluster() const { return clusters.back(); }
  double lambda2() const { return eigenvalues(1); }
  double lambdaN() const { return eigenvalues(eigenvalues.size() - 1); }

  const Cluster* find(double lambda, double tol) const {
    const Cluster* best = nullptr;
    for (const auto& c : clusters)
      if (std::abs(c.value - lambda) <= tol && (!best || std::abs(c.value - lambda) < std::abs(best->value - lambda)))
        best = &c;
    return best;
  }
};

struct SpectrumOptions {
  double cluster_tol = 0;  // 0 selects 1e-8 * max(1, |λmax|)
  bool laplacian = true;   // snap the bottom eigenvalue, force the 𝟙 cluster
};

// Columns of b made orthogonal to 𝟙 and re-orthonormalized.
inline Matrix orthogonalize_against_ones(const Matrix& b) {
  Matrix c = b;
  for (Eigen::Index j = 0; j < c.cols(); ++j) c.col(j).array() -= c.col(j).mean();
  Eigen::HouseholderQR<Matrix> qr(c);
  Matrix q = qr.householderQ() * Matrix::Identity(c.rows(), c.cols());
  // Keep orientation close to the input columns.
  for (Eigen::Index j = 0; j < q.cols(); ++j)
    if (q.col(j).dot(c.col(j)) < 0) q.col(j) = -q.col(j);
  return q;
}

inline Spectrum eigendecompose(const Matrix& L, SpectrumOptions opts = {}) {
  const auto ed = jacobi_eigen(L);
  const Eigen::Index n = ed.values.size();
  Spectrum s;
  s.eigenvalues = ed.values;
  s.eigenvectors = ed.vectors;
  if (n == 0) return s;
  const double tol = opts.cluster_tol > 0 ? opts.cluster_tol
                                          : 1e-8 * std::max(1.0, std::abs(s.eigenvalues(n - 1)));
  s.cluster_tol = tol;

  Eigen::Index start = 0;
  if (opts.laplacian) {
    if (std::abs(s.eigenvalues(0)) <= 1e-9) s.eigenvalues(0) = 0.0;
    Cluster zero;
    zero.value = s.eigenvalues(0);
    zero.multiplicity = 1;
    zero.first = 0;
    zero.basis = Vector::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    s.eigenvectors.col(0) = zero.basis.col(0);
    s.clusters.push_back(zero);
    start = 1;
    if (n > 1 && std::abs(s.eigenvalues(1)) <= std::max(1e-9, tol)) s.near_disconnection = true;
  }

  while (start < n) {
    Eigen::Index end = start + 1;
    while (end < n && s.eigenvalues(end) - s.eigenvalues(end - 1) <= tol) ++end;
    Cluster c;
    c.first = start;
    c.multiplicity = static_cast<int>(end - start);
    c.value = s.eigenvalues.segment(start, end - start).mean();
    c.basis = s.eigenvectors.middleCols(start, end - start);
    if (opts.laplacian && c.value > 0) {
      c.basis = orthogonalize_against_ones(c.basis);
      s.eigenvectors.middleCols(start, end - start) = c.basis;
    }
    s.clusters.push_back(std::move(c));
    start = end;
  }
  return s;
}

inline Spectrum laplacian_spectrum(const Graph& g) { return eigendecompose(laplacian(g)); }

inline double lambda2(const Graph& g, const WeightVector& w) {
  if (g.n() < 2) return 0;
  return jacobi_eigen(laplacian(g, w)).values(1);
}

inline double lambdaN(const Graph& g, const WeightVector& w) {
  auto v = jacobi_eigen(laplacian(g, w)).values;
  return v(v.size() - 1);
}

struct EigenspaceBasis {
  Matrix U;  // orthonormal columns
  double eigenvalue = 0;
  int multiplicity() const { return static_cast<int>(U.cols()); }
};

inline EigenspaceBasis eigenspace(const Spectrum& s, double lambda) {
  const double tol = std::max(s.cluster_tol, 1e-8 * std::max(1.0, std::abs(lambda)));
  const Cluster* c = s.find(lambda, tol);
  if (!c) throw Error(ErrorCode::kNoSuchEigenvalue, "no eigenvalue near " + to_decimal_string(lambda));
  return {c->basis, c->value};
}

inline EigenspaceBasis eigenspace(const Matrix& L, double lambda) { return eigenspace(eigendecompose(L), lambda); }

/// Integer basis of ker(L - λI) for the unweighted Laplacian and integer λ; each column
/// is a primitive integer vector. nullopt when the kernel is trivial.
inline std::optional<RationalMatrix> exact_eigenbasis(const Graph& g, long lambda) {
  RationalMatrix a = rational_laplacian(g);
  for (int i = 0; i < g.n(); ++i) a(i, i) -= lambda;
  auto ns = nullspace(a);
  if (ns.empty()) return std::nullopt;
  RationalMatrix b(static_cast<std::size_t>(g.n()), ns.size());
  for (std::size_t j = 0; j < ns.size(); ++j) {
    mpz_class den = 1, num = 0;
    for (const auto& x : ns[j]) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den_mpz_t());
    for (const auto& x : ns[j]) {
      mpz_class v = x.get_num() * (den / x.get_den());
      mpz_gcd(num.get_mpz_t(), num.get_mpz_t(), v.get_mpz_t());
    }
    if (num == 0) num = 1;
    for (int i = 0; i < g.n(); ++i) b(i, j) = Rational(ns[j][i] * den / num);
  }
  return b;
}

/// Integer λ with the matching exact eigenspace, when λ is within 1e-9 of an integer
/// and the exact kernel dimension equals the numerical multiplicity.
inline std::optional<RationalMatrix> exact_eigenbasis_if_integral(const Graph& g, double lambda, int multiplicity) {
  const double r = std::round(lambda);
  if (std::abs(lambda - r) > 1e-9) return std::nullopt;
  auto b = exact_eigenbasis(g, static_cast<long>(r));
  if (!b || static_cast<int>(b->cols()) != multiplicity) return std::nullopt;
  return b;
}

struct RayleighWitness {
  Vector f_low, f_high;
  double low_energy = 0, low_bound = 0, high_energy = 0, high_bound = 0;
  bool pass = false;
};

/// Frame-bound check for a rigid graph: with f the extreme eigenvectors of L_w,
/// energy_w(f_low) <= (λ2(𝟙)/|E|)·Σw·|f|² and energy_w(f_high) >= (λn(𝟙)/|E|)·Σw·|f|².
inline RayleighWitness rayleigh_witness_check(const Graph& g, const WeightVector& w, double lambda2_unweighted,
                                              double lambdaN_unweighted) {
  const Matrix L = laplacian(g, w);
  const auto ed = jacobi_eigen(L);
  RayleighWitness r;
  r.f_low = ed.vectors.col(1);
  r.f_high = ed.vectors.col(ed.vectors.cols() - 1);
  const double total = w.sum(), m = static_cast<double>(g.m());
  r.low_energy = r.f_low.dot(L * r.f_low);
  r.low_bound = lambda2_unweighted / m * total * r.f_low.squaredNorm();
  r.high_energy = r.f_high.dot(L * r.f_high);
  r.high_bound = lambdaN_unweighted / m * total * r.f_high.squaredNorm();
  r.pass = r.low_energy <= r.low_bound + 1e-9 && r.high_energy >= r.high_bound - 1e-9;
  return r;
}

}  // namespace conformal

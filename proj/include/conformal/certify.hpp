#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "conformal/error.hpp"
#include "conformal/graph.hpp"
#include "conformal/matrix.hpp"
#include "conformal/rational.hpp"
#include "conformal/spectral.hpp"

namespace conformal {

enum class Target { kLambda2, kLambdaN };

constexpr std::string_view to_string(Target t) { return t == Target::kLambda2 ? "lambda2" : "lambdaN"; }

inline Target parse_target(std::string_view s) {
  if (s == "lambda2") return Target::kLambda2;
  if (s == "lambdaN" || s == "lambdan") return Target::kLambdaN;
  throw Error(ErrorCode::kParseError, "unknown target '" + std::string(s) + "'");
}

enum class CertMethod { kRankOne, kUUT, kCSSearch, kRationalized, kProjected, kExternal };

constexpr std::string_view to_string(CertMethod m) {
  switch (m) {
    case CertMethod::kRankOne: return "RankOne";
    case CertMethod::kUUT: return "UUT";
    case CertMethod::kCSSearch: return "CSSearch";
    case CertMethod::kRationalized: return "Rationalized";
    case CertMethod::kProjected: return "Projected";
    case CertMethod::kExternal: return "External";
  }
  return "External";
}

inline CertMethod parse_method(std::string_view s) {
  for (auto m : {CertMethod::kRankOne, CertMethod::kUUT, CertMethod::kCSSearch, CertMethod::kRationalized,
                 CertMethod::kProjected, CertMethod::kExternal})
    if (s == to_string(m)) return m;
  throw Error(ErrorCode::kParseError, "unknown certificate method '" + std::string(s) + "'");
}

inline double target_eigenvalue(const Spectrum& s, Target t) { return t == Target::kLambda2 ? s.lambda2() : s.lambdaN(); }

inline const Cluster& target_cluster(const Spectrum& s, Target t) {
  return t == Target::kLambda2 ? s.lambda2_cluster() : s.lambdaN_cluster();
}

/// Dual matrix claimed to certify optimality of constant weights on one side.
struct Certificate {
  Target target = Target::kLambda2;
  CertMethod method = CertMethod::kExternal;
  Matrix numeric;                       // always populated
  std::optional<RationalMatrix> exact;  // present when every entry is rational
  double lambda = 0;
  std::optional<Rational> lambda_exact;
  double claimed_trace = 0;

  bool is_exact() const { return exact.has_value(); }
};

inline Certificate make_certificate(Target t, CertMethod m, RationalMatrix x, const Rational& lambda, std::size_t edges) {
  Certificate c;
  c.target = t;
  c.method = m;
  c.numeric = to_double(x);
  c.exact = std::move(x);
  c.lambda = lambda.get_d();
  c.lambda_exact = lambda;
  c.claimed_trace = static_cast<double>(edges) / c.lambda;
  return c;
}

inline Certificate make_certificate(Target t, CertMethod m, Matrix x, double lambda, std::size_t edges) {
  Certificate c;
  c.target = t;
  c.method = m;
  c.numeric = std::move(x);
  c.lambda = lambda;
  c.claimed_trace = static_cast<double>(edges) / lambda;
  return c;
}

struct ConditionResult {
  std::string name;
  bool pass = false;
  double residual = 0;
  std::string detail;
};

struct VerificationReport {
  Target target = Target::kLambda2;
  bool exact = false;
  double lambda = 0;
  std::vector<ConditionResult> conditions;

  bool passed() const {
    return std::all_of(conditions.begin(), conditions.end(), [](const auto& c) { return c.pass; });
  }
  const ConditionResult& at(std::string_view name) const {
    for (const auto& c : conditions)
      if (c.name == name) return c;
    throw Error(ErrorCode::kOutOfRange, "no condition " + std::string(name));
  }
  std::string first_failure() const {
    for (const auto& c : conditions)
      if (!c.pass) return c.name;
    return {};
  }
};

namespace detail {

inline ConditionResult lambda_condition(const Certificate& c, double lam, const std::optional<Rational>& lam_q) {
  ConditionResult r{"lambda", false, std::abs(c.lambda - lam), {}};
  if (c.lambda_exact && lam_q)
    r.pass = *c.lambda_exact == *lam_q;
  else
    r.pass = r.residual <= 1e-8 * std::max(1.0, std::abs(lam));
  if (!r.pass) r.detail = "certificate lambda " + to_decimal_string(c.lambda) + " vs graph " + to_decimal_string(lam);
  return r;
}

inline std::string edge_name(const Edge& e) { return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")"; }

inline void verify_exact(const Graph& g, const RationalMatrix& x, const Rational& lam, VerificationReport& rep) {
  const std::size_t n = static_cast<std::size_t>(g.n());
  const bool sym = x.is_symmetric();
  rep.conditions.push_back({"symmetric", sym, 0, sym ? "" : "X != X^T"});

  Rational total = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) total += x(i, j);
  rep.conditions.push_back({"centered", total == 0, std::abs(total.get_d()), total == 0 ? "" : "1^T X 1 = " + to_string(total)});

  ConditionResult edges{"edge_equalities", true, 0, {}};
  for (const auto& e : g.edges()) {
    Rational d = x(e.u, e.u) + x(e.v, e.v) - 2 * x(e.u, e.v) - 1;
    edges.residual = std::max(edges.residual, std::abs(d.get_d()));
    if (d != 0 && edges.pass) {
      edges.pass = false;
      edges.detail = "edge " + edge_name(e) + " has squared length " + to_string(d + 1);
    }
  }
  rep.conditions.push_back(edges);

  ConditionResult eig{"eigen_equation", true, 0, {}};
  for (std::size_t i = 0; i < n && true; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rational lx = g.degree(static_cast<int>(i)) * x(i, j);
      for (int k : g.neighbors(static_cast<int>(i))) lx -= x(k, j);
      Rational d = lx - lam * x(i, j);
      if (d != 0) {
        eig.residual = std::max(eig.residual, std::abs(d.get_d()));
        if (eig.pass) eig.detail = "(LX - lambda X)[" + std::to_string(i) + "][" + std::to_string(j) + "] = " + to_string(d);
        eig.pass = false;
      }
    }
  rep.conditions.push_back(eig);

  ConditionResult psd{"psd", false, 0, {}};
  if (!sym) {
    psd.detail = "not symmetric";
  } else {
    auto check = ldlt_psd(x);
    psd.pass = check.psd;
    if (!check.psd) psd.detail = check.reason + " at index " + std::to_string(check.failed_index);
  }
  rep.conditions.push_back(psd);

  const Rational want = Rational(static_cast<long>(g.m())) / lam;
  const Rational tr = x.trace();
  rep.conditions.push_back({"trace", tr == want, std::abs(Rational(tr - want).get_d()),
                            tr == want ? "" : "trace " + to_string(tr) + " vs " + to_string(want)});
}

inline void verify_numeric(const Graph& g, const Matrix& x, double lam, VerificationReport& rep) {
  const double scale = std::max(1.0, max_abs(x));
  const double asym = max_abs(x - x.transpose());
  rep.conditions.push_back({"symmetric", asym <= 1e-9 * scale, asym, {}});

  const double total = x.sum();
  rep.conditions.push_back({"centered", std::abs(total) <= 1e-8 * scale * g.n(), std::abs(total), {}});

  ConditionResult edges{"edge_equalities", true, 0, {}};
  for (const auto& e : g.edges()) {
    const double d = std::abs(x(e.u, e.u) + x(e.v, e.v) - 2 * x(e.u, e.v) - 1);
    if (d > edges.residual) edges.residual = d;
    if (d > 1e-8 && edges.pass) {
      edges.pass = false;
      edges.detail = "edge " + edge_name(e) + " off by " + to_decimal_string(d);
    }
  }
  rep.conditions.push_back(edges);

  const Matrix L = laplacian(g);
  const double eres = max_abs(L * x - lam * x);
  rep.conditions.push_back({"eigen_equation", eres <= 1e-8 * max_abs(L) * scale, eres, {}});

  const Matrix sym = 0.5 * (x + x.transpose());
  const double min_eig = jacobi_eigen(sym).values(0);
  rep.conditions.push_back({"psd", min_eig >= -1e-9 * scale, std::max(0.0, -min_eig),
                            "min eigenvalue " + to_decimal_string(min_eig)});

  const double want = static_cast<double>(g.m()) / lam;
  const double terr = std::abs(x.trace() - want);
  rep.conditions.push_back({"trace", terr <= 1e-9 * std::max(1.0, want), terr, {}});
}

}  // namespace detail

/// Checks the four dual-optimality conditions plus the trace identity; exact when the
/// entries are rational and the graph's target eigenvalue is an integer.
inline VerificationReport verify_certificate(const Graph& g, const Certificate& c) {
  if (c.numeric.rows() != g.n() || c.numeric.cols() != g.n())
    throw Error(ErrorCode::kDimensionMismatch, "certificate is not " + std::to_string(g.n()) + "x" + std::to_string(g.n()));
  const Spectrum spec = laplacian_spectrum(g);
  const double lam = target_eigenvalue(spec, c.target);
  std::optional<Rational> lam_q;
  if (std::abs(lam - std::round(lam)) <= 1e-9) lam_q = Rational(std::lround(lam));

  VerificationReport rep;
  rep.target = c.target;
  rep.lambda = lam;
  rep.exact = c.exact.has_value() && lam_q.has_value();
  if (rep.exact)
    detail::verify_exact(g, *c.exact, *lam_q, rep);
  else
    detail::verify_numeric(g, c.numeric, lam, rep);
  rep.conditions.push_back(detail::lambda_condition(c, lam, lam_q));
  return rep;
}

inline RationalMatrix outer(const RationalMatrix& b) { return b * b.transpose(); }

/// (|E|/λ)·uuᵀ for a simple target eigenvalue; exact when λ and u are integral.
inline Certificate rank_one_certificate(const Graph& g, Target target, std::optional<Vector> u = std::nullopt) {
  const Spectrum spec = laplacian_spectrum(g);
  const Cluster& cl = target_cluster(spec, target);
  if (cl.multiplicity != 1)
    throw Error(ErrorCode::kMultiplicityNotOne,
                std::string(to_string(target)) + " has multiplicity " + std::to_string(cl.multiplicity));
  const double lam = cl.value;
  const double scale = static_cast<double>(g.m()) / lam;
  const bool integral_lambda = std::abs(lam - std::round(lam)) <= 1e-9;

  std::optional<RationalMatrix> ivec;
  if (u) {
    const Matrix L = laplacian(g);
    if (u->size() != g.n()) throw Error(ErrorCode::kDimensionMismatch, "eigenvector length");
    if ((L * *u - lam * *u).cwiseAbs().maxCoeff() > 1e-8 * max_abs(L) * std::max(1.0, u->cwiseAbs().maxCoeff()))
      throw Error(ErrorCode::kNotAnEigenvector, "vector is not in the target eigenspace");
    bool integral = integral_lambda;
    for (Eigen::Index i = 0; i < u->size() && integral; ++i) integral = std::abs((*u)(i) - std::round((*u)(i))) <= 1e-12;
    if (integral) {
      ivec = RationalMatrix(static_cast<std::size_t>(g.n()), 1);
      for (int i = 0; i < g.n(); ++i) (*ivec)(i, 0) = Rational(std::lround((*u)(i)));
    }
  } else if (integral_lambda) {
    ivec = exact_eigenbasis_if_integral(g, lam, 1);
  }

  if (ivec) {
    const Rational lq(std::lround(lam));
    const RationalMatrix uu = outer(*ivec);
    const Rational factor = Rational(static_cast<long>(g.m())) / lq / (ivec->transpose() * *ivec)(0, 0);
    return make_certificate(target, CertMethod::kRankOne, factor * uu, lq, g.m());
  }
  Vector v = u ? Vector(*u) : Vector(cl.basis.col(0));
  v.normalize();
  return make_certificate(target, CertMethod::kRankOne, Matrix(scale * v * v.transpose()), lam, g.m());
}

/// c·UUᵀ with c = |E|/(λm); exact projector when λ is an integer. Validity is not
/// guaranteed, the result must be verified.
inline Certificate uut_certificate(const Graph& g, Target target) {
  const Spectrum spec = laplacian_spectrum(g);
  const Cluster& cl = target_cluster(spec, target);
  const double lam = cl.value;
  const int k = cl.multiplicity;
  if (auto b = exact_eigenbasis_if_integral(g, lam, k)) {
    const Rational lq(std::lround(lam));
    const RationalMatrix bt = b->transpose();
    const RationalMatrix proj = *b * inverse(bt * *b) * bt;
    const Rational c = Rational(static_cast<long>(g.m())) / (lq * k);
    return make_certificate(target, CertMethod::kUUT, c * proj, lq, g.m());
  }
  const double c = static_cast<double>(g.m()) / (lam * k);
  return make_certificate(target, CertMethod::kUUT, Matrix(c * cl.basis * cl.basis.transpose()), lam, g.m());
}

// ---------------------------------------------------------------------------
// X = B S Bᵀ parametrization.

/// Index pairs (a, b), a <= b, in row-major upper-triangular order.
inline std::vector<std::pair<int, int>> symmetric_index(int k) {
  std::vector<std::pair<int, int>> idx;
  for (int a = 0; a < k; ++a)
    for (int b = a; b < k; ++b) idx.emplace_back(a, b);
  return idx;
}

template <class T>
DenseMatrix<T> symmetric_from_vector(const std::vector<T>& s, int k) {
  DenseMatrix<T> m(static_cast<std::size_t>(k), static_cast<std::size_t>(k));
  std::size_t i = 0;
  for (auto [a, b] : symmetric_index(k)) {
    m(a, b) = s[i];
    m(b, a) = s[i];
    ++i;
  }
  return m;
}

inline Matrix symmetric_from_vector(const Vector& s, int k) {
  Matrix m(k, k);
  Eigen::Index i = 0;
  for (auto [a, b] : symmetric_index(k)) {
    m(a, b) = m(b, a) = s(i);
    ++i;
  }
  return m;
}

/// Edge equations dᵀSd = 1 (d = B_i - B_j) as an exact linear system in the upper
/// triangle of S. nullopt when inconsistent.
inline std::optional<AffineSolution> cs_family_exact(const Graph& g, const RationalMatrix& basis) {
  const int k = static_cast<int>(basis.cols());
  const auto idx = symmetric_index(k);
  RationalMatrix a(g.m(), idx.size());
  std::vector<Rational> rhs(g.m(), Rational(1));
  for (std::size_t r = 0; r < g.m(); ++r) {
    const auto [u, v] = g.edges()[r];
    std::vector<Rational> d(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) d[c] = basis(u, c) - basis(v, c);
    for (std::size_t p = 0; p < idx.size(); ++p) {
      auto [x, y] = idx[p];
      a(r, p) = (x == y ? 1 : 2) * d[x] * d[y];
    }
  }
  return solve_affine(a, rhs);
}

inline Matrix cs_system_numeric(const Graph& g, const Matrix& basis) {
  const int k = static_cast<int>(basis.cols());
  const auto idx = symmetric_index(k);
  Matrix a(static_cast<Eigen::Index>(g.m()), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t r = 0; r < g.m(); ++r) {
    const auto [u, v] = g.edges()[r];
    const Vector d = (basis.row(u) - basis.row(v)).transpose();
    for (std::size_t p = 0; p < idx.size(); ++p) {
      auto [x, y] = idx[p];
      a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(p)) = (x == y ? 1.0 : 2.0) * d(x) * d(y);
    }
  }
  return a;
}

struct CsOptions {
  std::uint64_t seed = 0;
  int iterations = 2000;
  int restarts = 5;
  bool exact = true;  // use an integer eigenbasis and rational arithmetic when λ is an integer
};

struct PsdSearch {
  Vector t;
  double min_eigenvalue = -1e300;
  int restart = 0;
};

/// Maximizes λmin(S0 + Σ tᵢDᵢ) by supergradient ascent (λmin is concave in t).
inline PsdSearch maximize_min_eigenvalue(const Matrix& s0, const std::vector<Matrix>& dirs, const CsOptions& opts) {
  const Eigen::Index r = static_cast<Eigen::Index>(dirs.size());
  auto evaluate = [&](const Vector& t) {
    Matrix s = s0;
    for (Eigen::Index i = 0; i < r; ++i) s += t(i) * dirs[static_cast<std::size_t>(i)];
    return jacobi_eigen(s);
  };
  PsdSearch best;
  best.t = Vector::Zero(r);
  best.min_eigenvalue = evaluate(best.t).values(0);
  if (r == 0) return best;

  const double step0 = 0.5 * std::max(1.0, s0.norm());
  for (int restart = 0; restart < std::max(1, opts.restarts); ++restart) {
    std::mt19937_64 rng(opts.seed * 1000003ULL + static_cast<std::uint64_t>(restart));
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    Vector t = Vector::Zero(r);
    if (restart > 0)
      for (Eigen::Index i = 0; i < r; ++i) t(i) = unit(rng) * step0;
    double local_best = -1e300;
    int since_improvement = 0;
    for (int it = 1; it <= opts.iterations; ++it) {
      const auto ed = evaluate(t);
      const double lmin = ed.values(0);
      if (lmin > local_best + 1e-15) {
        local_best = lmin;
        since_improvement = 0;
      } else if (++since_improvement > 400) {
        break;
      }
      if (lmin > best.min_eigenvalue) {
        best.min_eigenvalue = lmin;
        best.t = t;
        best.restart = restart;
      }
      // Average the gradients of the near-minimal eigenvalues to damp zig-zagging.
      const double band = 1e-9 * std::max(1.0, std::abs(lmin));
      Vector grad = Vector::Zero(r);
      int members = 0;
      for (Eigen::Index j = 0; j < ed.values.size() && ed.values(j) <= lmin + band; ++j, ++members) {
        const Vector v = ed.vectors.col(j);
        for (Eigen::Index i = 0; i < r; ++i) grad(i) += v.dot(dirs[static_cast<std::size_t>(i)] * v);
      }
      grad /= members;
      const double gn = grad.norm();
      if (gn < 1e-14) break;
      t += (step0 / std::sqrt(static_cast<double>(it))) * grad / gn;
    }
  }
  return best;
}

enum class CsStatus { kFound, kInfeasible, kInconclusive };

constexpr std::string_view to_string(CsStatus s) {
  switch (s) {
    case CsStatus::kFound: return "Found";
    case CsStatus::kInfeasible: return "Infeasible";
    case CsStatus::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

struct CsResult {
  CsStatus status = CsStatus::kInconclusive;
  std::optional<Certificate> certificate;
  int k = 0;
  std::size_t nullity = 0;
  double residual = 0;
  double min_eigenvalue = 0;
  bool exact_system = false;
  std::string detail;
};

/// Search over X = BSBᵀ with an integer basis B and integer λ, in rational arithmetic.
inline CsResult cs_search_exact(const Graph& g, Target target, const RationalMatrix& basis, const Rational& lambda,
                                const CsOptions& opts = {}) {
  CsResult res;
  res.exact_system = true;
  res.k = static_cast<int>(basis.cols());
  const int k = res.k;
  auto family = cs_family_exact(g, basis);
  if (!family) {
    res.status = CsStatus::kInfeasible;
    res.detail = "edge equations inconsistent over the rationals (rank of augmented system exceeds rank of system)";
    return res;
  }
  res.nullity = family->nullspace.size();

  const Matrix s0 = to_double(symmetric_from_vector(family->particular, k));
  std::vector<Matrix> dirs;
  std::vector<double> norms;
  for (const auto& v : family->nullspace) {
    Matrix d = to_double(symmetric_from_vector(v, k));
    norms.push_back(d.norm());
    dirs.push_back(d / norms.back());
  }
  const PsdSearch found = maximize_min_eigenvalue(s0, dirs, opts);
  res.min_eigenvalue = found.min_eigenvalue;
  const double scale = std::max(1.0, s0.norm());
  if (found.min_eigenvalue < -1e-9 * scale) {
    res.status = CsStatus::kInconclusive;
    res.detail = "no PSD point found; best minimum eigenvalue " + to_decimal_string(found.min_eigenvalue);
    return res;
  }

  const RationalMatrix bt = basis.transpose();
  for (double tol = 1e-1; tol >= 1e-12; tol /= 10) {
    std::vector<Rational> s = family->particular;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      const double tau = found.t(static_cast<Eigen::Index>(i)) / norms[i];
      const double slack = tol * std::max(1.0, std::abs(tau));
      const Rational q = simplest_between(Rational(tau - slack), Rational(tau + slack));
      for (std::size_t p = 0; p < s.size(); ++p) s[p] += q * family->nullspace[i][p];
    }
    const RationalMatrix sm = symmetric_from_vector(s, k);
    if (!ldlt_psd(sm).psd) continue;
    Certificate c = make_certificate(target, CertMethod::kCSSearch, basis * sm * bt, lambda, g.m());
    if (verify_certificate(g, c).passed()) {
      res.status = CsStatus::kFound;
      res.certificate = std::move(c);
      return res;
    }
  }
  // No rational PSD point near the numerical optimum; fall back to floating entries.
  Matrix s = s0;
  for (std::size_t i = 0; i < dirs.size(); ++i) s += found.t(static_cast<Eigen::Index>(i)) * dirs[i];
  const Matrix b = to_double(basis);
  Certificate c = make_certificate(target, CertMethod::kCSSearch, Matrix(b * s * b.transpose()), lambda.get_d(), g.m());
  if (verify_certificate(g, c).passed()) {
    res.status = CsStatus::kFound;
    res.certificate = std::move(c);
    res.detail = "PSD point found numerically only";
  } else {
    res.detail = "numerical PSD point failed verification";
  }
  return res;
}

/// Search over X = USUᵀ with an orthonormal floating basis.
inline CsResult cs_search_numeric(const Graph& g, Target target, const Matrix& basis, double lambda,
                                  const CsOptions& opts = {}) {
  CsResult res;
  res.k = static_cast<int>(basis.cols());
  const Matrix a = cs_system_numeric(g, basis);
  const auto ls = least_squares(a, Vector::Ones(static_cast<Eigen::Index>(g.m())));
  res.residual = ls.residual;
  res.nullity = static_cast<std::size_t>(ls.nullspace.cols());
  if (ls.residual > 1e-6 * std::sqrt(static_cast<double>(g.m()))) {
    res.status = CsStatus::kInfeasible;
    res.detail = "edge equations inconsistent: least-squares residual " + to_decimal_string(ls.residual);
    return res;
  }
  const Matrix s0 = symmetric_from_vector(ls.x, res.k);
  std::vector<Matrix> dirs;
  for (Eigen::Index j = 0; j < ls.nullspace.cols(); ++j) {
    Matrix d = symmetric_from_vector(Vector(ls.nullspace.col(j)), res.k);
    dirs.push_back(d / d.norm());
  }
  const PsdSearch found = maximize_min_eigenvalue(s0, dirs, opts);
  res.min_eigenvalue = found.min_eigenvalue;
  Matrix s = s0;
  for (std::size_t i = 0; i < dirs.size(); ++i) s += found.t(static_cast<Eigen::Index>(i)) * dirs[i];
  Certificate c = make_certificate(target, CertMethod::kCSSearch, Matrix(basis * s * basis.transpose()), lambda, g.m());
  if (found.min_eigenvalue >= -1e-9 * std::max(1.0, s0.norm()) && verify_certificate(g, c).passed()) {
    res.status = CsStatus::kFound;
    res.certificate = std::move(c);
  } else {
    res.status = CsStatus::kInconclusive;
    res.detail = "no PSD point found; best minimum eigenvalue " + to_decimal_string(found.min_eigenvalue);
  }
  return res;
}

/// Complementary-slackness search on the target eigenspace: exact when λ is an
/// integer, floating otherwise.
inline CsResult cs_search(const Graph& g, Target target, const CsOptions& opts = {}) {
  const Spectrum spec = laplacian_spectrum(g);
  const Cluster& cl = target_cluster(spec, target);
  if (opts.exact)
    if (auto b = exact_eigenbasis_if_integral(g, cl.value, cl.multiplicity)) {
      auto res = cs_search_exact(g, target, *b, Rational(std::lround(cl.value)), opts);
      if (res.status != CsStatus::kInconclusive) return res;
    }
  return cs_search_numeric(g, target, cl.basis, cl.value, opts);
}

// ---------------------------------------------------------------------------
// Cleanup of numerical certificates.

/// Entries within 1e-7 of each other share one rational: the simplest fraction within
/// tol of the cluster mean, capped at denom_cap.
inline RationalMatrix rationalize(const Matrix& m, long denom_cap = 10000, double tol = 1e-6) {
  std::vector<std::pair<double, Eigen::Index>> entries;
  for (Eigen::Index i = 0; i < m.size(); ++i) entries.emplace_back(m.data()[i], i);
  std::sort(entries.begin(), entries.end());
  RationalMatrix out(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  std::size_t start = 0;
  while (start < entries.size()) {
    std::size_t end = start + 1;
    while (end < entries.size() && entries[end].first - entries[end - 1].first <= 1e-7) ++end;
    double mean = 0;
    for (std::size_t i = start; i < end; ++i) mean += entries[i].first;
    mean /= static_cast<double>(end - start);
    const Rational q = approximate(mean, denom_cap, tol);
    for (std::size_t i = start; i < end; ++i) {
      const Eigen::Index flat = entries[i].second;  // column-major
      out(static_cast<std::size_t>(flat % m.rows()), static_cast<std::size_t>(flat / m.rows())) = q;
    }
    start = end;
  }
  return out;
}

/// (I - J/n) M (I - J/n)
inline Matrix center(const Matrix& m) {
  Matrix c = m;
  c.rowwise() -= c.colwise().mean();
  c.colwise() -= c.rowwise().mean();
  return c;
}

inline RationalMatrix center(const RationalMatrix& m) {
  const std::size_t n = m.rows();
  RationalMatrix h = RationalMatrix::identity(n);
  const Rational inv_n(1, static_cast<long>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) h(i, j) -= inv_n;
  return h * m * h;
}

struct Projection {
  Matrix projected;                     // rows replaced by their eigenspace components
  Matrix coefficients;                  // row i holds the inner products of row i with the basis
  std::optional<RationalMatrix> exact;  // when the basis is integral and every coefficient snapped
};

/// Centers m, then projects each row onto span(basis) (columns need not be orthogonal).
/// With snap_tol, inner products are snapped to nearby fractions with small denominators.
inline Projection project_rows(const Matrix& m, const Matrix& basis, std::optional<double> snap_tol = std::nullopt,
                               long snap_cap = 12) {
  if (m.cols() != basis.rows()) throw Error(ErrorCode::kDimensionMismatch, "basis rows vs matrix columns");
  Projection out;
  const Matrix c = center(m);
  out.coefficients = c * basis;
  const Matrix gram = basis.transpose() * basis;
  const Matrix gram_inv = gram.inverse();

  bool integral_basis = true;
  for (Eigen::Index i = 0; i < basis.size() && integral_basis; ++i)
    integral_basis = std::abs(basis.data()[i] - std::round(basis.data()[i])) <= 1e-12;

  bool all_snapped = snap_tol.has_value();
  std::vector<std::vector<Rational>> snapped(static_cast<std::size_t>(m.rows()));
  if (snap_tol) {
    for (Eigen::Index i = 0; i < out.coefficients.rows(); ++i)
      for (Eigen::Index j = 0; j < out.coefficients.cols(); ++j) {
        const double x = out.coefficients(i, j);
        const Rational q = simplest_between(Rational(x - *snap_tol), Rational(x + *snap_tol));
        if (q.get_den() <= snap_cap) {
          out.coefficients(i, j) = q.get_d();
          snapped[static_cast<std::size_t>(i)].push_back(q);
        } else {
          all_snapped = false;
        }
      }
  }
  out.projected = out.coefficients * gram_inv * basis.transpose();

  if (all_snapped && integral_basis) {
    const RationalMatrix b = rationalize(basis, 1, 0.5);
    const RationalMatrix bt = b.transpose();
    const RationalMatrix gi = inverse(bt * b);
    RationalMatrix coeff(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(basis.cols()));
    for (std::size_t i = 0; i < coeff.rows(); ++i)
      for (std::size_t j = 0; j < coeff.cols(); ++j) coeff(i, j) = snapped[i][j];
    out.exact = coeff * gi * bt;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Embeddings.

struct Embedding {
  Matrix points;  // n x k, row i is p_i
  double eigenvalue = 0;
};

/// Gram factor X = PPᵀ keeping the numerically nonzero spectrum.
inline Embedding embedding_from_certificate(const Certificate& c) {
  const auto ed = jacobi_eigen(c.numeric);
  const double scale = std::max(1.0, max_abs(c.numeric));
  if (ed.values(0) < -1e-9 * scale) throw Error(ErrorCode::kNotPsd, "min eigenvalue " + to_decimal_string(ed.values(0)));
  const double top = ed.values(ed.values.size() - 1);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = ed.values.size(); i-- > 0;)
    if (ed.values(i) > 1e-9 * std::max(1.0, top)) keep.push_back(i);
  Embedding e;
  e.eigenvalue = c.lambda;
  e.points.resize(c.numeric.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j)
    e.points.col(static_cast<Eigen::Index>(j)) = ed.vectors.col(keep[j]) * std::sqrt(ed.values(keep[j]));
  return e;
}

inline Embedding spectral_embedding(const EigenspaceBasis& b) { return {b.U, b.eigenvalue}; }

struct IsometryReport {
  bool isometric = false;
  double length = 0;  // common edge length
  double spread = 0;  // max - min edge length
  bool scaling_checked = false;
  bool scaling_ok = false;
};

/// Common edge length (relative agreement 1e-8, positive) and optionally the identity
/// c² = λ·Σ|p_i|²/|E|.
inline IsometryReport edge_isometry_check(const Embedding& e, const Graph& g, bool check_scaling = false) {
  IsometryReport r;
  double lo = 1e300, hi = 0;
  for (const auto& [u, v] : g.edges()) {
    const double d = (e.points.row(u) - e.points.row(v)).norm();
    lo = std::min(lo, d);
    hi = std::max(hi, d);
  }
  r.length = 0.5 * (lo + hi);
  r.spread = hi - lo;
  r.isometric = r.length > 1e-10 && r.spread <= 1e-8 * r.length;
  if (check_scaling) {
    r.scaling_checked = true;
    const double want = e.eigenvalue * e.points.squaredNorm() / static_cast<double>(g.m());
    r.scaling_ok = std::abs(r.length * r.length - want) <= 1e-8 * std::max(1.0, want);
  }
  return r;
}

struct NonedgeReport {
  bool ok = false;
  double alpha = 0;                   // edge length
  double beta = 0;                    // non-edge length when constant
  std::vector<double> nonedge_lengths;  // distinct values (clustered at 1e-8)
};

inline NonedgeReport edge_nonedge_isometry_check(const Embedding& e, const Graph& g) {
  NonedgeReport r;
  const auto edges = edge_isometry_check(e, g);
  r.alpha = edges.length;
  std::vector<double> lengths;
  for (int u = 0; u < g.n(); ++u)
    for (int v = u + 1; v < g.n(); ++v)
      if (!g.has_edge(u, v)) lengths.push_back((e.points.row(u) - e.points.row(v)).norm());
  std::sort(lengths.begin(), lengths.end());
  for (double d : lengths)
    if (r.nonedge_lengths.empty() || d - r.nonedge_lengths.back() > 1e-8 * std::max(1.0, d)) r.nonedge_lengths.push_back(d);
  if (lengths.empty()) {
    r.ok = edges.isometric;
    return r;
  }
  r.beta = r.nonedge_lengths.front();
  r.ok = edges.isometric && r.nonedge_lengths.size() == 1 && r.beta > 1e-10;
  return r;
}

struct ComplementPairReport {
  bool certified = false;
  NonedgeReport low, high;  // embeddings on the λ2 and λn eigenspaces of G
  std::optional<Certificate> x, y, x_complement, y_complement;
  std::string detail;
};

/// If both extreme eigenspaces of a regular G give edge-nonedge-isometric embeddings,
/// G and its complement are certified together by four UUᵀ-type certificates.
inline ComplementPairReport complement_pair_check(const Graph& g) {
  if (!g.regular_degree()) throw Error(ErrorCode::kNotRegular, "graph is not regular");
  Graph gc;
  try {
    gc = complement(g);
  } catch (const Error&) {
    throw Error(ErrorCode::kComplementDisconnected, "complement is not connected");
  }
  ComplementPairReport r;
  const Spectrum spec = laplacian_spectrum(g);
  r.low = edge_nonedge_isometry_check(spectral_embedding({spec.lambda2_cluster().basis, spec.lambda2()}), g);
  r.high = edge_nonedge_isometry_check(spectral_embedding({spec.lambdaN_cluster().basis, spec.lambdaN()}), g);
  if (!r.low.ok || !r.high.ok) {
    r.detail = !r.low.ok ? "lambda2 embedding is not edge-nonedge-isometric" : "lambdaN embedding is not edge-nonedge-isometric";
    return r;
  }
  r.x = uut_certificate(g, Target::kLambda2);
  r.y = uut_certificate(g, Target::kLambdaN);
  r.x_complement = uut_certificate(gc, Target::kLambda2);
  r.y_complement = uut_certificate(gc, Target::kLambdaN);
  r.certified = verify_certificate(g, *r.x).passed() && verify_certificate(g, *r.y).passed() &&
                verify_certificate(gc, *r.x_complement).passed() && verify_certificate(gc, *r.y_complement).passed();
  if (!r.certified) r.detail = "certificate verification failed";
  return r;
}

}  // namespace conformal

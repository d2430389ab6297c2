#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <numeric>
#include <vector>

#include "conformal/cayley.hpp"
#include "conformal/certify.hpp"
#include "conformal/disprove.hpp"
#include "conformal/graph.hpp"
#include "conformal/spectral.hpp"
#include "conformal/structure.hpp"

namespace conformal {

enum class Status { kRigid, kNumericallyRigid, kNotRigid, kInconclusive };
enum class Reason { kEdgeTransitive, kDistanceRegular, kCSSearch, kTheorem23, kDisproverWitness, kDualInfeasible, kNone };

constexpr std::string_view to_string(Status s) {
  switch (s) {
    case Status::kRigid: return "Rigid";
    case Status::kNumericallyRigid: return "NumericallyRigid";
    case Status::kNotRigid: return "NotRigid";
    case Status::kInconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

constexpr std::string_view to_string(Reason r) {
  switch (r) {
    case Reason::kEdgeTransitive: return "EdgeTransitive";
    case Reason::kDistanceRegular: return "DistanceRegular";
    case Reason::kCSSearch: return "CSSearch";
    case Reason::kTheorem23: return "Theorem23";
    case Reason::kDisproverWitness: return "DisproverWitness";
    case Reason::kDualInfeasible: return "DualInfeasible";
    case Reason::kNone: return "None";
  }
  return "None";
}

inline bool is_rigid(Status s) { return s == Status::kRigid || s == Status::kNumericallyRigid; }

struct Verdict {
  Status status = Status::kInconclusive;
  Reason reason = Reason::kNone;
  std::optional<Certificate> x, y;
  std::optional<Witness> witness;
  std::string contradiction;  // set for DualInfeasible
  double lambda2 = 0, lambdaN = 0;
  std::vector<std::string> log;
};

struct PipelineOptions {
  std::uint64_t seed = 0;
  bool exact_required = false;  // Rigid only with rationally verified certificates
  bool escalate = true;         // run the disprover when the dual route is undecided
  int budget = 3000;            // disprover iterations per restart
  int restarts = 5;
  int cs_iterations = 2000;
  int automorphism_cap = 256;
};

namespace detail {

inline CsOptions cs_options(const PipelineOptions& o) {
  CsOptions c;
  c.seed = o.seed;
  c.iterations = o.cs_iterations;
  c.restarts = o.restarts;
  return c;
}

inline DisproveOptions disprove_options(const PipelineOptions& o) {
  DisproveOptions d;
  d.seed = o.seed;
  d.iterations = o.budget;
  d.restarts = o.restarts;
  return d;
}

inline std::string describe(const Certificate& c) {
  return std::string(to_string(c.target)) + " certificate via " + std::string(to_string(c.method)) +
         (c.is_exact() ? " (exact)" : " (numeric)");
}

// Certificate for a side of a symmetric graph: UUᵀ first, complementary slackness as fallback.
inline std::optional<Certificate> symmetric_certificate(const Graph& g, Target t, const PipelineOptions& o,
                                                        std::vector<std::string>& log) {
  Certificate c = uut_certificate(g, t);
  if (verify_certificate(g, c).passed()) return c;
  log.push_back(std::string(to_string(t)) + ": UUT certificate failed verification, trying cs_search");
  auto cs = cs_search(g, t, cs_options(o));
  if (cs.status == CsStatus::kFound) return cs.certificate;
  return std::nullopt;
}

inline Status rigid_status(const Verdict& v, bool structural, const PipelineOptions& o) {
  const bool exact = v.x && v.y && v.x->is_exact() && v.y->is_exact();
  if (exact) return Status::kRigid;
  if (structural && !o.exact_required) return Status::kRigid;
  return Status::kNumericallyRigid;
}

inline void attach_witness(const Graph& g, Target side, Verdict& v, const PipelineOptions& o) {
  const auto r = side == Target::kLambda2 ? maximize_lambda2(g, disprove_options(o)) : minimize_lambdaN(g, disprove_options(o));
  v.log.push_back("disprover on " + std::string(to_string(side)) + ": best " + to_decimal_string(r.best) +
                  " vs baseline " + to_decimal_string(r.baseline));
  if (r.witness) v.witness = r.witness;
}

}  // namespace detail

/// Dual-certificate pipeline without disprover escalation for undecided graphs:
/// edge-transitivity, distance-regularity, then complementary-slackness search.
inline Verdict certify_rigidity(const Graph& g, const PipelineOptions& o = {}) {
  Verdict v;
  const Spectrum spec = laplacian_spectrum(g);
  v.lambda2 = spec.lambda2();
  v.lambdaN = spec.lambdaN();
  v.log.push_back("spectrum: lambda2 = " + to_decimal_string(v.lambda2) + " (multiplicity " +
                  std::to_string(spec.lambda2_cluster().multiplicity) + "), lambdaN = " + to_decimal_string(v.lambdaN) +
                  " (multiplicity " + std::to_string(spec.lambdaN_cluster().multiplicity) + ")");

  std::optional<EdgeOrbitPartition> orbits;
  try {
    orbits = edge_orbits(g, automorphism_generators(g, o.automorphism_cap));
    v.log.push_back("edge orbits: " + std::to_string(orbits->count()));
  } catch (const Error& e) {
    v.log.push_back(std::string("automorphism search skipped: ") + e.what());
  }

  if (orbits && orbits->count() == 1) {
    v.reason = Reason::kEdgeTransitive;
    v.log.push_back("edge-transitive: rigid by symmetry");
    v.x = detail::symmetric_certificate(g, Target::kLambda2, o, v.log);
    v.y = detail::symmetric_certificate(g, Target::kLambdaN, o, v.log);
    for (const auto* c : {&v.x, &v.y})
      if (*c) v.log.push_back(detail::describe(**c));
    v.status = detail::rigid_status(v, true, o);
    return v;
  }

  if (distance_regular_check(g).is_drg()) {
    v.log.push_back("distance-regular: trying UUT certificates");
    Certificate x = uut_certificate(g, Target::kLambda2), y = uut_certificate(g, Target::kLambdaN);
    if (verify_certificate(g, x).passed() && verify_certificate(g, y).passed()) {
      v.x = std::move(x);
      v.y = std::move(y);
      v.reason = Reason::kDistanceRegular;
      v.log.push_back(detail::describe(*v.x));
      v.log.push_back(detail::describe(*v.y));
      v.status = detail::rigid_status(v, true, o);
      return v;
    }
    v.log.push_back("distance-regular: UUT certificates failed verification");
  }

  std::optional<CsResult> sides[2];
  const Target targets[2] = {Target::kLambda2, Target::kLambdaN};
  for (int i = 0; i < 2; ++i) {
    auto r = cs_search(g, targets[i], detail::cs_options(o));
    if (r.certificate && r.k == 1) r.certificate->method = CertMethod::kRankOne;
    v.log.push_back("cs_search " + std::string(to_string(targets[i])) + ": " + std::string(to_string(r.status)) +
                    " (k = " + std::to_string(r.k) + ", nullity " + std::to_string(r.nullity) +
                    (r.exact_system ? ", exact" : ", numeric") + (r.detail.empty() ? "" : "; " + r.detail) + ")");
    sides[i] = std::move(r);
  }
  for (int i = 0; i < 2; ++i)
    if (sides[i]->status == CsStatus::kInfeasible) {
      v.status = Status::kNotRigid;
      v.reason = Reason::kDualInfeasible;
      v.contradiction = std::string(to_string(targets[i])) + ": " + sides[i]->detail;
      if (o.escalate) detail::attach_witness(g, targets[i], v, o);
      return v;
    }
  if (sides[0]->status == CsStatus::kFound && sides[1]->status == CsStatus::kFound) {
    v.x = sides[0]->certificate;
    v.y = sides[1]->certificate;
    v.reason = Reason::kCSSearch;
    v.log.push_back(detail::describe(*v.x));
    v.log.push_back(detail::describe(*v.y));
    v.status = detail::rigid_status(v, false, o);
    return v;
  }
  v.status = Status::kInconclusive;
  return v;
}

/// certify_rigidity followed, for undecided graphs, by the supergradient disprover.
inline Verdict check(const Graph& g, const PipelineOptions& o = {}) {
  Verdict v = certify_rigidity(g, o);
  if (v.status != Status::kInconclusive || !o.escalate) return v;
  v.log.push_back("escalating to disprover");
  for (Target side : {Target::kLambda2, Target::kLambdaN}) {
    detail::attach_witness(g, side, v, o);
    if (v.witness) {
      v.status = Status::kNotRigid;
      v.reason = Reason::kDisproverWitness;
      return v;
    }
  }
  v.log.push_back("no improving weights found; undecided");
  return v;
}

struct ScanRow {
  int n = 0, a = 0, b = 0;
  bool edge_transitive = false;
  bool thm23 = false;
  Status verdict = Status::kInconclusive;
  Reason reason = Reason::kNone;
  double lambda2 = 0, lambdaN = 0;
  double seconds = 0;
};

/// Pairs 1 <= a < b <= ceil(n/2) whose folded step sets {min(s, n-s)} are new and
/// generate a connected circulant.
inline std::vector<std::pair<int, int>> circulant_parameters(int n) {
  std::vector<std::pair<int, int>> out;
  std::set<std::set<int>> seen;
  for (int a = 1; a <= (n + 1) / 2; ++a)
    for (int b = a + 1; b <= (n + 1) / 2; ++b) {
      if (b >= n) continue;
      std::set<int> folded{std::min(a, n - a), std::min(b, n - b)};
      if (std::gcd(std::gcd(a, b), n) != 1) continue;
      if (!seen.insert(folded).second) continue;
      out.emplace_back(a, b);
    }
  return out;
}

inline ScanRow scan_instance(int n, int a, int b, const PipelineOptions& o) {
  const auto start = std::chrono::steady_clock::now();
  ScanRow row{n, a, b};
  const Graph g = circulant(n, {a, b});
  const Verdict v = check(g, o);
  row.lambda2 = v.lambda2;
  row.lambdaN = v.lambdaN;
  row.edge_transitive = v.reason == Reason::kEdgeTransitive;
  const auto crit = cayley_criterion(CayleyPresentation::cyclic(n, {a, b}), EigenvectorSearchOptions{5000, 360, o.seed});
  row.thm23 = crit.satisfied;
  row.verdict = v.status;
  row.reason = v.reason;
  if (v.status == Status::kInconclusive && crit.satisfied) {
    const bool exact = crit.sums2 && crit.sums2->exact_sums && crit.sumsN && crit.sumsN->exact_sums;
    row.verdict = exact ? Status::kRigid : Status::kNumericallyRigid;
    row.reason = Reason::kTheorem23;
  }
  row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

/// Runs scan_instance over a job list on a bounded worker pool; output order follows
/// the job order regardless of scheduling.
inline std::vector<ScanRow> scan_jobs(const std::vector<std::tuple<int, int, int>>& jobs, const PipelineOptions& o,
                                      unsigned threads = 0) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, jobs.size())));
  std::vector<ScanRow> rows(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < jobs.size();) {
      const auto [n, a, b] = jobs[i];
      rows[i] = scan_instance(n, a, b, o);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

inline std::vector<ScanRow> scan_circulants(int n_min, int n_max, const PipelineOptions& o = {}, unsigned threads = 0) {
  std::vector<std::tuple<int, int, int>> jobs;
  for (int n = n_min; n <= n_max; ++n)
    for (auto [a, b] : circulant_parameters(n)) jobs.emplace_back(n, a, b);
  return scan_jobs(jobs, o, threads);
}

}  // namespace conformal

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "conformal/conformal.hpp"

using namespace conformal;

namespace {

struct Common {
  std::uint64_t seed = 0;
  double tol = 0;
  bool exact = false;
  int budget = 3000;
  bool json = false;
  bool csv = false;
  std::string out;
};

void emit(const Common& c, const std::string& text) {
  if (c.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(c.out);
  if (!f) throw Error(ErrorCode::kParseError, "cannot write " + c.out);
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<int> parse_ints(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw Error(ErrorCode::kParseError, "not an integer list: " + s);
    }
  }
  return out;
}

PipelineOptions pipeline_options(const Common& c) {
  PipelineOptions o;
  o.seed = c.seed;
  o.exact_required = c.exact;
  o.budget = c.budget;
  return o;
}

int exit_code(Status s) {
  switch (s) {
    case Status::kRigid:
    case Status::kNumericallyRigid: return 0;
    case Status::kNotRigid: return 1;
    case Status::kInconclusive: return 2;
  }
  return 2;
}

int cmd_check(const std::string& path, const Common& c, bool no_escalate) {
  const Graph g = read_graph(path);
  auto o = pipeline_options(c);
  o.escalate = !no_escalate;
  const Verdict v = check(g, o);
  emit(c, dump(to_json(v)));
  std::cerr << to_string(v.status) << " (" << to_string(v.reason) << ")  lambda2=" << to_decimal_string(v.lambda2)
            << " lambdaN=" << to_decimal_string(v.lambdaN) << "\n";
  if (v.x) std::cerr << "  X: " << detail::describe(*v.x) << "\n";
  if (v.y) std::cerr << "  Y: " << detail::describe(*v.y) << "\n";
  if (v.witness)
    std::cerr << "  witness on " << to_string(v.witness->side) << ": " << to_decimal_string(v.witness->achieved)
              << " vs " << to_decimal_string(v.witness->baseline) << " (margin " << v.witness->margin << ")\n";
  if (!v.contradiction.empty()) std::cerr << "  " << v.contradiction << "\n";
  return exit_code(v.status);
}

int cmd_spectrum(const std::string& path, const std::string& weights_path, const Common& c) {
  const Graph g = read_graph(path);
  SpectrumOptions so;
  so.cluster_tol = c.tol;
  Matrix L = laplacian(g);
  if (!weights_path.empty()) {
    auto w = weights_from_json(parse_json(read_text_file(weights_path)));
    if (w.normalized) w = normalize_weights(w, g.m());
    L = laplacian(g, w);
  }
  const Spectrum s = eigendecompose(L, so);
  if (c.json) {
    emit(c, dump(to_json(s)));
    return 0;
  }
  std::ostringstream os;
  for (auto it = s.clusters.rbegin(); it != s.clusters.rend(); ++it)
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g\t%d\n", std::abs(it->value) < 1e-12 ? 0.0 : it->value, it->multiplicity);
    os << buf;
  }
  if (s.near_disconnection) os << "# warning: lambda2 is close to zero\n";
  emit(c, os.str());
  return 0;
}

int cmd_verify(const std::string& graph_path, const std::string& cert_path, const Common& c) {
  const Graph g = read_graph(graph_path);
  const Certificate cert = certificate_from_json(parse_json(read_text_file(cert_path)));
  const auto rep = verify_certificate(g, cert);
  emit(c, dump(to_json(rep)));
  for (const auto& cond : rep.conditions)
    std::cerr << (cond.pass ? "pass " : "FAIL ") << cond.name << "  residual " << cond.residual
              << (cond.detail.empty() ? "" : "  " + cond.detail) << "\n";
  std::cerr << (rep.passed() ? "certificate valid" : "certificate invalid") << (rep.exact ? " (exact)" : " (numeric)")
            << "\n";
  return rep.passed() ? 0 : 1;
}

int cmd_certify(const std::string& path, const std::string& target_name, const std::string& method, const Common& c) {
  const Graph g = read_graph(path);
  const Target t = parse_target(target_name);
  std::optional<Certificate> cert;
  if (method == "uut") {
    cert = uut_certificate(g, t);
  } else if (method == "rank-one") {
    cert = rank_one_certificate(g, t);
  } else if (method == "cs") {
    CsOptions o;
    o.seed = c.seed;
    const auto r = cs_search(g, t, o);
    std::cerr << "cs_search: k=" << r.k << " nullity=" << r.nullity << " " << r.detail << "\n";
    if (!r.certificate) {
      std::cerr << (r.status == CsStatus::kInfeasible ? "infeasible" : "inconclusive") << "\n";
      return r.status == CsStatus::kInfeasible ? 1 : 2;
    }
    cert = *r.certificate;
  } else {
    throw Error(ErrorCode::kParseError, "unknown method " + method + " (uut, rank-one, cs)");
  }
  const auto rep = verify_certificate(g, *cert);
  emit(c, dump(to_json(*cert)));
  std::cerr << (rep.passed() ? "verified" : "not valid: " + rep.first_failure())
            << (rep.exact ? " (exact)" : " (numeric)") << "\n";
  return rep.passed() ? 0 : 1;
}

CayleyPresentation presentation_from_json(const Json& j) {
  try {
    CayleyPresentation p;
    p.table = j.at("table").get<std::vector<std::vector<int>>>();
    p.order = static_cast<int>(p.table.size());
    p.gens = j.at("gens").get<std::vector<int>>();
    return p;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

Json profile_json(const CayleySumProfile& prof) {
  Json sums = Json::array();
  if (prof.exact_sums)
    for (auto s : *prof.exact_sums) sums.push_back(s);
  else
    for (double s : prof.sums) sums.push_back(s);
  return Json{{"gens", prof.gens}, {"sums", sums}, {"spread", prof.spread}};
}

void profile_text(std::ostream& os, const char* label, const CayleySumProfile& prof) {
  os << label << "\n";
  for (std::size_t i = 0; i < prof.gens.size(); ++i) {
    os << "  s=" << std::setw(4) << prof.gens[i] << "  sum=";
    if (prof.exact_sums) os << std::setw(8) << (*prof.exact_sums)[i];
    else os << std::setw(12) << prof.sums[i];
    os << "\n";
  }
}

int cmd_cayley(int zn, const std::string& gens, const std::string& table_path, bool pipeline, const Common& c) {
  CayleyPresentation p;
  if (!table_path.empty()) {
    p = presentation_from_json(parse_json(read_text_file(table_path)));
    if (!gens.empty()) p.gens = parse_ints(gens);
  } else if (zn > 0) {
    p = CayleyPresentation::cyclic(zn, parse_ints(gens));
  } else {
    throw Error(ErrorCode::kParseError, "need --zn or --table");
  }
  p.validate();
  EigenvectorSearchOptions so;
  so.seed = c.seed;
  so.budget = std::max(1, c.budget);
  const auto r = cayley_criterion(p, so);
  std::optional<Verdict> verdict;
  if (pipeline || !r.satisfied) verdict = check(cayley_graph(p), pipeline_options(c));
  if (c.json) {
    Json j{{"order", p.order}, {"gens", p.gens}, {"criterion_satisfied", r.satisfied}};
    j["lambda2_sums"] = r.sums2 ? profile_json(*r.sums2) : Json(nullptr);
    j["lambdaN_sums"] = r.sumsN ? profile_json(*r.sumsN) : Json(nullptr);
    if (verdict) j["verdict"] = to_json(*verdict);
    emit(c, dump(j));
  } else {
    std::ostringstream os;
    os << "criterion " << (r.satisfied ? "satisfied" : "not established") << "\n";
    if (r.sums2) profile_text(os, "lambda2 eigenvector sums", *r.sums2);
    else os << "lambda2: no eigenvector with constant sums found\n";
    if (r.sumsN) profile_text(os, "lambdaN eigenvector sums", *r.sumsN);
    else os << "lambdaN: no eigenvector with constant sums found\n";
    if (verdict) os << "pipeline verdict: " << to_string(verdict->status) << " (" << to_string(verdict->reason) << ")\n";
    emit(c, os.str());
  }
  if (r.satisfied) return 0;
  return verdict ? exit_code(verdict->status) : 2;
}

int cmd_scan(int n_min, int n_max, const std::string& only, unsigned threads, const Common& c) {
  if (n_min < 3 || n_max < n_min) throw Error(ErrorCode::kOutOfRange, "need 3 <= n-min <= n-max");
  if (n_max > 64) throw Error(ErrorCode::kOutOfRange, "n-max above 64");
  std::vector<std::tuple<int, int, int>> jobs;
  const auto fixed = parse_ints(only);
  if (!fixed.empty() && fixed.size() != 2) throw Error(ErrorCode::kParseError, "--only takes a,b");
  for (int n = n_min; n <= n_max; ++n) {
    if (!fixed.empty()) {
      const auto params = circulant_parameters(n);
      if (std::find(params.begin(), params.end(), std::pair{fixed[0], fixed[1]}) != params.end())
        jobs.emplace_back(n, fixed[0], fixed[1]);
      continue;
    }
    for (auto [a, b] : circulant_parameters(n)) jobs.emplace_back(n, a, b);
  }
  const auto rows = scan_jobs(jobs, pipeline_options(c), threads);
  std::ostringstream os;
  if (c.json) {
    Json arr = Json::array();
    for (const auto& r : rows)
      arr.push_back(Json{{"n", r.n}, {"a", r.a}, {"b", r.b}, {"edge_transitive", r.edge_transitive}, {"thm23", r.thm23},
                         {"verdict", std::string(to_string(r.verdict))}, {"reason", std::string(to_string(r.reason))},
                         {"lambda2", r.lambda2}, {"lambdaN", r.lambdaN}, {"seconds", r.seconds}});
    os << arr.dump(2) << "\n";
  } else {
    os << "n,a,b,edge_transitive,thm23,verdict,lambda2,lambdaN,seconds\n";
    char buf[256];
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%s,%.12g,%.12g,%.3f\n", r.n, r.a, r.b, r.edge_transitive ? 1 : 0,
                    r.thm23 ? 1 : 0, std::string(to_string(r.verdict)).c_str(), r.lambda2, r.lambdaN, r.seconds);
      os << buf;
    }
  }
  emit(c, os.str());
  int rigid = 0;
  for (const auto& r : rows) rigid += is_rigid(r.verdict);
  std::cerr << rows.size() << " instances, " << rigid << " rigid\n";
  return 0;
}

int cmd_orbits(const std::string& path, const Common& c) {
  const Graph g = read_graph(path);
  const auto p = edge_orbits(g);
  if (c.json) {
    emit(c, dump(to_json(p)));
    return 0;
  }
  std::ostringstream os;
  os << p.count() << " edge orbit(s), sizes";
  for (auto s : p.sizes()) os << " " << s;
  os << "\n" << p.generators.size() << " automorphism generator(s)\n";
  emit(c, os.str());
  return 0;
}

int cmd_embed(const std::string& path, const std::string& selector, bool integer_basis, const Common& c) {
  const Graph g = read_graph(path);
  const Spectrum s = laplacian_spectrum(g);
  double lam;
  if (selector == "lambda2") lam = s.lambda2();
  else if (selector == "lambdaN") lam = s.lambdaN();
  else lam = parse_rational(selector).get_d();
  EigenspaceBasis b = eigenspace(s, lam);
  if (integer_basis) {
    const auto exact = exact_eigenbasis_if_integral(g, b.eigenvalue, static_cast<int>(b.U.cols()));
    if (!exact) throw Error(ErrorCode::kNoSuchEigenvalue, "no integer basis for a non-integral eigenvalue");
    b.U = to_double(*exact);
  }
  const Embedding e = spectral_embedding(b);
  const auto iso = edge_isometry_check(e, g);
  const auto non = edge_nonedge_isometry_check(e, g);
  std::vector<double> radii;
  for (Eigen::Index i = 0; i < e.points.rows(); ++i) radii.push_back(e.points.row(i).norm());
  const auto [rmin, rmax] = std::minmax_element(radii.begin(), radii.end());
  const bool spherical = *rmax - *rmin <= 1e-8 * std::max(1.0, *rmax);

  Json j = to_json(e);
  j["edge_isometric"] = iso.isometric;
  j["edge_length"] = iso.length;
  j["edge_nonedge_isometric"] = non.ok;
  j["nonedge_lengths"] = non.nonedge_lengths;
  j["spherical"] = spherical;
  if (spherical) j["radius"] = *rmax;
  emit(c, dump(j));
  std::cerr << "eigenvalue " << to_decimal_string(b.eigenvalue) << ", dimension " << b.U.cols() << "\n";
  std::cerr << (iso.isometric ? "edge-isometric, length " + to_decimal_string(iso.length) : "not edge-isometric") << "\n";
  std::cerr << "non-edge lengths:";
  for (double x : non.nonedge_lengths) std::cerr << " " << to_decimal_string(x);
  std::cerr << (non.ok ? "  (edge-nonedge-isometric)" : "") << "\n";
  if (spherical) std::cerr << "spherical, radius " << to_decimal_string(*rmax) << "\n";
  return iso.isometric ? 0 : 1;
}

int cmd_disprove(const std::string& path, const std::string& side, const Common& c) {
  const Graph g = read_graph(path);
  DisproveOptions o;
  o.seed = c.seed;
  o.iterations = c.budget;
  const Target t = parse_target(side);
  const auto r = t == Target::kLambda2 ? maximize_lambda2(g, o) : minimize_lambdaN(g, o);
  Json j{{"side", std::string(to_string(t))}, {"baseline", r.baseline}, {"best", r.best}, {"iterations", r.iterations}};
  j["witness"] = r.witness ? to_json(*r.witness) : Json(nullptr);
  emit(c, dump(j));
  std::cerr << (r.witness ? "witness found" : "no improvement") << ": " << to_decimal_string(r.best) << " vs "
            << to_decimal_string(r.baseline) << "\n";
  return r.witness ? 1 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conformal rigidity of graphs: certificates, witnesses and scans"};
  app.require_subcommand(1);
  Common c;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--seed", c.seed, "random seed");
    sub->add_option("--tol", c.tol, "tolerance override (spectrum clustering)");
    sub->add_flag("--exact", c.exact, "require rational verification for Rigid");
    sub->add_option("--budget", c.budget, "search iterations");
    sub->add_flag("--json", c.json, "JSON output");
    sub->add_flag("--csv", c.csv, "CSV output");
    sub->add_option("--out", c.out, "write output to a file");
  };

  std::string graph, cert, weights, target = "lambda2", method = "uut", gens, table, only, selector = "lambda2";
  bool no_escalate = false, pipeline = false, integer_basis = false;
  int zn = 0, n_min = 0, n_max = 0;
  unsigned threads = 0;

  auto* check_cmd = app.add_subcommand("check", "decide conformal rigidity");
  check_cmd->add_option("graph", graph, "graph file (JSON or edge list)")->required();
  check_cmd->add_flag("--no-escalate", no_escalate, "do not run the disprover on undecided graphs");
  common(check_cmd);

  auto* spectrum_cmd = app.add_subcommand("spectrum", "Laplacian eigenvalues with multiplicities");
  spectrum_cmd->add_option("graph", graph)->required();
  spectrum_cmd->add_option("--weights", weights, "edge weight file");
  common(spectrum_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "verify a dual certificate");
  verify_cmd->add_option("graph", graph)->required();
  verify_cmd->add_option("certificate", cert)->required();
  common(verify_cmd);

  auto* certify_cmd = app.add_subcommand("certify", "emit a certificate for one side");
  certify_cmd->add_option("graph", graph)->required();
  certify_cmd->add_option("--target", target, "lambda2 or lambdaN");
  certify_cmd->add_option("--method", method, "uut, rank-one or cs");
  common(certify_cmd);

  auto* cayley_cmd = app.add_subcommand("cayley", "eigenvector sum criterion for Cayley graphs");
  cayley_cmd->add_option("--zn", zn, "cyclic group order");
  cayley_cmd->add_option("--gens", gens, "comma-separated generators");
  cayley_cmd->add_option("--table", table, "JSON file with a multiplication table and gens");
  cayley_cmd->add_flag("--pipeline", pipeline, "also run the full pipeline");
  common(cayley_cmd);

  auto* scan_cmd = app.add_subcommand("scan-circulants", "classify two-generator circulants");
  scan_cmd->add_option("--n-min", n_min)->required();
  scan_cmd->add_option("--n-max", n_max);
  scan_cmd->add_option("--only", only, "restrict to generators a,b");
  scan_cmd->add_option("--threads", threads, "worker threads (0 = hardware)");
  common(scan_cmd);

  auto* orbits_cmd = app.add_subcommand("orbits", "edge orbits under the automorphism group");
  orbits_cmd->add_option("graph", graph)->required();
  common(orbits_cmd);

  auto* embed_cmd = app.add_subcommand("embed", "eigenspace embedding and isometry report");
  embed_cmd->add_option("graph", graph)->required();
  embed_cmd->add_option("--lambda", selector, "eigenvalue, lambda2 or lambdaN");
  embed_cmd->add_flag("--integer-basis", integer_basis, "use an integer eigenbasis instead of an orthonormal one");
  common(embed_cmd);

  auto* disprove_cmd = app.add_subcommand("disprove", "search for weights beating the unweighted eigenvalue");
  disprove_cmd->add_option("graph", graph)->required();
  disprove_cmd->add_option("--side", target, "lambda2 or lambdaN");
  common(disprove_cmd);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check_cmd) return cmd_check(graph, c, no_escalate);
    if (*spectrum_cmd) return cmd_spectrum(graph, weights, c);
    if (*verify_cmd) return cmd_verify(graph, cert, c);
    if (*certify_cmd) return cmd_certify(graph, target, method, c);
    if (*cayley_cmd) return cmd_cayley(zn, gens, table, pipeline, c);
    if (*scan_cmd) return cmd_scan(n_min, n_max > 0 ? n_max : n_min, only, threads, c);
    if (*orbits_cmd) return cmd_orbits(graph, c);
    if (*embed_cmd) return cmd_embed(graph, selector, integer_basis, c);
    if (*disprove_cmd) return cmd_disprove(graph, target, c);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

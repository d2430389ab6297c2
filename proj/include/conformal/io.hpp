#pragma once

#include <nlohmann/json.hpp>

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>

#include "conformal/certify.hpp"
#include "conformal/disprove.hpp"
#include "conformal/error.hpp"
#include "conformal/graph.hpp"
#include "conformal/pipeline.hpp"
#include "conformal/spectral.hpp"
#include "conformal/structure.hpp"

namespace conformal {

using Json = nlohmann::json;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

inline Graph graph_from_json(const Json& j) {
  try {
    const int n = j.at("n").get<int>();
    std::vector<Edge> edges;
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2) throw Error(ErrorCode::kParseError, "edge must be a pair");
      edges.push_back({e[0].get<int>(), e[1].get<int>()});
    }
    return build_graph(n, std::move(edges));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

/// Edge-list text: first line "n m", then m lines "u v".
inline Graph graph_from_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  long n = 0, m = 0;
  if (!(in >> n >> m) || n <= 0 || m < 0) throw Error(ErrorCode::kParseError, "edge list must start with 'n m'");
  std::vector<Edge> edges;
  for (long k = 0; k < m; ++k) {
    int u, v;
    if (!(in >> u >> v)) throw Error(ErrorCode::kParseError, "expected " + std::to_string(m) + " edges");
    edges.push_back({u, v});
  }
  std::string rest;
  if (in >> rest) throw Error(ErrorCode::kParseError, "trailing data after edge list");
  return build_graph(static_cast<int>(n), std::move(edges));
}

/// JSON object or edge-list text, detected by the first non-space character.
inline Graph parse_graph(std::string_view text) {
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (c == '{') return graph_from_json(parse_json(text));
    break;
  }
  return graph_from_edge_list(text);
}

inline Graph read_graph(const std::string& path) { return parse_graph(read_text_file(path)); }

inline Json to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back({u, v});
  return Json{{"n", g.n()}, {"edges", edges}};
}

inline std::string to_edge_list(const Graph& g) {
  std::string out = std::to_string(g.n()) + " " + std::to_string(g.m()) + "\n";
  for (const auto& [u, v] : g.edges()) out += std::to_string(u) + " " + std::to_string(v) + "\n";
  return out;
}

inline WeightVector weights_from_json(const Json& j) {
  try {
    WeightVector w;
    for (const auto& x : j.at("weights")) w.values.push_back(x.is_string() ? std::stod(x.get<std::string>()) : x.get<double>());
    if (j.contains("normalized")) w.normalized = j["normalized"].get<bool>();
    return w;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  } catch (const std::logic_error& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

inline Json to_json(const WeightVector& w) { return Json{{"weights", w.values}, {"normalized", w.normalized}}; }

inline Json to_json(const Spectrum& s) {
  Json values = Json::array(), clusters = Json::array();
  for (Eigen::Index i = 0; i < s.eigenvalues.size(); ++i) values.push_back(to_decimal_string(s.eigenvalues(i)));
  for (const auto& c : s.clusters) {
    Json basis = Json::array();
    for (Eigen::Index i = 0; i < c.basis.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index j = 0; j < c.basis.cols(); ++j) row.push_back(to_decimal_string(c.basis(i, j)));
      basis.push_back(row);
    }
    clusters.push_back(Json{{"value", to_decimal_string(c.value)}, {"multiplicity", c.multiplicity}, {"basis", basis}});
  }
  return Json{{"eigenvalues", values}, {"clusters", clusters}, {"near_disconnection", s.near_disconnection}};
}

inline bool is_fraction_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  bool digits = false, slash = false;
  for (; i < s.size(); ++i) {
    if (std::isdigit(static_cast<unsigned char>(s[i]))) digits = true;
    else if (s[i] == '/' && !slash && digits) { slash = true; digits = false; }
    else return false;
  }
  return digits;
}

/// Entries (and lambda) in "p/q" form when exact, 17-digit decimals otherwise.
inline Json to_json(const Certificate& c) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < c.numeric.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < c.numeric.cols(); ++j)
      row.push_back(c.exact ? to_string((*c.exact)(static_cast<std::size_t>(i), static_cast<std::size_t>(j)))
                            : to_decimal_string(c.numeric(i, j)));
    rows.push_back(row);
  }
  return Json{{"target", std::string(to_string(c.target))},
              {"lambda", c.exact && c.lambda_exact ? to_string(*c.lambda_exact) : to_decimal_string(c.lambda)},
              {"method", std::string(to_string(c.method))},
              {"claimed_trace", to_decimal_string(c.claimed_trace)},
              {"entries", rows}};
}

/// Decimal text rounds to nearest; fractions go through exact arithmetic.
inline double parse_number(const std::string& text) {
  if (text.find('/') == std::string::npos) {
    const char* first = text.data() + (!text.empty() && text[0] == '+');
    double v = 0;
    const auto [ptr, ec] = std::from_chars(first, text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size()) return v;
  }
  return parse_rational(text).get_d();
}

inline Certificate certificate_from_json(const Json& j) {
  try {
    Certificate c;
    c.target = parse_target(j.at("target").get<std::string>());
    c.method = j.contains("method") ? parse_method(j["method"].get<std::string>()) : CertMethod::kExternal;
    auto text = [](const Json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    const std::string lam = text(j.at("lambda"));
    const auto& rows = j.at("entries");
    const std::size_t n = rows.size();
    bool exact = is_fraction_literal(lam);
    for (const auto& row : rows) {
      if (row.size() != n) throw Error(ErrorCode::kDimensionMismatch, "certificate entries must be square");
      for (const auto& x : row) exact = exact && is_fraction_literal(text(x));
    }
    c.numeric.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    if (exact) {
      RationalMatrix m(n, n);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) m(i, k) = parse_rational(text(rows[i][k]));
      c.numeric = to_double(m);
      c.exact = std::move(m);
      c.lambda_exact = parse_rational(lam);
      c.lambda = c.lambda_exact->get_d();
    } else {
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k)
          c.numeric(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = parse_number(text(rows[i][k]));
      c.lambda = parse_number(lam);
    }
    c.claimed_trace = j.contains("claimed_trace") ? parse_number(text(j["claimed_trace"])) : c.numeric.trace();
    return c;
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kParseError, e.what());
  }
}

inline Json to_json(const VerificationReport& r) {
  Json conds = Json::array();
  for (const auto& c : r.conditions)
    conds.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"residual", to_decimal_string(c.residual)}, {"detail", c.detail}});
  return Json{{"target", std::string(to_string(r.target))},
              {"exact", r.exact},
              {"lambda", to_decimal_string(r.lambda)},
              {"passed", r.passed()},
              {"conditions", conds}};
}

inline Json to_json(const Witness& w) {
  Json weights = Json::array();
  for (double x : w.weights.values) weights.push_back(to_decimal_string(x));
  return Json{{"side", std::string(to_string(w.side))}, {"weights", weights}, {"achieved", to_decimal_string(w.achieved)},
              {"baseline", to_decimal_string(w.baseline)}, {"margin", to_decimal_string(w.margin)},
              {"iterations", w.iterations}, {"seed", w.seed}};
}

inline Json to_json(const EdgeOrbitPartition& p) {
  return Json{{"orbits", p.orbits}, {"sizes", p.sizes()}, {"generators", p.generators}};
}

inline Json to_json(const Verdict& v) {
  Json j{{"status", std::string(to_string(v.status))},
         {"reason", std::string(to_string(v.reason))},
         {"lambda2", to_decimal_string(v.lambda2)},
         {"lambdaN", to_decimal_string(v.lambdaN)},
         {"log", v.log}};
  Json certs = Json::object();
  if (v.x) certs["X"] = to_json(*v.x);
  if (v.y) certs["Y"] = to_json(*v.y);
  j["certificates"] = certs;
  j["witness"] = v.witness ? to_json(*v.witness) : Json(nullptr);
  if (!v.contradiction.empty()) j["contradiction"] = v.contradiction;
  return j;
}

inline Json to_json(const Embedding& e) {
  Json pts = Json::array();
  for (Eigen::Index i = 0; i < e.points.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < e.points.cols(); ++k) row.push_back(to_decimal_string(e.points(i, k)));
    pts.push_back(row);
  }
  return Json{{"eigenvalue", to_decimal_string(e.eigenvalue)}, {"points", pts}};
}

}  // namespace conformal

#pragma once

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "conformal/conformal.hpp"

namespace testing_support {

inline conformal::Graph load(const std::string& name) {
  return conformal::read_graph(std::string(CONFORMAL_DATA_DIR) + "/" + name + ".json");
}

inline conformal::WeightVector random_weights(std::size_t m, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  conformal::WeightVector w;
  for (std::size_t i = 0; i < m; ++i) w.values.push_back(unit(rng));
  return conformal::normalize_weights(w, m);
}

// Every permutation of 0..n-1 that preserves the edge set.
inline std::vector<conformal::Permutation> brute_force_automorphisms(const conformal::Graph& g) {
  std::vector<conformal::Permutation> out;
  conformal::Permutation p(static_cast<std::size_t>(g.n()));
  std::iota(p.begin(), p.end(), 0);
  do {
    if (conformal::is_automorphism(g, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

inline bool isomorphic_brute_force(const conformal::Graph& a, const conformal::Graph& b) {
  if (a.n() != b.n() || a.m() != b.m()) return false;
  conformal::Permutation p(static_cast<std::size_t>(a.n()));
  std::iota(p.begin(), p.end(), 0);
  do {
    bool ok = true;
    for (const auto& e : a.edges())
      if (!b.has_edge(p[e.u], p[e.v])) {
        ok = false;
        break;
      }
    if (ok) return true;
  } while (std::next_permutation(p.begin(), p.end()));
  return false;
}

inline std::vector<double> sorted_eigenvalues(const conformal::Matrix& m) {
  const auto ed = conformal::jacobi_eigen(m);
  return {ed.values.data(), ed.values.data() + ed.values.size()};
}

}  // namespace testing_support

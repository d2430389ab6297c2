#include <gtest/gtest.h>

#include <numbers>

#include "common.hpp"

using namespace conformal;
using testing_support::load;

namespace {

std::vector<std::pair<double, int>> clusters_of(const Spectrum& s) {
  std::vector<std::pair<double, int>> out;
  for (const auto& c : s.clusters) out.emplace_back(c.value, c.multiplicity);
  return out;
}

void expect_clusters(const Graph& g, std::vector<std::pair<double, int>> want) {
  const auto got = clusters_of(laplacian_spectrum(g));
  std::sort(want.begin(), want.end());
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t i = 0; i < got.size(); ++i) {
    EXPECT_NEAR(got[i].first, want[i].first, 1e-9);
    EXPECT_EQ(got[i].second, want[i].second);
  }
}

// Characteristic polynomial coefficients (Faddeev-LeVerrier), highest degree first.
std::vector<double> char_poly(const Matrix& a) {
  const Eigen::Index n = a.rows();
  std::vector<double> c{1.0};
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c.back() * Matrix::Identity(n, n);
    c.push_back(-(a * m).trace() / static_cast<double>(k));
  }
  return c;
}

double horner(const std::vector<double>& c, double x) {
  double y = 0;
  for (double k : c) y = y * x + k;
  return y;
}

std::vector<double> roots_by_bisection(const Matrix& a) {
  const auto c = char_poly(a);
  double r = 0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) r = std::max(r, a.row(i).cwiseAbs().sum());
  std::vector<double> roots;
  const int samples = 200000;
  double x0 = -r - 1, f0 = horner(c, x0);
  for (int s = 1; s <= samples; ++s) {
    const double x1 = -r - 1 + (2 * r + 2) * s / samples, f1 = horner(c, x1);
    if (f0 == 0) roots.push_back(x0);
    else if (f0 * f1 < 0) {
      double lo = x0, hi = x1, flo = f0;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi), fm = horner(c, mid);
        if (flo * fm <= 0) hi = mid;
        else { lo = mid; flo = fm; }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

Matrix random_symmetric(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Matrix a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  return a;
}

}  // namespace

TEST(Eigendecompose, CompleteGraphK5) { expect_clusters(load("k5"), {{0, 1}, {5, 4}}); }

TEST(Eigendecompose, Hoffman) { expect_clusters(load("hoffman"), {{8, 1}, {6, 4}, {4, 6}, {2, 4}, {0, 1}}); }

TEST(Eigendecompose, Petersen) { expect_clusters(load("petersen"), {{5, 4}, {2, 5}, {0, 1}}); }

TEST(Eigendecompose, SixCycleComplement) {
  const auto s = laplacian_spectrum(load("c6_complement"));
  const std::vector<double> want{0, 2, 3, 3, 5, 5};
  for (int i = 0; i < 6; ++i) EXPECT_NEAR(s.eigenvalues(i), want[i], 1e-9);
}

TEST(Eigendecompose, ZeroClusterIsNormalizedOnes) {
  const auto s = laplacian_spectrum(load("haar565"));
  EXPECT_EQ(s.eigenvalues(0), 0.0);
  EXPECT_EQ(s.clusters.front().multiplicity, 1);
  EXPECT_NEAR((s.clusters.front().basis.col(0) - Vector::Constant(20, 1 / std::sqrt(20.0))).norm(), 0, 1e-15);
  EXPECT_FALSE(s.near_disconnection);
}

TEST(Eigendecompose, ClusterBasesOrthonormalAndOrthogonalToOnes) {
  for (const char* name : {"hoffman", "petersen", "klein_distance2", "cng6b"}) {
    const auto s = laplacian_spectrum(load(name));
    int total = 0;
    for (std::size_t i = 0; i < s.clusters.size(); ++i) {
      const auto& c = s.clusters[i];
      total += c.multiplicity;
      const Matrix gram = c.basis.transpose() * c.basis;
      EXPECT_LE((gram - Matrix::Identity(c.multiplicity, c.multiplicity)).cwiseAbs().maxCoeff(), 1e-9) << name;
      if (c.value > 0) { EXPECT_LE((c.basis.colwise().sum()).cwiseAbs().maxCoeff(), 1e-9) << name; }
      for (std::size_t j = 0; j < i; ++j)
        EXPECT_LE((s.clusters[j].basis.transpose() * c.basis).cwiseAbs().maxCoeff(), 1e-9) << name;
    }
    EXPECT_EQ(total, static_cast<int>(s.eigenvalues.size()));
  }
}

TEST(Eigendecompose, NearDisconnectionFlag) {
  const Graph g = load("prism");
  WeightVector w = WeightVector::ones(g.m());
  for (auto [u, v] : std::vector<std::pair<int, int>>{{0, 3}, {1, 4}, {2, 5}}) w.values[*g.edge_index(u, v)] = 0;
  const auto s = eigendecompose(laplacian(g, normalize_weights(w, g.m())));
  EXPECT_TRUE(s.near_disconnection);
  EXPECT_NEAR(s.eigenvalues(1), 0, 1e-9);
}

TEST(Lambda, FourCycle) {
  const Graph g = load("c4");
  EXPECT_NEAR(lambda2(g, WeightVector::ones(4)), 2, 1e-12);
  EXPECT_NEAR(lambdaN(g, WeightVector::ones(4)), 4, 1e-12);
}

TEST(Lambda, CirculantEighteen) {
  const Graph g = load("c18_1_5");
  EXPECT_NEAR(lambda2(g, WeightVector::ones(g.m())), 2, 1e-10);
  EXPECT_NEAR(lambdaN(g, WeightVector::ones(g.m())), 8, 1e-10);
}

TEST(Lambda, Prism) { EXPECT_NEAR(lambdaN(load("prism"), WeightVector::ones(9)), 5, 1e-12); }

TEST(Lambda, CirculantOneTwoClosedForm) {
  for (int n = 7; n <= 30; ++n) {
    const Graph g = circulant(n, {1, 2});
    const double x = 2 * std::numbers::pi / n;
    EXPECT_NEAR(lambda2(g, WeightVector::ones(g.m())), 4 - 2 * std::cos(x) - 2 * std::cos(2 * x), 1e-10) << n;
  }
}

TEST(Eigenspace, HoffmanTop) {
  const auto b = eigenspace(laplacian_spectrum(load("hoffman")), 8);
  ASSERT_EQ(b.multiplicity(), 1);
  Vector v(16);
  for (int i = 0; i < 16; ++i) v(i) = i < 8 ? -0.25 : 0.25;
  EXPECT_NEAR(std::abs(b.U.col(0).dot(v)), 1.0, 1e-10);
}

TEST(Eigenspace, FourCycleLambda2) {
  const auto b = eigenspace(laplacian(load("c4")), 2);
  ASSERT_EQ(b.multiplicity(), 2);
  Matrix span(4, 2);
  span << -1, 0, 0, -1, 1, 0, 0, 1;
  // Both bases span the same plane: projecting one onto the other is lossless.
  const Matrix proj = b.U * (b.U.transpose() * span);
  EXPECT_LE((proj - span).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(Eigenspace, ZeroIsOnes) {
  const auto b = eigenspace(laplacian(load("petersen")), 0);
  ASSERT_EQ(b.multiplicity(), 1);
  EXPECT_NEAR(b.U(3, 0), 1 / std::sqrt(10.0), 1e-15);
}

TEST(Eigenspace, ResidualInvariant) {
  const Graph g = load("cng6b");
  const Matrix L = laplacian(g);
  const auto s = eigendecompose(L);
  for (const auto& c : s.clusters) {
    const auto b = eigenspace(s, c.value);
    EXPECT_LE((L * b.U - b.eigenvalue * b.U).cwiseAbs().maxCoeff(), 1e-8 * max_abs(L));
  }
}

TEST(Eigenspace, MissingValue) {
  try {
    eigenspace(laplacian(load("c4")), 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNoSuchEigenvalue);
  }
}

TEST(ExactEigenbasis, IntegerColumnsSatisfyEigenEquation) {
  for (auto [name, lam] : std::vector<std::pair<const char*, long>>{{"hoffman", 2}, {"c4", 2}, {"cng6b", 1}, {"petersen", 5}}) {
    const Graph g = load(name);
    const auto b = exact_eigenbasis(g, lam);
    ASSERT_TRUE(b.has_value()) << name;
    const RationalMatrix L = rational_laplacian(g);
    EXPECT_EQ(L * *b, Rational(lam) * *b) << name;
    for (std::size_t i = 0; i < b->rows(); ++i)
      for (std::size_t j = 0; j < b->cols(); ++j) EXPECT_TRUE(is_integer((*b)(i, j)));
  }
  EXPECT_FALSE(exact_eigenbasis(load("c4"), 3).has_value());
  EXPECT_FALSE(exact_eigenbasis_if_integral(load("haar565"), 2.76393, 4).has_value());
}

TEST(RayleighWitness, FourCycleFixedWeights) {
  const Graph g = load("c4");
  const auto w = normalize_weights({{2, 1, 0.5, 0.5}, false}, 4);
  EXPECT_TRUE(rayleigh_witness_check(g, w, 2, 4).pass);
}

TEST(RayleighWitness, RigidGraphsRandomWeights) {
  std::mt19937_64 rng(3);
  for (auto [name, l2, ln] : std::vector<std::tuple<const char*, double, double>>{{"k5", 5, 5}, {"c4", 2, 4}}) {
    const Graph g = load(name);
    for (int t = 0; t < 10; ++t) {
      const auto r = rayleigh_witness_check(g, testing_support::random_weights(g.m(), rng), l2, ln);
      EXPECT_TRUE(r.pass) << name << " trial " << t;
    }
  }
}

TEST(RayleighWitness, UnitWeightsAreEquality) {
  const Graph g = load("prism");
  const auto r = rayleigh_witness_check(g, WeightVector::ones(9), 2, 5);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.low_energy, r.low_bound, 1e-9);
  EXPECT_NEAR(r.high_energy, r.high_bound, 1e-9);
}

TEST(JacobiProperties, RandomReconstruction) {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 100; ++t) {
    const Matrix a = random_symmetric(8, rng);
    const auto ed = jacobi_eigen(a);
    const Matrix q = ed.vectors;
    EXPECT_LE((q * ed.values.asDiagonal() * q.transpose() - a).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LE((q.transpose() * q - Matrix::Identity(8, 8)).cwiseAbs().maxCoeff(), 1e-9);
    for (int i = 1; i < 8; ++i) EXPECT_LE(ed.values(i - 1), ed.values(i));
  }
}

TEST(JacobiProperties, CharacteristicPolynomialOracle) {
  std::mt19937_64 rng(99);
  for (int t = 0; t < 50; ++t) {
    const Matrix a = random_symmetric(4, rng);
    const auto roots = roots_by_bisection(a);
    ASSERT_EQ(roots.size(), 4u) << "trial " << t;
    const auto ed = jacobi_eigen(a);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(ed.values(i), roots[i], 1e-9);
  }
}

TEST(JacobiProperties, SignConvention) {
  std::mt19937_64 rng(1);
  const auto ed = jacobi_eigen(random_symmetric(6, rng));
  for (int k = 0; k < 6; ++k) {
    Eigen::Index arg;
    ed.vectors.col(k).cwiseAbs().maxCoeff(&arg);
    EXPECT_GT(ed.vectors(arg, k), 0);
  }
}

TEST(LaplacianProperties, PsdAndTraceIdentity) {
  std::mt19937_64 rng(17);
  for (const char* name : {"c6", "petersen", "hoffman", "cng6b"}) {
    const Graph g = load(name);
    for (int t = 0; t < 5; ++t) {
      const auto w = testing_support::random_weights(g.m(), rng);
      const auto ev = testing_support::sorted_eigenvalues(laplacian(g, w));
      EXPECT_GE(ev.front(), -1e-9);
      EXPECT_NEAR(std::accumulate(ev.begin(), ev.end(), 0.0), 2 * w.sum(), 1e-9);
    }
  }
}

TEST(LaplacianProperties, ComplementSpectra) {
  for (const char* name : {"petersen", "c6"}) {
    const Graph g = load(name);
    const Graph c = complement(g);
    const Matrix lc = laplacian(c);
    const auto s = laplacian_spectrum(g);
    for (std::size_t i = 1; i < s.clusters.size(); ++i) {
      const auto& cl = s.clusters[i];
      EXPECT_LE((lc * cl.basis - (g.n() - cl.value) * cl.basis).norm(), 1e-8) << name;
    }
  }
}

TEST(LaplacianProperties, OrbitAverageDoesNotLowerLambda2) {
  std::mt19937_64 rng(8);
  for (const char* name : {"c6", "petersen"}) {
    const Graph g = load(name);
    const auto orbits = edge_orbits(g);
    for (int t = 0; t < 20; ++t) {
      const auto w = testing_support::random_weights(g.m(), rng);
      EXPECT_GE(lambda2(g, orbit_average(orbits, w)), lambda2(g, w) - 1e-9) << name;
    }
  }
}

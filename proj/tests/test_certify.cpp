#include <gtest/gtest.h>

#include <numbers>
#include <set>

#include "common.hpp"

using namespace conformal;
using testing_support::load;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kParseError;
}

RationalMatrix columns(const std::vector<std::vector<long>>& cols) {
  RationalMatrix b(cols.front().size(), cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < cols[j].size(); ++i) b(i, j) = Rational(cols[j][i]);
  return b;
}

RationalMatrix rational_entries(const std::vector<std::vector<const char*>>& rows) {
  RationalMatrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = parse_rational(rows[i][j]);
  return m;
}

// Integer basis of the λ=2 eigenspace of the Hoffman fixture.
RationalMatrix hoffman_e2() {
  return columns({{-1, 1, -1, -1, -1, 1, 1, 1, 0, 0, 0, -2, 2, 0, 0, 0},
                  {-1, -1, 1, 1, -1, 1, 1, -1, 0, 0, -2, 0, 0, 2, 0, 0},
                  {-1, -1, 1, -1, 1, 1, -1, 1, 0, -2, 0, 0, 0, 0, 2, 0},
                  {-1, -1, -1, 1, 1, -1, 1, 1, -2, 0, 0, 0, 0, 0, 0, 2}});
}

RationalMatrix cng_e1() {
  return columns({{0, 0, 4, -3, 1, -3, 1, 1, 1, -2, 2, -1, -1, -1, -1, -4, 3, 3, 0, 0},
                  {0, -3, -1, 0, 2, 0, 2, -1, -1, 2, -2, 1, 1, -2, -2, 1, 0, 0, 3, 0},
                  {-3, 0, -1, 0, -1, 0, -1, 2, 2, 2, -2, -2, -2, 1, 1, 1, 0, 0, 0, 3}});
}

RationalMatrix zero_laplacian_product(const Graph& g, const RationalMatrix& b, long lambda) {
  RationalMatrix r = rational_laplacian(g) * b;
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) r(i, j) -= lambda * b(i, j);
  return r;
}

bool all_zero(const RationalMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0) return false;
  return true;
}

}  // namespace

TEST(Fixtures, IntegerBasesAreEigenvectors) {
  EXPECT_TRUE(all_zero(zero_laplacian_product(load("hoffman"), hoffman_e2(), 2)));
  EXPECT_TRUE(all_zero(zero_laplacian_product(load("cng6b"), cng_e1(), 1)));
  const RationalMatrix gram = cng_e1().transpose() * cng_e1();
  EXPECT_EQ(gram(0, 0), 84);
  EXPECT_EQ(gram(0, 1), -12);
  EXPECT_EQ(gram(1, 2), -6);
}

TEST(Verify, FourCycleExactCertificates) {
  const Graph g = load("c4");
  const auto x = make_certificate(Target::kLambda2, CertMethod::kExternal,
                                  rational_entries({{"1/2", "0", "-1/2", "0"},
                                                    {"0", "1/2", "0", "-1/2"},
                                                    {"-1/2", "0", "1/2", "0"},
                                                    {"0", "-1/2", "0", "1/2"}}),
                                  Rational(2), g.m());
  const auto rx = verify_certificate(g, x);
  EXPECT_TRUE(rx.exact);
  EXPECT_TRUE(rx.passed()) << rx.first_failure();

  const auto y = make_certificate(Target::kLambdaN, CertMethod::kExternal,
                                  rational_entries({{"1/4", "-1/4", "1/4", "-1/4"},
                                                    {"-1/4", "1/4", "-1/4", "1/4"},
                                                    {"1/4", "-1/4", "1/4", "-1/4"},
                                                    {"-1/4", "1/4", "-1/4", "1/4"}}),
                                  Rational(4), g.m());
  EXPECT_TRUE(verify_certificate(g, y).passed());
  EXPECT_EQ(y.exact->trace(), 1);
}

TEST(Verify, WrongTargetFailsEigenEquation) {
  const Graph g = load("c4");
  auto y = rank_one_certificate(g, Target::kLambdaN);
  y.target = Target::kLambda2;
  const auto r = verify_certificate(g, y);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.at("eigen_equation").pass);
  EXPECT_TRUE(r.at("edge_equalities").pass);
}

TEST(Verify, HoffmanRankOneY) {
  const Graph g = load("hoffman");
  RationalMatrix v(16, 1);
  for (int i = 0; i < 16; ++i) v(i, 0) = i < 8 ? -1 : 1;
  const auto y = make_certificate(Target::kLambdaN, CertMethod::kRankOne, Rational(1, 4) * (v * v.transpose()),
                                  Rational(8), g.m());
  const auto r = verify_certificate(g, y);
  EXPECT_TRUE(r.exact);
  EXPECT_TRUE(r.passed()) << r.first_failure();
  EXPECT_EQ(y.exact->trace(), 4);
}

TEST(Verify, DimensionMismatch) {
  const Graph g = load("c4");
  const auto c = make_certificate(Target::kLambda2, CertMethod::kExternal, Matrix(Matrix::Identity(3, 3)), 2.0, 4);
  EXPECT_EQ(code_of([&] { verify_certificate(g, c); }), ErrorCode::kDimensionMismatch);
}

TEST(Verify, ExactFailureDetails) {
  const Graph g = load("c4");
  RationalMatrix x = *uut_certificate(g, Target::kLambda2).exact;
  x(0, 0) += Rational(1, 3);
  const auto r = verify_certificate(g, make_certificate(Target::kLambda2, CertMethod::kExternal, x, Rational(2), g.m()));
  EXPECT_FALSE(r.at("centered").pass);
  EXPECT_FALSE(r.at("edge_equalities").pass);
  EXPECT_FALSE(r.at("trace").pass);
  EXPECT_TRUE(r.at("symmetric").pass);
  EXPECT_NE(r.at("edge_equalities").detail.find("(0,1)"), std::string::npos);
}

TEST(RankOne, HaarLambdaN) {
  const Graph g = load("haar565");
  const auto y = rank_one_certificate(g, Target::kLambdaN);
  ASSERT_TRUE(y.is_exact());
  EXPECT_EQ(y.exact->trace(), 5);
  EXPECT_TRUE(verify_certificate(g, y).passed());
}

TEST(RankOne, CngLambdaN) {
  const Graph g = load("cng6b");
  const auto y = rank_one_certificate(g, Target::kLambdaN);
  ASSERT_TRUE(y.is_exact());
  EXPECT_EQ(*y.lambda_exact, 6);
  EXPECT_EQ(y.exact->trace(), 5);
  EXPECT_TRUE(verify_certificate(g, y).passed());
}

TEST(RankOne, SingleEdge) {
  const Graph g = load("k2");
  for (Target t : {Target::kLambda2, Target::kLambdaN}) {
    const auto c = rank_one_certificate(g, t);
    ASSERT_TRUE(c.is_exact());
    EXPECT_EQ((*c.exact)(0, 0), Rational(1, 4));
    EXPECT_EQ((*c.exact)(0, 1), Rational(-1, 4));
    EXPECT_TRUE(verify_certificate(g, c).passed());
  }
}

TEST(RankOne, SuppliedVectorAndErrors) {
  const Graph g = load("c4");
  Vector v(4);
  v << 1, -1, 1, -1;
  EXPECT_TRUE(verify_certificate(g, rank_one_certificate(g, Target::kLambdaN, v)).passed());
  Vector bad(4);
  bad << 1, 0, 0, -1;
  EXPECT_EQ(code_of([&] { rank_one_certificate(g, Target::kLambdaN, bad); }), ErrorCode::kNotAnEigenvector);
  EXPECT_EQ(code_of([&] { rank_one_certificate(g, Target::kLambda2); }), ErrorCode::kMultiplicityNotOne);
}

TEST(UUT, Petersen) {
  const Graph g = load("petersen");
  const auto x = uut_certificate(g, Target::kLambda2);
  const auto y = uut_certificate(g, Target::kLambdaN);
  ASSERT_TRUE(x.is_exact());
  ASSERT_TRUE(y.is_exact());
  EXPECT_EQ((*x.exact)(0, 0), Rational(3, 4));  // (3/2) * 5/10
  EXPECT_EQ((*y.exact)(0, 0), Rational(3, 10));  // (3/4) * 4/10
  EXPECT_TRUE(verify_certificate(g, x).passed());
  EXPECT_TRUE(verify_certificate(g, y).passed());
}

TEST(UUT, DistanceRegularFixturesBothSides) {
  for (const char* name : {"c4", "c6", "k5", "petersen", "shrikhande_complement"}) {
    const Graph g = load(name);
    ASSERT_TRUE(distance_regular_check(g).is_drg()) << name;
    for (Target t : {Target::kLambda2, Target::kLambdaN}) {
      const auto r = verify_certificate(g, uut_certificate(g, t));
      EXPECT_TRUE(r.passed()) << name << " " << to_string(t) << " " << r.first_failure();
    }
  }
}

TEST(UUT, HaarLambda2IsNotACertificate) {
  const Graph g = load("haar565");
  const auto r = verify_certificate(g, uut_certificate(g, Target::kLambda2));
  EXPECT_FALSE(r.at("edge_equalities").pass);
  EXPECT_TRUE(r.at("psd").pass);
  EXPECT_TRUE(r.at("eigen_equation").pass);
}

TEST(CsFamily, HoffmanForcesDiagonalTraceOne) {
  const Graph g = load("hoffman");
  const auto fam = cs_family_exact(g, hoffman_e2());
  ASSERT_TRUE(fam.has_value());
  EXPECT_EQ(fam->nullspace.size(), 3u);
  const auto idx = symmetric_index(4);
  auto check = [&](const std::vector<Rational>& s, const Rational& diag_sum) {
    Rational tr = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (idx[i].first == idx[i].second)
        tr += s[i];
      else
        EXPECT_EQ(s[i], 0);
    }
    EXPECT_EQ(tr, diag_sum);
  };
  check(fam->particular, 1);
  for (const auto& v : fam->nullspace) check(v, 0);
}

TEST(CsSearch, HoffmanExact) {
  const Graph g = load("hoffman");
  const auto r = cs_search(g, Target::kLambda2);
  ASSERT_EQ(r.status, CsStatus::kFound) << r.detail;
  EXPECT_TRUE(r.exact_system);
  ASSERT_TRUE(r.certificate && r.certificate->is_exact());
  const auto rep = verify_certificate(g, *r.certificate);
  EXPECT_TRUE(rep.exact);
  EXPECT_TRUE(rep.passed()) << rep.first_failure();
  EXPECT_EQ(r.certificate->exact->trace(), 16);
}

TEST(CsSearch, SixCycleComplementLambdaNInfeasible) {
  const auto r = cs_search(load("c6_complement"), Target::kLambdaN);
  EXPECT_EQ(r.status, CsStatus::kInfeasible);
  EXPECT_FALSE(r.certificate.has_value());
}

TEST(CsSearch, FourCycle) {
  const Graph g = load("c4");
  const auto r = cs_search(g, Target::kLambda2);
  ASSERT_EQ(r.status, CsStatus::kFound);
  EXPECT_NEAR(r.certificate->numeric.trace(), 2.0, 1e-12);
  EXPECT_TRUE(verify_certificate(g, *r.certificate).passed());
}

TEST(CsSearch, NumericPathOnNonIntegralSpectrum) {
  const Graph g = load("c18_1_5");
  CsOptions o;
  o.exact = false;
  const auto r = cs_search(g, Target::kLambda2, o);
  EXPECT_FALSE(r.exact_system);
  ASSERT_EQ(r.status, CsStatus::kFound) << r.detail;
  EXPECT_TRUE(verify_certificate(g, *r.certificate).passed());
}

TEST(Rationalize, SnapsAndClusters) {
  Matrix m(2, 2);
  m << 1.0 / 3.0 + 2e-9, -0.5, -0.5 + 3e-8, 2.0 / 7.0;
  const RationalMatrix q = rationalize(m);
  EXPECT_EQ(q(0, 0), Rational(1, 3));
  EXPECT_EQ(q(0, 1), Rational(-1, 2));
  EXPECT_EQ(q(1, 0), Rational(-1, 2));
  EXPECT_EQ(q(1, 1), Rational(2, 7));
}

TEST(Rationalize, RecoversCertificateFromNoisyCopy) {
  const Graph g = load("petersen");
  const auto x = uut_certificate(g, Target::kLambda2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> noise(-1e-9, 1e-9);
  Matrix noisy = x.numeric;
  for (Eigen::Index i = 0; i < noisy.rows(); ++i)
    for (Eigen::Index j = i; j < noisy.cols(); ++j) noisy(i, j) = noisy(j, i) = noisy(i, j) + noise(rng);
  const RationalMatrix q = rationalize(noisy);
  for (std::size_t i = 0; i < q.rows(); ++i)
    for (std::size_t j = 0; j < q.cols(); ++j) EXPECT_EQ(q(i, j), (*x.exact)(i, j));
}

TEST(Center, HoffmanShiftedByMultipleOfJ) {
  const Graph g = load("hoffman");
  const RationalMatrix b = hoffman_e2();
  const RationalMatrix x = Rational(1, 4) * (b * b.transpose());
  RationalMatrix shifted = x;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) shifted(i, j) += Rational(25, 384);
  std::set<Rational> numerators;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) numerators.insert(shifted(i, j) * 384);
  EXPECT_EQ(numerators, (std::set<Rational>{-359, -167, 25, 217, 409}));

  const auto raw = verify_certificate(g, make_certificate(Target::kLambda2, CertMethod::kExternal, shifted, Rational(2), g.m()));
  EXPECT_FALSE(raw.at("centered").pass);
  EXPECT_FALSE(raw.at("eigen_equation").pass);
  EXPECT_TRUE(raw.at("edge_equalities").pass);

  const RationalMatrix c = center(shifted);
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j) ASSERT_EQ(c(i, j), x(i, j));
  const auto rep = verify_certificate(g, make_certificate(Target::kLambda2, CertMethod::kExternal, c, Rational(2), g.m()));
  EXPECT_TRUE(rep.exact);
  EXPECT_TRUE(rep.passed()) << rep.first_failure();
}

TEST(Center, NumericMatchesExact) {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> d(-9, 9);
  RationalMatrix q(5, 5);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j) q(i, j) = make_rational(d(rng), 7);
  const Matrix c = center(to_double(q));
  EXPECT_LE(max_abs(c - to_double(center(q))), 1e-12);
  EXPECT_LE(std::abs(c.sum()), 1e-12);
}

TEST(ProjectRows, CngReconstruction) {
  const Matrix b = to_double(cng_e1());
  const std::vector<const char*> want{"7/3", "3/2",  "3/2", "-1/6", "-1/6", "-1/6", "-1/6", "-1", "-1", "-8/3",
                                      "8/3", "1",    "1",   "1/6",  "1/6",  "-3/2", "1/6",  "1/6", "-3/2", "-7/3"};
  Vector target(20);
  for (int i = 0; i < 20; ++i) target(i) = parse_rational(want[static_cast<std::size_t>(i)]).get_d();

  // Noise orthogonal to the eigenspace and to 1, a constant offset, and a tiny in-span error.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> normal(0, 1);
  Matrix span(20, 4);
  span << b, Vector::Ones(20);
  Vector noise(20);
  for (int i = 0; i < 20; ++i) noise(i) = normal(rng);
  noise -= span * span.colPivHouseholderQr().solve(noise);
  Matrix m = Matrix::Zero(20, 20);
  m.row(0) = (target + 0.3 * noise + 1e-6 * b.col(0)).transpose().array() + 5.0;
  m.row(1) = -m.row(0);

  const auto raw = project_rows(m, b);
  EXPECT_NEAR(raw.coefficients(0, 0), 20, 1e-3);
  EXPECT_NEAR(raw.coefficients(0, 1), -20, 1e-3);
  EXPECT_NEAR(raw.coefficients(0, 2), -35, 1e-3);
  EXPECT_FALSE(raw.exact.has_value());

  const auto snapped = project_rows(m, b, 1e-3);
  ASSERT_TRUE(snapped.exact.has_value());
  for (std::size_t j = 0; j < 20; ++j) {
    EXPECT_EQ((*snapped.exact)(0, j), parse_rational(want[j])) << j;
    EXPECT_EQ((*snapped.exact)(1, j), -parse_rational(want[j]));
    EXPECT_EQ((*snapped.exact)(2, j), 0);
  }
  EXPECT_LE((snapped.projected.row(0).transpose() - target).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ProjectRows, IdempotentOnSpan) {
  const Graph g = load("petersen");
  const auto spec = laplacian_spectrum(g);
  const Matrix u = spec.lambda2_cluster().basis;
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal(0, 1);
  Matrix m(4, 10);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = normal(rng);
  const Matrix once = project_rows(m, u).projected;
  const Matrix twice = project_rows(once, u).projected;
  EXPECT_LE(max_abs(once - twice), 1e-12);
  EXPECT_EQ(code_of([&] { project_rows(Matrix::Zero(2, 9), u); }), ErrorCode::kDimensionMismatch);
}

TEST(Embedding, FourCycleSquare) {
  const Graph g = load("c4");
  const auto e = embedding_from_certificate(uut_certificate(g, Target::kLambda2));
  EXPECT_EQ(e.points.cols(), 2);
  const auto iso = edge_isometry_check(e, g, true);
  EXPECT_TRUE(iso.isometric);
  EXPECT_NEAR(iso.length, 1.0, 1e-12);
  EXPECT_TRUE(iso.scaling_ok);
}

TEST(Embedding, PetersenOnSphere) {
  const Graph g = load("petersen");
  const auto c = uut_certificate(g, Target::kLambda2);
  const auto e = embedding_from_certificate(c);
  EXPECT_EQ(e.points.cols(), 5);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(e.points.row(i).norm(), std::sqrt(3.0) / 2, 1e-12);
  EXPECT_LE(max_abs(e.points * e.points.transpose() - c.numeric), 1e-12);
}

TEST(Embedding, RankOneIsLine) {
  const auto e = embedding_from_certificate(rank_one_certificate(load("haar565"), Target::kLambdaN));
  EXPECT_EQ(e.points.cols(), 1);
  EXPECT_TRUE(edge_isometry_check(e, load("haar565")).isometric);
}

TEST(Embedding, NotPsd) {
  auto c = uut_certificate(load("c4"), Target::kLambda2);
  c.numeric = -c.numeric;
  EXPECT_EQ(code_of([&] { embedding_from_certificate(c); }), ErrorCode::kNotPsd);
}

TEST(Embedding, IsometricSpectralEmbeddingGivesCertificate) {
  // Rescaling an edge-isometric eigenspace embedding to unit edges yields a valid X = PPᵀ.
  for (const char* name : {"petersen", "c6", "shrikhande_complement"}) {
    const Graph g = load(name);
    const auto spec = laplacian_spectrum(g);
    Embedding e = spectral_embedding({spec.lambda2_cluster().basis, spec.lambda2()});
    const auto iso = edge_isometry_check(e, g, true);
    ASSERT_TRUE(iso.isometric) << name;
    EXPECT_TRUE(iso.scaling_ok) << name;
    e.points /= iso.length;
    const auto c = make_certificate(Target::kLambda2, CertMethod::kExternal, Matrix(e.points * e.points.transpose()),
                                    spec.lambda2(), g.m());
    const auto rep = verify_certificate(g, c);
    EXPECT_TRUE(rep.passed()) << name << " " << rep.first_failure();
  }
}

TEST(Isometry, PetersenLengths) {
  const Graph g = load("petersen");
  const auto spec = laplacian_spectrum(g);
  const Embedding e = spectral_embedding({spec.lambda2_cluster().basis, spec.lambda2()});
  const auto iso = edge_isometry_check(e, g, true);
  EXPECT_NEAR(iso.length, std::sqrt(2.0 / 3.0), 1e-12);
  EXPECT_TRUE(iso.scaling_ok);
  const auto ne = edge_nonedge_isometry_check(e, g);
  EXPECT_TRUE(ne.ok);
  EXPECT_NEAR(ne.beta, 2 / std::sqrt(3.0), 1e-12);
}

TEST(Isometry, PerturbedAndDegenerate) {
  const Graph g = load("petersen");
  const auto spec = laplacian_spectrum(g);
  Embedding e = spectral_embedding({spec.lambda2_cluster().basis, spec.lambda2()});
  e.points(0, 0) += 1e-4;
  EXPECT_FALSE(edge_isometry_check(e, g).isometric);
  Embedding zero{Matrix::Zero(10, 3), 2.0};
  EXPECT_FALSE(edge_isometry_check(zero, g).isometric);
}

TEST(Isometry, HoffmanTopEigenvectorTwoNonedgeLengths) {
  const Graph g = load("hoffman");
  Embedding e{Matrix(16, 1), 8.0};
  for (int i = 0; i < 16; ++i) e.points(i, 0) = i < 8 ? -1 : 1;
  const auto r = edge_nonedge_isometry_check(e, g);
  EXPECT_NEAR(r.alpha, 2.0, 1e-12);
  ASSERT_EQ(r.nonedge_lengths.size(), 2u);
  EXPECT_NEAR(r.nonedge_lengths[0], 0.0, 1e-12);
  EXPECT_NEAR(r.nonedge_lengths[1], 2.0, 1e-12);
  EXPECT_FALSE(r.ok);
}

TEST(Isometry, SingleEdgeHasNoNonedges) {
  const Graph g = load("k2");
  Embedding e{Matrix(2, 1), 2.0};
  e.points << 0.5, -0.5;
  const auto r = edge_nonedge_isometry_check(e, g);
  EXPECT_TRUE(r.ok);
  EXPECT_TRUE(r.nonedge_lengths.empty());
}

TEST(ComplementPair, Petersen) {
  const auto r = complement_pair_check(load("petersen"));
  EXPECT_TRUE(r.certified) << r.detail;
  ASSERT_TRUE(r.x_complement.has_value());
  const Graph gc = complement(load("petersen"));
  EXPECT_TRUE(verify_certificate(gc, *r.x_complement).passed());
  EXPECT_TRUE(verify_certificate(gc, *r.y_complement).passed());
}

TEST(ComplementPair, SixCycleNotCertified) {
  const auto r = complement_pair_check(load("c6"));
  EXPECT_FALSE(r.certified);
  EXPECT_FALSE(r.low.ok);
}

TEST(ComplementPair, Errors) {
  EXPECT_EQ(code_of([] { complement_pair_check(load("k4")); }), ErrorCode::kComplementDisconnected);
  const Graph path = build_graph(4, {{0, 1}, {1, 2}, {2, 3}});
  EXPECT_EQ(code_of([&] { complement_pair_check(path); }), ErrorCode::kNotRegular);
}

TEST(ExactPsd, AgreesWithFloatingPoint) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<long> d(-6, 6);
  int checked = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t rank = 1 + static_cast<std::size_t>((t / 2) % 6);
    RationalMatrix a(6, rank);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < rank; ++j) a(i, j) = make_rational(d(rng), 1 + (t % 3));
    RationalMatrix m = a * a.transpose();
    if (t % 2) {
      const std::size_t k = static_cast<std::size_t>(t % 6);
      m(k, k) -= Rational(1, 2);
    }
    const bool exact = ldlt_psd(m).psd;
    const double min_eig = jacobi_eigen(to_double(m)).values(0);
    if (t % 2 == 0) { EXPECT_TRUE(exact) << t; }
    if (std::abs(min_eig) < 1e-9) continue;
    EXPECT_EQ(exact, min_eig > 0) << t << " " << min_eig;
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Rationals, ParseAndSimplest) {
  EXPECT_EQ(parse_rational("3/4"), Rational(3, 4));
  EXPECT_EQ(parse_rational("-6/8"), Rational(-3, 4));
  EXPECT_EQ(parse_rational(" 0.125 "), Rational(1, 8));
  EXPECT_EQ(parse_rational("2.5e-1"), Rational(1, 4));
  EXPECT_EQ(parse_rational("010/03"), Rational(10, 3));
  EXPECT_EQ(parse_rational("0.0625"), Rational(1, 16));
  EXPECT_EQ(parse_rational("+7"), Rational(7));
  for (const char* bad : {"", "1/0", "x", "1/2/3", "1.2.3", "--1"})
    EXPECT_EQ(code_of([&] { parse_rational(bad); }), ErrorCode::kParseError) << bad;
  EXPECT_EQ(simplest_between(Rational(3, 10), Rational(2, 5)), Rational(1, 3));
  EXPECT_EQ(simplest_between(Rational(-2, 5), Rational(-3, 10)), Rational(-1, 3));
  EXPECT_EQ(simplest_between(Rational(-1, 5), Rational(1, 7)), 0);
  EXPECT_EQ(approximate(0.6666666667), Rational(2, 3));
  EXPECT_EQ(approximate(std::numbers::pi, 1000, 1e-12), Rational(355, 113));
}

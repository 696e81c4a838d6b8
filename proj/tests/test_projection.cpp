#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "support.hpp"
#include "variomat/errors.hpp"
#include "variomat/model.hpp"
#include "variomat/projection.hpp"
#include "variomat/samples.hpp"

using namespace variomat;

TEST_CASE("centering projector") {
  const Eigen::MatrixXd p = centering_projector(4);
  CHECK(support::max_abs_diff(p * p, p) <= 1e-14);
  CHECK((p * Eigen::VectorXd::Ones(4)).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK_THROWS_AS(centering_projector(1), InvalidInput);
}

TEST_CASE("projected covariance reproduces the variogram") {
  std::mt19937_64 gen(101);
  for (int rep = 0; rep < 40; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 9);
    const KrigeModel m = support::rand_model(n, gen);

    const CenteredCovariance s0 = sigma0_from_gamma(m.gamma());
    // rows sum to zero: the field lives in the centered subspace
    CHECK((s0.matrix() * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() <=
          1e-12 * std::max(1.0, s0.matrix().cwiseAbs().maxCoeff()));

    const VariogramMatrix back = variogram_of(s0.matrix());
    CHECK(support::max_abs_diff(back.matrix(), m.gamma().matrix()) <=
          1e-13 * std::max(1.0, m.gamma().matrix().maxCoeff()));

    // the projected covariance agrees with projecting the full one
    const Eigen::MatrixXd p = centering_projector(n);
    const Eigen::MatrixXd projected = p * m.covariance() * p;
    CHECK(support::max_abs_diff(s0.matrix(), projected) <= 1e-12);
  }
}

TEST_CASE("variogram_of undoes covariance_from_gamma") {
  std::mt19937_64 gen(103);
  const KrigeModel m = support::rand_model(5, gen);
  const VariogramMatrix g = variogram_of(m.covariance());
  CHECK(support::max_abs_diff(g.matrix(), m.gamma().matrix()) <= 1e-13);
}

TEST_CASE("variogram_of validates its input") {
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
  CHECK_THROWS_AS(variogram_of(bad), InvalidInput);
  bad << 1.0, 0.5, 0.4, 1.0;  // asymmetric
  CHECK_THROWS_AS(variogram_of(bad), InvalidInput);
}

TEST_CASE("centered covariance validation") {
  // identity is PSD but not centered
  CHECK_THROWS_AS(CenteredCovariance::from_matrix(Eigen::MatrixXd::Identity(3, 3)),
                  InvalidInput);
  const Eigen::MatrixXd p = centering_projector(3);
  CHECK_NOTHROW(CenteredCovariance::from_matrix(p));
  CHECK_THROWS_AS(CenteredCovariance::from_matrix(-p),
                  NotConditionallyNegDef);
}

TEST_CASE("empirical variogram formula on a tiny data set") {
  Eigen::MatrixXd x(2, 3);
  x << 1.0, 2.0, 4.0,
       0.0, -1.0, 1.0;
  const VariogramMatrix g = empirical_variogram(SampleSet::from_matrix(x));
  // g_ij = (1/2N) sum_k (x_ki - x_kj)^2
  CHECK(g(0, 1) == doctest::Approx((1.0 + 1.0) / 4.0));
  CHECK(g(0, 2) == doctest::Approx((9.0 + 1.0) / 4.0));
  CHECK(g(1, 2) == doctest::Approx((4.0 + 4.0) / 4.0));
  CHECK(g(0, 0) == 0.0);
}

TEST_CASE("empirical variogram is always admissible") {
  std::mt19937_64 gen(107);
  std::normal_distribution<double> normal;
  for (int rep = 0; rep < 30; ++rep) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen() % 7);
    const Eigen::Index draws = 1 + static_cast<Eigen::Index>(gen() % 20);
    Eigen::MatrixXd x(draws, n);
    for (Eigen::Index k = 0; k < draws; ++k) {
      for (Eigen::Index i = 0; i < n; ++i) x(k, i) = 3.0 * normal(gen);
    }
    const VariogramMatrix g = empirical_variogram(SampleSet::from_matrix(x));
    const ValidityReport rep_v = validate_variogram(g.matrix());
    CHECK(rep_v.valid());
  }
}

TEST_CASE("empirical variogram ignores per-draw centering") {
  std::mt19937_64 gen(109);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(25, 6);
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    const double shift = 10.0 * normal(gen);
    for (Eigen::Index i = 0; i < 6; ++i) x(k, i) = shift + normal(gen);
  }
  const auto s = SampleSet::from_matrix(x);
  const VariogramMatrix raw = empirical_variogram(s);
  const VariogramMatrix centered = empirical_variogram(project_samples(s));
  CHECK(support::rel_diff(centered.matrix(), raw.matrix()) <= 1e-13);
}

TEST_CASE("project_samples removes row means") {
  Eigen::MatrixXd x(2, 3);
  x << 1.0, 2.0, 3.0,
       -1.0, 0.0, 4.0;
  const SampleSet c = project_samples(SampleSet::from_matrix(x));
  CHECK(c.rows().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-14);
  CHECK(c.rows()(0, 0) == doctest::Approx(-1.0));
  CHECK(c.rows()(1, 2) == doctest::Approx(3.0));
}

TEST_CASE("estimate_model recovers mean and variogram on large samples") {
  std::mt19937_64 gen(113);
  const double mu = 1.7;
  Eigen::MatrixXd g(3, 3);
  g << 0.0, 1.0, 0.6,
       1.0, 0.0, 0.8,
       0.6, 0.8, 0.0;
  const auto gamma = VariogramMatrix::from_matrix(g);

  // field draws plus a common random level so mu is identified
  const SampleSet field = simulate_field(gamma, 20000, 424242);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x = field.rows();
  for (Eigen::Index k = 0; k < x.rows(); ++k) {
    x.row(k).array() += mu + 0.5 * normal(gen);
  }

  const EstimatedModel est = estimate_model(SampleSet::from_matrix(x));
  CHECK(std::abs(est.mu_hat - mu) <= 0.05);
  // se(gamma_hat_ij) ~ gamma_ij sqrt(2/N); 6 sigma at N = 20000 is ~ 0.01 g
  CHECK(support::max_abs_diff(est.gamma_hat.matrix(), g) <= 0.05);
}

TEST_CASE("simulate_field is seed-deterministic") {
  Eigen::MatrixXd g(3, 3);
  g << 0.0, 1.0, 0.6,
       1.0, 0.0, 0.8,
       0.6, 0.8, 0.0;
  const auto gamma = VariogramMatrix::from_matrix(g);

  const SampleSet a = simulate_field(gamma, 50, 7);
  const SampleSet b = simulate_field(gamma, 50, 7);
  const SampleSet c = simulate_field(gamma, 50, 8);
  CHECK(support::max_abs_diff(a.rows(), b.rows()) == 0.0);  // byte-identical
  CHECK(support::max_abs_diff(a.rows(), c.rows()) > 1e-3);

  // each draw lies in the centered subspace
  CHECK(a.rows().rowwise().sum().cwiseAbs().maxCoeff() <= 1e-10);

  CHECK_THROWS_AS(simulate_field(gamma, 0, 1), InvalidInput);
}

TEST_CASE("simulate_field matches its target covariance in the mean") {
  Eigen::MatrixXd g(2, 2);
  g << 0.0, 1.0,
       1.0, 0.0;
  const auto gamma = VariogramMatrix::from_matrix(g);
  const SampleSet s = simulate_field(gamma, 50000, 99);
  const VariogramMatrix ghat = empirical_variogram(s);
  CHECK(ghat(0, 1) > 0.97);
  CHECK(ghat(0, 1) < 1.03);
}

TEST_CASE("sample set guards") {
  CHECK_THROWS_AS(SampleSet::from_matrix(Eigen::MatrixXd(0, 3)), InvalidInput);
  CHECK_THROWS_AS(SampleSet::from_matrix(Eigen::MatrixXd::Zero(3, 1)),
                  InvalidInput);
  Eigen::MatrixXd nan(1, 2);
  nan << 1.0, std::nan("");
  CHECK_THROWS_AS(SampleSet::from_matrix(nan), InvalidInput);
}

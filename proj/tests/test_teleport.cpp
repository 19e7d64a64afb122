#include <doctest.h>

#include "gausscap/error.hpp"
#include "gausscap/teleport.hpp"
#include "oracles.hpp"

using namespace gausscap;

namespace {

/// (attenuation(eta) (x) id)(TMS(r)) covariance matrix.
Matrix lossy_tms(double eta, double r) {
  Matrix x = Matrix::Identity(4, 4);
  x.topLeftCorner(2, 2) *= std::sqrt(eta);
  Matrix y = Matrix::Zero(4, 4);
  y.topLeftCorner(2, 2) = (1 - eta) * Matrix::Identity(2, 2);
  return x * two_mode_squeezed(r).cm() * x.transpose() + y;
}

Matrix random_gain(oracle::Rng& rng, int n) {
  Matrix g(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = 0; j < 2 * n; ++j) g(i, j) = rng.uniform(-1.5, 1.5);
  }
  return g;
}

}  // namespace

TEST_SUITE("teleport") {
  TEST_CASE("unit-gain teleportation through TMS adds 2 e^{-2r} noise") {
    for (double r : {0.5, 1.0, 2.0}) {
      const TeleportResource res(two_mode_squeezed(r).cm());
      const GaussianChannel ch = teleport_channel(res, GainMatrix::identity(1));
      CHECK((ch.x() - Matrix::Identity(2, 2)).norm() < 1e-14);
      CHECK((ch.y() - 2 * std::exp(-2 * r) * Matrix::Identity(2, 2)).norm() < 1e-10);
    }
  }

  TEST_CASE("channel form and characteristic-function route agree") {
    oracle::Rng rng(51);
    for (int trial = 0; trial < 50; ++trial) {
      const int n = rng.integer(1, 2);
      const TeleportResource res(oracle::random_cm(rng, 2 * n));
      const GainMatrix g{random_gain(rng, n)};
      Vector mean(2 * n);
      for (int k = 0; k < 2 * n; ++k) mean(k) = rng.uniform(-2, 2);
      const GaussianState in(mean, oracle::random_cm(rng, n));
      const GaussianChannel ch = teleport_channel(res, g);
      const GaussianState out = characteristic_action(res, g, in);
      CHECK((apply(ch, in.cm()) - out.cm()).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, out.cm().norm()));
      CHECK((ch.x() * mean - out.mean()).norm() < 1e-12);
    }
  }

  TEST_CASE("every valid resource yields a CP channel") {
    oracle::Rng rng(52);
    for (int trial = 0; trial < 100; ++trial) {
      const int n = rng.integer(1, 2);
      const TeleportResource res(oracle::random_cm(rng, 2 * n));
      const GaussianChannel ch = teleport_channel(res, {random_gain(rng, n)});
      CHECK(cp_min_eigenvalue(ch) >= -1e-8 * std::max(1.0, ch.y().norm()));
    }
  }

  TEST_CASE("resource and gain validation") {
    CHECK_THROWS_AS(TeleportResource(Matrix::Identity(6, 6)), InvalidArgument);
    CHECK_THROWS_AS(TeleportResource(0.5 * Matrix::Identity(4, 4)), InvalidState);
    const TeleportResource res(Matrix::Identity(4, 4));
    CHECK_THROWS_AS(teleport_channel(res, GainMatrix::identity(2)), InvalidArgument);
    CHECK(res.gamma_a() == Matrix::Identity(2, 2));
  }

  TEST_CASE("certified rate is monotone in squeezing and approaches log2 3") {
    double prev = -1.0;
    for (double r = 0.0; r <= 5.0001; r += 0.25) {
      const CertifiedRateReport rep = certify_from_moments(lossy_tms(0.75, r), 1);
      CHECK(rep.certified_rate >= prev - 1e-9);
      CHECK(rep.certified_rate >= rep.entropy_bound);
      prev = rep.certified_rate;
    }
    CHECK(prev == doctest::Approx(std::log2(3.0)).epsilon(0.05 / std::log2(3.0)));
    CHECK(prev <= std::log2(3.0) + 1e-9);
  }

  TEST_CASE("entropy bound of the lossy TMS") {
    // S(A) - S(AB) for the lossy TMS, from the independent spectrum oracle.
    const Matrix cm = lossy_tms(0.75, 1.0);
    const double expect = oracle::entropy(cm.topLeftCorner(2, 2)) - oracle::entropy(cm);
    CHECK(certify_from_moments(cm, 1).entropy_bound == doctest::Approx(std::max(0.0, expect)).epsilon(1e-8));
  }

  TEST_CASE("small uncertainty violations are repaired, large ones rejected") {
    Matrix cm = two_mode_squeezed(1.0).cm();
    cm -= 5e-7 * Matrix::Identity(4, 4);
    const CertifiedRateReport rep = certify_from_moments(cm, 1);
    CHECK(rep.projection_epsilon > 0.0);
    CHECK(rep.projection_epsilon <= 1e-6);
    Matrix bad = two_mode_squeezed(1.0).cm() - 1e-3 * Matrix::Identity(4, 4);
    CHECK_THROWS_AS(certify_from_moments(bad, 1), InvalidMeasurement);
    CHECK_THROWS_AS(certify_from_moments(cm, 2), InvalidArgument);
  }

  TEST_CASE("unequal halves give the entropy bound only") {
    oracle::Rng rng(53);
    const CertifiedRateReport rep = certify_from_moments(oracle::random_cm(rng, 3), 1);
    CHECK_FALSE(rep.teleport_bounds);
    CHECK_FALSE(rep.diagnostic.empty());
  }
}

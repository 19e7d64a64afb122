#include <doctest.h>

#include "gausscap/channel.hpp"
#include "gausscap/error.hpp"
#include "oracles.hpp"

using namespace gausscap;

namespace {

/// Single-mode channel induced by a random one-mode-environment dilation,
/// plus optional classical noise.
GaussianChannel random_channel(oracle::Rng& rng, bool extra_noise) {
  const Matrix s = oracle::random_symplectic(rng, 2, 0.8);
  const Matrix d = s.bottomRightCorner(2, 2);
  const Matrix c = s.bottomLeftCorner(2, 2);
  Matrix y = c * c.transpose();
  if (extra_noise) {
    const Matrix r = oracle::rotation(rng.uniform(0, M_PI));
    Matrix w = Matrix::Zero(2, 2);
    w(0, 0) = rng.uniform(0.0, 1.0);
    w(1, 1) = rng.uniform(0.0, 1.0);
    y += r * w * r.transpose();
  }
  return {d, 0.5 * (y + y.transpose())};
}

double max_diff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace

TEST_SUITE("channels") {
  TEST_CASE("standard channels") {
    const GaussianChannel att = attenuation(0.3);
    CHECK(att.x()(0, 0) == doctest::Approx(std::sqrt(0.3)));
    CHECK(att.y()(1, 1) == doctest::Approx(0.7));
    CHECK(att.validated());
    CHECK(amplification(2.0).y()(0, 0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(attenuation(0.0), InvalidArgument);
    CHECK_THROWS_AS(attenuation(1.5), InvalidArgument);
    CHECK_THROWS_AS(amplification(0.9), InvalidArgument);
    CHECK(lossy_or_amplifying(0.4).y()(0, 0) == doctest::Approx(0.6));
    CHECK(lossy_or_amplifying(3.0).y()(0, 0) == doctest::Approx(2.0));
    CHECK(is_cp(identity_channel(2)));
  }

  TEST_CASE("complete positivity is enforced") {
    CHECK_THROWS_AS(GaussianChannel(Matrix::Identity(2, 2) * 0.5, Matrix::Zero(2, 2)), InvalidArgument);
    CHECK_NOTHROW(GaussianChannel(Matrix::Identity(2, 2) * 0.5, Matrix::Identity(2, 2) * 0.75));
    // Phase conjugation needs |1 + tau| of noise at least.
    Matrix z = Matrix::Identity(2, 2);
    z(1, 1) = -1.0;
    CHECK_THROWS_AS(GaussianChannel(z, Matrix::Identity(2, 2)), InvalidArgument);
    CHECK_NOTHROW(GaussianChannel(z, 2.0 * Matrix::Identity(2, 2)));
    const GaussianChannel raw = GaussianChannel::unvalidated(Matrix::Identity(2, 2) * 0.5, Matrix::Zero(2, 2));
    CHECK_FALSE(raw.validated());
    CHECK_FALSE(is_cp(raw));
    CHECK_THROWS_AS(classical_noise(-Matrix::Identity(2, 2)), InvalidArgument);
  }

  TEST_CASE("apply and compose") {
    const GaussianChannel att = attenuation(0.5);
    const Matrix out = apply(att, 3.0 * Matrix::Identity(2, 2));
    CHECK(out(0, 0) == doctest::Approx(2.0));
    const GaussianChannel both = compose(amplification(2.0), attenuation(0.5));
    CHECK(max_diff(both.x(), Matrix::Identity(2, 2)) < 1e-12);
    CHECK(both.y()(0, 0) == doctest::Approx(2.0));
    Vector d(2);
    d << 1.0, 0.0;
    const GaussianState st = apply_state(att, coherent(d));
    CHECK(st.mean()(0) == doctest::Approx(std::sqrt(0.5)));
    CHECK_THROWS_AS(compose(attenuation(0.5), identity_channel(2)), InvalidArgument);
  }

  TEST_CASE("induced channel of a dilation is CP") {
    oracle::Rng rng(31);
    for (int trial = 0; trial < 100; ++trial) {
      const int n_env = rng.integer(1, 2), n_sys = rng.integer(1, 2);
      const Dilation d(n_env, n_sys, oracle::random_symplectic(rng, n_env + n_sys));
      CHECK(is_cp(d.induced_channel(), 1e-8));
      CHECK(is_cp(conjugate_channel(d), 1e-8));
    }
    CHECK_THROWS_AS(Dilation(1, 1, 2.0 * Matrix::Identity(4, 4)), InvalidArgument);
  }

  TEST_CASE("dilation_of reproduces the channel") {
    oracle::Rng rng(32);
    int phase_conjugating = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const GaussianChannel ch = random_channel(rng, trial % 2 == 1);
      if (std::abs(ch.x().determinant()) < 1e-3) continue;
      if (ch.x().determinant() < 0) ++phase_conjugating;
      const Dilation d = dilation_of(ch);
      CHECK(symplectic_residual(d.s()) < 1e-8);
      const GaussianChannel back = d.induced_channel();
      const double scale = std::max(1.0, ch.y().norm());
      CHECK(max_diff(back.x(), ch.x()) < 1e-8 * scale);
      CHECK(max_diff(back.y(), ch.y()) < 1e-8 * scale);
    }
    CHECK(phase_conjugating > 0);
  }

  TEST_CASE("dilations of standard channels use one environment mode") {
    CHECK(dilation_of(attenuation(0.6)).n_env() == 1);
    CHECK(dilation_of(amplification(1.7)).n_env() == 1);
    const Dilation att = dilation_of(attenuation(0.6));
    CHECK(max_diff(att.a(), std::sqrt(0.6) * Matrix::Identity(2, 2)) < 1e-12);
    CHECK(max_diff(conjugate_channel(att).y(), 0.6 * Matrix::Identity(2, 2)) < 1e-12);
  }

  TEST_CASE("unsupported dilations throw NotImplemented") {
    CHECK_THROWS_AS(dilation_of(identity_channel(2)), NotImplemented);
    CHECK_THROWS_AS(dilation_of(GaussianChannel(Matrix::Zero(2, 2), Matrix::Identity(2, 2))), NotImplemented);
  }

  TEST_CASE("composed dilation induces the composed channel") {
    const Dilation c = compose(dilation_of(amplification(2.0)), dilation_of(attenuation(0.5)));
    CHECK(c.n_env() == 2);
    const GaussianChannel expect = compose(amplification(2.0), attenuation(0.5));
    CHECK(max_diff(c.induced_channel().y(), expect.y()) < 1e-12);
  }

  TEST_CASE("environment output equals the conjugate channel") {
    oracle::Rng rng(33);
    const Dilation d(1, 1, oracle::random_symplectic(rng, 2));
    const Matrix cm = oracle::random_cm(rng, 1);
    CHECK(max_diff(environment_output(d, cm), apply(conjugate_channel(d), cm)) < 1e-10);
  }

  TEST_CASE("minimal noise split") {
    oracle::Rng rng(34);
    for (int trial = 0; trial < 50; ++trial) {
      const GaussianChannel ch = random_channel(rng, true);
      const MinimalNoiseSplit split = minimal_noise_split(ch);
      CHECK(max_diff(split.minimal.y() + split.classical.y(), ch.y()) < 1e-10);
      // The minimal part saturates the CP bound.
      CHECK(std::sqrt(split.minimal.y().determinant()) ==
            doctest::Approx(std::abs(1.0 - ch.x().determinant())).epsilon(1e-8));
      CHECK(is_cp(split.minimal, 1e-8));
    }
  }
}

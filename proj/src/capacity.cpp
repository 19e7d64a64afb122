#include "gausscap/capacity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "gausscap/error.hpp"

namespace gausscap {

namespace {

constexpr std::complex<double> kI{0.0, 1.0};

/// Band around zero inside which a witness counts as the degradable /
/// anti-degradable boundary.
constexpr double kBoundaryBand = 1e-7;

Verdict verdict_from(double lo, double hi, double scale, double tol) {
  const double band = kBoundaryBand * scale;
  if (std::abs(lo) <= band && std::abs(hi) <= band) return Verdict::Both;
  const bool degradable = lo >= -tol * scale;
  const bool anti = hi <= tol * scale;
  if (degradable && anti) return Verdict::Both;
  if (degradable) return Verdict::Degradable;
  if (anti) return Verdict::AntiDegradable;
  return Verdict::Neither;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Degradable: return "Degradable";
    case Verdict::AntiDegradable: return "AntiDegradable";
    case Verdict::Both: return "Both";
    case Verdict::Neither: return "Neither";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "Inconclusive";
}

const char* to_string(Criterion c) {
  return c == Criterion::ComplementaryCP ? "ComplementaryCP" : "NoiseProduct";
}

const char* to_string(CapacityMethod m) {
  switch (m) {
    case CapacityMethod::ClosedForm: return "ClosedForm";
    case CapacityMethod::DegradableGaussianOpt: return "DegradableGaussianOpt";
    case CapacityMethod::BoundsOnly: return "BoundsOnly";
    case CapacityMethod::Certified: return "Certified";
  }
  return "ClosedForm";
}

Classification classify_noise_product(const GaussianChannel& channel, double tol) {
  Classification out;
  out.criterion = Criterion::NoiseProduct;
  const int n = channel.n_modes();
  const Matrix sigma = symplectic_form(n);
  const Matrix& x = channel.x();
  const Matrix m =
      (2.0 * x * sigma * x.transpose() * sigma.transpose() - Matrix::Identity(2 * n, 2 * n)) *
      channel.y();
  out.witness = m.cast<std::complex<double>>();
  Eigen::EigenSolver<Matrix> es(m, false);
  const Eigen::VectorXcd ev = es.eigenvalues();
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if (ev.imag().cwiseAbs().maxCoeff() > tol * scale) {
    out.verdict = Verdict::Inconclusive;
    out.diagnostic = "noise-product witness has complex eigenvalues";
    return out;
  }
  out.min_eig = ev.real().minCoeff();
  out.max_eig = ev.real().maxCoeff();
  out.verdict = verdict_from(out.min_eig, out.max_eig, scale, tol);
  if (n > 1) out.diagnostic = "noise-product test is decisive only for an environment of n_sys modes";
  return out;
}

Classification classify(const Dilation& dilation, double tol) {
  Classification out;
  out.criterion = Criterion::ComplementaryCP;
  const Matrix d = dilation.d();
  const Matrix c = dilation.c();
  Eigen::FullPivLU<Matrix> lu(d);
  lu.setThreshold(1e-12);
  if (!lu.isInvertible()) {
    out.verdict = Verdict::Inconclusive;
    out.diagnostic = "dilation block D is singular";
    return out;
  }
  const Matrix d_inv = lu.inverse();
  const Matrix k = c.transpose() * d_inv.transpose() * symplectic_form(dilation.n_sys()) * d_inv * c;
  const int e = dilation.n_env();
  const CMatrix base = Matrix::Identity(2 * e, 2 * e).cast<std::complex<double>>() +
                       kI * symplectic_form(e).cast<std::complex<double>>();
  const CMatrix kc = k.cast<std::complex<double>>();
  CMatrix w = base - kc * base * kc.transpose();
  w = 0.5 * (w + w.adjoint()).eval();
  out.witness = w;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(w, Eigen::EigenvaluesOnly);
  out.min_eig = es.eigenvalues().minCoeff();
  out.max_eig = es.eigenvalues().maxCoeff();
  const double scale = std::max(1.0, w.cwiseAbs().maxCoeff());
  out.verdict = verdict_from(out.min_eig, out.max_eig, scale, tol);
  return out;
}

Classification classify(const GaussianChannel& channel, double tol) {
  if (channel.n_in() != channel.n_out()) {
    Classification out;
    out.diagnostic = "channel is not square";
    return out;
  }
  if (channel.n_modes() > 1) return classify_noise_product(channel, tol);

  const Matrix& y = channel.y();
  const double tau = channel.x().determinant();
  const double det_y = y.determinant();
  const double root = det_y > 0.0 ? std::sqrt(det_y) : 0.0;
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  const bool invertible_noise = det_y > 1e-12 * scale * scale;
  const bool one_mode_env = std::abs(root - std::abs(1.0 - tau)) <= 1e-9 * scale;
  if (invertible_noise && one_mode_env) return classify_noise_product(channel, tol);

  try {
    return classify(dilation_of(channel), tol);
  } catch (const Error& e) {
    Classification out;
    out.criterion = Criterion::ComplementaryCP;
    out.diagnostic = e.what();
    return out;
  }
}

bool operator<=(const Rate& a, const Rate& b) {
  if (b.infinite) return true;
  if (a.infinite) return false;
  return a.bits <= b.bits;
}

Rate lossy_rate(double eta) {
  if (eta == 1.0) return Rate::unbounded();
  const double q = std::log2(std::abs(eta)) - std::log2(std::abs(1.0 - eta));
  return Rate::finite(std::isnan(q) ? 0.0 : std::max(0.0, q));
}

Rate capacity_lossy(double eta) {
  if (!(eta > 0.0)) throw InvalidArgument("eta: must be > 0, got " + std::to_string(eta));
  return lossy_rate(eta);
}

double coherent_information_gaussian(const Matrix& cm, const Dilation& dilation) {
  if (cm.rows() != 2 * dilation.n_sys()) throw InvalidArgument("cm: does not match dilation system size");
  const Matrix d = dilation.d();
  const Matrix c = dilation.c();
  const Matrix out = d * cm * d.transpose() + c * c.transpose();
  return entropy(out) - entropy(environment_output(dilation, cm));
}

double coherent_information_purified(const Matrix& cm, const GaussianChannel& channel) {
  const int n = channel.n_modes();
  const GaussianState psi = purification(GaussianState(Vector::Zero(2 * n), cm, 1e-7));
  const Matrix lift_x = direct_sum(channel.x(), Matrix::Identity(2 * n, 2 * n));
  const Matrix lift_y = direct_sum(channel.y(), Matrix::Zero(2 * n, 2 * n));
  const Matrix joint = lift_x * psi.cm() * lift_x.transpose() + lift_y;
  return entropy(joint.topLeftCorner(2 * n, 2 * n)) - entropy(joint);
}

Matrix gaussian_input_cm(double n_th, double squeezing, double angle) {
  const Matrix r = rotation_symplectic(angle);
  const Matrix sq = Eigen::Vector2d(std::exp(2.0 * squeezing), std::exp(-2.0 * squeezing)).asDiagonal();
  Matrix cm = (2.0 * n_th + 1.0) * r * sq * r.transpose();
  return 0.5 * (cm + cm.transpose());
}

namespace {

struct LineResult {
  double x;
  double f;
};

/// Coarse scan (endpoints included) followed by golden-section refinement
/// around the best grid point.
LineResult line_maximize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  constexpr int kGrid = 32;
  if (hi <= lo) return {lo, f(lo)};
  int best = 0;
  std::vector<double> fx(kGrid + 1);
  for (int i = 0; i <= kGrid; ++i) {
    fx[i] = f(lo + (hi - lo) * i / kGrid);
    if (fx[i] > fx[best]) best = i;
  }
  LineResult result{lo + (hi - lo) * best / kGrid, fx[best]};
  double a = lo + (hi - lo) * std::max(0, best - 1) / kGrid;
  double b = lo + (hi - lo) * std::min(kGrid, best + 1) / kGrid;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  const double width = tol * std::max(1.0, hi - lo);
  while (b - a > width) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  if (fc > result.f) result = {c, fc};
  if (fd > result.f) result = {d, fd};
  return result;
}

double max_squeezing(double photons) { return 0.5 * std::acosh(2.0 * photons + 1.0); }

struct InputPoint {
  double photons;
  double u;  // squeezing as a fraction of the maximum allowed at `photons`
  double angle;

  double squeezing() const { return u * max_squeezing(photons); }
  double n_th() const {
    return std::max(0.0, 0.5 * ((2.0 * photons + 1.0) / std::cosh(2.0 * squeezing()) - 1.0));
  }
  Matrix cm() const { return gaussian_input_cm(n_th(), squeezing(), angle); }
};

}  // namespace

OptimizerState maximize_gaussian_input(const std::function<double(const Matrix&)>& objective,
                                       double budget, const OptimizerOptions& opts) {
  if (!(budget >= 0.0)) throw InvalidArgument("max_photons: must be >= 0");
  InputPoint p{budget, 0.0, 0.0};
  double best = objective(p.cm());
  int sweep = 0;
  bool converged = false;
  for (; sweep < opts.max_sweeps; ++sweep) {
    const double start = best;
    auto over_u = [&](double u) { return objective(InputPoint{p.photons, u, p.angle}.cm()); };
    auto r = line_maximize(over_u, -1.0, 1.0, opts.line_tol);
    if (r.f > best) { p.u = r.x; best = r.f; }
    if (std::abs(p.squeezing()) > 0.0) {
      auto over_angle = [&](double a) { return objective(InputPoint{p.photons, p.u, a}.cm()); };
      r = line_maximize(over_angle, 0.0, std::numbers::pi, opts.line_tol);
      if (r.f > best) { p.angle = r.x; best = r.f; }
    }
    auto over_photons = [&](double n) { return objective(InputPoint{n, p.u, p.angle}.cm()); };
    r = line_maximize(over_photons, 0.0, budget, opts.line_tol);
    if (r.f > best) { p.photons = r.x; best = r.f; }
    if (best - start <= 1e-14 * std::max(1.0, std::abs(best))) {
      converged = true;
      ++sweep;
      break;
    }
  }
  OptimizerState st;
  st.input_cm = p.cm();
  st.n_th = p.n_th();
  st.squeezing = p.squeezing();
  st.angle = p.angle;
  st.mean_photons = p.photons;
  st.iterations = sweep;
  st.converged = converged;
  return st;
}

namespace {

bool is_noiseless_unitary(const GaussianChannel& channel) {
  const double scale = std::max(1.0, channel.x().cwiseAbs().maxCoeff());
  return channel.y().cwiseAbs().maxCoeff() <= kDefaultTol * scale &&
         is_symplectic(channel.x(), kDefaultTol);
}

struct Sweep {
  std::vector<double> values;  // sup of J at budgets 10, 100, ...
  double extrapolated = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  OptimizerState state;
  bool converged = false;
};

/// Supremum over budgets 10^k, k = 1, 2, ..., with Richardson extrapolation
/// in 1/N (ratio 10).
Sweep unconstrained_sweep(const std::function<double(const Matrix&)>& objective,
                          const OptimizerOptions& opts) {
  Sweep out;
  double prev_extrapolated = std::numeric_limits<double>::quiet_NaN();
  for (double budget = 10.0; budget <= opts.max_photons_cap * (1.0 + 1e-12); budget *= 10.0) {
    OptimizerState st = maximize_gaussian_input(objective, budget, opts);
    const double value = objective(st.input_cm);
    out.values.push_back(value);
    if (value > out.best) {
      out.best = value;
      out.state = st;
    }
    if (out.values.size() >= 2) {
      const double e = (10.0 * value - out.values[out.values.size() - 2]) / 9.0;
      out.extrapolated = e;
      if (!std::isnan(prev_extrapolated) && std::abs(e - prev_extrapolated) < opts.extrapolation_tol) {
        out.converged = true;
        break;
      }
      prev_extrapolated = e;
    } else {
      out.extrapolated = value;
    }
  }
  return out;
}

}  // namespace

CapacityReport capacity_degradable(const GaussianChannel& channel, const Dilation& dilation,
                                   std::optional<double> max_photons, const OptimizerOptions& opts) {
  if (channel.n_modes() != 1 || dilation.n_sys() != 1) {
    throw InvalidArgument("capacity_degradable: single-mode channel required");
  }
  if (max_photons && !(*max_photons >= 0.0)) throw InvalidArgument("max_photons: must be >= 0");
  const GaussianChannel induced = dilation.induced_channel();
  const double mismatch = std::max((induced.x() - channel.x()).cwiseAbs().maxCoeff(),
                                   (induced.y() - channel.y()).cwiseAbs().maxCoeff());
  if (mismatch > 1e-8 * std::max(1.0, channel.y().cwiseAbs().maxCoeff())) {
    throw InvalidArgument("dilation: induced channel does not match (X, Y)");
  }
  const Classification cls = classify(dilation);
  CapacityReport rep;
  rep.method = CapacityMethod::DegradableGaussianOpt;
  rep.verdict = cls.verdict;
  if (cls.verdict == Verdict::Both) {
    rep.value = rep.lower = rep.upper = Rate::finite(0.0);
    rep.diagnostic = "degradability boundary: output and environment are interchangeable";
    return rep;
  }
  if (cls.verdict != Verdict::Degradable) {
    throw PreconditionError(std::string("capacity_degradable: channel classifies as ") +
                            to_string(cls.verdict) + ", not Degradable");
  }
  auto objective = [&](const Matrix& cm) { return coherent_information_gaussian(cm, dilation); };

  if (max_photons) {
    OptimizerState st = maximize_gaussian_input(objective, *max_photons, opts);
    const double j = std::max(0.0, objective(st.input_cm));
    rep.value = rep.lower = rep.upper = Rate::finite(j);
    rep.optimizer = st;
    return rep;
  }
  if (is_noiseless_unitary(channel)) {
    rep.value = rep.lower = rep.upper = Rate::unbounded();
    rep.diagnostic = "noiseless passive channel: unbounded without an energy constraint";
    return rep;
  }
  Sweep sw = unconstrained_sweep(objective, opts);
  if (!sw.converged) {
    throw NumericalFailure("capacity_degradable: extrapolation did not converge below " +
                           std::to_string(opts.extrapolation_tol) + " up to " +
                           std::to_string(opts.max_photons_cap) + " photons");
  }
  const double value = std::max(0.0, sw.extrapolated);
  rep.value = rep.lower = rep.upper = Rate::finite(value);
  rep.optimizer = sw.state;
  rep.optimizer->converged = sw.converged;
  return rep;
}

CapacityReport capacity_bounds(const GaussianChannel& channel, const OptimizerOptions& opts) {
  if (channel.n_in() != 1 || channel.n_out() != 1) {
    throw InvalidArgument("capacity_bounds: single-mode channel required");
  }
  if (!channel.validated() && !is_cp(channel, 1e-8)) {
    throw InvalidArgument("channel: not completely positive");
  }
  CapacityReport rep;
  rep.method = CapacityMethod::BoundsOnly;
  if (is_noiseless_unitary(channel)) {
    rep.value = rep.lower = rep.upper = Rate::unbounded();
    rep.verdict = Verdict::Degradable;
    rep.diagnostic = "noiseless passive channel: unbounded without an energy constraint";
    return rep;
  }
  const MinimalNoiseSplit split = minimal_noise_split(channel, 1e-8);
  const double tau = split.minimal.x().determinant();
  rep.upper = lossy_rate(tau);
  if (std::abs(tau - 1.0) <= 1e-12) {
    rep.upper = Rate::unbounded();
    rep.diagnostic = "det X = 1 with noise: the minimal-noise factor is noiseless, upper bound infinite";
  }

  const Classification cls = classify(channel);
  rep.verdict = cls.verdict;
  if (cls.verdict == Verdict::AntiDegradable || cls.verdict == Verdict::Both) {
    rep.lower = Rate::finite(0.0);
    rep.value = Rate::finite(0.0);
    return rep;
  }

  std::optional<Dilation> dil;
  try {
    dil = dilation_of(channel);
  } catch (const Error&) {
  }
  std::function<double(const Matrix&)> objective;
  if (dil) {
    objective = [&](const Matrix& cm) { return coherent_information_gaussian(cm, *dil); };
  } else {
    objective = [&](const Matrix& cm) { return coherent_information_purified(cm, channel); };
  }
  Sweep sw = unconstrained_sweep(objective, opts);
  rep.optimizer = sw.state;
  rep.optimizer->converged = sw.converged;
  double lower = std::max(0.0, sw.best);
  if (cls.verdict == Verdict::Degradable && sw.converged) lower = std::max(lower, sw.extrapolated);
  if (!rep.upper.infinite) lower = std::min(lower, rep.upper.bits);
  rep.lower = Rate::finite(lower);
  if (cls.verdict == Verdict::Degradable) rep.value = rep.lower;
  if (!dil) {
    if (!rep.diagnostic.empty()) rep.diagnostic += "; ";
    rep.diagnostic += "no dilation available: lower bound from purified coherent information";
  }
  return rep;
}

double thermal_rate_derivative(double eta, double n) {
  auto gprime = [](double x) {
    if (x <= 0.0) return std::numeric_limits<double>::infinity();
    return std::log2(1.0 + 1.0 / x);
  };
  const double a = eta > 0.0 ? eta * gprime(eta * n) : 0.0;
  const double b = eta < 1.0 ? (1.0 - eta) * gprime((1.0 - eta) * n) : 0.0;
  if (std::isinf(a) && std::isinf(b)) {
    // N -> 0: leading behaviour is -(2 eta - 1) log2 N.
    return eta > 0.5 ? std::numeric_limits<double>::infinity()
                     : -std::numeric_limits<double>::infinity();
  }
  return a - b;
}

namespace {

double mode_rate(double eta, double n) {
  return thermal_entropy(eta * n) - thermal_entropy((1.0 - eta) * n);
}

/// Solves dJ/dN = target for N > 0 by bisection in log N.
double solve_stationary(double eta, double target) {
  double lo = 1e-300;
  double hi = 1.0;
  while (thermal_rate_derivative(eta, hi) > target) {
    hi *= 2.0;
    if (hi > 1e300) return hi;
  }
  for (int it = 0; it < 400; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (mid <= lo || mid >= hi) break;
    if (thermal_rate_derivative(eta, mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double r_lo = std::abs(thermal_rate_derivative(eta, lo) - target);
  const double r_hi = std::abs(thermal_rate_derivative(eta, hi) - target);
  return r_lo < r_hi ? lo : hi;
}

}  // namespace

BroadbandResult broadband_capacity(const BroadbandSpec& spec) {
  const std::size_t m = spec.modes.size();
  if (!(spec.energy >= 0.0) || !std::isfinite(spec.energy)) {
    throw InvalidArgument("energy: must be finite and >= 0");
  }
  std::vector<std::size_t> active;
  for (std::size_t i = 0; i < m; ++i) {
    const auto& md = spec.modes[i];
    if (!(md.omega > 0.0)) throw InvalidArgument("modes[" + std::to_string(i) + "].omega: must be > 0");
    if (!(md.eta > 0.0 && md.eta <= 1.0)) {
      throw InvalidArgument("modes[" + std::to_string(i) + "].eta: must lie in (0, 1]");
    }
    if (md.eta > 0.5) active.push_back(i);
  }
  BroadbandResult res;
  res.allocation.assign(m, 0.0);
  res.mode_bits.assign(m, 0.0);
  if (spec.energy == 0.0 || active.empty()) return res;

  auto allocate = [&](double lambda, std::vector<double>& alloc) {
    double energy = 0.0;
    for (std::size_t i : active) {
      alloc[i] = solve_stationary(spec.modes[i].eta, lambda * spec.modes[i].omega);
      energy += spec.modes[i].omega * alloc[i];
    }
    return energy;
  };

  std::vector<double> alloc(m, 0.0);
  double lo = 1.0;
  double hi = 1.0;
  while (allocate(lo, alloc) < spec.energy) lo /= 4.0;
  while (allocate(hi, alloc) > spec.energy) hi *= 4.0;
  double lambda = std::sqrt(lo * hi);
  for (int it = 0; it < 400; ++it) {
    lambda = std::sqrt(lo * hi);
    const double e = allocate(lambda, alloc);
    if (std::abs(e - spec.energy) <= 1e-13 * spec.energy) break;
    if (lambda <= lo || lambda >= hi) break;
    if (e > spec.energy) {
      lo = lambda;
    } else {
      hi = lambda;
    }
  }
  const double energy = allocate(lambda, alloc);
  res.allocation = alloc;
  res.multiplier = lambda;
  res.energy_residual = std::abs(energy - spec.energy) / spec.energy;
  for (std::size_t i : active) {
    const auto& md = spec.modes[i];
    res.mode_bits[i] = mode_rate(md.eta, alloc[i]);
    res.total_bits += res.mode_bits[i];
    res.kkt_residual = std::max(
        res.kkt_residual, std::abs(thermal_rate_derivative(md.eta, alloc[i]) - lambda * md.omega));
  }
  return res;
}

std::vector<LengthPoint> transmission_length_curve(const std::vector<double>& l_over_la) {
  std::vector<LengthPoint> out;
  out.reserve(l_over_la.size());
  for (double x : l_over_la) {
    if (!(x >= 0.0)) throw InvalidArgument("l_over_la: grid values must be >= 0");
    out.push_back({x, x == 0.0 ? Rate::unbounded() : lossy_rate(std::exp(-x))});
  }
  return out;
}

}  // namespace gausscap

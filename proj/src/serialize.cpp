#include "gausscap/serialize.hpp"

#include <cmath>

#include "gausscap/error.hpp"

namespace gausscap {

namespace {

double finite_number(const Json& j, const std::string& field) {
  if (!j.is_number()) throw InvalidArgument(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw InvalidArgument(field + ": non-finite value");
  return v;
}

void check_modes(const Json& j, int expected, const std::string& field) {
  if (j.contains("n_modes") && int_field(j, "n_modes") != expected) {
    throw InvalidArgument("n_modes: declared " + std::to_string(int_field(j, "n_modes")) +
                          " but " + field + " describes " + std::to_string(expected));
  }
}

}  // namespace

const Json& require_field(const Json& j, const std::string& key) {
  if (!j.is_object()) throw InvalidArgument(key + ": enclosing value is not a JSON object");
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidArgument(key + ": missing field");
  return *it;
}

int int_field(const Json& j, const std::string& key) {
  const Json& v = require_field(j, key);
  if (!v.is_number_integer()) throw InvalidArgument(key + ": expected an integer");
  return v.get<int>();
}

double number_field(const Json& j, const std::string& key) {
  return finite_number(require_field(j, key), key);
}

Matrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_array() || j.empty()) throw InvalidArgument(field + ": expected a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) throw InvalidArgument(field + ": rows must be non-empty arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw InvalidArgument(field + ": row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = finite_number(row[c], field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
    }
  }
  return m;
}

Vector vector_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw InvalidArgument(field + ": expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(i) = finite_number(j[i], field + "[" + std::to_string(i) + "]");
  }
  return v;
}

Json to_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    out.push_back(std::move(row));
  }
  return out;
}

Json to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Json to_json(const GaussianState& s) {
  return {{"n_modes", s.n_modes()}, {"mean", to_json(s.mean())}, {"cm", to_json(s.cm())}};
}

GaussianState state_from_json(const Json& j, double tol) {
  Matrix cm = matrix_from_json(require_field(j, "cm"), "cm");
  const int n = mode_count(cm, "cm");
  check_modes(j, n, "cm");
  Vector mean = j.contains("mean") ? vector_from_json(j["mean"], "mean") : Vector::Zero(2 * n);
  return {std::move(mean), std::move(cm), tol};
}

Json to_json(const GaussianChannel& c) {
  return {{"n_modes", c.n_out()}, {"X", to_json(c.x())}, {"Y", to_json(c.y())}};
}

GaussianChannel channel_from_json(const Json& j, double tol) {
  Matrix x = matrix_from_json(require_field(j, "X"), "X");
  Matrix y = matrix_from_json(require_field(j, "Y"), "Y");
  check_modes(j, mode_count(y, "Y"), "Y");
  return {std::move(x), std::move(y), tol};
}

Json to_json(const Dilation& d) {
  Json out = to_json(d.induced_channel());
  out["n_env"] = d.n_env();
  out["S"] = to_json(d.s());
  return out;
}

Dilation dilation_from_json(const Json& j, double tol) {
  const int n_env = int_field(j, "n_env");
  Matrix s = matrix_from_json(require_field(j, "S"), "S");
  const int total = mode_count(s, "S");
  if (n_env < 1 || n_env >= total) {
    throw InvalidArgument("n_env: must lie in [1, " + std::to_string(total - 1) + "]");
  }
  check_modes(j, total - n_env, "S");
  Dilation d(n_env, total - n_env, std::move(s), tol);
  if (j.contains("X") || j.contains("Y")) {
    const GaussianChannel induced = d.induced_channel();
    const double scale = 1e-8 * std::max(1.0, induced.y().cwiseAbs().maxCoeff());
    if (j.contains("X") &&
        ((matrix_from_json(j["X"], "X") - induced.x()).cwiseAbs().maxCoeff() > scale)) {
      throw InvalidArgument("X: does not match the channel induced by S");
    }
    if (j.contains("Y") &&
        ((matrix_from_json(j["Y"], "Y") - induced.y()).cwiseAbs().maxCoeff() > scale)) {
      throw InvalidArgument("Y: does not match the channel induced by S");
    }
  }
  return d;
}

Json to_json(const FockState& s) {
  return {{"cutoff", s.cutoff()},
          {"rho_re", to_json(Matrix(s.rho().real()))},
          {"rho_im", to_json(Matrix(s.rho().imag()))}};
}

FockState fock_from_json(const Json& j) {
  const int cutoff = int_field(j, "cutoff");
  const Matrix re = matrix_from_json(require_field(j, "rho_re"), "rho_re");
  const Matrix im = j.contains("rho_im") ? matrix_from_json(j["rho_im"], "rho_im")
                                         : Matrix::Zero(re.rows(), re.cols());
  if (im.rows() != re.rows() || im.cols() != re.cols()) {
    throw InvalidArgument("rho_im: shape differs from rho_re");
  }
  int n_modes = 0;
  if (re.rows() == cutoff) {
    n_modes = 1;
  } else if (re.rows() == static_cast<Eigen::Index>(cutoff) * cutoff) {
    n_modes = 2;
  } else {
    throw InvalidArgument("rho_re: size " + std::to_string(re.rows()) +
                          " is neither cutoff nor cutoff^2");
  }
  CMatrix rho(re.rows(), re.cols());
  rho.real() = re;
  rho.imag() = im;
  return {n_modes, cutoff, std::move(rho)};
}

Json to_json(const Rate& r) {
  if (r.infinite) return {{"infinite", true}};
  return r.bits;
}

Rate rate_from_json(const Json& j, const std::string& field) {
  if (j.is_object()) {
    if (j.value("infinite", false)) return Rate::unbounded();
    throw InvalidArgument(field + ": object rates must be {\"infinite\": true}");
  }
  return Rate::finite(finite_number(j, field));
}

Json to_json(const Classification& c) {
  Json out{{"verdict", to_string(c.verdict)},
           {"criterion", to_string(c.criterion)},
           {"min_eig", c.min_eig},
           {"max_eig", c.max_eig}};
  if (!c.diagnostic.empty()) out["diagnostic"] = c.diagnostic;
  return out;
}

Json to_json(const OptimizerState& s) {
  return {{"input_cm", to_json(s.input_cm)}, {"n_th", s.n_th},
          {"squeezing", s.squeezing},        {"angle", s.angle},
          {"mean_photons", s.mean_photons},  {"iterations", s.iterations},
          {"converged", s.converged}};
}

Json to_json(const CapacityReport& r) {
  Json out{{"method", to_string(r.method)}, {"lower", to_json(r.lower)}, {"upper", to_json(r.upper)}};
  out["value"] = r.value ? to_json(*r.value) : Json(nullptr);
  if (r.verdict) out["verdict"] = to_string(*r.verdict);
  if (r.optimizer) out["optimizer"] = to_json(*r.optimizer);
  if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
  return out;
}

Json to_json(const CertifiedRateReport& r) {
  Json out{{"entropy_bound", r.entropy_bound},
           {"certified_rate", r.certified_rate},
           {"projection_epsilon", r.projection_epsilon}};
  if (r.teleport_bounds) {
    out["tg_lower"] = to_json(r.teleport_bounds->lower);
    out["tg_upper"] = to_json(r.teleport_bounds->upper);
  } else {
    out["tg_lower"] = nullptr;
    out["tg_upper"] = nullptr;
  }
  if (!r.diagnostic.empty()) out["diagnostic"] = r.diagnostic;
  return out;
}

BroadbandSpec broadband_spec_from_json(const Json& j) {
  BroadbandSpec spec;
  const Json& modes = require_field(j, "modes");
  if (!modes.is_array()) throw InvalidArgument("modes: expected an array");
  for (std::size_t i = 0; i < modes.size(); ++i) {
    const std::string prefix = "modes[" + std::to_string(i) + "].";
    if (!modes[i].is_object()) throw InvalidArgument(prefix.substr(0, prefix.size() - 1) + ": expected an object");
    spec.modes.push_back({finite_number(require_field(modes[i], "omega"), prefix + "omega"),
                          finite_number(require_field(modes[i], "eta"), prefix + "eta")});
  }
  spec.energy = number_field(j, "energy");
  return spec;
}

Json to_json(const BroadbandResult& r) {
  return {{"allocation", r.allocation},     {"mode_bits", r.mode_bits},
          {"total_bits", r.total_bits},     {"multiplier", r.multiplier},
          {"kkt_residual", r.kkt_residual}, {"energy_residual", r.energy_residual}};
}

}  // namespace gausscap

#pragma once

#include <string>

#include <json.hpp>

#include "gausscap/capacity.hpp"
#include "gausscap/fock.hpp"
#include "gausscap/teleport.hpp"

namespace gausscap {

using Json = nlohmann::json;

/// Row-major [[...], ...]. Errors name `field`.
Matrix matrix_from_json(const Json& j, const std::string& field);
Vector vector_from_json(const Json& j, const std::string& field);
Json to_json(const Matrix& m);
Json to_json(const Vector& v);

/// Returns j[key], throwing InvalidArgument naming `key` if absent.
const Json& require_field(const Json& j, const std::string& key);
int int_field(const Json& j, const std::string& key);
double number_field(const Json& j, const std::string& key);

/// {"n_modes", "mean", "cm"}
Json to_json(const GaussianState& s);
GaussianState state_from_json(const Json& j, double tol = kDefaultTol);

/// {"n_modes", "X", "Y"}; n_modes must match the matrices.
Json to_json(const GaussianChannel& c);
GaussianChannel channel_from_json(const Json& j, double tol = kDefaultTol);

/// Channel fields of the induced channel plus {"n_env", "S"}.
Json to_json(const Dilation& d);
Dilation dilation_from_json(const Json& j, double tol = kDefaultTol);

/// {"cutoff", "rho_re", "rho_im"}; the mode count follows from the size.
Json to_json(const FockState& s);
FockState fock_from_json(const Json& j);

/// Plain number, or {"infinite": true}.
Json to_json(const Rate& r);
Rate rate_from_json(const Json& j, const std::string& field);

Json to_json(const Classification& c);
Json to_json(const OptimizerState& s);
Json to_json(const CapacityReport& r);
/// {"entropy_bound", "tg_lower", "tg_upper", "certified_rate", ...}
Json to_json(const CertifiedRateReport& r);

/// {"modes": [{"omega", "eta"}], "energy"}
BroadbandSpec broadband_spec_from_json(const Json& j);
Json to_json(const BroadbandResult& r);

}  // namespace gausscap

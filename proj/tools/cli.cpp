#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gausscap/capacity.hpp"
#include "gausscap/error.hpp"
#include "gausscap/fock.hpp"
#include "gausscap/serialize.hpp"
#include "gausscap/teleport.hpp"

namespace gausscap::cli {

namespace {

std::string read_file(const std::string& path, const std::string& field) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument(field + ": cannot read file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json load_json(const std::string& path, const std::string& field) {
  const std::string text = read_file(path, field);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(field + ": '" + path + "' is not valid JSON (" + e.what() + ")");
  }
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::string csv_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream ss;
  ss << std::setprecision(17) << v;
  return ss.str();
}

OptimizerOptions optimizer_options(const RunConfig& cfg) {
  OptimizerOptions o;
  o.extrapolation_tol = cfg.tol_opt;
  return o;
}

/// A channel file may carry a dilation ("S", "n_env") or just (X, Y).
struct ChannelInput {
  GaussianChannel channel;
  std::optional<Dilation> dilation;
};

ChannelInput load_channel(const std::string& path, const RunConfig& cfg) {
  const Json j = load_json(path, "channel");
  if (j.is_object() && j.contains("S")) {
    Dilation d = dilation_from_json(j, cfg.tol_psd);
    GaussianChannel c = d.induced_channel();
    return {std::move(c), std::move(d)};
  }
  return {channel_from_json(j, cfg.tol_psd), std::nullopt};
}

GainMatrix load_gain(const std::string& spec, int n_a) {
  if (spec == "identity") return GainMatrix::identity(n_a);
  const Json j = load_json(spec, "gain");
  return {matrix_from_json(j.is_object() ? require_field(j, "G") : j, "G")};
}

FockState pad_to_cutoff(const FockState& s, int cutoff) {
  if (s.cutoff() > cutoff) {
    throw InvalidArgument("cutoff: input cutoff " + std::to_string(s.cutoff()) +
                          " exceeds fock_cutoff " + std::to_string(cutoff));
  }
  if (s.cutoff() == cutoff || s.n_modes() != 1) return s;
  CMatrix rho = CMatrix::Zero(cutoff, cutoff);
  rho.topLeftCorner(s.cutoff(), s.cutoff()) = s.rho();
  return {1, cutoff, rho, s.truncation_error()};
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InvalidArgument(std::string("config: not valid JSON (") + e.what() + ")");
  }
  if (!j.is_object()) throw InvalidArgument("config: expected a JSON object");
  RunConfig cfg;
  auto tol = [&](const char* key, double& dst) {
    if (!j.contains(key)) return;
    dst = number_field(j, key);
    if (!(dst > 0.0)) throw InvalidArgument(std::string(key) + ": tolerance must be > 0");
  };
  tol("tol_psd", cfg.tol_psd);
  tol("tol_sym", cfg.tol_sym);
  tol("tol_opt", cfg.tol_opt);
  if (j.contains("fock_cutoff")) {
    cfg.fock_cutoff = int_field(j, "fock_cutoff");
    if (cfg.fock_cutoff < 5 || cfg.fock_cutoff > kMaxCutoff) {
      throw InvalidArgument("fock_cutoff: must lie in [5, " + std::to_string(kMaxCutoff) + "]");
    }
  }
  if (j.contains("output_format")) {
    const Json& f = j["output_format"];
    if (f == "json") {
      cfg.output_format = OutputFormat::Json;
    } else if (f == "csv") {
      cfg.output_format = OutputFormat::Csv;
    } else {
      throw InvalidArgument("output_format: must be \"json\" or \"csv\"");
    }
  }
  if (j.contains("verbosity")) {
    cfg.verbosity = int_field(j, "verbosity");
    if (cfg.verbosity < 0 || cfg.verbosity > 2) throw InvalidArgument("verbosity: must lie in [0, 2]");
  }
  return cfg;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
        std::optional<std::string> config_path) {
  CLI::App app{"Gaussian channel capacities, degradability and gaussification", "gausscap"};
  app.require_subcommand(1);

  auto* capacity = app.add_subcommand("capacity", "Quantum capacity of a channel");
  capacity->require_subcommand(1);
  double eta = 0.0;
  auto* cap_lossy = capacity->add_subcommand("lossy", "Closed form for attenuation/amplification");
  cap_lossy->add_option("--eta", eta, "Transmissivity or gain")->required();
  std::string channel_path;
  std::optional<double> max_photons;
  auto* cap_deg = capacity->add_subcommand("degradable", "Optimized capacity of a degradable channel");
  cap_deg->add_option("--channel", channel_path, "Channel JSON")->required();
  cap_deg->add_option("--max-photons", max_photons, "Mean photon constraint");
  auto* cap_bounds = capacity->add_subcommand("bounds", "Lower and upper capacity bounds");
  cap_bounds->add_option("--channel", channel_path, "Channel JSON")->required();

  double fig_min = 0.0, fig_max = 2.0;
  int fig_steps = 200;
  std::string fig_out;
  auto* fig2 = app.add_subcommand("fig2", "Lossy-line capacity against l/l_a as CSV");
  fig2->add_option("--min", fig_min, "Smallest l/l_a");
  fig2->add_option("--max", fig_max, "Largest l/l_a");
  fig2->add_option("--steps", fig_steps, "Number of intervals");
  fig2->add_option("--out", fig_out, "Output CSV path (stdout if omitted)");

  auto* classify_cmd = app.add_subcommand("classify", "Degradability verdict");
  classify_cmd->add_option("--channel", channel_path, "Channel or dilation JSON")->required();

  std::string resource_path, gain_spec = "identity";
  auto* teleport = app.add_subcommand("teleport", "Channel realized by teleportation");
  teleport->add_option("--resource", resource_path, "Resource state JSON")->required();
  teleport->add_option("--gain", gain_spec, "identity or a gain-matrix JSON file");

  std::string cm_path;
  int modes_a = 0;
  auto* certify = app.add_subcommand("certify", "Certified rate from a measured covariance matrix");
  certify->add_option("--cm", cm_path, "Covariance-matrix JSON")->required();
  certify->add_option("--modes-a", modes_a, "Number of channel-output modes")->required();
  certify->add_option("--gain", gain_spec, "identity or a gain-matrix JSON file");

  std::string spec_path;
  auto* broadband = app.add_subcommand("broadband", "Energy-constrained multimode lossy capacity");
  broadband->add_option("--spec", spec_path, "Broadband spec JSON")->required();

  std::string fock_path;
  int rounds = 0;
  auto* gaussify_cmd = app.add_subcommand("gaussify", "Trace distances along gaussification rounds");
  gaussify_cmd->add_option("--input", fock_path, "Fock state JSON")->required();
  gaussify_cmd->add_option("--rounds", rounds, "Number of rounds")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsageError;
  }

  try {
    RunConfig cfg;
    if (!config_path) {
      if (const char* env = std::getenv("GAUSSCAP_CONFIG"); env && *env) config_path = env;
    }
    if (config_path) cfg = parse_config(read_file(*config_path, "config"));
    const OptimizerOptions opts = optimizer_options(cfg);
    auto note = [&](const std::string& msg) {
      if (cfg.verbosity >= 2 && !msg.empty()) err << "note: " << msg << '\n';
    };

    if (cap_lossy->parsed()) {
      CapacityReport rep;
      rep.method = CapacityMethod::ClosedForm;
      rep.value = capacity_lossy(eta);
      rep.lower = rep.upper = *rep.value;
      emit(out, to_json(rep));
    } else if (cap_deg->parsed()) {
      if (max_photons && !(*max_photons >= 0.0)) throw InvalidArgument("max-photons: must be >= 0");
      const ChannelInput in = load_channel(channel_path, cfg);
      const Dilation d = in.dilation ? *in.dilation : dilation_of(in.channel, cfg.tol_psd);
      const CapacityReport rep = capacity_degradable(in.channel, d, max_photons, opts);
      note(rep.diagnostic);
      emit(out, to_json(rep));
    } else if (cap_bounds->parsed()) {
      const ChannelInput in = load_channel(channel_path, cfg);
      const CapacityReport rep = capacity_bounds(in.channel, opts);
      note(rep.diagnostic);
      emit(out, to_json(rep));
    } else if (fig2->parsed()) {
      if (!(fig_min >= 0.0)) throw InvalidArgument("min: must be >= 0");
      if (!(fig_max > fig_min)) throw InvalidArgument("max: must exceed min");
      if (fig_steps < 1) throw InvalidArgument("steps: must be >= 1");
      std::vector<double> grid(fig_steps + 1);
      for (int i = 0; i <= fig_steps; ++i) {
        grid[i] = i == fig_steps ? fig_max : fig_min + (fig_max - fig_min) * i / fig_steps;
      }
      std::ostringstream csv;
      csv << "l_over_la,Q_bits\n";
      for (const LengthPoint& p : transmission_length_curve(grid)) {
        csv << csv_number(p.l_over_la) << ','
            << (p.q.infinite ? std::string("inf") : csv_number(p.q.bits)) << '\n';
      }
      if (fig_out.empty()) {
        out << csv.str();
      } else {
        std::ofstream f(fig_out);
        if (!f) throw InvalidArgument("out: cannot write '" + fig_out + "'");
        f << csv.str();
      }
    } else if (classify_cmd->parsed()) {
      const ChannelInput in = load_channel(channel_path, cfg);
      const Classification c = in.dilation ? classify(*in.dilation) : classify(in.channel);
      note(c.diagnostic);
      emit(out, to_json(c));
    } else if (teleport->parsed()) {
      const Json j = load_json(resource_path, "resource");
      const TeleportResource resource(matrix_from_json(require_field(j, "cm"), "cm"), cfg.tol_psd);
      const GaussianChannel ch = teleport_channel(resource, load_gain(gain_spec, resource.n_a()));
      Json rep = to_json(ch);
      rep["cp_min_eigenvalue"] = cp_min_eigenvalue(ch);
      rep["cp"] = is_cp(ch, 1e-8);
      emit(out, rep);
    } else if (certify->parsed()) {
      const Json j = load_json(cm_path, "cm");
      const Matrix cm = matrix_from_json(j.is_object() ? require_field(j, "cm") : j, "cm");
      if (!is_symmetric(cm, cfg.tol_sym)) throw InvalidMeasurement("cm: not symmetric within tol_sym");
      std::optional<GainMatrix> gain;
      if (gain_spec != "identity") gain = load_gain(gain_spec, modes_a);
      const CertifiedRateReport rep = certify_from_moments(cm, modes_a, gain, opts);
      if (cfg.verbosity >= 1 && rep.projection_epsilon > 0.0) {
        err << "warning: cm repaired by adding " << rep.projection_epsilon << " * I\n";
      }
      note(rep.diagnostic);
      emit(out, to_json(rep));
    } else if (broadband->parsed()) {
      const BroadbandResult res = broadband_capacity(broadband_spec_from_json(load_json(spec_path, "spec")));
      if (cfg.output_format == OutputFormat::Csv) {
        out << "mode,allocation,bits\n";
        for (std::size_t i = 0; i < res.allocation.size(); ++i) {
          out << i << ',' << csv_number(res.allocation[i]) << ',' << csv_number(res.mode_bits[i]) << '\n';
        }
      } else {
        emit(out, to_json(res));
      }
    } else if (gaussify_cmd->parsed()) {
      if (rounds < 1) throw InvalidArgument("rounds: must be >= 1");
      const FockState input = pad_to_cutoff(fock_from_json(load_json(fock_path, "input")), cfg.fock_cutoff);
      const std::vector<double> d = gaussify(input, rounds);
      if (cfg.output_format == OutputFormat::Csv) {
        out << "round,trace_distance\n";
        for (std::size_t k = 0; k < d.size(); ++k) out << k + 1 << ',' << csv_number(d[k]) << '\n';
      } else {
        emit(out, Json{{"cutoff", input.cutoff()}, {"rounds", rounds}, {"trace_distances", d}});
      }
    }
    return kOk;
  } catch (const NumericalFailure& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const NotImplemented& e) {
    err << "not implemented: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const TruncationError& e) {
    err << "truncation: " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const Error& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const Json::exception& e) {
    err << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  }
}

}  // namespace gausscap::cli

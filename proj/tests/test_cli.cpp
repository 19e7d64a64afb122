#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "gausscap/serialize.hpp"

using namespace gausscap;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args, std::optional<std::string> config = std::nullopt) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err, config);
  return {code, out.str(), err.str()};
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "gausscap_cli_tests";
  fs::create_directories(dir);
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string write_json(const std::string& name, const Json& j) { return write(name, j.dump()); }

// Passing a config path explicitly keeps GAUSSCAP_CONFIG out of the tests.
std::string empty_config() { return write("empty_config.json", "{}"); }

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("capacity lossy") {
    const Result half = invoke({"capacity", "lossy", "--eta", "0.5"}, empty_config());
    CHECK(half.code == 0);
    CHECK(Json::parse(half.out)["value"] == 0.0);
    const Result q = invoke({"capacity", "lossy", "--eta", "0.75"}, empty_config());
    CHECK(std::round(Json::parse(q.out)["value"].get<double>() * 1e7) == 15849625.0);
    const Result inf = invoke({"capacity", "lossy", "--eta", "1"}, empty_config());
    CHECK(inf.code == 0);
    CHECK(Json::parse(inf.out)["value"]["infinite"] == true);
    const Result bad = invoke({"capacity", "lossy", "--eta", "-1"}, empty_config());
    CHECK(bad.code == 2);
    CHECK(bad.err.find("eta") != std::string::npos);
  }

  TEST_CASE("capacity degradable and bounds from a channel file") {
    const std::string path = write_json("att075.json", to_json(attenuation(0.75)));
    const Result deg = invoke({"capacity", "degradable", "--channel", path, "--max-photons", "1"}, empty_config());
    REQUIRE(deg.code == 0);
    auto g = [](double n) { return (n + 1) * std::log2(n + 1) - n * std::log2(n); };
    const double expect = g(0.75) - g(0.25);
    CHECK(Json::parse(deg.out)["value"].get<double>() == doctest::Approx(expect).epsilon(1e-6));
    const Result bounds = invoke({"capacity", "bounds", "--channel", path}, empty_config());
    REQUIRE(bounds.code == 0);
    const Json b = Json::parse(bounds.out);
    CHECK(b["lower"].get<double>() <= b["upper"].get<double>());
    const Result anti = invoke({"capacity", "degradable", "--channel", write_json("att03.json", to_json(attenuation(0.3)))},
                               empty_config());
    CHECK(anti.code == 2);
  }

  TEST_CASE("fig2 CSV") {
    const std::string out = (scratch_dir() / "fig2.csv").string();
    REQUIRE(invoke({"fig2", "--min", "0", "--max", "2", "--steps", "200", "--out", out}, empty_config()).code == 0);
    std::ifstream in(out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "l_over_la,Q_bits");
    std::vector<std::pair<double, double>> rows;
    while (std::getline(in, line)) {
      const auto comma = line.find(',');
      const std::string q = line.substr(comma + 1);
      rows.emplace_back(std::stod(line.substr(0, comma)), q == "inf" ? INFINITY : std::stod(q));
    }
    CHECK(rows.size() == 201);
    bool bracketed = false;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      CHECK(rows[i].second <= rows[i - 1].second);
      if (rows[i - 1].first < std::log(2.0) && rows[i].first >= std::log(2.0)) {
        bracketed = rows[i - 1].second > 0.0 && rows[i].second == 0.0;
      }
    }
    CHECK(bracketed);
    CHECK(invoke({"fig2", "--min", "1", "--max", "0.5"}, empty_config()).code == 2);
  }

  TEST_CASE("classify") {
    const Result r = invoke({"classify", "--channel", write_json("att075c.json", to_json(attenuation(0.75)))},
                            empty_config());
    REQUIRE(r.code == 0);
    CHECK(Json::parse(r.out)["verdict"] == "Degradable");
    const Result dil = invoke({"classify", "--channel", write_json("dil.json", to_json(dilation_of(attenuation(0.3))))},
                              empty_config());
    CHECK(Json::parse(dil.out)["verdict"] == "AntiDegradable");
  }

  TEST_CASE("teleport and certify") {
    const std::string res = write_json("tms.json", to_json(two_mode_squeezed(1.0)));
    const Result t = invoke({"teleport", "--resource", res, "--gain", "identity"}, empty_config());
    REQUIRE(t.code == 0);
    const Json j = Json::parse(t.out);
    CHECK(j["Y"][0][0].get<double>() == doctest::Approx(2.0 * std::exp(-2.0)));
    CHECK(j["cp"] == true);

    Matrix x = Matrix::Identity(4, 4);
    x.topLeftCorner(2, 2) *= std::sqrt(0.75);
    Matrix y = Matrix::Zero(4, 4);
    y.topLeftCorner(2, 2) = 0.25 * Matrix::Identity(2, 2);
    const Matrix cm = x * two_mode_squeezed(3.0).cm() * x.transpose() + y;
    const std::string cm_path = write_json("lossy_tms.json", Json{{"cm", to_json(cm)}});
    const Result c = invoke({"certify", "--cm", cm_path, "--modes-a", "1"}, empty_config());
    REQUIRE(c.code == 0);
    CHECK(Json::parse(c.out)["certified_rate"].get<double>() > 1.4);
    CHECK(invoke({"certify", "--cm", cm_path, "--modes-a", "2"}, empty_config()).code == 2);
  }

  TEST_CASE("broadband") {
    const std::string spec = write("bb.json", R"({"modes": [{"omega": 1, "eta": 0.9}, {"omega": 1, "eta": 0.3}], "energy": 2})");
    const Result r = invoke({"broadband", "--spec", spec}, empty_config());
    REQUIRE(r.code == 0);
    const Json j = Json::parse(r.out);
    CHECK(j["allocation"][1] == 0.0);
    CHECK(j["allocation"][0].get<double>() == doctest::Approx(2.0));
    const Result csv = invoke({"broadband", "--spec", spec}, write("csv_config.json", R"({"output_format": "csv"})"));
    CHECK(csv.out.rfind("mode,allocation,bits\n", 0) == 0);
  }

  TEST_CASE("gaussify") {
    const std::string in = write_json("one.json", to_json(fock_number(1, 25)));
    const Result r = invoke({"gaussify", "--input", in, "--rounds", "4"}, empty_config());
    REQUIRE(r.code == 0);
    const auto d = Json::parse(r.out)["trace_distances"].get<std::vector<double>>();
    REQUIRE(d.size() == 4);
    for (int k = 1; k < 4; ++k) CHECK(d[k] < d[k - 1]);
    const Result small = invoke({"gaussify", "--input", in, "--rounds", "1"}, write("c10.json", R"({"fock_cutoff": 10})"));
    CHECK(small.code == 2);
    CHECK(small.err.find("cutoff") != std::string::npos);
  }

  TEST_CASE("error paths and exit codes") {
    const Result missing = invoke({"classify", "--channel", "/nonexistent/channel.json"}, empty_config());
    CHECK(missing.code == 2);
    CHECK(missing.err.find("channel") != std::string::npos);
    const Result garbled = invoke({"classify", "--channel", write("garbled.json", "{not json")}, empty_config());
    CHECK(garbled.code == 2);
    const Result non_cp = invoke(
        {"classify", "--channel", write("noncp.json", R"({"n_modes": 1, "X": [[1,0],[0,1]], "Y": [[-1,0],[0,-1]]})")},
        empty_config());
    CHECK(non_cp.code == 2);
    CHECK(non_cp.err.find("Y") != std::string::npos);
    CHECK(invoke({}, empty_config()).code == 4);
    CHECK(invoke({"bogus"}, empty_config()).code == 4);
    CHECK(invoke({"capacity", "lossy"}, empty_config()).code == 4);
    CHECK(invoke({"--help"}, empty_config()).code == 0);
    const std::string ch = write_json("amp.json", to_json(GaussianChannel(Matrix::Zero(2, 2), Matrix::Identity(2, 2))));
    CHECK(invoke({"capacity", "degradable", "--channel", ch}, empty_config()).code == 3);
  }

  TEST_CASE("configuration") {
    CHECK(cli::parse_config(R"({"tol_opt": 1e-5, "fock_cutoff": 30})").fock_cutoff == 30);
    const Result bad = invoke({"capacity", "lossy", "--eta", "0.7"}, write("bad.json", R"({"fock_cutoff": 70})"));
    CHECK(bad.code == 2);
    CHECK(bad.err.find("fock_cutoff") != std::string::npos);
    const Result neg = invoke({"capacity", "lossy", "--eta", "0.7"}, write("neg.json", R"({"tol_psd": -1})"));
    CHECK(neg.err.find("tol_psd") != std::string::npos);
    const Result fmt = invoke({"capacity", "lossy", "--eta", "0.7"}, write("fmt.json", R"({"output_format": "xml"})"));
    CHECK(fmt.err.find("output_format") != std::string::npos);
  }

  TEST_CASE("output is deterministic") {
    const std::string path = write_json("att09.json", to_json(attenuation(0.9)));
    const Result a = invoke({"capacity", "bounds", "--channel", path}, empty_config());
    const Result b = invoke({"capacity", "bounds", "--channel", path}, empty_config());
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
}

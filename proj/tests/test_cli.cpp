#include <doctest.h>

#include <bnlab_cli/cli.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = bnlab::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), {}};
}

} // namespace

TEST_CASE("eig reports the first eigenvalue with its tolerances") {
  const auto r = run({"eig", "--dim", "5", "--output", "json"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == "bnlab/1");
  CHECK(j["command"] == "eig");
  CHECK(j["dim"] == 5);
  CHECK(j["lambda1"].get<double>() == doctest::Approx(20.19073).epsilon(1e-6));
  CHECK(j.contains("tolerances"));
  CHECK(j["tolerances"].contains("quad_rel_tol"));
}

TEST_CASE("critical point for N = 4") {
  const auto r = run({"critical", "--dim", "4"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  const auto& b = j["coeffs"];
  CHECK(j["s1"].get<double>() ==
        doctest::Approx(b["b2"].get<double>() / (2 * b["b3"].get<double>())).epsilon(1e-14));
  CHECK(j["s2"].get<double>() == 1.0);
}

TEST_CASE("usage errors exit 2 and name the flag") {
  auto r = run({"eig", "--dim", "9"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--dim") != std::string::npos);

  r = run({"branch", "--dim", "5", "--eps-grid", "0.1,0.2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--eps-grid") != std::string::npos);

  r = run({"energy", "--dim", "5", "--d1", "1", "--d2", "1"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--eps") != std::string::npos);

  r = run({"eig", "--dim", "4", "--output", "yaml"});
  CHECK(r.code == 2);
  CHECK(r.err.find("--output") != std::string::npos);

  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("repeat runs are byte-identical") {
  const std::vector<std::string> args{"sweep", "--dim", "5", "--eps-grid", "0.01,0.003,0.001", "--threads", "3"};
  const auto a = run(args), b = run(args);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(a.out.rfind("eps,J,J_pred,residual,ratio\n", 0) == 0);

  const auto p = std::filesystem::temp_directory_path();
  const auto f1 = (p / "bnlab_cli_repeat_1.json").string(), f2 = (p / "bnlab_cli_repeat_2.json").string();
  REQUIRE(run({"energy", "--dim", "4", "--eps", "0.1", "--s1", "0.07", "--s2", "1", "--seed", "7", "--out", f1}).code == 0);
  REQUIRE(run({"energy", "--dim", "4", "--eps", "0.1", "--s1", "0.07", "--s2", "1", "--seed", "7", "--out", f2}).code == 0);
  CHECK(slurp(f1) == slurp(f2));
  CHECK_FALSE(slurp(f1).empty());
}

TEST_CASE("config file with flag precedence") {
  const auto path = (std::filesystem::temp_directory_path() / "bnlab_cli_test.conf").string();
  {
    std::ofstream f(path);
    f << "dim=4\noutput=json\n";
  }
  auto r = run({"eig", "--config", path});
  REQUIRE(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["dim"] == 4);
  r = run({"eig", "--config", path, "--dim", "3"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["dim"] == 3);
  CHECK(j["lambda1"].get<double>() == doctest::Approx(M_PI * M_PI).epsilon(1e-10));
}

TEST_CASE("branch CSV feeds fit") {
  const auto path = (std::filesystem::temp_directory_path() / "bnlab_cli_branch.csv").string();
  auto r = run({"branch", "--dim", "5", "--eps-grid", "0.08,0.05,0.03,0.02", "--output", "csv", "--out", path});
  REQUIRE(r.code == 0);
  const auto csv = slurp(path);
  CHECK(csv.rfind("eps,lambda,u0,delta_hat,tau_hat,d1_hat,d2_hat,energy,node_count,min_value\n", 0) == 0);
  r = run({"fit", "--dim", "5", "--in", path});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["points"] == 4);
  CHECK(j["slope_log_tau"].get<double>() > 0.0);
  CHECK(j["slope_log_delta"].get<double>() > 0.0);
}

TEST_CASE("lost branch is a computational failure") {
  const auto r = run({"branch", "--dim", "5", "--eps-grid", "0.5", "--output", "csv"});
  CHECK(r.code == 1);
  CHECK(r.err.find("0.5") != std::string::npos);
}

TEST_CASE("verify runs the three-dimensional criteria") {
  const auto r = run({"verify", "--dim", "3", "--fast"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

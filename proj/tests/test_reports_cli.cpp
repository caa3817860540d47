#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "calabi/report.hpp"
#include "calabi/sweep.hpp"

using namespace calabi;

namespace {

std::string temp_path(const std::string& name) {
  return std::string("/tmp/calabi_test_") + name;
}

int cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"calabi"};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

json load_json(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  json j;
  in >> j;
  return j;
}

} // namespace

TEST_CASE("number formatting round-trips doubles") {
  for (double x : {1.0 / 3.0, 2.0 * M_PI * M_PI, -4.5842355367417440, 1e-300}) {
    CHECK(std::stod(format_number(x)) == x);
  }
  CHECK(format_number(0.25) == "0.25");
}

TEST_CASE("solve envelope round-trips through JSON") {
  const json env = conical_envelope(1.0, 1.0, 1e-10, 257);
  const json back = json::parse(env.dump());
  CHECK(back == env);

  // struct-level round trip of the profile block
  const MomentumProfile p = env.at("results").at("profile").get<MomentumProfile>();
  json again;
  to_json(again, p);
  CHECK(again == env.at("results").at("profile"));
}

TEST_CASE("envelope passes verification; tampering fails it") {
  json env = conical_envelope(1.0, 1.0, 1e-10, 257);
  std::string why;
  CHECK(verify_envelope(env, why));
  CHECK(why.empty());

  // scale the profile by 1.01: the slope at gamma=1 leaves beta0
  json bad = env;
  for (auto key : {"phi", "dphi", "ddphi"}) {
    auto arr = bad["results"]["profile"][key].get<std::vector<double>>();
    for (auto& x : arr) x *= 1.01;
    bad["results"]["profile"][key] = arr;
  }
  CHECK(!verify_envelope(bad, why));
  CHECK(!why.empty());

  // tampering with a paper-target deviation also trips verification
  json bad2 = env;
  bad2["results"]["paper_targets"]["chern_integral"]["deviation"] = 1.0;
  CHECK(!verify_envelope(bad2, why));

  // a rescaled trajectory breaks the boundary data
  json bad3 = env;
  auto values = bad3["results"]["trajectory"]["values"].get<std::vector<double>>();
  for (auto& v : values) v *= 0.9;
  bad3["results"]["trajectory"]["values"] = values;
  CHECK(!verify_envelope(bad3, why));
}

TEST_CASE("cli solve-conical writes a report") {
  const std::string out = temp_path("conical.json");
  CHECK(cli({"solve-conical", "--m", "1", "--beta0", "1", "--grid-n", "257", "--out",
             out.c_str()}) == 0);
  const json env = load_json(out);
  CHECK(env.at("schema_version") == "1");
  CHECK(env.at("inputs").at("command") == "solve-conical");
  const json& res = env.at("results");
  CHECK(res.at("spec").at("alpha").get<double>() < 0.0);
  CHECK(res.at("spec").at("beta_inf").get<double>() > 1.0);
  CHECK(res.contains("residual"));
  CHECK(res.contains("invariants"));
  CHECK(res.contains("paper_targets"));
  CHECK(env.contains("timings"));
  std::remove(out.c_str());
}

TEST_CASE("cli verify exits 2 on a tampered report") {
  const std::string out = temp_path("verify.json");
  REQUIRE(cli({"solve-conical", "--m", "1", "--beta0", "1", "--grid-n", "257", "--out",
               out.c_str()}) == 0);
  CHECK(cli({"verify", "--input", out.c_str()}) == 0);

  json env = load_json(out);
  for (auto key : {"phi", "dphi", "ddphi"}) {
    auto arr = env["results"]["profile"][key].get<std::vector<double>>();
    for (auto& x : arr) x *= 1.01;
    env["results"]["profile"][key] = arr;
  }
  {
    std::ofstream f(out);
    f << env.dump();
  }
  CHECK(cli({"verify", "--input", out.c_str()}) == 2);
  std::remove(out.c_str());
}

TEST_CASE("cli usage errors exit 3") {
  CHECK(cli({"no-such-command"}) == 3);
  CHECK(cli({"solve-conical", "--beta0", "1"}) == 3); // missing --m
  CHECK(cli({"solve-conical", "--m", "abc", "--beta0", "1"}) == 3);
  CHECK(cli({"verify", "--input", "/nonexistent/report.json"}) == 3);
  CHECK(cli({"solve-conical", "--m", "1", "--beta0", "1", "--out",
             "/nonexistent-dir/x.json"}) == 3);
  CHECK(cli({"solve-conical", "--m", "-1", "--beta0", "1"}) == 3);
}

TEST_CASE("cli line command emits the m=1 coefficients") {
  const std::string out = temp_path("line.json");
  CHECK(cli({"line", "--m", "1", "--out", out.c_str()}) == 0);
  const json env = load_json(out);
  const json& res = env.at("results");
  CHECK(res.at("coef_beta_inf").get<double>() == doctest::Approx(8.0 / 3.0));
  CHECK(res.at("coef_beta0").get<double>() == doctest::Approx(-10.0 / 3.0));
  const double C = res.at("C_m").get<double>();
  CHECK(res.at("rhs").get<double>() ==
        doctest::Approx(13.0 / 16.0 * C - 27.0 / 8.0).epsilon(1e-12));
  std::remove(out.c_str());
}

TEST_CASE("cli probe command reports the line residual") {
  const std::string out = temp_path("probe.json");
  CHECK(cli({"probe", "--m", "1", "--beta0", "1", "--out", out.c_str()}) == 0);
  const json env = load_json(out);
  const json& res = env.at("results");
  CHECK(res.contains("line_residual"));
  CHECK(res.contains("beta_inf_shooting"));
  CHECK(res.contains("beta_inf_line"));
  CHECK(res.at("alpha_star").get<double>() < 0.0);
  std::remove(out.c_str());
}

TEST_CASE("config file supplies defaults, flags override") {
  const std::string cfg = temp_path("config.json");
  {
    std::ofstream f(cfg);
    f << R"({"m": 1.0, "beta0": 1.0, "grid_n": 257})";
  }
  const std::string out = temp_path("fromcfg.json");
  CHECK(cli({"solve-conical", "--config", cfg.c_str(), "--beta0", "0.5", "--out",
             out.c_str()}) == 0);
  const json env = load_json(out);
  CHECK(env.at("inputs").at("m").get<double>() == 1.0);        // from config
  CHECK(env.at("inputs").at("beta0").get<double>() == 0.5);    // flag wins
  CHECK(env.at("inputs").at("grid_n").get<std::size_t>() == 257);
  std::remove(cfg.c_str());
  std::remove(out.c_str());
}

TEST_CASE("sweep rows and CSV determinism") {
  // cartesian product: {0.5, 1, 2} x {0.5, 1} gives six rows
  const auto rows = run_sweep({2.0, 1.0, 0.5}, {1.0, 0.5}, 1e-10);
  REQUIRE(rows.size() == 6);
  // sorted by (m, beta0)
  CHECK(rows[0].m == 0.5);
  CHECK(rows[0].beta0 == 0.5);
  CHECK(rows[1].beta0 == 1.0);
  CHECK(rows[5].m == 2.0);
  CHECK(rows[5].beta0 == 1.0);
  for (const auto& r : rows) {
    CHECK(r.ok);
    CHECK(r.beta_inf > r.beta0);
    CHECK(r.alpha_star < 0.0);
    CHECK(r.C_m > 2.0);
    CHECK(std::abs(r.chern_integral + 4.0) < 1e-8);
    CHECK(std::isfinite(r.line_residual));
  }

  const std::string csv1 = sweep_csv(rows);
  const std::string csv2 = sweep_csv(run_sweep({2.0, 1.0, 0.5}, {1.0, 0.5}, 1e-10));
  CHECK(csv1 == csv2); // byte-identical across runs
  CHECK(csv1.rfind("m,beta0,beta_inf,alpha_star,C_m,residual_bvp,", 0) == 0);
  // \n endings only
  CHECK(csv1.find('\r') == std::string::npos);
}

TEST_CASE("sweep records cell failures in-row and continues") {
  // beta0 below the admissible range makes that column fail
  const auto rows = run_sweep({1.0}, {1e-9, 1.0}, 1e-10);
  REQUIRE(rows.size() == 2);
  CHECK(!rows[0].ok);
  CHECK(!rows[0].error.empty());
  CHECK(std::isnan(rows[0].alpha_star));
  CHECK(rows[1].ok);
  const std::string csv = sweep_csv(rows);
  CHECK(csv.find("nan") != std::string::npos);
}

TEST_CASE("plot data export") {
  const std::string out = temp_path("plots.json");
  const std::string prefix = temp_path("plotdata");
  CHECK(cli({"solve-conical", "--m", "1", "--beta0", "1", "--grid-n", "257", "--out",
             out.c_str(), "--plot-prefix", prefix.c_str()}) == 0);

  std::ifstream prof(prefix + "_profile.tsv");
  REQUIRE(prof.good());
  std::string header;
  std::getline(prof, header);
  CHECK(header == "gamma\tv\tphi\tlambda");
  double g, v, phi, lambda;
  double first_v = -1.0, first_phi = 1.0, last_phi = 1.0;
  double lambda_min = 1e300, lambda_max = -1e300;
  bool first = true;
  while (prof >> g >> v >> phi >> lambda) {
    if (first) {
      first_v = v;
      first_phi = phi;
      first = false;
    }
    last_phi = phi;
    lambda_min = std::min(lambda_min, lambda);
    lambda_max = std::max(lambda_max, lambda);
  }
  CHECK(first_v == 2.0);
  CHECK(std::abs(first_phi) < 1e-8);
  CHECK(std::abs(last_phi) < 1e-8);
  CHECK(lambda_max - lambda_min < 1e-9); // constant column for conical solutions

  std::ifstream pot(prefix + "_potential.tsv");
  REQUIRE(pot.good());
  std::getline(pot, header);
  CHECK(header == "tau\ts");
  double tau, s, prev_s = -1e300;
  bool increasing = true;
  while (pot >> tau >> s) {
    if (s <= prev_s) increasing = false;
    prev_s = s;
  }
  CHECK(increasing);

  std::remove(out.c_str());
  std::remove((prefix + "_profile.tsv").c_str());
  std::remove((prefix + "_potential.tsv").c_str());
}

TEST_CASE("smooth envelope verifies its own targets") {
  const json env = smooth_envelope(1.0, 1e-10, 257);
  CHECK(env.at("results").at("C_star").get<double>() ==
        doctest::Approx(4.12626982971369216).epsilon(1e-9));
  for (const auto& [name, block] : env.at("results").at("paper_targets").items()) {
    INFO("target ", name);
    CHECK(block.at("deviation").get<double>() <= block.at("tolerance").get<double>());
  }
  CHECK(json::parse(env.dump()) == env);

  std::string why;
  CHECK(verify_envelope(env, why));
  json bad = env;
  bad["results"]["C_star"] = 3.0; // no longer matches the stored coefficients
  CHECK(!verify_envelope(bad, why));
}

TEST_CASE("solve envelopes are deterministic apart from timings") {
  json a = conical_envelope(0.5, 2.0, 1e-10, 257);
  json b = conical_envelope(0.5, 2.0, 1e-10, 257);
  a.erase("timings");
  b.erase("timings");
  CHECK(a.dump() == b.dump());
}

TEST_CASE("cli exits 1 when the solver cannot converge") {
  // a tolerance below integrator accuracy exhausts the iteration budget
  CHECK(cli({"solve-conical", "--m", "1", "--beta0", "1", "--tol", "1e-16"}) == 1);
}

TEST_CASE("cli sweep json format") {
  const std::string out = temp_path("sweep.json");
  CHECK(cli({"sweep", "--m", "0.5", "--beta0", "1", "--format", "json", "--out",
             out.c_str()}) == 0);
  const json env = load_json(out);
  REQUIRE(env.at("results").is_array());
  CHECK(env.at("results").size() == 1);
  CHECK(env.at("results")[0].at("beta_inf").get<double>() > 1.0);
  std::remove(out.c_str());
}

#include <doctest.h>
#include <unistd.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hsob/cli.hpp"
#include "hsob/io.hpp"
#include "hsob/rinorm.hpp"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kData = HSOB_TEST_DATA;

class TempDir {
 public:
  TempDir() {
    static int counter = 0;
    path_ = fs::temp_directory_path() /
            ("hsob_cli_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  std::string operator[](const std::string& name) const { return (path_ / name).string(); }

 private:
  fs::path path_;
};

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Captured {
  int code;
  std::string out;
  std::string err;
};

Captured run(std::vector<std::string> args) {
  args.insert(args.begin(), "hsob");
  std::ostringstream out, err;
  auto* old_out = std::cout.rdbuf(out.rdbuf());
  auto* old_err = std::cerr.rdbuf(err.rdbuf());
  const int code = hsob::cli::run(args);
  std::cout.rdbuf(old_out);
  std::cerr.rdbuf(old_err);
  return {code, out.str(), err.str()};
}

nlohmann::json load(const std::string& p) { return nlohmann::json::parse(slurp(p)); }

std::string data(const std::string& name) { return (kData / name).string(); }

// Mass of the open linf ball in a discrete sample, by direct summation.
double sample_ball(const hsob::DiscreteSpace& s, double a, double b, double r) {
  double m = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto p = s.point(i);
    if (std::max(std::abs(p[0] - a), std::abs(p[1] - b)) < r) m += s.weight(i);
  }
  return m;
}

}  // namespace

TEST_CASE("rearrange writes a deterministic curve") {
  TempDir tmp;
  const auto a = run({"rearrange", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--out",
                      tmp["a.csv"], "--summary", tmp["a.json"]});
  REQUIRE(a.code == 0);
  const auto b = run({"rearrange", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--out",
                      tmp["b.csv"]});
  REQUIRE(b.code == 0);
  const auto csv = slurp(tmp["a.csv"]);
  CHECK(csv == slurp(tmp["b.csv"]));
  CHECK(csv.rfind("t,f_star,f_double_star,osc\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') > 10);
  const auto doc = load(tmp["a.json"]);
  CHECK(doc["total_mass"].get<double>() == doctest::Approx(4.0));
  CHECK(a.out.find("rearrange:") != std::string::npos);
}

TEST_CASE("gradient subcommands") {
  TempDir tmp;
  REQUIRE(run({"gradient", "canonical", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--s", "1",
               "--out", tmp["g.json"]})
              .code == 0);
  const auto chk = run({"gradient", "check", "--space", data("grid16.json"), "--fn", data("bumps16.json"),
                        "--grad", tmp["g.json"], "--s", "1", "--summary", tmp["chk.json"]});
  CHECK(chk.code == 0);
  CHECK(load(tmp["chk.json"])["ok"].get<bool>());

  std::vector<double> half = hsob::load_values(tmp["g.json"]);
  for (auto& x : half) x *= 0.5;
  hsob::save_values(tmp["half.json"], half);
  CHECK(run({"gradient", "check", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--grad",
             tmp["half.json"], "--s", "1"})
            .code == 1);

  for (const char* obj : {"lp:1", "lp:2", "linf"}) {
    const auto m = run({"gradient", "min", "--space", data("line8.json"), "--fn", data("line8_fn.json"), "--s",
                        "1", "--objective", obj, "--out", tmp["min.json"], "--summary", tmp["min_sum.json"]});
    CHECK(m.code == 0);
    CHECK(load(tmp["min_sum.json"])["objective"].get<std::string>() == hsob::RiSpaceSpec::parse(obj).to_string());
  }
  CHECK(run({"gradient", "min", "--space", data("line8.json"), "--fn", data("line8_fn.json"), "--objective",
             "lorentz:2:1", "--out", tmp["x.json"]})
            .code == 2);
}

TEST_CASE("verify subcommands on fixtures") {
  TempDir tmp;
  const auto osc = run({"verify-oscillation", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--s",
                        "1", "--alpha", "2", "--p", "0.5", "--out", tmp["osc.csv"], "--summary", tmp["osc.json"]});
  CHECK(osc.code == 0);
  const auto doc = load(tmp["osc.json"]);
  CHECK(doc["pass"].get<bool>());
  CHECK(doc["t_count"].get<int>() == 64);
  CHECK(slurp(tmp["osc.csv"]).rfind("t,lhs,rhs,ratio\n", 0) == 0);

  const auto conv = run({"verify-converse", "--space", data("euclid2.json"), "--s", "1", "--alpha", "2", "--radii",
                         "0.25,0.5,1,2", "--center", "0,0", "--summary", tmp["conv.json"]});
  CHECK(conv.code == 0);
  CHECK(load(tmp["conv.json"])["fitted_alpha"].get<double>() == doctest::Approx(2.0).epsilon(0.05));

  const auto dconv = run({"verify-converse", "--space", data("grid16.json"), "--s", "1", "--alpha", "2", "--radii",
                          "0.01,0.6", "--centers", "136", "--summary", tmp["dconv.json"]});
  CHECK(dconv.code == 0);
  CHECK(load(tmp["dconv.json"])["skipped"].size() == 1);

  const auto emb = run({"verify-embedding", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--s",
                        "1", "--alpha", "2", "--spec", "lp:4/3", "--case", "1a", "--summary", tmp["emb.json"]});
  CHECK(emb.code == 0);
  CHECK(load(tmp["emb.json"])["case"].get<std::string>() == "1a");
  const auto wrong = run({"verify-embedding", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--s",
                          "1", "--alpha", "2", "--spec", "lp:4", "--case", "1a"});
  CHECK(wrong.code == 2);
  CHECK(wrong.err.find("selects case 1c") != std::string::npos);

  const auto sc = run({"space-check", "--space", data("grid16.json"), "--alpha", "2", "--summary", tmp["sc.json"]});
  CHECK(sc.code == 0);
}

TEST_CASE("gallery reports the almost-continuity failure") {
  TempDir tmp;
  const auto g = run({"gallery", "appendix-plane", "--probe", "a=0.001", "--c", "2", "--summary", tmp["g.json"]});
  CHECK(g.code == 1);
  const auto doc = load(tmp["g.json"]);
  CHECK_FALSE(doc["pass"].get<bool>());
  CHECK(doc["required_c"].get<double>() >= (1 + 1 / (2 * 0.001)) * (1 - 1e-3));
  CHECK(run({"gallery", "appendix-plane", "--probe", "a=0.25", "--c", "5"}).code == 0);
  CHECK(run({"gallery", "appendix-plane", "--probe", "b=1"}).code == 2);
}

TEST_CASE("gen-space") {
  TempDir tmp;
  REQUIRE(run({"gen-space", "grid", "--dim", "2", "--n", "4", "--out", tmp["g.json"]}).code == 0);
  const auto grid = std::get<hsob::DiscreteSpace>(hsob::load_space(tmp["g.json"]));
  CHECK(grid.size() == 16);
  for (double w : grid.weights()) CHECK(w == doctest::Approx(1.0 / 16));

  REQUIRE(run({"gen-space", "random-cloud", "--dim", "2", "--n", "100", "--seed", "7", "--out", tmp["a.json"]}).code == 0);
  REQUIRE(run({"gen-space", "random-cloud", "--dim", "2", "--n", "100", "--seed", "7", "--out", tmp["b.json"]}).code == 0);
  CHECK(slurp(tmp["a.json"]) == slurp(tmp["b.json"]));
  REQUIRE(run({"gen-space", "random-cloud", "--dim", "2", "--n", "100", "--seed", "8", "--out", tmp["c.json"]}).code == 0);
  CHECK(slurp(tmp["a.json"]) != slurp(tmp["c.json"]));

  REQUIRE(run({"gen-space", "appendix-plane-sample", "--per-unit", "40", "--window", "-0.5,1.5,-1,1", "--out",
               tmp["p.json"]})
              .code == 0);
  const auto plane = std::get<hsob::DiscreteSpace>(hsob::load_space(tmp["p.json"]));
  const auto exact = hsob::AnalyticSpace::appendix_plane();
  const double probes[][3] = {{0.5, 0.0, 0.25}, {0.3, 0.0, 0.4}, {0.9, 0.1, 0.3}, {0.5, 0.0, 0.8}, {0.02, -0.2, 0.3}};
  for (const auto& p : probes) {
    const double closed = exact.ball_measure(std::vector<double>{p[0], p[1]}, p[2]);
    CHECK(std::abs(sample_ball(plane, p[0], p[1], p[2]) / closed - 1.0) <= 0.02);
  }
  CHECK(plane.total_mass() == doctest::Approx(4.0 + 2.0 + 2.0));

  CHECK(run({"gen-space", "grid", "--dim", "2", "--n", "0", "--out", tmp["z.json"]}).code == 2);
  CHECK(run({"gen-space", "appendix-plane-sample", "--per-unit", "10", "--window", "-0.05,1.05,-1,1", "--out",
             tmp["z.json"]})
            .code == 2);
}

TEST_CASE("gen-fn") {
  TempDir tmp;
  REQUIRE(run({"gen-fn", "test-function", "--space", data("grid16.json"), "--center", "136", "--r", "0.5", "--s",
               "1", "--out", tmp["f.json"], "--grad-out", tmp["g.json"]})
              .code == 0);
  CHECK(run({"gradient", "check", "--space", data("grid16.json"), "--fn", tmp["f.json"], "--grad", tmp["g.json"],
             "--s", "1"})
            .code == 0);
  REQUIRE(run({"gen-fn", "bumps", "--space", data("grid16.json"), "--count", "3", "--seed", "1", "--out",
               tmp["b.json"]})
              .code == 0);
  CHECK(slurp(tmp["b.json"]) == slurp(data("bumps16.json")));
}

TEST_CASE("input and usage errors") {
  TempDir tmp;
  {
    std::ofstream bad(tmp["bad.json"]);
    bad << "{\n  \"kind\": \"discrete\",\n  \"points\": [[0, 1], \n}\n";
  }
  const auto r = run({"rearrange", "--space", tmp["bad.json"], "--fn", data("bumps16.json"), "--out", tmp["x.csv"]});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.json") != std::string::npos);
  CHECK(r.err.find(":4") != std::string::npos);

  const auto missing = run({"rearrange", "--space", tmp["nope.json"], "--fn", data("bumps16.json"), "--out", tmp["x.csv"]});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("nope.json") != std::string::npos);

  CHECK(run({"rearrange", "--space", data("grid16.json"), "--fn", data("line8_fn.json"), "--out", tmp["x.csv"]}).code == 2);
  CHECK(run({"verify-oscillation", "--space", data("grid16.json"), "--fn", data("bumps16.json"), "--s", "1",
             "--alpha", "2", "--p", "2"})
            .code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK_FALSE(fs::exists(tmp["x.csv"]));
}

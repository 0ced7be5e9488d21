#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <json.hpp>
#include <sstream>

#include "hookwalk/cli.hpp"
#include "hookwalk/diagram_io.hpp"

namespace fs = std::filesystem;
using hookwalk::cli::run;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string data(const std::string& name) {
  return std::string(HOOKWALK_EXAMPLES_DIR) + "/" + name;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "hookwalk_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

void write(const fs::path& p, const std::string& s) { std::ofstream(p) << s; }

}  // namespace

TEST_CASE("atoms") {
  auto r = call({"atoms", "--diagram", data("rect_025_13.json"), "--walk", "exterior"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j.size() == 3);
  CHECK(j["0"].get<double>() == doctest::Approx(0.3).epsilon(1e-14));
  CHECK(j["2"].get<double>() == doctest::Approx(1.0 / 6).epsilon(1e-14));
  CHECK(j["5"].get<double>() == doctest::Approx(8.0 / 15).epsilon(1e-14));
  auto in = call({"atoms", "--diagram", data("rect_025_13.json"), "--walk", "interior"});
  auto ji = nlohmann::json::parse(in.out);
  CHECK(ji["1"].get<double>() == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(ji["3"].get<double>() == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(call({"atoms", "--diagram", data("vee_half.json")}).code == 1);
}

TEST_CASE("usage and input errors") {
  CHECK(call({}).code == 1);
  CHECK(call({"nonsense"}).code == 1);
  CHECK(call({"--help"}).code == 0);
  CHECK(call({"atoms"}).code == 1);
  CHECK(call({"atoms", "--diagram", "/nonexistent.json"}).code == 1);
  CHECK(call({"atoms", "--diagram", data("rect_025_13.json"), "--walk", "sideways"}).code == 1);
  const auto bad = scratch("bad.json");
  write(bad, R"({"kind":"rectangular","minima":[0,2],"maxima":[3]})");
  auto r = call({"atoms", "--diagram", bad.string()});
  CHECK(r.code == 1);
  CHECK(!r.err.empty());
  write(bad, "{not json");
  CHECK(call({"moments", "--diagram", bad.string()}).code == 1);
}

TEST_CASE("verify exit codes") {
  auto ok = call({"verify", "--diagram", data("constant_slope_0.json"), "--identity", "pi",
                  "--tol", "1e-6"});
  CHECK(ok.code == 0);
  auto j = nlohmann::json::parse(ok.out);
  CHECK(j["pass"] == true);
  CHECK(j["max_residual"].get<double>() < 1e-6);
  for (const char* id : {"area", "cauchy"})
    CHECK(call({"verify", "--diagram", data("vee_half.json"), "--identity", id, "--tol",
                "1e-6"}).code == 0);
  for (const char* id : {"thm9", "thm10"})
    CHECK(call({"verify", "--diagram", data("identity_poly.json"), "--identity", id,
                "--tol", "1e-3"}).code == 0);
  auto strict = call({"verify", "--diagram", data("vee_half.json"), "--identity", "cauchy",
                      "--tol", "1e-300"});
  CHECK(strict.code == 2);
  CHECK(nlohmann::json::parse(strict.out)["pass"] == false);
  CHECK(call({"verify", "--diagram", data("vee_half.json"), "--identity", "thm9"}).code ==
        1);
  CHECK(call({"verify", "--diagram", data("vee_half.json"), "--identity", "cauchy", "--x",
              "0.5"}).code == 1);
}

TEST_CASE("roots") {
  auto r = call({"roots", "--n", "1"});
  REQUIRE(r.code == 0);
  CHECK(r.out == "k,lambda,limit_curve\n0,0.5,0.5\n");
  auto f = call({"roots", "--n", "30"});
  CHECK(std::count(f.out.begin(), f.out.end(), '\n') == 31);
  CHECK(call({"roots", "--n", "0"}).code == 1);
}

TEST_CASE("moments") {
  auto r = call({"moments", "--diagram", data("rect_025_13.json"), "--max-order", "4"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["center"].get<double>() == 3.0);
  CHECK(j["area"].get<double>() == 10.0);
  CHECK(j["p"].size() == 4);
  CHECK(j["h"].size() == 5);
  CHECK(j["g"].size() == 3);
  CHECK(j["h"][1].get<double>() == doctest::Approx(3.0));
  CHECK(call({"moments", "--diagram", data("rect_025_13.json"), "--max-order", "99"}).code ==
        1);
}

TEST_CASE("density and inversion") {
  auto d = call({"density", "--diagram", data("vee_half.json"), "--walk", "exterior",
                 "--grid", "2048"});
  REQUIRE(d.code == 0);
  CHECK(d.out.rfind("# kind=exterior\n", 0) == 0);
  CHECK(d.out.find("\nx,density\n") != std::string::npos);
  const auto csv = scratch("vee.csv");
  write(csv, d.out);
  const auto spec = scratch("vee_inv.json");
  auto inv = call({"invert", "--density", csv.string(), "--walk", "exterior", "--out",
                   spec.string()});
  REQUIRE(inv.code == 0);
  // Emitted specs re-parse and match the diagram they came from.
  const auto back = hookwalk::to_diagram(hookwalk::read_diagram_spec(spec.string()));
  for (double x : {-1.5, -0.5, 0.5, 1.5})
    CHECK(std::abs(hookwalk::evaluate(back, x) - (1.0 + 0.5 * std::abs(x))) < 1e-2);

  CHECK(call({"invert", "--density", csv.string(), "--walk", "interior", "--area", "2",
              "--center", "0"}).code == 1);
  auto di = call({"density", "--diagram", data("vee_half.json"), "--walk", "interior",
                  "--grid", "256"});
  write(csv, di.out);
  CHECK(call({"invert", "--density", csv.string(), "--walk", "interior"}).code == 1);
  CHECK(call({"invert", "--density", csv.string(), "--walk", "interior", "--area", "2",
              "--center", "0"}).code == 0);
  CHECK(call({"density", "--diagram", data("rect_025_13.json")}).code == 1);
  auto u = call({"density", "--diagram", data("identity_poly.json"), "--walk", "interior",
                 "--grid", "4", "--unrotated"});
  CHECK(u.code == 0);
  CHECK(u.out.find("# coordinates=unrotated\n") != std::string::npos);
  write(csv, u.out);
  CHECK(call({"invert", "--density", csv.string(), "--walk", "interior", "--area", "1",
              "--center", "0"}).code == 1);
  // Bare CSV needs the interval on the command line.
  write(csv, "x,density\n-0.5,0.4\n0.5,0.4\n");
  CHECK(call({"invert", "--density", csv.string()}).code == 1);
  CHECK(call({"invert", "--density", csv.string(), "--interval", "-1,1"}).code == 0);
}

TEST_CASE("walk output is reproducible") {
  const auto a = scratch("a.csv"), as = scratch("a.json");
  const auto b = scratch("b.csv"), bs = scratch("b.json");
  const std::vector<std::string> base{"walk", "--diagram", data("rect_025_13.json"),
                                      "--samples", "3000", "--seed", "42"};
  auto with = [&](const fs::path& c, const fs::path& s, const char* threads) {
    auto v = base;
    v.insert(v.end(), {"--csv", c.string(), "--summary", s.string(), "--threads", threads});
    return call(v).code;
  };
  REQUIRE(with(a, as, "1") == 0);
  REQUIRE(with(b, bs, "4") == 0);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(as) == slurp(bs));
  auto j = nlohmann::json::parse(slurp(as));
  CHECK(j["truncated"] == 0);
  CHECK(j["ks"].get<double>() < 0.05);
  CHECK(j["atoms"].size() == 3);

  auto stdout_run = call({"walk", "--diagram", data("identity_poly.json"), "--walk",
                          "interior", "--start", "1,0", "--samples", "50"});
  CHECK(stdout_run.code == 0);
  CHECK(stdout_run.out.rfind("index,limit_x,steps,truncated\n", 0) == 0);
  CHECK(nlohmann::json::parse(stdout_run.err)["analytic"] == "started_density");
  CHECK(call({"walk", "--diagram", data("identity_poly.json"), "--start", "1,0"}).code == 1);
  CHECK(call({"walk", "--diagram", data("vee_half.json"), "--walk", "interior", "--start",
              "1,0"}).code == 1);
  CHECK(call({"walk", "--diagram", data("rect_025_13.json"), "--samples", "0"}).code == 1);
}

TEST_CASE("convert") {
  auto c = call({"convert", "--diagram", data("rect_025_13.json")});
  REQUIRE(c.code == 0);
  auto j = nlohmann::json::parse(c.out);
  CHECK(j["kind"] == "rectangular");
  CHECK(j["interval"].size() == 2);
  auto pl = call({"convert", "--diagram", data("constant_slope_0.json"), "--to",
                  "piecewise_linear", "--segments", "4"});
  REQUIRE(pl.code == 0);
  CHECK(nlohmann::json::parse(pl.out)["breakpoints"].size() == 5);
  auto rect = call({"convert", "--diagram", data("vee_half.json"), "--to", "rectangular",
                    "--n", "2"});
  REQUIRE(rect.code == 0);
  auto rj = nlohmann::json::parse(rect.out);
  CHECK(rj["minima"] == nlohmann::json::parse("[-2,-1,0,1,2]"));
  // The output is itself a valid spec.
  const auto p = scratch("conv.json");
  write(p, rect.out);
  auto again = call({"convert", "--diagram", p.string()});
  CHECK(again.out == rect.out);
  CHECK(call({"convert", "--diagram", data("vee_half.json"), "--to", "rectangular"}).code ==
        1);
}

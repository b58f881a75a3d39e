#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include "bridgelab/errors.hpp"
#include "bridgelab/io.hpp"
#include "helpers.hpp"

using namespace bridgelab;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path p = fs::temp_directory_path() / "bridgelab_tests";
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd =
      std::string(BRIDGELAB_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  return WEXITSTATUS(status);
}

json base_config(const fs::path& out_dir) {
  return json{{"experiment", "spectrum"},
              {"output_dir", out_dir.string()},
              {"params",
               {{"ell", 1.0},
                {"beta0", 1.0},
                {"alpha", 1.0},
                {"alpha0", 1.0},
                {"k", 1.0},
                {"gamma", 0.5},
                {"gamma0", 0.5},
                {"xi", {{"num", 1}, {"den", 3}}}}},
              {"numerics", {{"n_modes", 16}}}};
}

}  // namespace

TEST_CASE("model parameters survive a JSON round trip") {
  const auto p = testutil::standard_params();
  const json j = p;
  const auto back = j.get<ModelParams>();
  CHECK(back.xi == doctest::Approx(p.xi).epsilon(1e-16));
  REQUIRE(back.xi_ratio.has_value());
  CHECK(back.xi_ratio->num == 1);
  CHECK(back.xi_ratio->den == 3);
  CHECK(back.gamma == p.gamma);

  ModelParams q = p;
  q.xi_ratio.reset();
  q.xi = 0.123456789;
  const auto back2 = json(q).get<ModelParams>();
  CHECK_FALSE(back2.xi_ratio.has_value());
  CHECK(back2.xi == q.xi);
}

TEST_CASE("rational xi in config is reduced on input") {
  const json j{{"ell", 2.0}, {"beta0", 1.0}, {"alpha", 1.0}, {"alpha0", 1.0},
               {"k", 0.0},   {"gamma", 0.0}, {"gamma0", 0.0},
               {"xi", {{"num", 2}, {"den", 6}}}};
  const auto p = j.get<ModelParams>();
  REQUIRE(p.xi_ratio.has_value());
  CHECK(p.xi_ratio->num == 1);
  CHECK(p.xi_ratio->den == 3);
  CHECK(p.xi == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("nonlinearity specs round trip through JSON") {
  auto check_roundtrip = [](const NonlinearitySpec& s) {
    const auto back = json(s).get<NonlinearitySpec>();
    CHECK(back.family == s.family);
    CHECK(back.radius == s.radius);
    CHECK(back.mu1 == s.mu1);
    CHECK(back.exp_alpha == s.exp_alpha);
    CHECK(back.m == s.m);
    CHECK(back.n == s.n);
    CHECK(back.spring_k == s.spring_k);
    CHECK((back.forcing - s.forcing).norm() == 0.0);
  };
  check_roundtrip(NonlinearitySpec::zero());
  check_roundtrip(NonlinearitySpec::power(1.5, 2.0, -0.5, 1.0, 3.0));
  check_roundtrip(NonlinearitySpec::gradient(2, 3, 1.5));
  NonlinearitySpec sp = NonlinearitySpec::spring(2.0);
  sp.forcing = testutil::decaying_state(3, 5);
  check_roundtrip(sp);
}

TEST_CASE("unknown family is rejected with the allowed list") {
  const json j{{"family", "corkscrew"}};
  try {
    (void)j.get<NonlinearitySpec>();
    FAIL("expected ValidationError");
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("corkscrew") != std::string::npos);
    CHECK(msg.find("spring") != std::string::npos);
  }
}

TEST_CASE("json file IO") {
  const fs::path dir = scratch_dir();
  const fs::path f = dir / "roundtrip.json";
  const json j{{"b", 2}, {"a", 1}};
  save_json(f.string(), j);
  CHECK(load_json(f.string()) == j);
  CHECK_THROWS_AS((void)load_json((dir / "nope.json").string()), IoError);

  std::ofstream(dir / "broken.json") << "{ not json";
  CHECK_THROWS_AS((void)load_json((dir / "broken.json").string()),
                  nlohmann::json::parse_error);
}

TEST_CASE("csv bodies are lossless") {
  const fs::path f = scratch_dir() / "vals.csv";
  const double pi = 3.141592653589793;
  write_csv(f.string(), "test table", {"x", "y"},
            {{pi, 1.0 / 3.0}, {1e-17, -2.5e300}});
  std::ifstream in(f);
  std::string line;
  std::getline(in, line);
  CHECK(line == "# test table");
  std::getline(in, line);
  CHECK(line == "x,y");
  std::getline(in, line);
  const auto comma = line.find(',');
  CHECK(std::stod(line.substr(0, comma)) == pi);
  CHECK(std::stod(line.substr(comma + 1)) == 1.0 / 3.0);
}

TEST_CASE("fnv1a64 reference vectors") {
  CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("file hash is stable and zero padded") {
  const fs::path f = scratch_dir() / "hashme.bin";
  std::ofstream(f, std::ios::binary) << "foobar";
  const std::string h = file_hash(f.string());
  CHECK(h == "85944171f73967e8");
  CHECK(h.size() == 16);
}

TEST_CASE("manifest lists every artifact with hashes") {
  const fs::path dir = scratch_dir() / "man";
  fs::create_directories(dir);
  std::ofstream(dir / "a.txt") << "alpha";
  std::ofstream(dir / "b.txt") << "beta";
  write_manifest(dir.string(), {"a.txt", "b.txt"}, json{{"n", 2}});
  const json m = load_json((dir / "manifest.json").string());
  CHECK(m.at("schema") == "bridgelab/manifest/1");
  REQUIRE(m.at("files").size() == 2);
  CHECK(m["files"][0].at("path") == "a.txt");
  CHECK(m["files"][0].at("bytes").get<int>() == 5);
  CHECK(m["files"][0].at("fnv1a64").get<std::string>().size() == 16);
  CHECK(m.at("summary").at("n") == 2);

  write_manifest(dir.string(), {}, json::object());
  CHECK(load_json((dir / "manifest.json").string()).at("files").empty());

  CHECK_THROWS_AS(write_manifest(dir.string(), {"missing.txt"}, json::object()),
                  IoError);
}

TEST_CASE("matrix serialization shape") {
  Matrix m(2, 3);
  m << 1, 2, 3, 4, 5, 6;
  const json j = matrix_to_json(m);
  CHECK(j.at("rows") == 2);
  CHECK(j.at("cols") == 3);
  REQUIRE(j.at("data").size() == 6);
  // entries are row-major [re, im] pairs, shared with the complex overload
  CHECK(j["data"][4][0].get<double>() == 5.0);
  CHECK(j["data"][4][1].get<double>() == 0.0);

  const json g = generator_to_json(assemble_generator(testutil::standard_params(), 2));
  CHECK(g.at("schema") == "bridgelab/generator/1");
  CHECK(g.at("n_modes") == 2);
}

TEST_CASE("cli: validate, run, and failure exit codes") {
  const fs::path dir = scratch_dir() / "cli";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const fs::path cfg = dir / "spectrum.json";
  save_json(cfg.string(), base_config(dir / "out"));

  CHECK(run_cli("validate " + cfg.string()) == 0);
  CHECK(run_cli("run " + cfg.string()) == 0);
  CHECK(fs::exists(dir / "out" / "spectrum.json"));
  CHECK(fs::exists(dir / "out" / "manifest.json"));
  const json rep = load_json((dir / "out" / "spectrum.json").string());
  CHECK(rep.at("report").at("spectral_abscissa").get<double>() < 0.0);
  const json man = load_json((dir / "out" / "manifest.json").string());
  CHECK(man.at("files").size() >= 2);  // config echo + report

  // validation failure: exit 2
  json bad = base_config(dir / "bad_out");
  bad["params"]["xi"] = 5.0;  // outside (0, ell)
  bad["experiment"] = "warp";
  const fs::path bad_cfg = dir / "bad.json";
  save_json(bad_cfg.string(), bad);
  CHECK(run_cli("run " + bad_cfg.string()) == 2);

  // parse failure: exit 2, missing file: exit 4
  std::ofstream(dir / "broken.json") << "{";
  CHECK(run_cli("run " + (dir / "broken.json").string()) == 2);
  CHECK(run_cli("run " + (dir / "ghost.json").string()) == 4);

  // usage errors: exit 2, help: exit 0
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("--help") == 0);
}

TEST_CASE("cli: identical config gives identical artifact hashes") {
  const fs::path dir = scratch_dir() / "cli_det";
  fs::remove_all(dir);
  fs::create_directories(dir);
  json cfg = base_config(dir / "out");
  cfg["experiment"] = "simulate";
  cfg["numerics"] = json{{"n_modes", 8}, {"dt", 1e-3}, {"T", 0.2}};
  cfg["initial"] = json{{"kind", "seeded"}, {"seed", 4}, {"norm", 1.0}};
  const fs::path cfg_path = dir / "sim.json";
  save_json(cfg_path.string(), cfg);

  REQUIRE(run_cli("run " + cfg_path.string()) == 0);
  const std::string h1 = file_hash((dir / "out" / "trajectory.csv").string());
  REQUIRE(run_cli("run " + cfg_path.string()) == 0);
  const std::string h2 = file_hash((dir / "out" / "trajectory.csv").string());
  CHECK(h1 == h2);
  const json man = load_json((dir / "out" / "manifest.json").string());
  CHECK(man.at("summary").at("dissipation_residual").get<double>() < 1e-12);
}

TEST_CASE("cli: sweep fans out into per-value directories") {
  const fs::path dir = scratch_dir() / "cli_sweep";
  fs::remove_all(dir);
  fs::create_directories(dir);
  json cfg = base_config(dir / "out");
  const fs::path cfg_path = dir / "base.json";
  save_json(cfg_path.string(), cfg);

  CHECK(run_cli("sweep --param xi --values 1/3,1/2 " + cfg_path.string()) == 0);
  CHECK(fs::exists(dir / "out" / "1_3" / "spectrum.json"));
  CHECK(fs::exists(dir / "out" / "1_2" / "manifest.json"));
  CHECK(fs::exists(dir / "out" / "sweep_summary.csv"));
  const json sweep = load_json((dir / "out" / "sweep.json").string());
  CHECK(sweep.at("schema") == "bridgelab/sweep/1");
  REQUIRE(sweep.at("runs").size() == 2);
  // xi = 1/3 damps every mode; xi = 1/2 has an even denominator
  CHECK(sweep["runs"][0]["summary"].at("classification") == "exponential_admissible");
  CHECK(sweep["runs"][1]["summary"].at("classification") == "no_guarantee");
}

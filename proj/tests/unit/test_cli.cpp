#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "doctest.h"
#include "rlsw/io.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = RLSW_CLI_PATH;

std::string tmp(const std::string& name) {
  const fs::path dir = fs::path(RLSW_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return (dir / name).string();
}

int run(const std::string& args) {
  const std::string cmd = kCli + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("simulate is deterministic and writes a sidecar") {
  const std::string a = tmp("sim_a"), b = tmp("sim_b");
  const std::string args = "simulate --spec sim1 --seed 7 --R 8 --T 64";
  REQUIRE(run(args + " --out " + a) == 0);
  REQUIRE(run(args + " --out " + b) == 0);
  CHECK(rlsw::read_file(a + ".csv") == rlsw::read_file(b + ".csv"));
  CHECK(rlsw::read_file(a + ".meta.json") == rlsw::read_file(b + ".meta.json"));
  const auto meta = nlohmann::json::parse(rlsw::read_file(a + ".meta.json"));
  for (const char* key : {"command", "version", "seed", "family", "vanishing_moments", "J", "alpha",
                          "M", "MT", "order", "truncate_negative", "input_digest"}) {
    CHECK_MESSAGE(meta.contains(key), key);
  }
  CHECK(meta["command"] == "simulate");
  CHECK(meta["seed"] == 7);
}

TEST_CASE("estimate on simulated white noise recovers 2^-j") {
  const std::string sim = tmp("wn"), est = tmp("wn_est");
  REQUIRE(run("simulate --spec white_noise --family haar --vanishing-moments 1 --seed 3 --R 64 "
              "--T 256 --out " + sim) == 0);
  REQUIRE(run("estimate --input " + sim + ".csv --family haar --vanishing-moments 1 --M 10 --out " +
              est) == 0);
  const auto spec = rlsw::spectral_from_csv(rlsw::read_file(est + ".csv"));
  REQUIRE(spec.J == 8);
  for (int j = 1; j <= 3; ++j) {
    double s = 0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < spec.T; ++k) {
      for (std::size_t r = 10; r < spec.R - 10; ++r, ++n) s += spec(j, k, r);
    }
    CHECK(s / n == doctest::Approx(std::ldexp(1.0, -j)).epsilon(0.1));
  }
  const auto meta = nlohmann::json::parse(rlsw::read_file(est + ".meta.json"));
  CHECK(meta["input_digest"] == rlsw::file_digest(sim + ".csv"));
  CHECK(meta["M"] == 10);
}

TEST_CASE("every command is reproducible") {
  const std::string sim = tmp("rep_sim");
  REQUIRE(run("simulate --spec sim1 --coherence constant07 --seed 11 --R 16 --T 64 --out " + sim) == 0);
  const std::string input = " --input " + sim + ".csv";
  const std::vector<std::pair<std::string, std::vector<std::string>>> cmds = {
      {"estimate" + input + " --M 2", {".csv", ".json", ".meta.json"}},
      {"estimate" + input + " --M 2 --MT 3 --truncate-negative true", {".csv", ".json", ".meta.json"}},
      {"coherence" + input + " --M 2 --level 4 --r 3", {".csv", ".json", ".meta.json"}},
      {"coherence" + input + " --M 2 --level 4 --r 3 --r-prime 5 --order stc",
       {".csv", ".meta.json"}},
      {"benchmark --scenario sim1 --R 16 --T 64 --Ms 2 --N 2 --quiet", {".csv", ".json", ".meta.json"}},
      {"basis-dump --J 4 --family la --vanishing-moments 6", {"_psi.csv", "_A.csv", "_Ainv.csv"}},
  };
  int idx = 0;
  for (const auto& [args, suffixes] : cmds) {
    CAPTURE(args);
    const std::string p = tmp("rep" + std::to_string(idx) + "a");
    const std::string q = tmp("rep" + std::to_string(idx) + "b");
    ++idx;
    REQUIRE(run(args + " --out " + p) == 0);
    REQUIRE(run(args + " --out " + q) == 0);
    for (const auto& s : suffixes) {
      CAPTURE(s);
      REQUIRE(fs::exists(p + s));
      CHECK(rlsw::read_file(p + s) == rlsw::read_file(q + s));
    }
  }
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(run("") != 0);
  CHECK(run("transmogrify --out x") != 0);
  CHECK(run("simulate --bogus 1 --out " + tmp("bogus")) != 0);
  CHECK(run("estimate --input /nonexistent.csv --out " + tmp("missing")) == 2);
  CHECK(run("simulate --spec sim1 --T 100 --out " + tmp("bad_t")) == 2);
  CHECK(run("--version") == 0);
}

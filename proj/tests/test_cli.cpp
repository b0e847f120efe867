#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "padicq/cli.hpp"
#include "padicq/error.hpp"
#include "padicq/grid.hpp"

namespace fs = std::filesystem;
using padicq::cli::run;

namespace {

const fs::path kData = PADICQ_TEST_DATA;

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("padicq_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("flat config reader") {
  std::istringstream ok("# comment\n[section]\np = 3\n  N=1  # trailing\nlabel = \"a b\"\n");
  const auto kv = padicq::cli::read_flat_config(ok);
  REQUIRE(kv.size() == 3);
  CHECK(kv[0] == std::pair<std::string, std::string>{"p", "3"});
  CHECK(kv[1] == std::pair<std::string, std::string>{"N", "1"});
  CHECK(kv[2].second == "a b");
  std::istringstream bad("p = 3\nnot a pair\n");
  try {
    padicq::cli::read_flat_config(bad);
    FAIL("expected a parse error");
  } catch (const padicq::Error& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  CHECK(call({}).code == padicq::cli::kInvalidConfig);
  CHECK(call({"nonsense"}).code == padicq::cli::kInvalidConfig);
  CHECK(call({"spectrum", "--p", "4", "--out", dir.string()}).code == padicq::cli::kInvalidConfig);

  const auto bad = call({"spectrum", "--config", (kData / "bad_key.ini").string(), "--out", dir.string()});
  CHECK(bad.code == padicq::cli::kInvalidConfig);
  CHECK(bad.err.find("config key 'bogus' is not an option of 'spectrum'") != std::string::npos);

  const auto big = call({"spectrum", "--p", "2", "--N", "8", "--M", "8", "--out", dir.string()});
  CHECK(big.code == padicq::cli::kSizeLimit);

  const auto spikes = call({"ingest", (kData / "spikes_bad.csv").string(), "--out", dir.string()});
  CHECK(spikes.code == padicq::cli::kInvalidConfig);
  CHECK(spikes.err.find("line 3") != std::string::npos);

  CHECK(call({"transform", "--in", (dir / "missing.csv").string(), "--out", dir.string()}).code ==
        padicq::cli::kInvalidConfig);
  fs::remove_all(dir);
}

TEST_CASE("config file and flag precedence") {
  const auto dir = scratch("config");
  const auto r = call({"spectrum", "--config", (kData / "spectrum.ini").string(), "--N", "0", "--M", "2", "--out",
                       dir.string()});
  REQUIRE(r.code == padicq::cli::kOk);
  CHECK(r.out.find("resolved config") != std::string::npos);
  const auto ini = slurp(dir / "config.ini");
  CHECK(ini.find("p = 3") != std::string::npos);
  CHECK(ini.find("N = 0") != std::string::npos);
  CHECK(ini.find("M = 2") != std::string::npos);
  CHECK(ini.find("operator = H") != std::string::npos);
  REQUIRE(fs::exists(dir / "spectrum.csv"));
  const auto js = nlohmann::json::parse(slurp(dir / "spectrum.json"));
  CHECK(js["operator"] == "H");
  CHECK(js["cells"] == 9);
  CHECK(slurp(dir / "spectrum.csv").rfind("eigenvalue,multiplicity", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("outputs are deterministic for a fixed seed") {
  const std::vector<std::vector<std::string>> cases{
      {"evolve", "--p", "2", "--N", "1", "--M", "1", "--potential", "abs2", "--state", "random", "--samples", "9"},
      {"measure", "--p", "3", "--N", "1", "--M", "1", "--state", "random", "--observable", "Mq", "--trials", "200"},
      {"rds", "--p", "3", "--N", "1", "--M", "1", "--state", "random", "--steps", "20"},
      {"dynamics", "--p", "3", "--K", "20", "--x0", "4", "--steps", "15", "--noise-depth", "2"},
  };
  for (const auto& base : cases) {
    const auto a = scratch("det_a"), b = scratch("det_b");
    auto args_a = base, args_b = base;
    for (auto* args : {&args_a, &args_b}) {
      args->push_back("--seed");
      args->push_back("99");
    }
    args_a.insert(args_a.end(), {"--out", a.string()});
    args_b.insert(args_b.end(), {"--out", b.string()});
    REQUIRE(call(args_a).code == padicq::cli::kOk);
    REQUIRE(call(args_b).code == padicq::cli::kOk);
    std::size_t files = 0;
    for (const auto& entry : fs::directory_iterator(a)) {
      if (entry.path().filename() == "config.ini") continue;
      ++files;
      INFO(base[0] << ": " << entry.path().filename().string());
      CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    }
    CHECK(files > 0);
    fs::remove_all(a);
    fs::remove_all(b);
  }
}

TEST_CASE("ingest pipeline") {
  const auto dir = scratch("ingest");
  const auto r = call({"ingest", (kData / "spikes.csv").string(), "--p", "2", "--window-ms", "25", "--out", dir.string()});
  REQUIRE(r.code == padicq::cli::kOk);
  CHECK(fs::exists(dir / "mental_states.csv"));
  std::ifstream state(dir / "state.csv");
  const auto phi = padicq::read_state(state);
  CHECK(phi.is_normalized(1e-10));
  const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
  CHECK(summary.contains("entropy"));
  CHECK(summary.contains("mean_A"));

  // The state file round-trips through the transform subcommand.
  const auto t = call({"transform", "--in", (dir / "state.csv").string(), "--out", dir.string()});
  REQUIRE(t.code == padicq::cli::kOk);
  std::ifstream tr(dir / "transformed.csv");
  const auto hat = padicq::read_state(tr);
  CHECK(hat.grid == phi.grid.dual());
  CHECK(padicq::norm2(hat) == doctest::Approx(padicq::norm2(phi)));
  fs::remove_all(dir);
}

TEST_CASE("dynamics output") {
  const auto dir = scratch("dyn");
  REQUIRE(call({"dynamics", "--p", "2", "--K", "32", "--x0", "3", "--steps", "10", "--out", dir.string()}).code ==
          padicq::cli::kOk);
  const auto js = nlohmann::json::parse(slurp(dir / "orbit.json"));
  CHECK(js.dump().find("attracting") != std::string::npos);
  const auto csv = slurp(dir / "orbit.csv");
  CHECK(csv.rfind("step,distance_exponent,digits", 0) == 0);
  fs::remove_all(dir);
}

TEST_CASE("quick verification") {
  const auto r = call({"verify", "--quick"});
  CHECK(r.code == padicq::cli::kOk);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

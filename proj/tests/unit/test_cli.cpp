#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "levymult/grid_function.hpp"
#include "levymult/json_io.hpp"

namespace fs = std::filesystem;
using namespace levymult;

namespace {

const fs::path kCli = LEVYMULT_CLI_PATH;
const fs::path kConfigs = LEVYMULT_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levymult_cli_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = kCli.string() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

void write_text(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t line_count(const fs::path& p) {
  std::ifstream in(p);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);) ++n;
  return n;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("malformed JSON and missing files exit with 2") {
    const auto dir = scratch("bad");
    write_text(dir / "bad.json", "{ \"symbol\": ");
    CHECK(run("--config " + (dir / "bad.json").string() + " --out " + dir.string() + " symbol") == 2);
    CHECK(run("--config " + (dir / "missing.json").string() + " --out " + dir.string() + " symbol") == 2);
    CHECK(run("--out " + dir.string() + " nonsense") == 2);
  }

  TEST_CASE("symbol table has one row per frequency") {
    const auto dir = scratch("symbol");
    REQUIRE(run("--config " + (kConfigs / "symbol_power.json").string() + " --out " + dir.string() + " symbol") == 0);
    CHECK(line_count(dir / "symbol.csv") == 4096 + 1);
    CHECK(fs::exists(dir / "symbol.meta.json"));
  }

  TEST_CASE("applying the constant symbol 1 returns the input bitwise") {
    const auto dir = scratch("apply");
    const auto f = GridFunction::sample(2, {8, 8}, {1.0, 2.0}, [](double x, double y) { return Complex(x * x - y, 0.1 * x); });
    Json cfg{{"symbol", {{"kind", "constant"}, {"value", 1}, {"d", 2}}}, {"input", grid_to_json(f)}, {"output", "out.lmgf"}};
    write_text(dir / "cfg.json", cfg.dump());
    REQUIRE(run("--config " + (dir / "cfg.json").string() + " --out " + dir.string() + " apply") == 0);
    CHECK(read_grid_file((dir / "out.lmgf").string()).samples() == f.samples());
  }

  TEST_CASE("verify rejects |phi| > 1 and reproduces its report") {
    const auto dir = scratch("verify");
    const Json scenario = Json::parse(R"({"id":"small","measure":{"kind":"discrete","dimension":1,"symmetrize":true,
      "atoms":[{"location":[1],"weight":1}]},"modulator":{"kind":"constant","value":1},
      "f":{"dimension":1,"sizes":[8],"lengths":[8],"values":[1,0,0,0,0,0,0,0.5]},"s":0,"u":1,"checkpoints":[0.5],
      "n_paths":2000,"seed":7})");
    write_text(dir / "ok.json", Json{{"scenarios", Json::array({scenario})}}.dump());
    REQUIRE(run("--config " + (dir / "ok.json").string() + " --out " + dir.string() + " verify") == 0);
    auto first = read_json_file(dir / "verify.json");
    REQUIRE(run("--config " + (dir / "ok.json").string() + " --out " + dir.string() + " --workers 2 verify") == 0);
    auto second = read_json_file(dir / "verify.json");
    CHECK(first == second);
    CHECK(first["pass"] == true);

    Json bad = scenario;
    bad["modulator"] = {{"kind", "per_axis"}, {"coefficients", {1.5}}};
    write_text(dir / "bad.json", Json{{"scenarios", Json::array({bad})}}.dump());
    CHECK(run("--config " + (dir / "bad.json").string() + " --out " + dir.string() + " verify") == 2);
  }
}

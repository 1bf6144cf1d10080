#include <fstream>

#include "doctest.h"
#include "json.hpp"
#include "run_cli.hpp"
#include "scratch.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json only_result(const fs::path& out) {
  for (const auto& e : fs::directory_iterator(out))
    if (e.is_directory()) {
      std::ifstream in(e.path() / "result.json");
      return json::parse(in);
    }
  return {};
}

const std::string kSmall =
    R"({"dataset": {"synthetic": {"n_per_cluster": 8, "view_dims": [8, 10]}},
        "solver": {"max_iter": 200}, "repetitions": 2, "restarts": 3})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("presets listing") {
  const auto r = cli::run("presets");
  CHECK(r.status == 0);
  CHECK(r.out.find("BBCsport") != std::string::npos);
  CHECK(r.out.find("Caltech101-7") != std::string::npos);
}

TEST_CASE("config errors exit with 1") {
  scratch::Dir dir("cli_err");
  dir.write("bad.json", R"({"dataset": "m.json", "colour": 1})");
  CHECK(cli::run("run --config " + (dir / "bad.json").string()).status == 1);
  CHECK(cli::run("run --config " + (dir / "absent.json").string()).status == 1);
  dir.write("missing.json", R"({"dataset": "nowhere.json"})");
  CHECK(cli::run("run --config " + (dir / "missing.json").string()).status == 1);
  CHECK(cli::run("run --synthetic --eta 1 --output " + (dir / "o").string()).status == 1);
  CHECK(cli::run("run --frobnicate").status == 1);
}

TEST_CASE("all grid points failing exits with 2") {
  scratch::Dir dir("cli_fail");
  dir.write("v.csv", "1e200,1\n2e200,1\n1,3e200\n4,1\n");
  dir.write("y.csv", "0\n0\n1\n1\n");
  dir.write("m.json", R"({"views": [{"path": "v.csv"}], "labels": "y.csv"})");
  dir.write("c.json", R"({"dataset": "m.json", "solver": {"mu0": 1.0}, "repetitions": 1})");
  const auto r = cli::run("run --config " + (dir / "c.json").string() + " --output " + (dir / "o").string());
  CHECK(r.status == 2);
}

TEST_CASE("flags override the config file") {
  scratch::Dir dir("cli_flags");
  dir.write("c.json", R"({"dataset": {"synthetic": {"n_per_cluster": 8, "view_dims": [8, 10]}},
      "grid": {"alpha": [0.1, 1.0]}, "solver": {"max_iter": 200, "beta": 0.5},
      "repetitions": 4, "restarts": 3})");
  const auto r = cli::run("run --config " + (dir / "c.json").string() +
                          " --alpha 0.3 --repetitions 2 --variant frobenius --output " + (dir / "o").string());
  REQUIRE(r.status == 0);
  const json res = only_result(dir / "o");
  CHECK(res["params"]["alpha"] == 0.3);
  CHECK(res["params"]["beta"] == 0.5);
  CHECK(res["params"]["variant"] == "frobenius");
  CHECK(res["repetitions"] == 2);
  const json best = json::parse(r.out);
  CHECK(best.contains("nmi"));
}

TEST_CASE("plot subcommand") {
  scratch::Dir dir("cli_plot");
  dir.write("c.json", kSmall);
  REQUIRE(cli::run("run --config " + (dir / "c.json").string() + " --output " + (dir / "o").string()).status == 0);
  fs::path trace;
  for (const auto& e : fs::directory_iterator(dir / "o"))
    if (e.is_directory()) trace = e.path() / "trace.csv";
  const auto r = cli::run("plot --trace " + trace.string() + " --output " + (dir / "p.svg").string());
  CHECK(r.status == 0);
  CHECK(scratch::slurp(dir / "p.svg").find("<polyline") != std::string::npos);
  CHECK(cli::run("plot --trace " + (dir / "none.csv").string() + " --output " + (dir / "q.svg").string()).status == 1);
}

}  // TEST_SUITE

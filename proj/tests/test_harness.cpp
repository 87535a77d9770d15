#include <cmath>

#include "doctest.h"
#include "qlocate/error.hpp"
#include "qlocate/harness.hpp"

using namespace qlocate;

namespace {

Config grid_config(int rows, int cols) {
  return Config::from_text("[problem]\ngeometry = grid\nrows = " + std::to_string(rows) + "\ncols = " +
                           std::to_string(cols) + "\nambulances = 2\n");
}

double cell(const CsvTable& t, size_t row, const std::string& col) { return std::stod(t.rows[row][t.column(col)]); }

}  // namespace

TEST_CASE("config sections and lists") {
  auto c = Config::from_text("seed = 7\n# note\n[qaoa]\np = 3\nmixer = xy\n[anneal]\nratios = 0.5, 1, 2\n");
  CHECK(c.seed() == 7);
  CHECK(c.get_int("qaoa.p", 0) == 3);
  CHECK(c.get("qaoa.mixer") == "xy");
  CHECK(c.get_list("anneal.ratios", {}) == std::vector<double>{0.5, 1, 2});
  CHECK(c.get_double("qaoa.missing", 1.5) == 1.5);
  CHECK_THROWS_AS(c.get("nope"), ConfigError);
  CHECK_THROWS_AS(c.get_int("qaoa.mixer", 0), ConfigError);
}

TEST_CASE("csv quoting round trip") {
  CsvTable t{{"a", "b"}, {{"plain", "with,comma"}, {"say \"hi\"", "two\nlines"}}};
  const auto text = t.to_string();
  CHECK(text.find("\"with,comma\"") != std::string::npos);
  CHECK(text.find("\"say \"\"hi\"\"\"") != std::string::npos);
  auto back = CsvTable::parse(text);
  CHECK(back.header == t.header);
  CHECK(back.rows == t.rows);
  CHECK_THROWS_AS(CsvTable::parse("a,b\n1\n"), ConfigError);
  CHECK_THROWS_AS(CsvTable::parse("a\n\"open\n"), ConfigError);
}

TEST_CASE("summaries") {
  auto one = summarize(CsvTable::parse("run_id,ev\n0,3.5\n"));
  REQUIRE(one.rows.size() == 1);
  CHECK(cell(one, 0, "mean") == 3.5);
  CHECK(cell(one, 0, "error") == 0.0);
  auto two = summarize(CsvTable::parse("run_id,p_gnd,ev\n0,0,2\n1,1,1\nsummary,0.5,1.5\n"));
  CHECK(two.rows[0][0] == "p_gnd");
  CHECK(cell(two, 0, "mean") == 0.5);
  CHECK(std::abs(cell(two, 0, "sd_of_mean") - 0.354) < 1e-3);
  CHECK(std::abs(cell(two, 0, "error") - 0.707) < 1e-3);
  CHECK(two.rows[0][two.column("best_run_id")] == "1");
  auto table1 = summarize(CsvTable::parse("grid,algorithm,restarts,best,frequency,d_min,ratio\n5x5,tabu,10,65,0.1,65,1\n"));
  bool has_freq = false;
  for (const auto& r : table1.rows) has_freq = has_freq || r[0] == "frequency";
  CHECK(has_freq);
  CHECK_THROWS_AS(summarize(CsvTable::parse("run_id,ev\nsummary,1\n")), ConfigError);
}

TEST_CASE("oracle experiment") {
  auto out = run_experiment("oracle", grid_config(5, 5));
  CHECK(out.table.header == csv_schema("oracle"));
  CHECK(cell(out.table, 0, "d_min") == 65);
  CHECK(out.manifest.find("\"version\"") != std::string::npos);
  CHECK(out.manifest.find("\"seed\"") != std::string::npos);
  CHECK(out.manifest.find("wall_time_s") != std::string::npos);
}

TEST_CASE("qaoa experiment rows and determinism") {
  auto c = Config::from_text(
      "seed = 4\n[problem]\npreset = A\n[qaoa]\nmixer = xy\ninit = dicke\np = 3\nrestarts = 100\n"
      "[optimizer]\nname = nelder-mead\nmax_iter = 20\n");
  auto a = run_experiment("qaoa", c);
  CHECK(a.table.header == csv_schema("qaoa"));
  REQUIRE(a.table.rows.size() == 101);
  CHECK(a.table.rows.back()[0] == "summary");
  for (size_t r = 0; r < 100; ++r) CHECK(std::abs(cell(a.table, r, "p_feas") - 1.0) <= 1e-10);
  auto b = run_experiment("qaoa", c);
  CHECK(a.table.to_string() == b.table.to_string());
  c.set("seed", "5");
  CHECK(run_experiment("qaoa", c).table.to_string() != a.table.to_string());
}

TEST_CASE("schedule rows") {
  auto c = Config::from_text(
      "[problem]\npreset = C\n[qaoa]\nmixer = x\nrestarts = 3\nstrategy = EXTRAP2\np_max = 4\n"
      "[optimizer]\nmax_iter = 10\n");
  auto t = run_experiment("qaoa", c).table;
  // 3 restarts, a summary, then p = 1, 3, 4
  REQUIRE(t.rows.size() == 7);
  CHECK(t.rows[4][0] == "schedule");
  CHECK(t.rows[6][t.column("p")] == "4");
}

TEST_CASE("every experiment emits its documented header") {
  const std::string problem_a = "[problem]\npreset = A\n";
  CHECK(run_experiment("encode", Config::from_text(problem_a)).table.header == csv_schema("encode"));
  CHECK(run_experiment("vqe", Config::from_text(problem_a + "[vqe]\nrestarts = 2\nmethod = cone\nshots = 50\n"
                                                            "[optimizer]\nname = spsa\nmax_iter = 5\n"))
            .table.header == csv_schema("vqe"));
  auto small = grid_config(2, 2);
  small.set("baseline.restarts", "5");
  CHECK(run_experiment("sa", small).table.header == csv_schema("sa"));
  CHECK(run_experiment("tabu", small).table.header == csv_schema("tabu"));
  small.set("anneal.ratios", "1, 2");
  small.set("anneal.reads", "10");
  small.set("anneal.sweeps", "20");
  CHECK(run_experiment("anneal-sweep", small).table.rows.size() == 2);
  CHECK(run_experiment("anneal-sim", Config::from_text(problem_a + "[anneal]\ntimes = 1\nreads = 10\n")).table.header ==
        csv_schema("anneal-sim"));
  auto tt = run_experiment("tts", Config::from_text("[tts]\np_sol = 0.5\nt_cycle = 100\n")).table;
  CHECK(std::abs(cell(tt, 0, "tts") - 664.4) < 0.1);
}

TEST_CASE("invalid configs") {
  CHECK_THROWS_AS(run_experiment("qaoa", Config::from_text("[problem]\npreset = A\n[qaoa]\nmixer = zz\n")),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment("nothing", Config{}), ConfigError);
  CHECK_THROWS_AS(run_experiment("qaoa", Config::from_text("[problem]\npreset = A\n[optimizer]\nname = cobyla\n")),
                  ConfigError);
  CHECK_THROWS_AS(run_experiment("oracle", Config::from_text("[problem]\nrows = x\n")), ConfigError);
}

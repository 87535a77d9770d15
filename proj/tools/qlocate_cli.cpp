#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "qlocate/error.hpp"
#include "qlocate/harness.hpp"

namespace {

std::string schema_help() {
  std::string s = "CSV columns:\n";
  for (const auto& [name, cols] : qlocate::csv_schemas()) {
    s += "  " + name + ": ";
    for (size_t k = 0; k < cols.size(); ++k) s += (k ? "," : "") + cols[k];
    s += "\n";
  }
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw qlocate::ConfigError("cannot write " + path);
  out << text;
}

std::string manifest_path(const std::string& out) {
  std::filesystem::path p(out);
  p.replace_extension(".manifest.json");
  return p.string();
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "experiment config file")->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "master seed, overrides the config");
  cmd->add_option("--out", o.out, "CSV output path; the manifest goes next to it");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Facility-location experiments with QAOA, VQE, classical heuristics and annealing."};
  app.footer(schema_help());
  app.require_subcommand(1);

  Options o;
  std::string summarize_in;
  struct Command {
    const char* name;
    const char* help;
  };
  const Command commands[] = {
      {"encode", "write the QUBO of the configured problem"},
      {"oracle", "exact facility-location optimum"},
      {"qaoa", "random-restart QAOA and increasing-p schedules"},
      {"vqe", "hardware-efficient VQE restarts"},
      {"baseline", "simulated annealing or tabu restarts ([baseline] algorithm = sa | tabu)"},
      {"anneal", "lambda sweep or toy annealing dynamics ([anneal] mode = sweep | sim)"},
      {"tts", "time to solution table"},
  };
  for (const auto& c : commands) add_common(app.add_subcommand(c.name, c.help), o);
  auto* sum = app.add_subcommand("summarize", "mean, 2 SD-of-mean error, range and best run of a results CSV");
  sum->add_option("csv", summarize_in, "results CSV")->required()->check(CLI::ExistingFile);
  sum->add_option("--out", o.out, "summary CSV path");

  CLI11_PARSE(app, argc, argv);

  try {
    const auto* cmd = app.get_subcommands().front();
    const std::string name = cmd->get_name();
    if (name == "summarize") {
      std::ifstream in(summarize_in, std::ios::binary);
      std::stringstream ss;
      ss << in.rdbuf();
      const auto text = qlocate::summarize(qlocate::CsvTable::parse(ss.str())).to_string();
      if (o.out.empty()) {
        std::cout << text;
      } else {
        write_file(o.out, text);
      }
      return 0;
    }
    auto config = o.config.empty() ? qlocate::Config{} : qlocate::Config::from_file(o.config);
    if (o.seed) config.set("seed", std::to_string(*o.seed));
    std::string algorithm = name;
    if (name == "baseline") algorithm = config.get("baseline.algorithm", "tabu");
    if (name == "anneal") algorithm = "anneal-" + config.get("anneal.mode", "sweep");
    const auto result = qlocate::run_experiment(algorithm, config);
    if (o.out.empty()) {
      std::cout << result.table.to_string();
    } else {
      write_file(o.out, result.table.to_string());
      write_file(manifest_path(o.out), result.manifest);
    }
    return 0;
  } catch (const qlocate::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

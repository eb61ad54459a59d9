// heer_sim: run single simulations or preset protocol comparisons and emit
// CSV curves and summary tables.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "heer/config.hpp"
#include "heer/experiment.hpp"
#include "heer/sim_engine.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_usage = 1;
constexpr int exit_runtime = 2;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void ensure_dir(const fs::path& dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

std::ofstream open_out(const fs::path& path)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  return out;
}

void close_out(std::ofstream& out, const fs::path& path)
{
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

struct RunArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::vector<std::string> sets;
};

struct CompareArgs {
  std::string preset;
  std::optional<std::uint64_t> seeds;
  std::string out_dir;
  std::vector<std::string> sets;
};

int cmd_run(const RunArgs& args)
{
  heer::ConfigBuilder builder;
  if (!args.config_path.empty()) builder.load_file(args.config_path);
  for (const auto& s : args.sets) builder.set_assignment(s);
  if (args.seed) builder.set("seed", std::to_string(*args.seed));
  const heer::SimConfig config = builder.build();

  const fs::path dir(args.out_dir);
  ensure_dir(dir);
  const auto result = heer::run(config);

  const auto csv_path = dir / "rounds.csv";
  auto csv = open_out(csv_path);
  heer::write_rounds_csv(csv, config, result);
  close_out(csv, csv_path);

  const auto summary = heer::summary_line(result);
  const auto summary_path = dir / "summary.txt";
  auto sum = open_out(summary_path);
  sum << heer::provenance_line(config) << '\n' << summary << '\n';
  close_out(sum, summary_path);

  std::cout << heer::to_string(config.protocol) << ' ' << summary << '\n';
  return exit_ok;
}

int cmd_compare(const CompareArgs& args)
{
  const auto& preset = heer::find_preset(args.preset);
  heer::SimConfig base;
  if (!args.sets.empty()) {
    heer::ConfigBuilder builder;
    for (const auto& s : args.sets) builder.set_assignment(s);
    base = builder.build();
  }
  auto configs = heer::resolve(preset, base);
  const auto seeds = heer::seed_range(args.seeds.value_or(preset.seeds));
  if (seeds.empty()) throw heer::ConfigError("seeds: must be >= 1");

  const fs::path dir(args.out_dir);
  ensure_dir(dir);
  const auto report = heer::run_batch(configs, seeds);

  const auto cmp_path = dir / "compare.csv";
  auto cmp = open_out(cmp_path);
  heer::write_compare_csv(cmp, report);
  close_out(cmp, cmp_path);

  // alive/throughput curves of the first seed, one file per protocol
  for (const auto& row : report.rows) {
    auto cfg = row.config;
    cfg.master_seed = row.seeds.front();
    const auto path = dir / ("rounds_" + std::string(heer::to_string(cfg.protocol)) + ".csv");
    auto out = open_out(path);
    heer::write_rounds_csv(out, cfg, row.runs.front());
    close_out(out, path);
  }

  std::cout << "preset " << preset.name << " (" << preset.description << "), " << seeds.size() << " seeds\n";
  for (const auto& row : report.rows) {
    std::cout << "  " << heer::to_string(row.config.protocol) << ": stability " << row.stability.mean << " +/- "
              << row.stability.sd << ", lifetime " << row.lifetime.mean << " +/- " << row.lifetime.sd
              << ", throughput " << row.throughput.mean << '\n';
  }
  return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
  CLI::App app{"Cluster-based WSN protocol simulator (TEEN, DEEC, HEER)"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Simulate one configuration and write per-round CSV");
  run->add_option("--config", run_args.config_path, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--seed", run_args.seed, "master seed (overrides the config)");
  run->add_option("--out", run_args.out_dir, "output directory")->required();
  run->add_option("--set", run_args.sets, "override, key=value (repeatable)");

  CompareArgs cmp_args;
  auto* compare = app.add_subcommand("compare", "Run a preset comparison over several seeds");
  compare->add_option("--preset", cmp_args.preset, "preset name (" + heer::preset_names() + ")")->required();
  compare->add_option("--seeds", cmp_args.seeds, "number of seeds, 0..N-1");
  compare->add_option("--out", cmp_args.out_dir, "output directory")->required();
  compare->add_option("--set", cmp_args.sets, "override applied under the preset, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*run) return cmd_run(run_args);
    return cmd_compare(cmp_args);
  } catch (const heer::ConfigError& e) {
    std::cerr << "heer_sim: " << e.what() << '\n';
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "heer_sim: " << e.what() << '\n';
    return exit_runtime;
  }
}

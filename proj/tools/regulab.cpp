// regulab: load a scenario, run its checks, write report and CSV.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "regulab/errors.hpp"
#include "regulab/parallel.hpp"
#include "regulab/report.hpp"
#include "regulab/scenario.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kMismatch = 1;
constexpr int kInput = 2;
constexpr int kResource = 3;

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw regulab::InputError("cannot write '" + path.string() + "'");
  out << text;
}

int cmd_run(const std::string& file, const std::string& out_dir, std::size_t max_points, bool timing) {
  regulab::Scenario s = regulab::load_scenario(file);
  if (max_points > 0) s.grids.max_points = max_points;
  const regulab::RunResult r = regulab::run_scenario(s);
  const fs::path dir(out_dir);
  write_file(dir / s.output.csv, regulab::to_csv(r, timing));
  write_file(dir / s.output.report, regulab::to_report(s, r));
  for (const auto& o : r.outcomes) {
    std::cout << o.label << ": " << regulab::to_string(o.cert.verdict);
    if (o.expect && !o.matches) std::cout << " (expected " << regulab::to_string(*o.expect) << ")";
    std::cout << '\n';
  }
  for (const auto& c : r.conflicts) std::cout << "conflict: " << c << '\n';
  std::cout << "wrote " << (dir / s.output.csv).string() << " and " << (dir / s.output.report).string() << '\n';
  return r.all_expected ? kOk : kMismatch;
}

int cmd_validate(const std::string& file) {
  const regulab::Scenario s = regulab::load_scenario(file);
  std::cout << s.echo << '\n';
  return kOk;
}

int cmd_examples(const std::string& out_dir) {
  const fs::path dir(out_dir);
  write_file(dir / "example_a.json", regulab::example_a_json());
  write_file(dir / "example_b.json", regulab::example_b_json());
  std::cout << "wrote " << (dir / "example_a.json").string() << " and " << (dir / "example_b.json").string() << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regulab: numerical certificates for uniform metric subregularity"};
  app.require_subcommand(1);

  std::string file, out_dir = ".";
  std::size_t max_points = 0;
  int threads = 0;
  bool timing = false;

  auto* run = app.add_subcommand("run", "run the checks of a scenario file");
  run->add_option("scenario", file, "scenario file (JSON)")->required();
  run->add_option("--out", out_dir, "output directory for the CSV and report");
  run->add_option("--max-points", max_points, "override the grid point cap");
  run->add_option("--threads", threads, "worker threads (default: REGULAB_THREADS or 1)")->check(CLI::PositiveNumber);
  run->add_flag("--timing", timing, "fill the CSV seconds column (breaks byte-identical reruns)");

  auto* validate = app.add_subcommand("validate", "parse a scenario and print it with defaults filled in");
  validate->add_option("scenario", file, "scenario file (JSON)")->required();

  auto* examples = app.add_subcommand("examples", "write the two example scenarios");
  examples->add_option("--out", out_dir, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInput;
  }

  try {
    if (threads > 0) regulab::set_thread_count(threads);
    if (*run) return cmd_run(file, out_dir, max_points, timing);
    if (*validate) return cmd_validate(file);
    if (*examples) return cmd_examples(out_dir);
  } catch (const regulab::ResourceError& e) {
    std::cerr << "resource cap: " << e.what() << " (" << e.requested() << " points requested)\n";
    return kResource;
  } catch (const regulab::InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const regulab::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kInput;
  } catch (const regulab::EmptinessError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kInput;
  }
  return kInput;
}

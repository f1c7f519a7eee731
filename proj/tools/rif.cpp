#include "CLI11.hpp"
#include "rif/acceptance.hpp"
#include "rif/scenario.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kPass = 0, kFail = 1, kInputError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rif::InputError(path + ": cannot open");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw rif::InputError(path + ": cannot write");
  out << text;
}

// A path on disk, or the stem of a bundled scenario.
std::pair<std::string, std::string> resolve(const std::string& target) {
  if (std::filesystem::exists(target)) return {target, read_file(target)};
  for (const auto& b : rif::bundled_scenarios())
    if (std::filesystem::path(b.file).stem() == target) return {b.file, b.text};
  throw rif::InputError(target + ": no such file or bundled scenario");
}

struct Common {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> budget, report;
  bool fail_fast = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "Seed for randomized checks (overrides the scenario)");
  app->add_option("--budget", c.budget, "Element-count budget for enumeration checks");
  app->add_option("--report", c.report, "Write the report to this path instead of stdout");
  app->add_flag("--fail-fast", c.fail_fast, "Stop at the first failing verification");
}

rif::RunOptions options_of(const Common& c) {
  rif::RunOptions o;
  o.seed = c.seed;
  o.fail_fast = c.fail_fast;
  if (c.budget) {
    try {
      o.budget = rif::parse_int(*c.budget);
    } catch (const std::exception&) {
      throw rif::InputError("--budget: not a decimal integer");
    }
    if (*o.budget < 1) throw rif::InputError("--budget: must be positive");
  }
  return o;
}

void emit(const std::optional<std::string>& path, const std::string& text) {
  if (path) write_file(*path, text);
  else std::cout << text;
}

int run(const std::string& target, const Common& c) {
  auto [name, text] = resolve(target);
  rif::Scenario s;
  try {
    s = rif::load_scenario_text(text);
  } catch (const rif::InputError& e) {
    throw rif::InputError(name + ": " + e.what());
  }
  rif::RunOutcome out = rif::run_scenario(s, options_of(c));
  emit(c.report, rif::serialize(out.report));
  if (c.report)
    std::cout << (s.name.empty() ? name : s.name) << ": " << out.report["status"].get<std::string>() << "\n";
  return out.exit_code;
}

int suite(const Common& c) {
  rif::RunOptions opts = options_of(c);
  rif::Json report = {{"criteria", rif::Json::array()}, {"scenarios", rif::Json::array()}};
  bool ok = true;
  for (int id = 1; id <= rif::kCriteria && (ok || !c.fail_fast); ++id) {
    rif::CriterionResult r = rif::run_criterion(id);
    std::cout << rif::format_criterion(r) << std::endl;
    report["criteria"].push_back({{"id", std::to_string(id)}, {"title", r.title}, {"passed", r.passed()},
                                  {"instances", std::to_string(r.instances)}, {"failures", r.failures}});
    ok = ok && r.passed();
  }
  for (const auto& b : rif::bundled_scenarios()) {
    if (!ok && c.fail_fast) break;
    auto start = std::chrono::steady_clock::now();
    rif::Scenario s = rif::load_scenario_text(b.text);
    rif::RunOptions o = opts;
    o.fail_fast = false;
    rif::RunOutcome out = rif::run_scenario(s, o);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const std::string status = out.report["status"];
    const bool good = status == s.expect && secs < s.time_budget;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(1);
    line << "scenario " << b.file << ' ' << (good ? "PASS" : "FAIL") << "  status=" << status << " expected=" << s.expect
         << "  time=" << secs << "s/" << s.time_budget << 's';
    std::cout << line.str() << std::endl;
    report["scenarios"].push_back({{"file", b.file}, {"status", status}, {"expected", s.expect}, {"passed", good}});
    ok = ok && good;
  }
  report["status"] = ok ? "pass" : "fail";
  if (c.report) write_file(*c.report, rif::serialize(report));
  return ok ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scenario runner for the rigid inner form toolkit"};
  app.require_subcommand(1);

  Common run_opts, suite_opts;
  std::string target;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario file or a bundled scenario by name");
  run_cmd->add_option("scenario", target, "Path or bundled scenario name")->required();
  add_common(run_cmd, run_opts);

  CLI::App* suite_cmd = app.add_subcommand("suite", "Run the acceptance criteria and every bundled scenario");
  add_common(suite_cmd, suite_opts);

  rif::GenerateBounds bounds;
  std::uint64_t gen_seed = 1;
  std::string max_modulus = "12";
  std::optional<std::string> output;
  CLI::App* gen_cmd = app.add_subcommand("generate", "Emit a random scenario reproducible from its seed");
  gen_cmd->add_option("--seed", gen_seed, "Seed");
  gen_cmd->add_option("--max-group", bounds.max_group, "Largest group order (at most 12)");
  gen_cmd->add_option("--max-rank", bounds.max_rank, "Largest lattice rank (at most 4)");
  gen_cmd->add_option("--max-places", bounds.max_places, "Largest number of places (at most 8)");
  gen_cmd->add_option("--max-modulus", max_modulus, "Largest modulus n (at most 12)");
  gen_cmd->add_flag("--negative-control", bounds.negative_control, "Emit a place system where some element fixes no dotted place");
  gen_cmd->add_option("--output", output, "Write the scenario here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*run_cmd) return run(target, run_opts);
    if (*suite_cmd) return suite(suite_opts);
    try {
      bounds.max_modulus = rif::parse_int(max_modulus);
    } catch (const std::exception&) {
      throw rif::InputError("--max-modulus: not a decimal integer");
    }
    emit(output, rif::generate_scenario(gen_seed, bounds));
    return kPass;
  } catch (const rif::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

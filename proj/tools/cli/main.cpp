#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <regex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"
#include "timebound/emit.hpp"
#include "timebound/harness.hpp"
#include "timebound/interp.hpp"
#include "timebound/parser.hpp"
#include "timebound/vcg.hpp"

namespace fs = std::filesystem;
using namespace timebound;

namespace {

// Exit codes, one per outcome class.
constexpr int kExitRuntimeError = 1;
constexpr int kExitParseError = 2;
constexpr int kExitOracleMissing = 3;
constexpr int kExitInvalidGoal = 4;
constexpr int kExitSolverTrouble = 5;
constexpr int kExitViolations = 6;

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void print_parse_error(const std::string& path, const ParseError& e) {
  std::cerr << path << ':' << e.span().line << ':' << e.span().column << ": error: " << e.what()
            << '\n';
  if (!e.expected().empty()) {
    std::cerr << "  expected:";
    for (const std::string& t : e.expected()) std::cerr << ' ' << t;
    std::cerr << '\n';
  }
}

std::optional<VerifMode> mode_from_flag(const std::string& flag) {
  if (flag == "classic") return VerifMode::Classic;
  if (flag == "amortized") return VerifMode::Amortized;
  if (flag == "exact") return VerifMode::Exact;
  return std::nullopt;
}

/// Shared flags: input file, mode override, cost model, sum-cost convention.
struct CommonArgs {
  std::string file;
  std::string mode_flag;
  std::string cost_model_file;
  std::string sum_cost = "inclusive";

  void attach(CLI::App* cmd, bool with_costs = true) {
    cmd->add_option("file", file, "annotated program file")->required();
    cmd->add_option("--mode", mode_flag, "override the file's #mode header")
        ->check(CLI::IsMember({"classic", "amortized", "exact"}));
    if (with_costs) {
      cmd->add_option("--cost-model", cost_model_file,
                      "cost model file (NAME = value lines; default: every name costs 1)");
      cmd->add_option("--sum-cost", sum_cost,
                      "cost convention for sum expressions: inclusive (upper-lower+1 iterations) "
                      "or paper (upper-lower)")
          ->check(CLI::IsMember({"inclusive", "paper"}));
    }
  }

  /// Parses the program; on failure prints the error and returns the exit
  /// code to use (oracle gaps get their own code when wanted).
  std::optional<AnnotatedProgram> load(int& exit_code, bool oracle_code) const {
    std::optional<std::string> source = slurp(file);
    if (!source) {
      std::cerr << file << ": error: cannot read file\n";
      exit_code = kExitParseError;
      return std::nullopt;
    }
    try {
      return parse_program(*source, mode_from_flag(mode_flag));
    } catch (const ParseError& e) {
      print_parse_error(file, e);
      exit_code = e.oracle_missing() && oracle_code ? kExitOracleMissing : kExitParseError;
      return std::nullopt;
    }
  }

  std::optional<CostModel> load_cost_model(int& exit_code) const {
    if (cost_model_file.empty()) return CostModel{};
    std::optional<std::string> source = slurp(cost_model_file);
    if (!source) {
      std::cerr << cost_model_file << ": error: cannot read file\n";
      exit_code = kExitParseError;
      return std::nullopt;
    }
    try {
      return parse_cost_model(*source);
    } catch (const ParseError& e) {
      print_parse_error(cost_model_file, e);
      exit_code = kExitParseError;
      return std::nullopt;
    }
  }

  CostSemOptions costsem() const {
    CostSemOptions opts;
    opts.paper_sum_cost = sum_cost == "paper";
    return opts;
  }
};

/// Parses "x=3,a[0]=5,y=-2" into a state.
std::optional<ProgramState> parse_state(const std::string& text) {
  ProgramState state;
  if (text.empty()) return state;
  static const std::regex scalar_re(R"(^([A-Za-z_][A-Za-z0-9_']*)=(-?[0-9]+)$)");
  static const std::regex cell_re(R"(^([A-Za-z_][A-Za-z0-9_']*)\[(-?[0-9]+)\]=(-?[0-9]+)$)");
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::smatch m;
    if (std::regex_match(item, m, scalar_re))
      state.set_scalar(m[1], Int(m[2].str()));
    else if (std::regex_match(item, m, cell_re))
      state.set_cell(m[1], Int(m[2].str()), Int(m[3].str()));
    else
      return std::nullopt;
  }
  return state;
}

int cmd_run(const CommonArgs& common, const std::string& state_text, long long fuel) {
  int code = 0;
  auto program = common.load(code, /*oracle_code=*/false);
  if (!program) return code;
  auto model = common.load_cost_model(code);
  if (!model) return code;
  auto initial = parse_state(state_text);
  if (!initial) {
    std::cerr << "error: --state expects comma-separated name=int or name[index]=int pairs\n";
    return kExitParseError;
  }

  ExecOptions opts;
  opts.fuel = fuel;
  opts.costsem = common.costsem();
  try {
    ExecOutcome outcome = exec(program->body, *initial, *model, opts);
    std::cout << "cost: " << outcome.cost << '\n';
    for (const auto& [name, value] : outcome.state.scalars)
      std::cout << name << " = " << value << '\n';
    for (const auto& [array, cells] : outcome.state.arrays)
      for (const auto& [index, value] : cells)
        std::cout << array << '[' << index << "] = " << value << '\n';
    return 0;
  } catch (const EvalError& e) {
    std::cerr << common.file << ':' << e.span().line << ": runtime error: " << e.what() << '\n';
    return kExitRuntimeError;
  }
}

std::optional<std::vector<VerificationCondition>> generate_vcs(const CommonArgs& common,
                                                               bool if_cost_sum, int& code) {
  auto program = common.load(code, /*oracle_code=*/true);
  if (!program) return std::nullopt;
  auto model = common.load_cost_model(code);
  if (!model) return std::nullopt;
  VcgOptions opts;
  opts.if_cost_sum = if_cost_sum;
  opts.costsem = common.costsem();
  try {
    return vcg(*program, *model, opts);
  } catch (const OracleError& e) {
    std::cerr << common.file << ": error: " << e.what() << '\n';
    code = kExitOracleMissing;
    return std::nullopt;
  }
}

int cmd_vcs(const CommonArgs& common, bool if_cost_sum, const std::string& format,
            const std::string& out_dir) {
  int code = 0;
  auto vcs = generate_vcs(common, if_cost_sum, code);
  if (!vcs) return code;

  std::cout << vcs->size() << " VCs\n";
  const bool smt = format == "smt";
  if (out_dir.empty()) {
    for (const VerificationCondition& vc : *vcs) {
      if (smt)
        std::cout << '\n' << render_smt(vc);
      else
        std::cout << vc.name << ": " << render_text(vc) << '\n';
    }
    return 0;
  }

  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::string stem = fs::path(common.file).stem().string();
  std::ofstream index(dir / "index.tsv");
  for (const VerificationCondition& vc : *vcs) {
    std::string file = stem + "." + vc.name + (smt ? ".smt2" : ".txt");
    std::ofstream goal(dir / file);
    goal << (smt ? render_smt(vc) : render_text(vc) + "\n");
    index << vc.name << '\t' << file << '\n';
  }
  return 0;
}

int cmd_check(const CommonArgs& common, bool if_cost_sum, std::string solver, int timeout_sec,
              int jobs) {
  int code = 0;
  auto vcs = generate_vcs(common, if_cost_sum, code);
  if (!vcs) return code;

  if (solver.empty()) {
    if (const char* env = std::getenv("TIMEBOUND_SOLVER")) solver = env;
    if (solver.empty()) {
      std::cerr << "error: no solver configured (use --solver or set TIMEBOUND_SOLVER)\n";
      return kExitSolverTrouble;
    }
  }

  std::vector<GoalDocument> goals;
  goals.reserve(vcs->size());
  for (const VerificationCondition& vc : *vcs) goals.push_back(make_goal(vc));

  const std::size_t n = goals.size();
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
      goals[i] = run_solver(goals[i], solver, timeout_sec);
  };
  std::size_t workers = std::max(1, std::min<int>(jobs, static_cast<int>(n ? n : 1)));
  std::vector<std::thread> pool;
  for (std::size_t i = 0; i + 1 < workers; ++i) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  std::size_t width = 0;
  for (const GoalDocument& g : goals) width = std::max(width, g.vc_name.size());
  int invalid = 0, trouble = 0;
  for (const GoalDocument& g : goals) {
    std::cout << g.vc_name << std::string(width - g.vc_name.size() + 2, ' ')
              << to_string(g.status) << '\n';
    if (g.status == GoalStatus::Invalid) ++invalid;
    if (g.status == GoalStatus::SolverError || g.status == GoalStatus::Timeout ||
        g.status == GoalStatus::Unknown)
      ++trouble;
  }
  if (invalid) return kExitInvalidGoal;
  if (trouble) return kExitSolverTrouble;
  return 0;
}

int cmd_fuzz(const CommonArgs& common, long long trials, std::uint64_t seed, long long box,
             long long cells, const std::string& quant, const std::vector<std::string>& ranges,
             long long fuel, const std::string& summary_path) {
  int code = 0;
  auto program = common.load(code, /*oracle_code=*/true);
  if (!program) return code;
  auto model = common.load_cost_model(code);
  if (!model) return code;

  HarnessOptions opts;
  opts.exec.fuel = fuel;
  opts.exec.costsem = common.costsem();
  opts.sampler.scalar_lo = -box;
  opts.sampler.scalar_hi = box;
  opts.sampler.cell_hi = cells;
  opts.sampler.extent_hi = cells;
  if (!quant.empty()) {
    static const std::regex var_re(R"(^([A-Za-z_][A-Za-z0-9_']*)([+-][0-9]+)?$)");
    std::smatch m;
    if (std::regex_match(quant, m, var_re)) {
      opts.sampler.quant.hi_var = m[1];
      if (m[2].matched) opts.sampler.quant.hi_offset = Int(m[2].str());
    } else {
      try {
        opts.sampler.quant.hi = Int(quant);
      } catch (...) {
        std::cerr << "error: --quant expects an integer or var[+/-offset]\n";
        return kExitParseError;
      }
    }
  }
  static const std::regex range_re(R"(^([A-Za-z_][A-Za-z0-9_']*)=(-?[0-9]+):(-?[0-9]+)$)");
  for (const std::string& r : ranges) {
    std::smatch m;
    if (!std::regex_match(r, m, range_re)) {
      std::cerr << "error: --range expects var=lo:hi\n";
      return kExitParseError;
    }
    opts.sampler.overrides[m[1]] = {Int(m[2].str()), Int(m[3].str())};
  }

  std::vector<HarnessReport> reports;
  try {
    reports.push_back(check_bound(*program, *model, trials, seed, opts));
    if (program->mode == VerifMode::Amortized)
      reports.push_back(check_amortized_telescoping(*program, *model, trials, seed, opts));
  } catch (const SamplingExhausted& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntimeError;
  }

  std::size_t violations = 0;
  nlohmann::json summary;
  summary["program"] = fs::path(common.file).stem().string();
  summary["seed"] = seed;
  summary["reports"] = nlohmann::json::array();
  for (const HarnessReport& r : reports) {
    std::cout << r.to_text();
    violations += r.violations.size();
    summary["reports"].push_back({{"name", r.name},
                                  {"trials", r.trials},
                                  {"sampled", r.sampled},
                                  {"skipped", r.skipped},
                                  {"violations", r.violations.size()},
                                  {"seed", r.seed}});
  }

  std::string out = summary_path.empty()
                        ? fs::path(common.file).stem().string() + ".fuzz.json"
                        : summary_path;
  std::ofstream(out) << summary.dump(2) << '\n';
  return violations ? kExitViolations : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-aware deductive verifier for annotated imperative programs"};
  app.require_subcommand(1);

  // run
  auto* run = app.add_subcommand("run", "execute a program and report its exact cost");
  CommonArgs run_args;
  run_args.attach(run);
  std::string state_text;
  long long fuel = 1'000'000;
  run->add_option("--state", state_text, "initial state, e.g. x=3,a[0]=5");
  run->add_option("--fuel", fuel, "maximum number of loop iterations")->check(CLI::PositiveNumber);

  // vcs
  auto* vcs = app.add_subcommand("vcs", "generate verification conditions");
  CommonArgs vcs_args;
  vcs_args.attach(vcs);
  std::string format = "text";
  std::string out_dir;
  std::string if_cost = "max";
  vcs->add_option("--format", format, "goal format")->check(CLI::IsMember({"text", "smt"}));
  vcs->add_option("--out", out_dir, "write one goal file per VC plus index.tsv to this directory");
  vcs->add_option("--if-cost", if_cost, "conditional cost rule: max of the branches or their sum")
      ->check(CLI::IsMember({"max", "sum"}));

  // check
  auto* check = app.add_subcommand("check", "discharge verification conditions with a solver");
  CommonArgs check_args;
  check_args.attach(check);
  std::string solver;
  int timeout_sec = 10;
  int jobs = 1;
  std::string check_if_cost = "max";
  check->add_option("--solver", solver,
                    "solver command reading SMT-LIB on stdin (default: $TIMEBOUND_SOLVER)");
  check->add_option("--timeout", timeout_sec, "per-goal timeout in seconds")
      ->check(CLI::PositiveNumber);
  check->add_option("--jobs", jobs, "parallel solver processes")->check(CLI::PositiveNumber);
  check->add_option("--if-cost", check_if_cost,
                    "conditional cost rule: max of the branches or their sum")
      ->check(CLI::IsMember({"max", "sum"}));

  // fuzz
  auto* fuzz = app.add_subcommand("fuzz", "empirically test the annotated bound on random states");
  CommonArgs fuzz_args;
  fuzz_args.attach(fuzz);
  long long trials = 200;
  std::uint64_t seed = 1;
  long long box = 16;
  long long cells = 16;
  std::string quant;
  std::vector<std::string> ranges;
  long long fuzz_fuel = 1'000'000;
  std::string summary_path;
  fuzz->add_option("--trials", trials, "number of sampled pre-states")
      ->check(CLI::PositiveNumber);
  fuzz->add_option("--seed", seed, "random seed");
  fuzz->add_option("--box", box, "scalars are drawn from -box..box");
  fuzz->add_option("--cells", cells, "array cells and extents are drawn from 0..cells");
  fuzz->add_option("--quant", quant,
                   "quantifier domain upper end: an integer or var[+/-offset], e.g. n-1");
  fuzz->add_option("--range", ranges, "per-variable draw range var=lo:hi (repeatable)");
  fuzz->add_option("--fuel", fuzz_fuel, "maximum number of loop iterations")
      ->check(CLI::PositiveNumber);
  fuzz->add_option("--summary", summary_path,
                   "machine-readable summary file (default: <program>.fuzz.json)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) return cmd_run(run_args, state_text, fuel);
  if (vcs->parsed()) return cmd_vcs(vcs_args, if_cost == "sum", format, out_dir);
  if (check->parsed())
    return cmd_check(check_args, check_if_cost == "sum", solver, timeout_sec, jobs);
  if (fuzz->parsed())
    return cmd_fuzz(fuzz_args, trials, seed, box, cells, quant, ranges, fuzz_fuel, summary_path);
  return 0;
}

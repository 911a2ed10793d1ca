#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "nceig/errors.hpp"
#include "nceig/kernel.hpp"
#include "nceig/quadrature.hpp"
#include "nceig/report_io.hpp"
#include "nceig/spectrum.hpp"

namespace nceig::cli {

namespace {

constexpr const char* kernel_help =
    "Kernel k(x,u): 'gaussian' = exp(-(u-x)^2), 'cauchy' = 1/(1+(u-x)^2), or an "
    "expression in x and u using numbers, + - * / ^ (or **, right-associative), "
    "unary minus, parentheses and exp sin cos sqrt abs log. Implicit "
    "multiplication is not accepted.";

const std::map<std::string, Format> format_names{
    {"table", Format::table}, {"csv", Format::csv}, {"json", Format::json}};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool has_flag(const std::vector<std::string>& args, const std::string& flag) {
  return std::any_of(args.begin(), args.end(), [&](const std::string& a) {
    return a == flag || a.rfind(flag + "=", 0) == 0;
  });
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream file(cfg.output, std::ios::binary);
  if (!file) throw ConfigError("cannot open output file '" + cfg.output + "'");
  file << text;
}

void add_common(CLI::App& cmd, RunConfig& cfg) {
  cmd.add_option("--kernel", cfg.kernel, kernel_help);
  cmd.add_option("--alpha", cfg.alpha, "Coefficient of the integral operator")->capture_default_str();
  cmd.add_option("--interval", [&cfg](const CLI::results_t& res) {
       if (res.size() != 2) return false;
       try {
         cfg.a = std::stod(res[0]);
         cfg.b = std::stod(res[1]);
       } catch (const std::exception&) {
         return false;
       }
       return true;
     }, "Interval endpoints a b")
      ->expected(2)
      ->allow_extra_args(false);
  cmd.add_option("--r", cfg.order, "Gauss points per subinterval")->capture_default_str();
  cmd.add_option("--margin", cfg.margin,
                 "Isolation margin around the essential band (default 0.005 * (width + 1))");
  cmd.add_option("--format", cfg.format, "Output format: table, csv or json")
      ->transform(CLI::CheckedTransformer(format_names, CLI::ignore_case));
  cmd.add_option("--output", cfg.output, "Write output to this file instead of stdout");
  cmd.add_option("--config", "Read key=value defaults from this file (flags win)");
}

void require_common(const CLI::App& cmd, const RunConfig& cfg) {
  if (cfg.kernel.empty() || cmd.get_option("--kernel")->count() == 0) {
    throw ConfigError("--kernel is required");
  }
  if (cmd.get_option("--interval")->count() == 0) throw ConfigError("--interval is required");
  if (!(cfg.a < cfg.b)) throw ConfigError("--interval needs a < b");
  if (cfg.order < 1 || cfg.order > max_gauss_order) {
    throw ConfigError("--r must lie in [1, " + std::to_string(max_gauss_order) + "]");
  }
  if (cfg.margin && !(*cfg.margin > 0.0)) throw ConfigError("--margin must be positive");
}

void run_solve(const CLI::App& cmd, RunConfig& cfg, std::ostream& out) {
  require_common(cmd, cfg);
  if (!cfg.n) throw ConfigError("solve needs --n");
  const Kernel kernel = Kernel::from_spec(cfg.kernel);
  const SolveResult result =
      solve_instance(kernel, cfg.alpha, cfg.a, cfg.b, cfg.order, *cfg.n, cfg.margin);
  switch (cfg.format) {
    case Format::json: emit(cfg, to_json(result), out); break;
    case Format::csv: emit(cfg, to_csv(result), out); break;
    case Format::table: emit(cfg, to_table(result), out); break;
  }
}

void apply_preset(const std::string& name, RunConfig& cfg, const CLI::App& cmd) {
  RunConfig preset;
  if (name == "example1") {
    preset.kernel = "gaussian";
    preset.a = -2.0;
    preset.b = 2.0;
  } else if (name == "example2") {
    preset.kernel = "cauchy";
    preset.a = -4.0;
    preset.b = 4.0;
  } else {
    throw ConfigError("unknown preset '" + name + "' (expected example1 or example2)");
  }
  preset.alpha = 1.0;
  preset.order = 2;
  preset.schedule = {10, 20, 40, 80, 160};
  auto given = [&](const char* flag) { return cmd.get_option(flag)->count() > 0; };
  if (!given("--kernel")) cfg.kernel = preset.kernel;
  if (!given("--interval")) {
    cfg.a = preset.a;
    cfg.b = preset.b;
  }
  if (!given("--alpha")) cfg.alpha = preset.alpha;
  if (!given("--r")) cfg.order = preset.order;
  if (!given("--schedule")) cfg.schedule = preset.schedule;
}

void run_convergence(CLI::App& cmd, RunConfig& cfg, const std::string& preset,
                     const std::string& ref, std::ostream& out) {
  if (!preset.empty()) apply_preset(preset, cfg, cmd);
  // A preset supplies kernel and interval even when the flags are absent.
  if (preset.empty()) require_common(cmd, cfg);
  else if (!(cfg.a < cfg.b)) throw ConfigError("--interval needs a < b");
  if (cfg.schedule.size() < 2) throw ConfigError("--schedule needs at least two levels");
  if (cfg.track_count < 1) throw ConfigError("--track must be at least 1");
  if (!ref.empty()) {
    if (ref == "richardson") {
      cfg.richardson = true;
    } else {
      try {
        std::size_t used = 0;
        cfg.ref_n = std::stoi(ref, &used);
        if (used != ref.size()) throw std::invalid_argument(ref);
      } catch (const std::exception&) {
        throw ConfigError("--ref takes a mesh size or 'richardson', got '" + ref + "'");
      }
    }
  }

  StudyConfig study;
  study.kernel = Kernel::from_spec(cfg.kernel);
  study.alpha = cfg.alpha;
  study.a = cfg.a;
  study.b = cfg.b;
  study.order = cfg.order;
  study.schedule = cfg.schedule;
  study.track_count = cfg.track_count;
  study.margin = cfg.margin;
  study.reference = cfg.richardson ? ReferenceStrategy::richardson()
                                   : ReferenceStrategy::fine_mesh(cfg.ref_n.value_or(0));
  const ConvergenceReport report = convergence_study(study);
  switch (cfg.format) {
    case Format::json: emit(cfg, to_json(report), out); break;
    case Format::csv: emit(cfg, to_csv(report), out); break;
    case Format::table: emit(cfg, to_table(report), out); break;
  }
}

void run_quad(int r, std::ostream& out) {
  const GaussRule& rule = gauss_rule(r);
  out << "# Gauss-Legendre rule, r = " << r << "\n";
  out << "index,node,weight\n";
  for (int i = 0; i < r; ++i) {
    out << i + 1 << ',' << format_real(rule.nodes[i]) << ',' << format_real(rule.weights[i])
        << '\n';
  }
}

std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  // args[0] is the subcommand; a --config option may appear anywhere after it.
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return args;
  std::vector<std::string> expanded(args.begin(), args.begin() + 1);
  const auto extra = config_file_args(path, args);
  expanded.insert(expanded.end(), extra.begin(), extra.end());
  expanded.insert(expanded.end(), args.begin() + 1, args.end());
  return expanded;
}

}  // namespace

std::vector<std::string> config_file_args(const std::string& path,
                                          const std::vector<std::string>& given) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty() || key == "config") {
      throw ConfigError(path + ":" + std::to_string(lineno) + ": invalid key");
    }
    const std::string flag = "--" + key;
    if (has_flag(given, flag)) continue;
    out.push_back(flag);
    if (key == "kernel" || key == "output") {
      out.push_back(value);
    } else {
      std::istringstream tokens(value);
      for (std::string tok; tokens >> tok;) out.push_back(tok);
    }
  }
  return out;
}

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Eigenvalues of alpha*K - x^2 by the degenerate kernel method", "nceig"};
  app.require_subcommand(1);

  RunConfig solve_cfg;
  solve_cfg.format = Format::json;
  auto* solve = app.add_subcommand("solve", "Assemble and solve one mesh level");
  add_common(*solve, solve_cfg);
  solve->add_option("--n", solve_cfg.n, "Number of subintervals (>= 2)");

  RunConfig conv_cfg;
  std::string preset;
  std::string ref;
  auto* conv = app.add_subcommand("convergence", "Mesh-refinement convergence study");
  add_common(*conv, conv_cfg);
  conv->add_option("--schedule", conv_cfg.schedule, "Strictly increasing mesh sizes");
  conv->add_option("--track", conv_cfg.track_count, "Number of eigenvalues to track")
      ->capture_default_str();
  conv->add_option("--ref", ref,
                   "Reference: fine mesh size (default 4 x finest level) or 'richardson'");
  conv->add_option("--preset", preset, "example1 (gaussian on [-2,2]) or example2 (cauchy on [-4,4])");

  int quad_order = 0;
  auto* quad = app.add_subcommand("quad", "Print Gauss-Legendre nodes and weights");
  quad->add_option("--r", quad_order, "Rule order")->required();

  std::string expression;
  auto* parse = app.add_subcommand("parse", "Validate a kernel expression and print its canonical form");
  parse->add_option("expression", expression, kernel_help)->required();

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);

    if (solve->parsed()) run_solve(*solve, solve_cfg, out);
    else if (conv->parsed()) run_convergence(*conv, conv_cfg, preset, ref, out);
    else if (quad->parsed()) run_quad(quad_order, out);
    else if (parse->parsed()) out << to_string(*parse_kernel(expression)) << '\n';
    return 0;
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return static_cast<int>(ExitCode::config);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace nceig::cli

// Command-line front end: bounds, solutions, branches, lambda* and regime
// classification for the MEMS pull-in problem.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mems/mems.hpp"

using namespace mems;

namespace {

constexpr int exit_invalid = 2;
constexpr int exit_numeric = 3;

struct RunConfig {
  std::string domain = "disk";
  std::string profile = "const";
  std::optional<double> lambda;
  std::size_t grid_n = RadialGrid::default_nodes;
  double gamma_max = 1e4;
  int n_samples = 2000;
  std::string output;
  std::string format;
  int n = 2;
  double alpha = 0.0;
  bool verify = false;
};

Domain parse_domain(const std::string& spec) {
  if (spec == "slab") return Domain::slab();
  if (spec == "disk") return Domain::ball(2);
  if (spec.rfind("ball:", 0) == 0) {
    std::istringstream in(spec.substr(5));
    int n = 0;
    double radius = 1.0;
    char sep = 0;
    if (!(in >> n)) throw error(errc::invalid_argument, "bad domain spec '" + spec + "'");
    if (in >> sep) {
      if (sep != ':' || !(in >> radius)) throw error(errc::invalid_argument, "bad domain spec '" + spec + "'");
    }
    if (!in.eof() && in.peek() != EOF) throw error(errc::invalid_argument, "bad domain spec '" + spec + "'");
    return Domain::ball(n, radius);
  }
  throw error(errc::invalid_argument, "unknown domain '" + spec + "' (slab | disk | ball:N[:R])");
}

Profile parse_profile(const Domain& domain, const std::string& spec) {
  if (spec == "const") return Profile::constant();
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    std::size_t used = 0;
    double alpha = 0.0;
    try {
      alpha = std::stod(spec.substr(colon + 1), &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used > 0 && used == spec.size() - colon - 1) {
      if (kind == "power") return profile_for(domain, Profile::Kind::power_law, alpha);
      if (kind == "exp") return profile_for(domain, Profile::Kind::exponential, alpha);
    }
  }
  throw error(errc::invalid_argument, "unknown profile '" + spec + "' (const | power:alpha | exp:alpha)");
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.output.empty() || cfg.output == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw error(errc::invalid_argument, "cannot open output file '" + cfg.output + "'");
  out << text;
}

std::string flatten_csv(const nlohmann::json& j) {
  std::string out = "key,value\n";
  for (const auto& [key, value] : j.items()) {
    if (value.is_object()) {
      for (const auto& [k2, v2] : value.items()) out += key + "." + k2 + "," + v2.dump() + "\n";
    } else {
      // dump() quotes strings, which keeps embedded commas inside one field.
      out += key + "," + value.dump() + "\n";
    }
  }
  return out;
}

std::string dump(const nlohmann::json& j, const RunConfig& cfg) {
  if (cfg.format == "csv") return flatten_csv(j);
  return j.dump(2) + "\n";
}

unsigned worker_count() {
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("MEMS_PULLIN_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) threads = std::min(threads, static_cast<unsigned>(cap));
  }
  return threads;
}

// lambda* by the method matching the profile; returns (value, method tag).
std::pair<double, std::string> lambda_star_auto(const Domain& d, const Profile& f, const RunConfig& cfg) {
  if (f.kind() == Profile::Kind::exponential)
    return {continuation_trace(d, f, RadialGrid(d, cfg.grid_n)).lambda_star, "continuation"};
  return {ShootingProblem::from(d, f).trace(cfg.gamma_max, std::max(cfg.n_samples, 100)).lambda_star, "shooting"};
}

int cmd_bounds(const RunConfig& cfg) {
  const Domain d = parse_domain(cfg.domain);
  const Profile f = parse_profile(d, cfg.profile);
  nlohmann::json j = to_json(bounds_report(d, f));
  j = {{"domain", d.describe()}, {"profile", f.describe()}, {"bounds", j}};
  emit(cfg, cfg.format == "csv" ? flatten_csv(j["bounds"]) : j.dump(2) + "\n");
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  const Domain d = parse_domain(cfg.domain);
  const Profile f = parse_profile(d, cfg.profile);
  check_profile(d, f);
  if (!cfg.lambda) throw error(errc::invalid_argument, "solve needs --lambda");
  const RadialGrid grid(d, cfg.grid_n);
  const MinimalOutcome o = picard_minimal(*cfg.lambda, grid, f);
  if (o.status == MinimalStatus::collapsed) {
    std::ostringstream text;
    if (cfg.format == "json") {
      text << nlohmann::json{{"status", "collapsed"}, {"lambda", *cfg.lambda}, {"iterations", o.iterations},
                             {"final_max_u", o.final_max_u}}
                  .dump(2)
           << "\n";
    } else {
      text << "# status=collapsed lambda=" << format_exact(*cfg.lambda) << " iterations=" << o.iterations
           << " final_max_u=" << format_exact(o.final_max_u) << "\n";
    }
    emit(cfg, text.str());
    return 0;
  }
  if (o.status != MinimalStatus::converged)
    throw error(errc::no_convergence, "monotone iteration hit its limit without a verdict", o.final_max_u);
  const RadialSolution s = newton_solve(o.solution->u, *cfg.lambda, grid, f);
  if (cfg.format == "json") {
    nlohmann::json j = {{"status", "converged"},   {"lambda", s.lambda},
                        {"domain", d.describe()},  {"profile", f.describe()},
                        {"max_u", s.max_u},        {"residual_norm", s.residual_norm},
                        {"picard_iterations", o.iterations}, {"r", std::vector<double>(grid.nodes().begin(), grid.nodes().end())},
                        {"u", s.u}};
    emit(cfg, j.dump(2) + "\n");
  } else {
    emit(cfg, to_csv(s, f.describe()));
  }
  return 0;
}

int cmd_branch(const RunConfig& cfg, bool explicit_n) {
  Domain d = explicit_n ? Domain::ball(cfg.n) : parse_domain(cfg.domain);
  const Profile f = explicit_n ? profile_for(d, Profile::Kind::power_law, cfg.alpha) : parse_profile(d, cfg.profile);
  check_profile(d, f);
  BifurcationBranch b;
  if (f.kind() == Profile::Kind::exponential) {
    b = continuation_trace(d, f, RadialGrid(d, cfg.grid_n));
  } else {
    b = ShootingProblem::from(d, f).trace(cfg.gamma_max, std::max(cfg.n_samples, 100));
  }
  emit(cfg, to_csv(b, d.dimension(), d.describe() + " " + f.describe()));
  return 0;
}

int cmd_lambda_star(const RunConfig& cfg) {
  const Domain d = parse_domain(cfg.domain);
  const Profile f = parse_profile(d, cfg.profile);
  const BoundsReport bounds = bounds_report(d, f);
  const auto [value, method] = lambda_star_auto(d, f, cfg);
  std::optional<double> bisection;
  if (cfg.verify) bisection = lambda_star_bisection(RadialGrid(d, cfg.grid_n), f);
  if (cfg.format == "json") {
    nlohmann::json j = {{"lambda_star", value},
                        {"method", method},
                        {"lower_best", bounds.lower_best},
                        {"upper_best", bounds.upper_best}};
    if (bisection) {
      j["bisection"] = *bisection;
      j["relative_difference"] = std::abs(*bisection - value) / value;
    }
    emit(cfg, j.dump(2) + "\n");
  } else {
    std::ostringstream text;
    text << "lambda_star=" << format_exact(value) << " method=" << method << " bracket=["
         << format_exact(bounds.lower_best) << "," << format_exact(bounds.upper_best) << "]";
    if (bisection)
      text << " bisection=" << format_exact(*bisection)
           << " relative_difference=" << format_exact(std::abs(*bisection - value) / value);
    text << "\n";
    emit(cfg, text.str());
  }
  return 0;
}

int cmd_classify(const RunConfig& cfg) {
  emit(cfg, dump(to_json(classify_regime(cfg.n, cfg.alpha)), cfg));
  return 0;
}

struct TableRow {
  int table;
  const char* domain;
  double alpha;
  double printed[4];  // lower_best, lambda_star, upper_1 (0 = infinity), upper_2
};

const TableRow table_rows[] = {
    {1, "slab", 0.0, {1.185, 1.401, 1.462, 3.290}},   {1, "slab", 1.0, {1.185, 1.733, 1.878, 4.023}},
    {1, "slab", 3.0, {1.185, 2.637, 3.095, 5.965}},   {1, "slab", 6.0, {1.185, 4.848, 6.553, 10.50}},
    {1, "disk", 0.0, {0.593, 0.789, 0.857, 1.928}},   {1, "disk", 0.5, {0.593, 1.153, 1.413, 2.706}},
    {1, "disk", 1.0, {0.593, 1.661, 2.329, 3.746}},   {1, "disk", 3.0, {0.593, 6.091, 17.21, 11.86}},
    {2, "slab", 0.0, {1.185, 1.401, 1.462, 3.290}},   {2, "slab", 1.0, {3.556, 4.388, 0.0, 9.044}},
    {2, "slab", 3.0, {11.851, 15.189, 0.0, 28.247}},  {2, "slab", 6.0, {33.185, 43.087, 0.0, 76.608}},
    {2, "disk", 0.0, {0.593, 0.789, 0.857, 1.928}},   {2, "disk", 1.0, {1.333, 1.775, 0.0, 3.019}},
    {2, "disk", 5.0, {7.259, 9.676, 0.0, 15.82}},     {2, "disk", 20.0, {71.70, 95.66, 0.0, 161.54}},
};

std::string table_line(const TableRow& row, const RunConfig& cfg) {
  const Domain d = parse_domain(row.domain);
  const Profile f =
      profile_for(d, row.table == 1 ? Profile::Kind::exponential : Profile::Kind::power_law, row.alpha);
  const BoundsReport b = bounds_report(d, f);
  const double computed[4] = {row.table == 2 ? *b.lower_powerlaw : b.lower_best, lambda_star_auto(d, f, cfg).first,
                              b.upper_1.value_or(0.0), b.upper_2};
  std::ostringstream line;
  line << row.table << ',' << row.domain << ',' << f.describe() << ',' << row.alpha;
  for (double v : computed) line << ',' << (v == 0.0 ? "inf" : format_exact(v));
  char buf[64];
  for (double v : computed) {
    if (v == 0.0) {
      line << ",inf";
    } else {
      std::snprintf(buf, sizeof buf, ",%.4f", v);
      line << buf;
    }
  }
  for (int k = 0; k < 4; ++k) {
    if (row.printed[k] == 0.0 || computed[k] == 0.0) {
      line << ',';
      continue;
    }
    std::snprintf(buf, sizeof buf, ",%.4f", (computed[k] - row.printed[k]) / row.printed[k] * 100.0);
    line << buf;
  }
  line << '\n';
  return line.str();
}

int cmd_tables(const RunConfig& cfg) {
  constexpr std::size_t count = std::size(table_rows);
  std::vector<std::string> lines(count);
  std::vector<std::string> errors(count);
  const unsigned workers = std::min<unsigned>(worker_count(), count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < count; i += workers) {
        try {
          lines[i] = table_line(table_rows[i], cfg);
        } catch (const std::exception& e) {
          errors[i] = e.what();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (!e.empty()) throw error(errc::numeric_failure, e);
  std::string text =
      "table,domain,profile,alpha,lower_best,lambda_star,upper_1,upper_2,"
      "lower_best_4f,lambda_star_4f,upper_1_4f,upper_2_4f,"
      "lower_best_diff_pct,lambda_star_diff_pct,upper_1_diff_pct,upper_2_diff_pct\n";
  for (const auto& l : lines) text += l;
  emit(cfg, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pull-in voltage bounds, solutions and bifurcation branches for MEMS capacitors"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_domain = [&](CLI::App* sub) {
    sub->add_option("--domain", cfg.domain, "slab | disk | ball:N[:R]")->capture_default_str();
    sub->add_option("--profile", cfg.profile, "const | power:alpha | exp:alpha")->capture_default_str();
  };
  const auto add_output = [&](CLI::App* sub, const std::string& default_format) {
    cfg.format = "";
    sub->add_option("--output,-o", cfg.output, "output path (default stdout)");
    sub->add_option("--format", cfg.format, "csv | json (default " + default_format + ")")
        ->check(CLI::IsMember({"csv", "json"}));
  };
  const auto add_grid = [&](CLI::App* sub) {
    sub->add_option("--grid-n", cfg.grid_n, "grid nodes (>= 64)")->capture_default_str()->check(CLI::Range(64, 1 << 24));
  };
  const auto add_gamma = [&](CLI::App* sub) {
    sub->add_option("--gamma-max", cfg.gamma_max, "largest shooting parameter")->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--samples", cfg.n_samples, "log-spaced shooting samples (>= 100)")->capture_default_str()
        ->check(CLI::Range(100, 10000000));
  };

  auto* bounds = app.add_subcommand("bounds", "analytic lower and upper bounds on lambda*");
  add_domain(bounds);
  add_output(bounds, "json");

  auto* solve = app.add_subcommand("solve", "minimal solution at a given lambda");
  add_domain(solve);
  solve->add_option("--lambda", cfg.lambda, "voltage parameter")->required();
  add_grid(solve);
  add_output(solve, "csv");

  auto* branch = app.add_subcommand("branch", "bifurcation branch as CSV");
  add_domain(branch);
  auto* branch_n = branch->add_option("--N", cfg.n, "unit-ball dimension (with --alpha, overrides --domain)");
  branch->add_option("--alpha", cfg.alpha, "power-law exponent for --N");
  add_grid(branch);
  add_gamma(branch);
  add_output(branch, "csv");

  auto* star = app.add_subcommand("lambda-star", "pull-in voltage with method tag and bound bracket");
  add_domain(star);
  add_grid(star);
  add_gamma(star);
  star->add_flag("--verify", cfg.verify, "cross-check by monotone-iteration bisection");
  add_output(star, "text");

  auto* classify = app.add_subcommand("classify", "asymptotic regime of the power-law branch");
  classify->add_option("--N", cfg.n, "dimension")->required()->check(CLI::PositiveNumber);
  classify->add_option("--alpha", cfg.alpha, "power-law exponent")->required()->check(CLI::NonNegativeNumber);
  add_output(classify, "json");

  auto* tables = app.add_subcommand("tables", "regenerate the exponential and power-law tables");
  add_grid(tables);
  add_gamma(tables);
  add_output(tables, "csv");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_invalid;
  }

  try {
    if (*bounds) return cmd_bounds(cfg);
    if (*solve) return cmd_solve(cfg);
    if (*branch) return cmd_branch(cfg, branch_n->count() > 0);
    if (*star) return cmd_lambda_star(cfg);
    if (*classify) return cmd_classify(cfg);
    if (*tables) return cmd_tables(cfg);
  } catch (const error& e) {
    std::cerr << "error: " << e.what();
    if (!std::isnan(e.residual())) std::cerr << " (residual " << e.residual() << ")";
    std::cerr << "\n";
    return e.is_input_error() ? exit_invalid : exit_numeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numeric;
  }
  return exit_invalid;
}

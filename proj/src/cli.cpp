#include "gcollage/cli.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcollage/collage.hpp"
#include "gcollage/core.hpp"
#include "gcollage/cube.hpp"
#include "gcollage/error.hpp"
#include "gcollage/hermite.hpp"
#include "gcollage/io.hpp"
#include "gcollage/parallel.hpp"
#include "gcollage/wce.hpp"

namespace gcollage::cli {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string &s, const std::string &what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    used = 0;
  }
  if (used == 0 || used != s.size() || !std::isfinite(v)) throw InvalidArgument(what + ": cannot parse '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string &text, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(trim(item));
  return parts;
}

} // namespace

std::vector<double> parse_budget_list(const std::string &text) {
  std::vector<double> out;
  for (const auto &part : split(text, ',')) {
    if (part.empty()) throw InvalidArgument("--n: empty entry in budget list");
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(parse_number(part, "--n"));
      continue;
    }
    const auto x = part.find('x', dots + 2);
    if (x == std::string::npos) throw InvalidArgument("--n: range '" + part + "' needs the form a..bxk");
    const double a = parse_number(part.substr(0, dots), "--n");
    const double b = parse_number(part.substr(dots + 2, x - dots - 2), "--n");
    const double k = parse_number(part.substr(x + 1), "--n");
    if (!(a > 0.0) || !(b >= a) || !(k > 1.0))
      throw InvalidArgument("--n: range '" + part + "' needs 0 < a <= b and factor k > 1");
    for (double v = a; v <= b * (1.0 + 1e-12); v *= k) out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("--n: empty budget list");
  return out;
}

std::vector<int> parse_int_list(const std::string &text) {
  std::vector<int> out;
  for (const auto &part : split(text, ',')) {
    const double v = parse_number(part, "--alphas");
    if (v != std::floor(v) || v < 1 || v > 1000) throw InvalidArgument("--alphas: '" + part + "' is not a positive integer");
    out.push_back(static_cast<int>(v));
  }
  if (out.empty()) throw InvalidArgument("--alphas: empty list");
  return out;
}

namespace {

std::string num(double v) { return io::format_number(v); }

// Appends config-file entries for every option not given on the command line.
void merge_config(std::vector<std::string> &args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty()) return;
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(io::read_file(path));
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgument("--config: " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw InvalidArgument("--config: top level must be an object");
  for (const auto &[key, value] : j.items()) {
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string &a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (value.is_boolean()) {
      if (value.get<bool>()) args.push_back(flag);
      continue;
    }
    std::string text;
    if (value.is_string()) {
      text = value.get<std::string>();
    } else if (value.is_number_integer()) {
      text = std::to_string(value.get<long long>());
    } else if (value.is_number()) {
      text = num(value.get<double>());
    } else if (value.is_array()) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) text += ',';
        text += value[i].is_string() ? value[i].get<std::string>()
                                     : (value[i].is_number_integer() ? std::to_string(value[i].get<long long>())
                                                                     : num(value[i].get<double>()));
      }
    } else {
      throw InvalidArgument("--config: unsupported value for '" + key + "'");
    }
    args.push_back(flag);
    args.push_back(text);
  }
}

void require(bool ok, const std::string &message) {
  if (!ok) throw InvalidArgument(message);
}

void check_theta(double theta) { require(theta > 1.0 && theta < 2.0, "--theta must lie in (1, 2), got " + num(theta)); }

int psi_order(const RunConfig &c) {
  if (c.psi >= 0) return c.psi;
  if (c.variant == "partition" || c.base == "smolyak") return 0;
  return c.alpha + 2;
}

BaseFamily make_base(const RunConfig &c) {
  const int psi = psi_order(c);
  const int d = c.d, alpha = c.alpha;
  const std::string base = c.base;
  return [=](double m) {
    QuadratureRule r;
    if (base == "smolyak")
      r = smolyak_rule(m, d, alpha);
    else if (base == "fibonacci")
      r = fibonacci_rule(fibonacci_index_for_budget(m));
    else
      r = frolov_rule(m, d);
    return psi > 0 ? change_of_variable_rule(r, psi) : r;
  };
}

void validate_build(RunConfig &c) {
  require(c.d >= 1 && c.d <= 16, "--d must lie in [1, 16], got " + std::to_string(c.d));
  require(c.alpha >= 1, "--alpha must be a positive integer, got " + std::to_string(c.alpha));
  require(c.p > 1.0 && std::isfinite(c.p), "--p must lie in (1, inf), got " + num(c.p));
  if (c.a == 0.0) c.a = c.alpha;
  require(c.a > 0.0, "--a must be positive, got " + num(c.a));
  require(c.n >= 1.0 && std::isfinite(c.n), "--n must be >= 1, got " + num(c.n));
  check_theta(c.theta);
  require(c.variant == "direct" || c.variant == "partition", "--variant must be direct or partition, got " + c.variant);
  require(c.base == "smolyak" || c.base == "fibonacci" || c.base == "frolov",
          "--base must be smolyak, fibonacci or frolov, got " + c.base);
  require(c.base != "fibonacci" || c.d == 2, "--base fibonacci needs --d 2");
  require(c.base != "frolov" || c.d <= kFrolovMaxDim, "--base frolov needs --d <= " + std::to_string(kFrolovMaxDim));
  require(c.psi >= -1 && c.psi <= 20, "--psi must lie in [0, 20], got " + std::to_string(c.psi));
  if (c.delta == 0.0) c.delta = default_delta(c.p);
  require(c.delta > 0.0, "--delta must be positive, got " + num(c.delta));
  const double theta = c.variant == "partition" ? c.theta : 1.0;
  const DeltaCheck dc = check_delta(c.delta, c.p, theta, 64, c.d);
  require(dc.admissible, "--delta " + num(c.delta) + " is not admissible for p=" + num(c.p) +
                             " (needs delta < " + num((1.0 - 1.0 / c.p) / 2.0) + ")");
}

int cmd_build(RunConfig c, std::ostream &out, std::ostream &err) {
  validate_build(c);
  RateParams params;
  params.alpha = c.alpha;
  params.p = c.p;
  params.a = c.a;
  params.d = c.d;
  const BaseFamily base = make_base(c);
  const CollageRule rule = c.variant == "direct" ? collage_direct(base, c.n, params, c.delta)
                                                  : collage_partition(base, c.n, c.theta, params, c.delta);
  const std::string prefix = c.out.empty() ? "rule" : c.out;
  io::write_file(prefix + ".json", io::to_json(rule));
  io::write_file(prefix + ".csv", io::to_csv(rule));
  io::write_file(prefix + ".schedule.json", io::to_json(*rule.schedule));
  if (rule.rule.empty()) err << "warning: n=" << num(c.n) << " gives the empty rule (integral estimate 0)\n";
  out << "nodes: " << rule.rule.size() << '\n'
      << "ball_radius: " << num(rule.ball_radius()) << '\n'
      << "weight_sum: " << num(rule.rule.weight_sum()) << '\n';
  return 0;
}

int cmd_certify(const RunConfig &c, std::ostream &out) {
  require(!c.in.empty(), "--in: a rule file is required");
  require(c.alpha >= 1, "--alpha must be a positive integer, got " + std::to_string(c.alpha));
  require(c.m >= 1, "--m must be >= 1, got " + std::to_string(c.m));
  const QuadratureRule rule = io::rule_from_json(io::read_file(c.in));
  const WceReport report = wce_spectral(rule, c.alpha, c.m);
  io::write_file((c.out.empty() ? std::string("report") : c.out) + ".json", io::to_json(report));
  out << "err_m: " << num(report.err_m) << '\n'
      << "weight_defect: " << num(report.weight_defect) << '\n'
      << "tail_estimate: " << num(report.tail_estimate) << '\n';
  return 0;
}

int cmd_sweep(const RunConfig &c, std::ostream &out, std::ostream &err) {
  const auto alphas = parse_int_list(c.alphas);
  const auto budgets = parse_budget_list(c.n_list);
  require(c.m >= 1, "--m must be >= 1, got " + std::to_string(c.m));
  require(c.psi >= -1 && c.psi <= 20, "--psi must lie in [0, 20], got " + std::to_string(c.psi));
  SweepConfig cfg;
  cfg.delta = c.delta == 0.0 ? 1.0 / 6.0 : c.delta;
  require(cfg.delta > 0.0 && cfg.delta < 0.25, "--delta must lie in (0, 1/4), got " + num(cfg.delta));
  cfg.psi_order = c.psi < 0 ? 3 : c.psi;
  cfg.base_family = c.base;
  cfg.m = c.m;
  const auto rows = convergence_sweep(alphas, budgets, cfg);

  std::map<int, double> slopes;
  for (int alpha : alphas) {
    std::vector<SweepRow> sub;
    for (const auto &r : rows)
      if (r.alpha == alpha) sub.push_back(r);
    try {
      slopes[alpha] = slope_fit(sub);
      out << "alpha=" << alpha << " slope: " << num(slopes[alpha]) << '\n';
    } catch (const InvalidArgument &e) {
      err << "alpha=" << alpha << ": no slope (" << e.what() << ")\n";
    }
  }
  for (const auto &r : rows)
    if (!r.error.empty()) err << "row alpha=" << r.alpha << " n=" << num(r.n_requested) << " failed: " << r.error << '\n';
  const std::string prefix = c.out.empty() ? "sweep" : c.out;
  io::write_file(prefix + ".csv", io::sweep_csv(rows, c.timing));
  io::write_file(prefix + ".json", io::sweep_json(rows, slopes, c.timing));
  return 0;
}

int cmd_grid(const RunConfig &c, std::ostream &out) {
  require(c.d >= 1, "--d must be >= 1, got " + std::to_string(c.d));
  require(c.set == "sg" || c.set == "hc", "--set must be sg or hc, got " + c.set);
  std::ostringstream os;
  std::size_t count = 0;
  if (c.set == "sg") {
    require(c.xi >= 0.0, "--xi must be >= 0 for sg, got " + num(c.xi));
    const auto pts = smolyak_grid(c.xi, c.d);
    for (int j = 1; j <= c.d; ++j) os << (j > 1 ? "," : "") << 'x' << j;
    os << '\n';
    const auto d = static_cast<std::size_t>(c.d);
    count = pts.size() / d;
    for (std::size_t i = 0; i < count; ++i) {
      for (std::size_t j = 0; j < d; ++j) os << (j ? "," : "") << num(pts[i * d + j]);
      os << '\n';
    }
  } else {
    require(c.xi >= 1.0, "--xi must be >= 1 for hc, got " + num(c.xi));
    const auto hc = hyperbolic_cross(c.xi, c.d);
    for (int j = 1; j <= c.d; ++j) os << (j > 1 ? "," : "") << 'k' << j;
    os << '\n';
    for (const auto &k : hc.indices) {
      for (std::size_t j = 0; j < k.dim(); ++j) os << (j ? "," : "") << k[j];
      os << '\n';
    }
    count = hc.size();
  }
  io::write_file((c.out.empty() ? std::string("grid") : c.out) + ".csv", os.str());
  out << "points: " << count << '\n';
  return 0;
}

int cmd_partition_check(const RunConfig &c, std::ostream &out) {
  require(c.d >= 1 && c.d <= 8, "--d must lie in [1, 8], got " + std::to_string(c.d));
  check_theta(c.theta);
  require(c.samples >= 1, "--samples must be >= 1, got " + std::to_string(c.samples));
  require(c.radius > 0.0 && std::isfinite(c.radius), "--radius must be positive, got " + num(c.radius));
  const UnitPartition part(c.theta, c.d);
  std::mt19937_64 rng(c.seed);
  std::ostringstream os;
  for (int j = 1; j <= c.d; ++j) os << 'x' << j << ',';
  os << "sum\n";
  double worst = 0.0;
  std::vector<double> x(static_cast<std::size_t>(c.d));
  for (int s = 0; s < c.samples; ++s) {
    for (double &v : x) v = c.radius * (2.0 * (static_cast<double>(rng() >> 11) * 0x1.0p-53) - 1.0);
    const double sum = part.sum(x);
    worst = std::max(worst, std::abs(sum - 1.0));
    for (double v : x) os << num(v) << ',';
    os << num(sum) << '\n';
  }
  io::write_file((c.out.empty() ? std::string("partition") : c.out) + ".csv", os.str());
  out << "samples: " << c.samples << '\n' << "max_deviation: " << num(worst) << '\n';
  return 0;
}

} // namespace

int run(std::vector<std::string> args, std::ostream &out, std::ostream &err) {
  configure_threads_from_env();
  RunConfig c;
  CLI::App app{"Collaged quadrature for the standard Gaussian measure"};
  app.require_subcommand(1);
  std::string config_path;

  auto common = [&](CLI::App *sub) {
    sub->add_option("--config", config_path, "JSON file with option defaults");
    sub->add_option("--out", c.out, "Output path prefix");
  };

  auto *build = app.add_subcommand("build", "Build a collaged rule");
  common(build);
  build->add_option("--d", c.d, "Dimension");
  build->add_option("--alpha", c.alpha, "Smoothness");
  build->add_option("--p", c.p, "Integrability exponent");
  build->add_option("--a", c.a, "Base-rule rate exponent (default alpha)");
  build->add_option("--n", c.n, "Total budget");
  build->add_option("--delta", c.delta, "Decay constant");
  build->add_option("--base", c.base, "smolyak | fibonacci | frolov");
  build->add_option("--psi", c.psi, "psi order (0 disables)");
  build->add_option("--variant", c.variant, "direct | partition");
  build->add_option("--theta", c.theta, "Cell dilation in (1, 2)");

  auto *certify = app.add_subcommand("certify", "Worst-case error of a d=1 rule");
  common(certify);
  certify->add_option("--in", c.in, "Rule JSON file");
  certify->add_option("--alpha", c.alpha, "Smoothness");
  certify->add_option("--m", c.m, "Spectral truncation");

  auto *sweep = app.add_subcommand("sweep", "Convergence sweep");
  common(sweep);
  sweep->add_option("--alphas", c.alphas, "Comma-separated smoothness list");
  sweep->add_option("--n", c.n_list, "Budgets: list and/or a..bxk ranges");
  sweep->add_option("--delta", c.delta, "Decay constant");
  sweep->add_option("--psi", c.psi, "psi order (0 disables)");
  sweep->add_option("--base", c.base, "smolyak | frolov");
  sweep->add_option("--m", c.m, "Spectral truncation");
  sweep->add_flag("--timing", c.timing, "Record wall times");

  auto *grid = app.add_subcommand("grid", "Dump a sparse grid or hyperbolic cross");
  common(grid);
  grid->add_option("--set", c.set, "sg | hc");
  grid->add_option("--xi", c.xi, "Level (sg) or radius (hc)");
  grid->add_option("--d", c.d, "Dimension");

  auto *pcheck = app.add_subcommand("partition-check", "Sample the partition-of-unity sum");
  common(pcheck);
  pcheck->add_option("--d", c.d, "Dimension");
  pcheck->add_option("--theta", c.theta, "Cell dilation in (1, 2)");
  pcheck->add_option("--samples", c.samples, "Sample count");
  pcheck->add_option("--seed", c.seed, "RNG seed");
  pcheck->add_option("--radius", c.radius, "Sample box half-width");

  try {
    merge_config(args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
    if (build->parsed()) return cmd_build(c, out, err);
    if (certify->parsed()) return cmd_certify(c, out);
    if (sweep->parsed()) return cmd_sweep(c, out, err);
    if (grid->parsed()) return cmd_grid(c, out);
    if (pcheck->parsed()) return cmd_partition_check(c, out);
    return 2;
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return 0;
    }
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const InvalidArgument &e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const ConstructionError &e) {
    err << "construction failed: " << e.what() << '\n';
    return 3;
  } catch (const EvaluationError &e) {
    err << "evaluation failed: " << e.what() << '\n';
    return 3;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

} // namespace gcollage::cli

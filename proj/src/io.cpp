#include "gcollage/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gcollage/error.hpp"

namespace gcollage::io {

namespace {

std::string json_number(double v) { return std::isfinite(v) ? format_number(v) : "null"; }

std::string json_string(const std::string &s) { return nlohmann::json(s).dump(); }

void write_index(std::ostringstream &os, const MultiIndex &k) {
  os << '[';
  for (std::size_t i = 0; i < k.dim(); ++i) os << (i ? "," : "") << k[i];
  os << ']';
}

void rule_fields(std::ostringstream &os, const QuadratureRule &rule) {
  os << "{\"d\":" << rule.dim() << ",\"domain\":" << json_string(to_string(rule.domain()))
     << ",\"theta\":" << json_number(rule.theta) << ",\"family\":" << json_string(rule.family)
     << ",\"m\":" << json_number(rule.requested) << ",\"nodes\":[";
  for (std::size_t i = 0; i < rule.size(); ++i) {
    os << (i ? "," : "") << '[';
    const auto x = rule.node(i);
    for (std::size_t j = 0; j < x.size(); ++j) os << (j ? "," : "") << json_number(x[j]);
    os << ']';
  }
  os << "],\"weights\":[";
  for (std::size_t i = 0; i < rule.size(); ++i) os << (i ? "," : "") << json_number(rule.weight(i));
  os << ']';
}

void csv_header(std::ostringstream &os, int d) {
  for (int j = 1; j <= d; ++j) os << 'x' << j << ',';
  os << "weight";
}

void csv_row(std::ostringstream &os, const QuadratureRule &rule, std::size_t i) {
  for (double x : rule.node(i)) os << format_number(x) << ',';
  os << format_number(rule.weight(i));
}

} // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.18g", v);
  return buf;
}

std::string to_json(const QuadratureRule &rule) {
  std::ostringstream os;
  rule_fields(os, rule);
  os << "}\n";
  return os.str();
}

std::string to_csv(const QuadratureRule &rule) {
  std::ostringstream os;
  csv_header(os, rule.dim());
  os << '\n';
  for (std::size_t i = 0; i < rule.size(); ++i) {
    csv_row(os, rule, i);
    os << '\n';
  }
  return os.str();
}

std::string to_json(const CollageRule &rule) {
  std::ostringstream os;
  rule_fields(os, rule.rule);
  os << ",\"cell\":[";
  for (std::size_t i = 0; i < rule.cell.size(); ++i) {
    if (i) os << ',';
    write_index(os, rule.cell[i]);
  }
  os << "],\"base_index\":[";
  for (std::size_t i = 0; i < rule.base_index.size(); ++i) os << (i ? "," : "") << rule.base_index[i];
  os << "]}\n";
  return os.str();
}

std::string to_csv(const CollageRule &rule) {
  std::ostringstream os;
  const int d = rule.rule.dim();
  csv_header(os, d);
  for (int j = 1; j <= d; ++j) os << ",cell_k" << j;
  os << ",base_index\n";
  for (std::size_t i = 0; i < rule.rule.size(); ++i) {
    csv_row(os, rule.rule, i);
    for (int v : rule.cell[i]) os << ',' << v;
    os << ',' << rule.base_index[i] << '\n';
  }
  return os.str();
}

std::string to_json(const BudgetSchedule &s) {
  std::ostringstream os;
  os << "{\"n\":" << json_number(s.n()) << ",\"a\":" << json_number(s.a()) << ",\"delta\":"
     << json_number(s.delta()) << ",\"d\":" << s.d() << ",\"rho\":" << json_number(s.rho())
     << ",\"xi\":" << json_number(s.xi()) << ",\"cells\":[";
  bool first = true;
  for (const auto &c : s.cells()) {
    os << (first ? "" : ",") << "{\"k\":";
    first = false;
    write_index(os, c.k);
    os << ",\"budget\":" << json_number(c.budget) << '}';
  }
  os << "]}\n";
  return os.str();
}

std::string to_json(const HermiteSeries &f) {
  std::ostringstream os;
  os << "{\"d\":" << f.dim() << ",\"coeffs\":[";
  bool first = true;
  for (const auto &[k, c] : f.coeffs()) {
    os << (first ? "" : ",") << "{\"k\":";
    first = false;
    write_index(os, k);
    os << ",\"value\":" << json_number(c) << '}';
  }
  os << "]}\n";
  return os.str();
}

std::string to_json(const WceReport &r) {
  std::ostringstream os;
  os << "{\"n\":" << r.n << ",\"m\":" << r.m << ",\"alpha\":" << r.alpha << ",\"err_m\":" << json_number(r.err_m)
     << ",\"weight_defect\":" << json_number(r.weight_defect)
     << ",\"tail_estimate\":" << json_number(r.tail_estimate) << "}\n";
  return os.str();
}

std::string sweep_csv(std::span<const SweepRow> rows, bool with_timing) {
  std::ostringstream os;
  os << "alpha,n_requested,n_actual,err_m,m,seconds,error\n";
  for (const auto &r : rows) {
    os << r.alpha << ',' << format_number(r.n_requested) << ',' << r.n_actual << ',';
    if (r.error.empty()) os << format_number(r.err_m);
    os << ',' << r.m << ',';
    if (with_timing) os << format_number(r.seconds);
    os << ',';
    if (!r.error.empty()) {
      std::string e = r.error;
      std::string quoted = "\"";
      for (char ch : e) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      os << quoted << '"';
    }
    os << '\n';
  }
  return os.str();
}

std::string sweep_json(std::span<const SweepRow> rows, const std::map<int, double> &slopes, bool with_timing) {
  std::ostringstream os;
  os << "{\"rows\":[";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    os << (i ? "," : "") << "{\"alpha\":" << r.alpha << ",\"n_requested\":" << json_number(r.n_requested)
       << ",\"n_actual\":" << r.n_actual << ",\"err_m\":" << (r.error.empty() ? json_number(r.err_m) : "null")
       << ",\"m\":" << r.m << ",\"seconds\":" << (with_timing ? json_number(r.seconds) : "null")
       << ",\"error\":" << (r.error.empty() ? "null" : json_string(r.error)) << '}';
  }
  os << "],\"slopes\":{";
  bool first = true;
  for (const auto &[alpha, s] : slopes) {
    os << (first ? "" : ",") << '"' << alpha << "\":" << json_number(s);
    first = false;
  }
  os << "}}\n";
  return os.str();
}

QuadratureRule rule_from_json(const std::string &text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgument(std::string("rule file is not valid JSON: ") + e.what());
  }
  try {
    const int d = j.at("d").get<int>();
    if (d < 1) throw InvalidArgument("rule file has d < 1");
    QuadratureRule rule(d, domain_from_string(j.at("domain").get<std::string>()));
    if (j.contains("theta") && !j["theta"].is_null()) rule.theta = j["theta"].get<double>();
    if (j.contains("family")) rule.family = j["family"].get<std::string>();
    if (j.contains("m") && !j["m"].is_null()) rule.requested = j["m"].get<double>();
    const auto &nodes = j.at("nodes");
    const auto &weights = j.at("weights");
    if (nodes.size() != weights.size()) throw InvalidArgument("rule file has mismatched nodes and weights");
    rule.reserve(nodes.size());
    std::vector<double> x(static_cast<std::size_t>(d));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (nodes[i].size() != x.size()) throw InvalidArgument("rule file node " + std::to_string(i) + " has wrong dimension");
      for (std::size_t c = 0; c < x.size(); ++c) x[c] = nodes[i][c].get<double>();
      rule.add(x, weights[i].get<double>());
    }
    return rule;
  } catch (const nlohmann::json::exception &e) {
    throw InvalidArgument(std::string("malformed rule file: ") + e.what());
  }
}

std::string read_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write " + path);
  out << content;
  if (!out) throw ConstructionError("failed writing " + path);
}

} // namespace gcollage::io

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "gcollage/collage.hpp"
#include "gcollage/core.hpp"
#include "gcollage/hermite.hpp"
#include "gcollage/rule.hpp"
#include "gcollage/wce.hpp"

namespace gcollage::io {

/// 18 significant digits. Non-finite values give "nan", "inf", "-inf".
std::string format_number(double v);

std::string to_json(const QuadratureRule &rule);
std::string to_csv(const QuadratureRule &rule);

/// QuadratureRule layout plus "cell" and "base_index" arrays.
std::string to_json(const CollageRule &rule);
/// Columns x1..xd,weight,cell_k1..cell_kd,base_index.
std::string to_csv(const CollageRule &rule);

std::string to_json(const BudgetSchedule &schedule);
std::string to_json(const HermiteSeries &series);
/// Non-finite fields are written as null.
std::string to_json(const WceReport &report);

/// Columns alpha,n_requested,n_actual,err_m,m,seconds,error. The seconds
/// column stays empty unless with_timing is set, so repeated runs match byte
/// for byte.
std::string sweep_csv(std::span<const SweepRow> rows, bool with_timing);
std::string sweep_json(std::span<const SweepRow> rows, const std::map<int, double> &slopes, bool with_timing);

/// Parses a rule written by to_json (either plain or collage layout).
QuadratureRule rule_from_json(const std::string &text);

std::string read_file(const std::string &path);
void write_file(const std::string &path, const std::string &content);

} // namespace gcollage::io

#pragma once

/// \file
/// Monitor CSV files. Columns:
///   t, kinetic, frank, defect_half_mass, total, dissipation, cross_term,
///   energy_residual, E_rel, W_rel, K, gronwall_bound, margin
/// Header row first, one row per monitor sample, every value printed with 17
/// significant digits (non-finite values as nan / inf / -inf) so that reading
/// the file back reproduces the doubles exactly.

#include <string>
#include <vector>

#include "nematic/compare.hpp"

namespace nematic {

extern const std::vector<std::string> kMonitorColumns;

std::string format_double(double x);
double parse_double(const std::string& s);

/// Rows of a plain simulation: relative columns are nan.
std::vector<ComparisonRow> monitor_rows(const Trajectory& tr);

std::string monitor_csv(const std::vector<ComparisonRow>& rows);
void write_monitor_csv(const std::string& path, const std::vector<ComparisonRow>& rows);
/// Throws ValidationError for a missing file, wrong header or malformed row.
std::vector<ComparisonRow> read_monitor_csv(const std::string& path);
std::vector<ComparisonRow> parse_monitor_csv(const std::string& text);

}  // namespace nematic

#include "nematic/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nematic {

const std::vector<std::string> kMonitorColumns = {
    "t", "kinetic", "frank", "defect_half_mass", "total", "dissipation", "cross_term",
    "energy_residual", "E_rel", "W_rel", "K", "gronwall_bound", "margin"};

namespace {

double* column(ComparisonRow& r, std::size_t k) {
  double* cols[] = {&r.t, &r.kinetic, &r.frank, &r.defect_half_mass, &r.total,
                    &r.dissipation, &r.cross_term, &r.energy_residual, &r.E_rel, &r.W_rel,
                    &r.K, &r.gronwall_bound, &r.margin};
  return cols[k];
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) throw ValidationError("malformed number '" + s + "' in CSV");
  return x;
}

std::vector<ComparisonRow> monitor_rows(const Trajectory& tr) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<ComparisonRow> rows;
  for (const MonitorSample& m : tr.monitor) {
    ComparisonRow r;
    r.t = m.t;
    r.kinetic = m.kinetic;
    r.frank = m.frank;
    r.total = m.total;
    r.dissipation = m.dissipation;
    r.cross_term = m.cross;
    r.energy_residual = m.energy_residual;
    r.E_rel = r.W_rel = r.K = r.gronwall_bound = r.margin = nan;
    rows.push_back(r);
  }
  return rows;
}

std::string monitor_csv(const std::vector<ComparisonRow>& rows) {
  std::string out;
  for (std::size_t k = 0; k < kMonitorColumns.size(); ++k)
    out += (k ? "," : "") + kMonitorColumns[k];
  out += '\n';
  for (ComparisonRow r : rows) {
    for (std::size_t k = 0; k < kMonitorColumns.size(); ++k)
      out += (k ? "," : "") + format_double(*column(r, k));
    out += '\n';
  }
  return out;
}

void write_monitor_csv(const std::string& path, const std::vector<ComparisonRow>& rows) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + path + "'");
  f << monitor_csv(rows);
  if (!f) throw ValidationError("write failed for '" + path + "'");
}

std::vector<ComparisonRow> parse_monitor_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("empty monitor CSV");
  std::string expect;
  for (std::size_t k = 0; k < kMonitorColumns.size(); ++k) expect += (k ? "," : "") + kMonitorColumns[k];
  if (line != expect) throw ValidationError("monitor CSV header mismatch: '" + line + "'");
  std::vector<ComparisonRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    ComparisonRow r;
    std::size_t k = 0;
    while (std::getline(ls, cell, ',')) {
      if (k >= kMonitorColumns.size()) throw ValidationError("too many columns in CSV row");
      *column(r, k++) = parse_double(cell);
    }
    if (k != kMonitorColumns.size()) throw ValidationError("too few columns in CSV row");
    rows.push_back(r);
  }
  return rows;
}

std::vector<ComparisonRow> read_monitor_csv(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot read '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_monitor_csv(ss.str());
}

}  // namespace nematic

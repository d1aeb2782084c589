#include <cmath>
#include <cstring>
#include <limits>

#include "doctest.h"
#include "nematic/io.hpp"
#include "nematic/verify.hpp"
#include "random_inputs.hpp"

using namespace nematic;

namespace {

bool same_bits(double a, double b) {
  if (std::isnan(a) && std::isnan(b)) return true;
  return std::memcmp(&a, &b, sizeof a) == 0;
}

}  // namespace

TEST_CASE("CSV numbers round trip exactly") {
  testing_support::Rng rng(31);
  std::vector<ComparisonRow> rows;
  for (int n = 0; n < 200; ++n) {
    ComparisonRow r;
    double* p = &r.t;
    for (int k = 0; k < 13; ++k) p[k] = rng.scalar() * std::pow(10.0, 40 * rng.scalar());
    rows.push_back(r);
  }
  rows[0].t = std::numeric_limits<double>::denorm_min();
  rows[0].kinetic = std::numeric_limits<double>::max();
  rows[0].frank = -0.0;
  rows[0].E_rel = std::numeric_limits<double>::quiet_NaN();
  rows[0].K = std::numeric_limits<double>::infinity();
  rows[0].margin = 0.1;
  const std::vector<ComparisonRow> back = parse_monitor_csv(monitor_csv(rows));
  REQUIRE(back.size() == rows.size());
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const double* a = &rows[n].t;
    const double* b = &back[n].t;
    for (int k = 0; k < 13; ++k) CHECK(same_bits(a[k], b[k]));
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("CSV schema") {
  const std::string csv = monitor_csv({});
  CHECK(csv ==
        "t,kinetic,frank,defect_half_mass,total,dissipation,cross_term,energy_residual,E_rel,W_rel,"
        "K,gronwall_bound,margin\n");
  CHECK_THROWS_AS(parse_monitor_csv("t,kinetic\n"), ValidationError);
  CHECK_THROWS_AS(parse_monitor_csv(csv + "1,2,3\n"), ValidationError);
  CHECK_THROWS_AS(parse_monitor_csv(csv + "1,2,3,4,5,6,7,8,9,10,11,12,x\n"), ValidationError);
  CHECK_THROWS_AS(read_monitor_csv("/nonexistent/monitor.csv"), ValidationError);

  Trajectory tr;
  tr.monitor.resize(2);
  tr.monitor[1].t = 0.5;
  tr.monitor[1].total = 3.0;
  const std::vector<ComparisonRow> rows = monitor_rows(tr);
  CHECK(rows[1].total == 3.0);
  CHECK(std::isnan(rows[1].E_rel));
  CHECK(std::isnan(rows[1].margin));
}

TEST_CASE("verification suite") {
  const VerifyReport ok = run_verify();
  CHECK(ok.pass());
  const auto groups = ok.groups();
  CHECK(groups.size() == 4);
  CHECK(groups.at("tensor_kernel").checks >= 2000);

  VerifyOptions opt;
  opt.inject_levi_civita_flip = true;
  const VerifyReport bad = run_verify(opt);
  CHECK_FALSE(bad.pass());
  const auto failed = bad.failed();
  CHECK(std::find(failed.begin(), failed.end(), "tensor_kernel/theta_levi_civita_identity") !=
        failed.end());
  CHECK(std::find(failed.begin(), failed.end(), "tensor_kernel/levi_civita_product_identity") ==
        failed.end());
}

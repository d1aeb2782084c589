#pragma once

/// \file
/// Self-verification suite: algebraic and discrete identities of the tensor
/// kernel, the Oseen–Frank energy, the Leslie stress and the field operators,
/// each checked against a nested-loop or finite-difference reference.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nematic {

struct PropertyResult {
  std::string group;
  std::string name;
  int checks = 0;
  int failures = 0;
  double max_error = 0.0;
  double tolerance = 0.0;
  bool pass() const { return failures == 0; }
};

struct GroupCount {
  int properties = 0;
  int passed = 0;
  int checks = 0;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  bool pass() const;
  std::map<std::string, GroupCount> groups() const;
  std::vector<std::string> failed() const;
};

struct VerifyOptions {
  std::uint64_t seed = 1;
  /// Flips the Levi–Civita block of every Θ the suite builds (mutation test).
  bool inject_levi_civita_flip = false;
};

VerifyReport run_verify(const VerifyOptions& opt = {});

}  // namespace nematic

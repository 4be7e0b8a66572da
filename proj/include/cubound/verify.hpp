#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cubound/kernel.hpp"

namespace cubound {

enum class VerifyLevel { Quick, Full };

struct VerifyOptions {
  VerifyLevel level = VerifyLevel::Quick;
  /// Replacement kernel formulas, for checking that the suite catches a
  /// broken kernel. Unset means the real formulas.
  std::optional<KernelFormulas> lb_formulas;
  std::optional<KernelFormulas> ub_formulas;
  std::uint64_t seed = 20240521;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Cross-checks: oracle equivalence, capped-sketch enumeration, kernel soundness, closed form vs chain,
/// monotone squeeze, pathwise sandwich, series identities. Full adds the
/// d = m - 1 simulation checks.
VerifyReport run_verification(const VerifyOptions& options = {});

}  // namespace cubound

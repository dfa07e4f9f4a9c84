#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fdnl {

// One scalar check or estimate, with enough provenance to render a
// verdict line and to serialize into report JSON.
struct ObservableReport {
  std::string name;
  double estimate = 0.0;
  double std_error = 0.0;
  std::uint64_t samples = 0;
  std::optional<double> target;     // reference value when one exists
  std::optional<double> tolerance;  // |estimate - target| budget (or one-sided)
  std::optional<bool> pass;
  bool one_sided = false;  // pass criterion: estimate <= target + tolerance
  // Ordered free-form diagnostics (kept ordered for stable serialization).
  std::vector<std::pair<std::string, double>> extra;

  void note(const std::string& key, double value) { extra.emplace_back(key, value); }
  // Evaluates `pass` from target/tolerance (two-sided unless one_sided).
  void judge() {
    if (!target || !tolerance) return;
    pass = one_sided ? estimate <= *target + *tolerance
                     : std::abs(estimate - *target) <= *tolerance;
  }
};

}  // namespace fdnl

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fmwave/constants.hpp"
#include "fmwave/potential.hpp"

namespace fmwave {

enum class Verdict { Pass, Fail, Inconclusive };

const char* to_string(Verdict v);

/// One audited predicate with its measured witness.
struct AuditCheck {
  std::string name;
  Verdict verdict = Verdict::Inconclusive;
  double measured = 0.0;            // fitted constant or worst margin
  std::vector<double> witness;      // worst sampled point (empty if none)
  std::string note;
};

/// Numerical certification of the structural assumptions for one potential,
/// plus every named constant the other modules consume.
struct AuditReport {
  std::vector<AuditCheck> checks;
  AuditedConstants constants;
  int samples = 0;
  std::uint64_t seed = 0;
  bool passed = false;          // no Fail verdict among gating checks
  bool inconclusive = false;    // at least one Inconclusive gating check

  const AuditCheck* find(const std::string& name) const;
};

/// Samples the potential's assumption set: global lower bound, minima levels,
/// coercivity around both minima sets (with stability under sample doubling),
/// radial growth, sublevel convexity by midpoints, segment monotonicity, and
/// the boundary-condition inequality. Computes all audited constants.
AuditReport audit(const PotentialModel& potential, int samples, std::uint64_t seed);

/// Re-derives the formula-based constants from audited measurements.
/// Throws naming the field if a required input is missing or non-finite.
AuditedConstants derive_constants(const PotentialModel& potential, AuditedConstants measured);

}  // namespace fmwave

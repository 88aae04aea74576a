#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cjsr/dualgrowth.hpp"
#include "cjsr/sos.hpp"
#include "cjsr/system.hpp"

namespace cjsr {

struct BoundsOptions {
  std::size_t degree_max = 4;
  double tol = 1e-6;
  std::size_t cycle_kmax = 12;
  std::vector<std::size_t> prodl_l = {1, 3};
  std::uint64_t seed = 1;
};

struct DegreeRow {
  std::size_t d = 1;
  std::optional<double> ub;
  std::optional<double> lb_mix;
  std::optional<double> lb_pruned;
  std::optional<double> lb_cycle;
};

struct LowerBound {
  double value = 0.0;
  std::string provenance;  // mix-corollary | cycle | atom-extraction | algorithm-1 | pruned-mix
  std::size_t degree = 0;  // 0 when degree-independent
};

/// Per-degree upper bounds, every lower bound with its provenance, and the
/// final bracket.
struct BoundsReport {
  std::vector<DegreeRow> rows;
  std::vector<LowerBound> lower_bounds;
  double best_lower = 0.0;
  double best_upper = 0.0;      // min over all valid upper bounds
  double best_sos_upper = 0.0;  // min over the per-degree SOS bounds
  double brute_upper = 0.0;
  std::optional<CycleCertificate> best_cycle;
  std::vector<std::string> notes;
  std::vector<std::string> warnings;
};

BoundsReport run_bounds(const ConstrainedSystem& sys, const BoundsOptions& opts);

void write_csv(const BoundsReport& report, std::ostream& os);
void write_report(const BoundsReport& report, const ConstrainedSystem& sys, std::ostream& os);

}  // namespace cjsr

#pragma once

#include <cstddef>
#include <span>

namespace kgqr::metrics {

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double p_value = 1.0;    // two-sided
  std::size_t n = 0;       // pairs with nonzero difference
  bool exact = false;
  bool degenerate = false;  // every difference was zero
};

// Paired two-sided signed-rank test on a − b. Zero differences are dropped
// and tied magnitudes get average ranks. Up to 25 nonzero pairs the null
// distribution is enumerated exactly; above that a tie-corrected normal
// approximation with continuity correction is used.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b);

}  // namespace kgqr::metrics

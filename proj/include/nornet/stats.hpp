#pragma once

#include <cstddef>
#include <span>

namespace nornet {

inline constexpr double kLogOddsEpsilon = 1e-9;

// ln(p'/(1-p')) with p' clamped to [1e-9, 1-1e-9].
double log_odds(double p);

struct PairedT {
  double t = 0.0;
  std::size_t df = 0;
};

// Paired t statistic on d = a - b: mean(d) / (sd(d) / sqrt(n)), sample sd.
// Throws Error(Domain) on mismatched lengths or n < 2, and
// Error(DegenerateVariance) when every difference equals the same nonzero
// value. All-zero differences give t = 0.
PairedT paired_t(std::span<const double> a, std::span<const double> b);

// Two-sided Student-t critical value: |t| above it rejects at `confidence`.
double t_critical(std::size_t df, double confidence);

bool significant(const PairedT& result, double confidence);

}  // namespace nornet

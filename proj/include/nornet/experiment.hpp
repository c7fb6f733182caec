#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "nornet/inference.hpp"
#include "nornet/network.hpp"

namespace nornet {

struct TestCase {
  std::size_t case_id = 0;
  Assignment true_diseases;
  std::array<Assignment, kPhaseCount> findings_by_phase;  // index 0 is phase 1
};

// Union of the finding buckets of phases 1..phase.
Assignment cumulative_evidence(const TestCase& c, int phase);

// Case i is drawn from a SplitMix64 stream seeded with seed + i. With
// require_positive, worlds without any present disease are redrawn from the
// same stream up to max_retries times before Error(Exhaustion).
std::vector<TestCase> generate_cases(const Network& net, std::size_t n_cases, std::uint64_t seed,
                                     bool require_positive, std::size_t max_retries = 10000);

struct ExperimentOptions {
  std::size_t jobs = 0;  // 0 = hardware concurrency
  bool require_positive = true;
  InferenceOptions inference;
};

struct SummaryRow {
  int phase = 1;
  NodeId disease;  // "*" pools every disease of the phase
  std::size_t n_cases = 0;  // cases with the disease present
  std::optional<double> mean_tp_two_level;
  std::optional<double> mean_tp_three_level;
  std::optional<double> mean_fp_two_level;
  std::optional<double> mean_fp_three_level;
  std::optional<double> t_stat;  // paired t on log-odds, two-level minus three-level
  std::size_t df = 0;
  bool sig95 = false;
  bool sig975 = false;
};

// Per-disease posteriors of one case under the evidence of each phase.
struct CaseResult {
  std::size_t case_id = 0;
  std::array<std::map<NodeId, double>, kPhaseCount> three_level;
  std::array<std::map<NodeId, double>, kPhaseCount> two_level;
};

inline constexpr const char* kPooledDisease = "*";

// Paired posteriors closer than this are round-off of the same value; the
// two-level one is snapped to the three-level one before the log-odds t test
// (log-odds amplifies 1e-16 noise near 0 and 1 into spurious t statistics).
inline constexpr double kPosteriorTieTolerance = 1e-12;

struct ExperimentSummary {
  std::size_t n_cases = 0;
  std::size_t param_count_original = 0;
  std::size_t param_count_reduced = 0;
  std::vector<SummaryRow> rows;  // ordered by (phase, disease)
  std::vector<CaseResult> cases;  // ordered by case_id
  // Mean |P_three - P_two| over every (case, phase, disease) posterior.
  double mean_abs_difference = 0.0;
  std::array<double, kPhaseCount> mean_abs_difference_by_phase{};
};

// Reduces `full`, samples cases from `full`, and compares per-phase
// posteriors of both networks. Results do not depend on options.jobs.
ExperimentSummary run_experiment(const Network& full, std::size_t n_cases, std::uint64_t seed,
                                 const ExperimentOptions& options = {});

}  // namespace nornet

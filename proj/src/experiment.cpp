#include "nornet/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "nornet/error.hpp"
#include "nornet/reduction.hpp"
#include "nornet/rng.hpp"
#include "nornet/sampling.hpp"
#include "nornet/stats.hpp"

namespace nornet {

Assignment cumulative_evidence(const TestCase& c, int phase) {
  if (phase < 1 || phase > kPhaseCount) {
    throw Error(ErrorClass::Domain, "phase " + std::to_string(phase) + " outside 1..5");
  }
  Assignment out;
  for (int k = 0; k < phase; ++k) out.insert(c.findings_by_phase[k].begin(), c.findings_by_phase[k].end());
  return out;
}

std::vector<TestCase> generate_cases(const Network& net, std::size_t n_cases, std::uint64_t seed,
                                     bool require_positive, std::size_t max_retries) {
  net.require_valid();
  if (n_cases == 0) throw Error(ErrorClass::Domain, "n_cases must be at least 1");
  const auto diseases = net.indices_of_kind(NodeKind::Disease);
  if (require_positive &&
      std::none_of(diseases.begin(), diseases.end(),
                   [&](std::size_t d) { return *net.node(d).prior > 0.0; })) {
    throw Error(ErrorClass::Exhaustion, "no disease has a positive prior; cannot draw positive cases");
  }

  std::vector<TestCase> cases;
  cases.reserve(n_cases);
  for (std::size_t id = 0; id < n_cases; ++id) {
    SplitMix64 rng(seed + id);
    std::vector<bool> world = sample_world_indexed(net, rng);
    std::size_t attempts = 1;
    auto positive = [&] {
      return std::any_of(diseases.begin(), diseases.end(), [&](std::size_t d) { return world[d]; });
    };
    while (require_positive && !positive()) {
      if (attempts > max_retries) {
        throw Error(ErrorClass::Exhaustion, "case " + std::to_string(id) + ": no positive world after " +
                                                std::to_string(max_retries) + " retries");
      }
      world = sample_world_indexed(net, rng);
      ++attempts;
    }
    TestCase c;
    c.case_id = id;
    for (std::size_t i = 0; i < net.size(); ++i) {
      const Node& node = net.node(i);
      if (node.kind == NodeKind::Disease) {
        c.true_diseases.emplace(node.id, world[i]);
      } else if (node.kind == NodeKind::Finding) {
        c.findings_by_phase[*node.phase - 1].emplace(node.id, world[i]);
      }
    }
    cases.push_back(std::move(c));
  }
  return cases;
}

namespace {

CaseResult evaluate_case(const Network& full, const Network& reduced, const TestCase& c,
                         const InferenceOptions& options) {
  CaseResult r;
  r.case_id = c.case_id;
  for (int phase = 1; phase <= kPhaseCount; ++phase) {
    const Assignment evidence = cumulative_evidence(c, phase);
    r.three_level[phase - 1] = posterior(full, evidence, options).posterior;
    r.two_level[phase - 1] = posterior(reduced, evidence, options).posterior;
  }
  return r;
}

std::vector<CaseResult> evaluate_all(const Network& full, const Network& reduced,
                                     const std::vector<TestCase>& cases, const ExperimentOptions& options) {
  std::vector<CaseResult> results(cases.size());
  std::size_t jobs = options.jobs == 0 ? std::max(1U, std::thread::hardware_concurrency()) : options.jobs;
  jobs = std::min(jobs, cases.size());

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < cases.size(); i = next++) {
      try {
        results[i] = evaluate_case(full, reduced, cases[i], options.inference);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = cases.size();
      }
    }
  };
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

std::optional<double> mean_of(const std::vector<double>& xs) {
  if (xs.empty()) return std::nullopt;
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

void fill_t(SummaryRow& row, const std::vector<double>& two, const std::vector<double>& three) {
  if (two.size() < 2) return;
  std::vector<double> a(two.size()), b(three.size());
  for (std::size_t i = 0; i < two.size(); ++i) {
    const bool tie = std::fabs(two[i] - three[i]) <= kPosteriorTieTolerance;
    a[i] = log_odds(tie ? three[i] : two[i]);
    b[i] = log_odds(three[i]);
  }
  PairedT t;
  try {
    t = paired_t(a, b);
  } catch (const Error& e) {
    if (e.error_class() != ErrorClass::DegenerateVariance) throw;
    double mean = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) mean += a[i] - b[i];
    row.t_stat = std::copysign(std::numeric_limits<double>::infinity(), mean);
    row.df = a.size() - 1;
    row.sig95 = row.sig975 = true;
    return;
  }
  row.t_stat = t.t;
  row.df = t.df;
  row.sig95 = significant(t, 0.95);
  row.sig975 = significant(t, 0.975);
}

struct Samples {
  std::vector<double> tp_two, tp_three, fp_two, fp_three;
};

SummaryRow summarize(int phase, const NodeId& disease, const Samples& s) {
  SummaryRow row;
  row.phase = phase;
  row.disease = disease;
  row.n_cases = s.tp_two.size();
  row.mean_tp_two_level = mean_of(s.tp_two);
  row.mean_tp_three_level = mean_of(s.tp_three);
  row.mean_fp_two_level = mean_of(s.fp_two);
  row.mean_fp_three_level = mean_of(s.fp_three);
  fill_t(row, s.tp_two, s.tp_three);
  return row;
}

}  // namespace

ExperimentSummary run_experiment(const Network& full, std::size_t n_cases, std::uint64_t seed,
                                 const ExperimentOptions& options) {
  const ReductionReport report = level_reduce(full);
  const std::vector<TestCase> cases = generate_cases(full, n_cases, seed, options.require_positive);

  ExperimentSummary summary;
  summary.n_cases = cases.size();
  summary.param_count_original = report.param_count_original;
  summary.param_count_reduced = report.param_count_reduced;
  summary.cases = evaluate_all(full, report.reduced, cases, options);

  std::vector<NodeId> diseases;
  for (std::size_t d : full.indices_of_kind(NodeKind::Disease)) diseases.push_back(full.node(d).id);

  double total_abs = 0.0;
  std::size_t total_count = 0;
  for (int phase = 1; phase <= kPhaseCount; ++phase) {
    Samples pooled;
    std::vector<SummaryRow> rows;
    double phase_abs = 0.0;
    std::size_t phase_count = 0;
    for (const NodeId& d : diseases) {
      Samples s;
      for (std::size_t i = 0; i < cases.size(); ++i) {
        const double three = summary.cases[i].three_level[phase - 1].at(d);
        const double two = summary.cases[i].two_level[phase - 1].at(d);
        phase_abs += std::fabs(three - two);
        ++phase_count;
        if (cases[i].true_diseases.at(d)) {
          s.tp_two.push_back(two);
          s.tp_three.push_back(three);
        } else {
          s.fp_two.push_back(two);
          s.fp_three.push_back(three);
        }
      }
      pooled.tp_two.insert(pooled.tp_two.end(), s.tp_two.begin(), s.tp_two.end());
      pooled.tp_three.insert(pooled.tp_three.end(), s.tp_three.begin(), s.tp_three.end());
      pooled.fp_two.insert(pooled.fp_two.end(), s.fp_two.begin(), s.fp_two.end());
      pooled.fp_three.insert(pooled.fp_three.end(), s.fp_three.begin(), s.fp_three.end());
      rows.push_back(summarize(phase, d, s));
    }
    rows.push_back(summarize(phase, kPooledDisease, pooled));
    std::sort(rows.begin(), rows.end(),
              [](const SummaryRow& a, const SummaryRow& b) { return a.disease < b.disease; });
    summary.rows.insert(summary.rows.end(), rows.begin(), rows.end());
    summary.mean_abs_difference_by_phase[phase - 1] =
        phase_count ? phase_abs / static_cast<double>(phase_count) : 0.0;
    total_abs += phase_abs;
    total_count += phase_count;
  }
  summary.mean_abs_difference = total_count ? total_abs / static_cast<double>(total_count) : 0.0;
  return summary;
}

}  // namespace nornet

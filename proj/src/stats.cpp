#include "nornet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/math/distributions/students_t.hpp>

#include "nornet/error.hpp"

namespace nornet {

double log_odds(double p) {
  const double c = std::clamp(p, kLogOddsEpsilon, 1.0 - kLogOddsEpsilon);
  return std::log(c / (1.0 - c));
}

PairedT paired_t(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw Error(ErrorClass::Domain, "paired samples differ in length (" + std::to_string(a.size()) +
                                        " vs " + std::to_string(b.size()) + ")");
  }
  const std::size_t n = a.size();
  if (n < 2) throw Error(ErrorClass::Domain, "paired t needs at least two pairs");

  double mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) mean += a[i] - b[i];
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dev = (a[i] - b[i]) - mean;
    ss += dev * dev;
  }
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));

  PairedT r;
  r.df = n - 1;
  if (sd == 0.0) {
    if (mean != 0.0) {
      throw Error(ErrorClass::DegenerateVariance, "paired differences are constant and nonzero");
    }
    return r;
  }
  r.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  return r;
}

double t_critical(std::size_t df, double confidence) {
  if (df == 0) throw Error(ErrorClass::Domain, "t critical value needs df >= 1");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw Error(ErrorClass::Domain, "confidence must lie in (0,1)");
  }
  boost::math::students_t_distribution<double> dist(static_cast<double>(df));
  return boost::math::quantile(dist, 1.0 - (1.0 - confidence) / 2.0);
}

bool significant(const PairedT& result, double confidence) {
  if (result.df == 0) return false;
  return std::fabs(result.t) > t_critical(result.df, confidence);
}

}  // namespace nornet

#include "pbn/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

namespace pbn {

double mean(std::span<const double> values) {
  if (values.empty()) throw std::invalid_argument("mean of an empty sample");
  double sum = 0.0;
  for (const double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

double sample_stddev(std::span<const double> values) {
  if (values.size() < 2) return 0.0;
  const double m = mean(values);
  double ss = 0.0;
  for (const double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

double welch_t_test(std::span<const double> a, std::span<const double> b) {
  if (a.size() < 2 || b.size() < 2) throw std::invalid_argument("welch_t_test needs >= 2 values per sample");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double ma = mean(a);
  const double mb = mean(b);
  const double va = sample_stddev(a) * sample_stddev(a) / na;
  const double vb = sample_stddev(b) * sample_stddev(b) / nb;
  const double se2 = va + vb;
  if (se2 == 0.0) return ma == mb ? 1.0 : 0.0;
  const double t = (ma - mb) / std::sqrt(se2);
  const double df = se2 * se2 / (va * va / (na - 1.0) + vb * vb / (nb - 1.0));
  const boost::math::students_t dist(df);
  return std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
}

std::vector<bool> significance_flags(const std::vector<std::vector<double>>& columns, double alpha,
                                     std::optional<std::size_t> reference) {
  std::vector<bool> flags(columns.size(), false);
  if (columns.empty()) return flags;
  std::size_t anchor = 0;
  if (reference) {
    if (*reference >= columns.size()) throw std::out_of_range("reference column out of range");
    anchor = *reference;
  } else {
    for (std::size_t i = 1; i < columns.size(); ++i) {
      if (mean(columns[i]) > mean(columns[anchor])) anchor = i;
    }
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    flags[i] = i == anchor || welch_t_test(columns[i], columns[anchor]) >= alpha;
  }
  return flags;
}

}  // namespace pbn

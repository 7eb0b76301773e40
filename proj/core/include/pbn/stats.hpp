#pragma once

#include <optional>
#include <span>
#include <vector>

namespace pbn {

double mean(std::span<const double> values);

/// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
double sample_stddev(std::span<const double> values);

/// Two-sided Welch (unequal variance) t-test p-value. Each sample needs at
/// least two values. When both samples have zero variance the result is 1
/// for equal means and 0 otherwise.
double welch_t_test(std::span<const double> a, std::span<const double> b);

/// Best-or-equivalent flags for a set of result columns: the column with
/// the highest mean is flagged, together with every column whose Welch
/// p-value against it is at least alpha. With a reference column the
/// comparison is made against that column instead (and it is always
/// flagged).
std::vector<bool> significance_flags(const std::vector<std::vector<double>>& columns,
                                     double alpha = 0.05,
                                     std::optional<std::size_t> reference = std::nullopt);

}  // namespace pbn

#pragma once

#include <span>

namespace sitewatch {

double mean(std::span<const double> values);
// Sample standard deviation (n - 1 denominator); 0 for fewer than two values.
double sample_stddev(std::span<const double> values);
// Standard error of the mean.
double standard_error(std::span<const double> values);

struct PairedTTest {
  double mean_difference = 0.0;  // mean of a - b
  double t = 0.0;
  double dof = 0.0;
  double p_value = 1.0;  // two-tailed
};

// Paired two-tailed t-test on a - b. Requires equal lengths and at least two
// pairs. Identical samples give p = 1; a constant nonzero difference gives p = 0.
PairedTTest paired_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace sitewatch

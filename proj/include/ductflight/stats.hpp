#pragma once

#include <vector>

namespace ductflight {

// Sample statistics used by the evaluation tools. Quantiles follow the
// linear-interpolation convention (R type 7): for sorted x of size n the
// q-quantile sits at index h = q*(n-1), interpolated between floor(h) and
// ceil(h).
double quantile(std::vector<double> values, double q);
double median(std::vector<double> values);
double iqr(std::vector<double> values);

double mean(const std::vector<double>& values);
// Unbiased sample variance (divides by n-1); requires at least two samples.
double variance(const std::vector<double>& values);

// Two-sided 95% acceptance band for a chi-square variable with 2 degrees of
// freedom, i.e. the 2.5% and 97.5% quantiles of chi2(2).
inline constexpr double kChi2Dof2Lower = 0.0506356;
inline constexpr double kChi2Dof2Upper = 7.3777589;

}  // namespace ductflight

#pragma once

/**
 * @file stats.hpp
 * @brief Summary statistics and goodness-of-fit tests.
 */

#include <cstddef>
#include <span>
#include <vector>

namespace lep::stats {

double mean(std::span<const double> x);
/// Unbiased sample variance.
double variance(std::span<const double> x);
/// Unbiased sample covariance.
double covariance(std::span<const double> x, std::span<const double> y);
double median(std::vector<double> x);

double normal_cdf(double x, double mean = 0.0, double sd = 1.0);

/// sup |F_n - Phi((. - mean)/sd)|.
double ks_normal(std::vector<double> x, double mean, double sd);
/// sup |F_n - G_m|.
double ks_two_sample(std::vector<double> x, std::vector<double> y);
/// Asymptotic P(sqrt(n_eff) D > d) from the Kolmogorov distribution.
double kolmogorov_pvalue(double d, double n_eff);

struct ChiSquare {
  double statistic{0.0};
  std::size_t df{0};
  double p_value{1.0};
};

/// Pearson chi-square of observed counts against expected counts. Adjacent
/// cells are pooled left to right until each expected count is at least
/// `min_expected`. `fitted` parameters are subtracted from the degrees of
/// freedom.
ChiSquare chi_square_gof(std::span<const double> observed, std::span<const double> expected,
                         double min_expected = 5.0, std::size_t fitted = 0);

}  // namespace lep::stats

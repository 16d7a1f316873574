#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "breeder/cppn/genome_json.hpp"
#include "breeder/neat/mutation.hpp"

namespace breeder {

enum class TestKind { Wilcoxon, Pearson };

std::string_view to_string(TestKind kind);

struct TestReport {
  TestKind test = TestKind::Wilcoxon;
  double statistic = 0.0;  // W = min(W+, W-) or t
  double p_value = 1.0;    // two-sided
  std::size_t n = 0;
  std::optional<double> r;                // pearson only
  std::optional<std::size_t> n_nonzero;   // wilcoxon only
  bool exact = false;                     // wilcoxon: exact null distribution used
};

Json to_json(const TestReport& report);

constexpr std::size_t kWilcoxonExactLimit = 25;

enum class WilcoxonMethod { Auto, Exact, Normal };

// One-sample two-sided signed-rank test of symmetry about zero. Exact zeros are
// dropped; ties get average ranks. Auto uses the exact null distribution up to
// kWilcoxonExactLimit nonzero values and the tie- and continuity-corrected
// normal approximation above. Throws Error(AllZeros) if nothing is left.
TestReport wilcoxon_signed_rank(const std::vector<double>& values, WilcoxonMethod method = WilcoxonMethod::Auto);

// Product-moment correlation with a two-sided t-test on n - 2 degrees of
// freedom. Throws Error(DegenerateSample) for n < 3, unequal lengths or zero
// variance.
TestReport pearson(const std::vector<double>& x, const std::vector<double>& y);

enum class Statistic { Mean, Median };

std::string_view to_string(Statistic s);
double compute(Statistic s, std::vector<double> values);

constexpr int kBootstrapResamples = 5000;
constexpr double kBootstrapLevel = 0.95;

struct BootstrapCI {
  Statistic statistic = Statistic::Mean;
  double estimate = 0.0;  // statistic of the original sample
  double lo = 0.0;
  double hi = 0.0;
  int resamples = kBootstrapResamples;
  double level = kBootstrapLevel;
};

Json to_json(const BootstrapCI& ci);

// Percentile bootstrap. Throws Error(TooSmall) for fewer than two values.
BootstrapCI bootstrap_ci(const std::vector<double>& values, Statistic statistic, Rng& rng,
                         int resamples = kBootstrapResamples, double level = kBootstrapLevel);

// Linearly interpolated quantile of sorted data, q in [0, 1].
double quantile_sorted(const std::vector<double>& sorted, double q);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

// Least squares y = slope * x + intercept; nullopt when x has zero variance.
std::optional<LineFit> fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace breeder

#include "breeder/corpus/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <boost/math/distributions/students_t.hpp>

#include "breeder/error.hpp"

namespace breeder {

namespace {

Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

// Underflowed tail probabilities are reported as the smallest positive double.
double floor_p(double p) { return p > 0.0 ? std::min(p, 1.0) : std::numeric_limits<double>::denorm_min(); }

}  // namespace

std::string_view to_string(TestKind kind) { return kind == TestKind::Wilcoxon ? "wilcoxon" : "pearson"; }

std::string_view to_string(Statistic s) { return s == Statistic::Mean ? "mean" : "median"; }

Json to_json(const TestReport& report) {
  Json extras = Json::object();
  if (report.r) extras["r"] = finite_or_null(*report.r);
  if (report.n_nonzero) {
    extras["n_nonzero"] = *report.n_nonzero;
    extras["exact"] = report.exact;
  }
  return Json{{"test", std::string(to_string(report.test))},
              {"statistic", finite_or_null(report.statistic)},
              {"p_value", report.p_value},
              {"n", report.n},
              {"extras", extras}};
}

TestReport wilcoxon_signed_rank(const std::vector<double>& values, WilcoxonMethod method) {
  std::vector<double> nz;
  for (double v : values) {
    if (v != 0.0) nz.push_back(v);
  }
  if (nz.empty()) throw Error(ErrorCode::AllZeros, "all values are zero");
  const std::size_t n = nz.size();

  std::sort(nz.begin(), nz.end(), [](double a, double b) { return std::abs(a) < std::abs(b); });
  // Doubled average ranks are integers: tie group [i, j) gets i + j + 1.
  std::vector<long long> rank2(n);
  double tie_term = 0.0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && std::abs(nz[j]) == std::abs(nz[i])) ++j;
    for (std::size_t k = i; k < j; ++k) rank2[k] = static_cast<long long>(i + j + 1);
    const double t = static_cast<double>(j - i);
    tie_term += t * t * t - t;
    i = j;
  }
  long long plus2 = 0, total2 = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total2 += rank2[i];
    if (nz[i] > 0) plus2 += rank2[i];
  }
  const long long w2 = std::min(plus2, total2 - plus2);

  TestReport report;
  report.test = TestKind::Wilcoxon;
  report.statistic = static_cast<double>(w2) / 2.0;
  report.n = values.size();
  report.n_nonzero = n;

  const bool exact = method == WilcoxonMethod::Exact || (method == WilcoxonMethod::Auto && n <= kWilcoxonExactLimit);
  if (exact) {
    if (n > 62) throw Error(ErrorCode::TooLarge, "exact signed-rank distribution limited to 62 values");
    // counts[s] = number of sign assignments whose positive doubled-rank sum is s.
    std::vector<double> counts(static_cast<std::size_t>(total2) + 1, 0.0);
    counts[0] = 1.0;
    long long reach = 0;
    for (long long r : rank2) {
      for (long long s = reach; s >= 0; --s) counts[static_cast<std::size_t>(s + r)] += counts[static_cast<std::size_t>(s)];
      reach += r;
    }
    double at_most = 0.0;
    for (long long s = 0; s <= w2; ++s) at_most += counts[static_cast<std::size_t>(s)];
    report.p_value = std::min(1.0, 2.0 * std::ldexp(at_most, -static_cast<int>(n)));
    report.exact = true;
  } else {
    const double nd = static_cast<double>(n);
    const double mu = nd * (nd + 1.0) / 4.0;
    const double var = nd * (nd + 1.0) * (2.0 * nd + 1.0) / 24.0 - tie_term / 48.0;
    const double z = (report.statistic - mu + 0.5) / std::sqrt(var);
    report.p_value = floor_p(std::erfc(-z / std::sqrt(2.0)));
  }
  return report;
}

TestReport pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::DegenerateSample, "samples differ in length");
  const std::size_t n = x.size();
  if (n < 3) throw Error(ErrorCode::DegenerateSample, "pearson needs at least three pairs");
  const double nd = static_cast<double>(n);
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / nd;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / nd;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error(ErrorCode::DegenerateSample, "zero variance");
  const double r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

  TestReport report;
  report.test = TestKind::Pearson;
  report.n = n;
  report.r = r;
  const double one_minus = 1.0 - r * r;
  if (one_minus <= 0.0) {
    report.statistic = std::copysign(std::numeric_limits<double>::infinity(), r);
    report.p_value = 0.0;
    return report;
  }
  const double df = nd - 2.0;
  report.statistic = r * std::sqrt(df / one_minus);
  const boost::math::students_t dist(df);
  report.p_value = floor_p(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(report.statistic))));
  return report;
}

double compute(Statistic s, std::vector<double> values) {
  if (values.empty()) throw Error(ErrorCode::TooSmall, "statistic of an empty sample");
  if (s == Statistic::Mean) return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return (lower + upper) / 2.0;
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::TooSmall, "quantile of an empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

Json to_json(const BootstrapCI& ci) {
  return Json{{"statistic", std::string(to_string(ci.statistic))},
              {"estimate", ci.estimate},
              {"lo", ci.lo},
              {"hi", ci.hi},
              {"resamples", ci.resamples},
              {"level", ci.level}};
}

BootstrapCI bootstrap_ci(const std::vector<double>& values, Statistic statistic, Rng& rng, int resamples,
                         double level) {
  if (values.size() < 2) throw Error(ErrorCode::TooSmall, "bootstrap needs at least two values");
  if (resamples < 1 || !(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::ParseError, "bootstrap needs resamples >= 1 and level in (0, 1)");
  }
  std::uniform_int_distribution<std::size_t> pick(0, values.size() - 1);
  std::vector<double> stats(static_cast<std::size_t>(resamples));
  std::vector<double> sample(values.size());
  for (auto& s : stats) {
    for (auto& v : sample) v = values[pick(rng)];
    s = compute(statistic, sample);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  BootstrapCI ci;
  ci.statistic = statistic;
  ci.estimate = compute(statistic, values);
  ci.lo = quantile_sorted(stats, tail);
  ci.hi = quantile_sorted(stats, 1.0 - tail);
  ci.resamples = resamples;
  ci.level = level;
  return ci;
}

std::optional<LineFit> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n == 0) return std::nullopt;
  const double nd = static_cast<double>(n);
  const double mx = std::accumulate(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(n), 0.0) / nd;
  const double my = std::accumulate(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(n), 0.0) / nd;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) return std::nullopt;
  const double slope = sxy / sxx;
  return LineFit{slope, my - slope * mx};
}

}  // namespace breeder

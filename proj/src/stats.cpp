// Copyright 2026 The VoiceBench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "error.hpp"
#include "util.hpp"

namespace voicebench {

namespace {

double log_choose(int64_t n, int64_t k) {
  if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

// Lentz's method for the incomplete beta continued fraction.
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-15;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

// Midranks of the concatenation [x | y]. Returns the rank vector and the tie
// group sizes.
std::pair<std::vector<double>, std::vector<int64_t>> midranks(const std::vector<double>& x,
                                                              const std::vector<double>& y) {
  const size_t n = x.size() + y.size();
  std::vector<std::pair<double, size_t>> v;
  v.reserve(n);
  for (size_t i = 0; i < x.size(); ++i) v.emplace_back(x[i], i);
  for (size_t i = 0; i < y.size(); ++i) v.emplace_back(y[i], x.size() + i);
  std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.first < b.first; });

  std::vector<double> ranks(n);
  std::vector<int64_t> tie_sizes;
  size_t i = 0;
  while (i < n) {
    size_t j = i;
    while (j + 1 < n && v[j + 1].first == v[i].first) ++j;
    const double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[v[k].second] = rank;
    tie_sizes.push_back(static_cast<int64_t>(j - i + 1));
    i = j + 1;
  }
  return {ranks, tie_sizes};
}

// Exact null distribution of the rank sum of the first sample: counts[s] =
// number of n1-subsets of {1..n} with rank sum s. Feasible for n <= 12.
std::vector<double> rank_sum_counts(int n1, int n) {
  const int max_sum = n * (n + 1) / 2;
  std::vector<std::vector<double>> dp(n1 + 1, std::vector<double>(max_sum + 1, 0.0));
  dp[0][0] = 1.0;
  for (int r = 1; r <= n; ++r) {
    for (int k = std::min(n1, r); k >= 1; --k) {
      for (int s = max_sum; s >= r; --s) {
        if (dp[k - 1][s - r] > 0) dp[k][s] += dp[k - 1][s - r];
      }
    }
  }
  return dp[n1];
}

GroupAgeSummary summarize_ages(const std::vector<double>& ages) {
  GroupAgeSummary s;
  s.n = static_cast<int64_t>(ages.size());
  if (ages.empty()) return s;
  s.mean = mean_of(ages);
  s.stddev = stddev_of(ages);
  s.min = *std::min_element(ages.begin(), ages.end());
  s.max = *std::max_element(ages.begin(), ages.end());
  return s;
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                          a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(ln_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_cdf(double t, double df) {
  const double x = df / (df + t * t);
  const double tail = 0.5 * incomplete_beta(df / 2.0, 0.5, x);
  return t <= 0.0 ? tail : 1.0 - tail;
}

TestResult fisher_exact(const Table2x2& t) {
  TestResult r;
  r.test_name = "fisher_exact";

  const int64_t r1 = t.a + t.b;
  const int64_t r2 = t.c + t.d;
  const int64_t c1 = t.a + t.c;
  const int64_t c2 = t.b + t.d;
  const int64_t n = r1 + r2;
  if (t.a < 0 || t.b < 0 || t.c < 0 || t.d < 0) fail(ErrorCode::InvalidArgument, "fisher_exact: negative cell");

  if (t.b * t.c == 0) {
    r.statistic = std::numeric_limits<double>::infinity();
    if (t.a * t.d == 0) r.statistic = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.statistic = (static_cast<double>(t.a) * static_cast<double>(t.d)) /
                  (static_cast<double>(t.b) * static_cast<double>(t.c));
  }

  if (n == 0 || r1 == 0 || r2 == 0 || c1 == 0 || c2 == 0) {
    r.p_value = 1.0;
    r.degenerate = true;
    return r;
  }

  auto log_pmf = [&](int64_t a) {
    return log_choose(r1, a) + log_choose(r2, c1 - a) - log_choose(n, c1);
  };
  const double l_obs = log_pmf(t.a);
  const double slack = std::log1p(1e-12);
  const int64_t a_min = std::max<int64_t>(0, c1 - r2);
  const int64_t a_max = std::min(r1, c1);

  double p = 0.0;
  for (int64_t a = a_min; a <= a_max; ++a) {
    const double lp = log_pmf(a);
    if (lp <= l_obs + slack) p += std::exp(lp);
  }
  r.p_value = std::min(1.0, std::max(0.0, p));
  return r;
}

TestResult welch_t_test(const std::vector<double>& x, const std::vector<double>& y) {
  TestResult r;
  r.test_name = "welch_t_test";
  const auto n1 = static_cast<double>(x.size());
  const auto n2 = static_cast<double>(y.size());
  if (x.size() < 2 || y.size() < 2) {
    r.computable = false;
    r.note = "each sample needs at least 2 values";
    return r;
  }

  const double m1 = mean_of(x);
  const double m2 = mean_of(y);
  double s1 = 0.0, s2 = 0.0;  // sample variances
  for (double v : x) s1 += (v - m1) * (v - m1);
  for (double v : y) s2 += (v - m2) * (v - m2);
  s1 /= n1 - 1.0;
  s2 /= n2 - 1.0;

  const double v1 = s1 / n1;
  const double v2 = s2 / n2;
  if (v1 + v2 == 0.0) {
    r.degenerate = true;
    if (m1 == m2) {
      r.statistic = 0.0;
      r.p_value = 1.0;
      r.note = "zero variance, equal means";
    } else {
      r.statistic = m1 < m2 ? -std::numeric_limits<double>::infinity()
                            : std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
      r.note = "zero variance, different means";
    }
    return r;
  }

  r.statistic = (m1 - m2) / std::sqrt(v1 + v2);
  const double df = (v1 + v2) * (v1 + v2) /
                    (v1 * v1 / (n1 - 1.0) + v2 * v2 / (n2 - 1.0));
  r.p_value = std::min(1.0, 2.0 * student_t_cdf(-std::fabs(r.statistic), df));
  return r;
}

TestResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y) {
  TestResult r;
  r.test_name = "mann_whitney_u";
  if (x.empty() || y.empty()) {
    r.computable = false;
    r.note = "empty sample";
    return r;
  }

  const int64_t n1 = static_cast<int64_t>(x.size());
  const int64_t n2 = static_cast<int64_t>(y.size());
  const int64_t n = n1 + n2;
  const auto [ranks, tie_sizes] = midranks(x, y);

  double rank_sum_x = 0.0;
  for (size_t i = 0; i < x.size(); ++i) rank_sum_x += ranks[i];
  const double u = rank_sum_x - static_cast<double>(n1) * (static_cast<double>(n1) + 1.0) / 2.0;
  r.statistic = u;

  const bool has_ties = tie_sizes.size() != static_cast<size_t>(n);
  if (n <= 12 && !has_ties) {
    // Exact: rank sum is integral here.
    const auto counts = rank_sum_counts(static_cast<int>(n1), static_cast<int>(n));
    const auto s_obs = static_cast<int64_t>(std::llround(rank_sum_x));
    double below = 0.0, above = 0.0, total = 0.0;
    for (size_t s = 0; s < counts.size(); ++s) {
      total += counts[s];
      if (static_cast<int64_t>(s) <= s_obs) below += counts[s];
      if (static_cast<int64_t>(s) >= s_obs) above += counts[s];
    }
    r.p_value = std::min(1.0, 2.0 * std::min(below, above) / total);
    return r;
  }

  const double mu = static_cast<double>(n1) * static_cast<double>(n2) / 2.0;
  double tie_term = 0.0;
  for (int64_t t : tie_sizes) tie_term += static_cast<double>(t) * t * t - static_cast<double>(t);
  const double nf = static_cast<double>(n);
  const double var = static_cast<double>(n1) * static_cast<double>(n2) / 12.0 *
                     ((nf + 1.0) - tie_term / (nf * (nf - 1.0)));
  if (var <= 0.0) {
    r.p_value = 1.0;
    r.degenerate = true;
    r.note = "all values tied";
    return r;
  }
  const double num = std::max(0.0, std::fabs(u - mu) - 0.5);  // continuity correction
  const double z = num / std::sqrt(var);
  r.p_value = std::min(1.0, 2.0 * (1.0 - normal_cdf(z)));
  return r;
}

FairnessReport fairness_battery(const std::vector<bool>& sex_is_male,
                                const std::vector<double>& ages,
                                const std::vector<bool>& correct) {
  if (sex_is_male.size() != correct.size() || ages.size() != correct.size()) {
    fail(ErrorCode::InvalidArgument, "fairness_battery: misaligned inputs");
  }
  FairnessReport rep;
  std::vector<double> ages_correct, ages_incorrect;
  for (size_t i = 0; i < correct.size(); ++i) {
    if (correct[i]) {
      if (sex_is_male[i]) ++rep.gender_table.a;
      else ++rep.gender_table.c;
      ages_correct.push_back(ages[i]);
    } else {
      if (sex_is_male[i]) ++rep.gender_table.b;
      else ++rep.gender_table.d;
      ages_incorrect.push_back(ages[i]);
    }
  }
  rep.n_correct = static_cast<int64_t>(ages_correct.size());
  rep.n_incorrect = static_cast<int64_t>(ages_incorrect.size());
  rep.age_correct = summarize_ages(ages_correct);
  rep.age_incorrect = summarize_ages(ages_incorrect);

  if (rep.n_correct == 0 || rep.n_incorrect == 0) {
    rep.gender.test_name = "fisher_exact";
    rep.gender.computable = false;
    rep.gender.note = rep.n_correct == 0 ? "no correctly classified patients"
                                         : "no incorrectly classified patients";
    rep.age.test_name = "welch_t_test";
    rep.age.computable = false;
    rep.age.note = rep.gender.note;
    return rep;
  }

  rep.gender = fisher_exact(rep.gender_table);
  rep.age = welch_t_test(ages_correct, ages_incorrect);
  return rep;
}

}  // namespace voicebench

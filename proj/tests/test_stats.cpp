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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "stats.hpp"
#include "util.hpp"

using namespace voicebench;

namespace {

// Exact binomial coefficients; doubles are exact for n <= 40.
double choose_exact(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return std::round(v);
}

// Independent Fisher oracle: enumerate every table with the observed margins
// using exact integer weights, sum those no more probable than the observed.
double fisher_oracle(const Table2x2& t) {
  const int r1 = static_cast<int>(t.a + t.b);
  const int r2 = static_cast<int>(t.c + t.d);
  const int c1 = static_cast<int>(t.a + t.c);
  const int n = r1 + r2;
  if (n == 0 || r1 == 0 || r2 == 0 || c1 == 0 || c1 == n) return 1.0;
  const double w_obs = choose_exact(r1, static_cast<int>(t.a)) *
                       choose_exact(r2, c1 - static_cast<int>(t.a));
  double total = 0.0, qualifying = 0.0;
  for (int a = std::max(0, c1 - r2); a <= std::min(r1, c1); ++a) {
    const double w = choose_exact(r1, a) * choose_exact(r2, c1 - a);
    total += w;
    if (w <= w_obs) qualifying += w;
  }
  return qualifying / total;
}

// Independent Mann-Whitney oracle: literal enumeration of all C(n, n1) rank
// assignments (tie-free samples only).
double mwu_exact_oracle(const std::vector<double>& x, const std::vector<double>& y) {
  const int n1 = static_cast<int>(x.size());
  const int n = n1 + static_cast<int>(y.size());
  std::vector<double> all(x);
  all.insert(all.end(), y.begin(), y.end());
  std::sort(all.begin(), all.end());

  double u_obs = 0.0;
  for (double xi : x) {
    for (double yi : y) {
      if (xi > yi) u_obs += 1.0;
      else if (xi == yi) u_obs += 0.5;
    }
  }

  std::vector<int> comb(n1);
  for (int i = 0; i < n1; ++i) comb[i] = i;
  long below = 0, above = 0, total = 0;
  while (true) {
    // U for this assignment of ranks (0-based positions) to sample x.
    long rank_sum = 0;
    for (int c : comb) rank_sum += c + 1;
    const double u = static_cast<double>(rank_sum) - n1 * (n1 + 1) / 2.0;
    ++total;
    if (u <= u_obs) ++below;
    if (u >= u_obs) ++above;

    int i = n1 - 1;
    while (i >= 0 && comb[i] == n - n1 + i) --i;
    if (i < 0) break;
    ++comb[i];
    for (int j = i + 1; j < n1; ++j) comb[j] = comb[j - 1] + 1;
  }
  return std::min(1.0, 2.0 * std::min(below, above) / static_cast<double>(total));
}

}  // namespace

TEST_CASE("fisher exact matches hand-enumerated examples") {
  SUBCASE("balanced cross table") {
    const TestResult r = fisher_exact({3, 1, 1, 3});
    CHECK(r.p_value == doctest::Approx(34.0 / 70.0).epsilon(1e-9));
  }
  SUBCASE("modal table gives p = 1") {
    const TestResult r = fisher_exact({5, 5, 5, 5});
    CHECK(r.p_value == doctest::Approx(1.0));
  }
  SUBCASE("perfect association") {
    const TestResult r = fisher_exact({0, 10, 10, 0});
    CHECK(r.p_value == doctest::Approx(2.0 / 184756.0).epsilon(1e-9));
  }
  SUBCASE("degenerate margins") {
    CHECK(fisher_exact({0, 0, 3, 4}).p_value == doctest::Approx(1.0));
    CHECK(fisher_exact({0, 0, 0, 0}).p_value == doctest::Approx(1.0));
  }
}

TEST_CASE("fisher exact equals enumeration oracle on small tables") {
  // All tables with total <= 25 here; the acceptance suite pushes to 40.
  for (int a = 0; a <= 6; ++a) {
    for (int b = 0; b <= 6; ++b) {
      for (int c = 0; c <= 6; ++c) {
        for (int d = 0; d <= 6; ++d) {
          if (a + b + c + d > 25) continue;
          const Table2x2 t{a, b, c, d};
          const double oracle = fisher_oracle(t);
          const double impl = fisher_exact(t).p_value;
          CHECK(impl == doctest::Approx(oracle).epsilon(1e-10));
        }
      }
    }
  }
}

TEST_CASE("fisher exact is invariant under row and column swaps") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const Table2x2 t{static_cast<int64_t>(rng.next_below(30)), static_cast<int64_t>(rng.next_below(30)),
                     static_cast<int64_t>(rng.next_below(30)), static_cast<int64_t>(rng.next_below(30))};
    const double p = fisher_exact(t).p_value;
    CHECK(fisher_exact({t.c, t.d, t.a, t.b}).p_value == doctest::Approx(p).epsilon(1e-10));
    CHECK(fisher_exact({t.b, t.a, t.d, t.c}).p_value == doctest::Approx(p).epsilon(1e-10));
    CHECK(fisher_exact({t.d, t.c, t.b, t.a}).p_value == doctest::Approx(p).epsilon(1e-10));
  }
}

TEST_CASE("welch t-test") {
  SUBCASE("identical samples give t = 0, p = 1") {
    const std::vector<double> x{1, 2, 3, 4};
    const TestResult r = welch_t_test(x, x);
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(1.0));
  }
  SUBCASE("textbook example: {1,2,3} vs {4,5,6}") {
    const TestResult r = welch_t_test({1, 2, 3}, {4, 5, 6});
    CHECK(r.statistic == doctest::Approx(-3.6742346).epsilon(1e-6));
    CHECK(std::fabs(r.p_value - 0.0213) < 0.0005);
  }
  SUBCASE("growing shift strictly decreases p") {
    const std::vector<double> x{1.0, 2.5, 3.0, 4.5, 5.0, 6.5};
    double last_p = 1.1;
    for (double delta : {0.0, 0.5, 1.0, 2.0, 4.0}) {
      std::vector<double> y(x);
      for (double& v : y) v += delta;
      const double p = welch_t_test(x, y).p_value;
      CHECK(p < last_p + 1e-15);
      if (delta > 0.0) CHECK(p < last_p);
      last_p = p;
    }
  }
  SUBCASE("degenerate variances") {
    const TestResult same = welch_t_test({2, 2, 2}, {2, 2});
    CHECK(same.p_value == doctest::Approx(1.0));
    const TestResult diff = welch_t_test({2, 2, 2}, {3, 3});
    CHECK(diff.p_value == doctest::Approx(0.0));
    CHECK(diff.degenerate);
  }
}

TEST_CASE("student t cdf sanity") {
  CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5));
  // t with large df approaches the normal.
  CHECK(student_t_cdf(1.96, 1e6) == doctest::Approx(normal_cdf(1.96)).epsilon(1e-4));
  // Known quantile: P(T_4 <= 2.776) ~= 0.975.
  CHECK(student_t_cdf(2.776, 4.0) == doctest::Approx(0.975).epsilon(1e-3));
}

TEST_CASE("mann-whitney exact path") {
  SUBCASE("fully separated tiny samples") {
    const TestResult r = mann_whitney_u({1, 2}, {3, 4});
    CHECK(r.statistic == doctest::Approx(0.0));
    CHECK(r.p_value == doctest::Approx(2.0 / 6.0).epsilon(1e-12));
  }
  SUBCASE("identical samples (tie path) give p = 1") {
    const TestResult r = mann_whitney_u({1, 2, 3}, {1, 2, 3});
    CHECK(r.p_value == doctest::Approx(1.0));
  }
  SUBCASE("exact path equals enumeration oracle") {
    Rng rng(29);
    for (int trial = 0; trial < 300; ++trial) {
      const int n1 = 2 + static_cast<int>(rng.next_below(5));
      const int n2 = 2 + static_cast<int>(rng.next_below(static_cast<uint64_t>(12 - n1 - 1)));
      std::vector<double> x, y;
      for (int i = 0; i < n1; ++i) x.push_back(rng.next_normal());
      for (int i = 0; i < n2; ++i) y.push_back(rng.next_normal());
      const double impl = mann_whitney_u(x, y).p_value;
      const double oracle = mwu_exact_oracle(x, y);
      CHECK(impl == doctest::Approx(oracle).epsilon(1e-12));
    }
  }
}

TEST_CASE("mann-whitney large-sample calibration at alpha = 0.05") {
  Rng rng(101);
  int rejections = 0;
  const int reps = 1000;
  for (int rep = 0; rep < reps; ++rep) {
    std::vector<double> x, y;
    for (int i = 0; i < 50; ++i) x.push_back(rng.next_normal());
    for (int i = 0; i < 50; ++i) y.push_back(rng.next_normal());
    if (mann_whitney_u(x, y).p_value < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate >= 0.03);
  CHECK(rate <= 0.07);
}

TEST_CASE("synthetic separated ages give tiny rank-test p") {
  std::vector<double> young(20, 30.0), old(20, 70.0);
  // Constant samples are fully tied within groups; perturb slightly so the
  // comparison reflects ranks, as in a real age column.
  for (size_t i = 0; i < young.size(); ++i) {
    young[i] += static_cast<double>(i) * 1e-3;
    old[i] += static_cast<double>(i) * 1e-3;
  }
  CHECK(mann_whitney_u(young, old).p_value < 0.001);
}

TEST_CASE("fairness battery") {
  SUBCASE("all males wrong, all females right") {
    std::vector<bool> male, correct;
    std::vector<double> ages;
    for (int i = 0; i < 10; ++i) {
      male.push_back(true);
      correct.push_back(false);
      ages.push_back(60.0 + i);
    }
    for (int i = 0; i < 10; ++i) {
      male.push_back(false);
      correct.push_back(true);
      ages.push_back(40.0 + i);
    }
    const FairnessReport rep = fairness_battery(male, ages, correct);
    CHECK(rep.gender_table.a == 0);
    CHECK(rep.gender_table.b == 10);
    CHECK(rep.gender_table.c == 10);
    CHECK(rep.gender_table.d == 0);
    CHECK(rep.gender.p_value == doctest::Approx(2.0 / 184756.0).epsilon(1e-9));
    CHECK(rep.age.computable);
    CHECK(rep.age.p_value < 0.001);
  }

  SUBCASE("independent predictions rarely reject") {
    Rng rng(55);
    int both_clear = 0;
    const int reps = 100;
    for (int rep = 0; rep < reps; ++rep) {
      std::vector<bool> male, correct;
      std::vector<double> ages;
      for (int i = 0; i < 500; ++i) {
        male.push_back(rng.next_double() < 0.5);
        ages.push_back(30.0 + 40.0 * rng.next_double());
        correct.push_back(rng.next_double() < 0.8);
      }
      const FairnessReport rep2 = fairness_battery(male, ages, correct);
      if (rep2.gender.p_value > 0.01 && rep2.age.p_value > 0.01) ++both_clear;
    }
    CHECK(both_clear >= 95);
  }

  SUBCASE("all-correct predictions are not computable") {
    const FairnessReport rep =
        fairness_battery({true, false}, {50.0, 60.0}, {true, true});
    CHECK_FALSE(rep.gender.computable);
    CHECK_FALSE(rep.age.computable);
    CHECK(!rep.gender.note.empty());
  }
}

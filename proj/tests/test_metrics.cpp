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

#include <cmath>
#include <tuple>
#include <vector>

#include "error.hpp"
#include "metrics.hpp"
#include "util.hpp"

using namespace voicebench;

namespace {

// O(n^2) all-pairs AUROC oracle with half-credit ties.
double auroc_oracle(const std::vector<int>& y, const std::vector<double>& s) {
  double wins = 0.0;
  long pairs = 0;
  for (size_t i = 0; i < y.size(); ++i) {
    if (!y[i]) continue;
    for (size_t j = 0; j < y.size(); ++j) {
      if (y[j]) continue;
      ++pairs;
      if (s[i] > s[j]) wins += 1.0;
      else if (s[i] == s[j]) wins += 0.5;
    }
  }
  return wins / static_cast<double>(pairs);
}

}  // namespace

TEST_CASE("confusion counts and error paths") {
  std::vector<int> t{1, 1, 0, 0, 0}, p{1, 0, 0, 1, 0};
  const ConfusionMatrix cm = confusion(t, p);
  CHECK(cm.tp == 1);
  CHECK(cm.fn == 1);
  CHECK(cm.tn == 2);
  CHECK(cm.fp == 1);
  CHECK(cm.total() == 5);

  CHECK_THROWS_AS(confusion({}, {}), Error);
  CHECK_THROWS_AS(confusion({1}, {1, 0}), Error);
}

TEST_CASE("classification metrics arithmetic") {
  SUBCASE("forced arithmetic") {
    const ClassMetrics m = classification_metrics({3, 1, 5, 5});
    CHECK(m.sensitivity == doctest::Approx(0.75));
    CHECK(m.specificity == doctest::Approx(0.5));
    CHECK(m.balanced_accuracy == doctest::Approx(0.625));
  }
  SUBCASE("perfect classifier") {
    const ClassMetrics m = classification_metrics({25, 0, 635, 0});
    CHECK(m.sensitivity == doctest::Approx(1.0));
    CHECK(m.specificity == doctest::Approx(1.0));
    CHECK(m.balanced_accuracy == doctest::Approx(1.0));
  }
  SUBCASE("all predicted benign") {
    const ConfusionMatrix cm = confusion({1, 1, 0}, {0, 0, 0});
    CHECK(cm.tp == 0);
    CHECK(cm.fn == 2);
  }
  SUBCASE("absent class is an error") {
    CHECK_THROWS_AS(classification_metrics({0, 0, 5, 5}), Error);
  }
}

TEST_CASE("auroc examples") {
  CHECK(auroc({0, 0, 1, 1}, {0.1, 0.4, 0.35, 0.8}) == doctest::Approx(0.75));
  CHECK(auroc({0, 0, 1, 1}, {0.1, 0.2, 0.3, 0.4}) == doctest::Approx(1.0));
  CHECK(auroc({0, 0, 1, 1}, {0.4, 0.3, 0.2, 0.1}) == doctest::Approx(0.0));
  CHECK(auroc({0, 1, 0, 1}, {0.5, 0.5, 0.5, 0.5}) == doctest::Approx(0.5));
  CHECK_THROWS_AS(auroc({1, 1}, {0.1, 0.2}), Error);
}

TEST_CASE("auroc equals all-pairs oracle on random inputs with ties") {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(199));
    std::vector<int> y(n);
    std::vector<double> s(n);
    bool has_pos = false, has_neg = false;
    for (int i = 0; i < n; ++i) {
      y[i] = rng.next_double() < 0.3 ? 1 : 0;
      // Quantized scores force plenty of ties.
      s[i] = std::floor(rng.next_double() * 8.0) / 8.0;
      (y[i] ? has_pos : has_neg) = true;
    }
    if (!has_pos || !has_neg) continue;
    CHECK(std::fabs(auroc(y, s) - auroc_oracle(y, s)) < 1e-12);
  }
}

TEST_CASE("swapping the positive class maps sensitivity to specificity and flips auroc") {
  Rng rng(78);
  std::vector<int> y;
  std::vector<int> p;
  std::vector<double> s;
  for (int i = 0; i < 200; ++i) {
    y.push_back(rng.next_double() < 0.4 ? 1 : 0);
    p.push_back(rng.next_double() < 0.5 ? 1 : 0);
    s.push_back(rng.next_normal());
  }
  std::vector<int> y_sw(y), p_sw(p);
  std::vector<double> s_sw(s);
  for (auto& v : y_sw) v = 1 - v;
  for (auto& v : p_sw) v = 1 - v;
  for (auto& v : s_sw) v = -v;

  const ClassMetrics a = classification_metrics(confusion(y, p));
  const ClassMetrics b = classification_metrics(confusion(y_sw, p_sw));
  CHECK(a.sensitivity == doctest::Approx(b.specificity));
  CHECK(a.specificity == doctest::Approx(b.sensitivity));
  CHECK(a.balanced_accuracy == doctest::Approx(b.balanced_accuracy));
  CHECK(auroc(y, s) == doctest::Approx(1.0 - auroc(y_sw, s)).epsilon(1e-12));
  CHECK(auroc(y_sw, s_sw) == doctest::Approx(auroc(y, s)).epsilon(1e-12));
}

TEST_CASE("bootstrap confidence intervals") {
  SUBCASE("zero variance on a perfect classifier") {
    std::vector<int> y, p;
    std::vector<double> s;
    for (int i = 0; i < 660; ++i) {
      const int label = i < 25 ? 1 : 0;
      y.push_back(label);
      p.push_back(label);
      s.push_back(label ? 1.0 : -1.0);
    }
    const ConfidenceInterval ci =
        bootstrap_ci(y, p, s, MetricKind::BalancedAccuracy, 200, 1);
    CHECK(ci.low == doctest::Approx(1.0));
    CHECK(ci.high == doctest::Approx(1.0));
  }

  SUBCASE("interval contains the point estimate") {
    Rng rng(5);
    std::vector<int> y, p;
    std::vector<double> s;
    for (int i = 0; i < 300; ++i) {
      y.push_back(rng.next_double() < 0.3 ? 1 : 0);
      s.push_back(0.8 * y.back() + rng.next_normal());
      p.push_back(s.back() >= 0.5 ? 1 : 0);
    }
    const MetricReport rep = evaluate_predictions(y, p, s, 500, 9);
    for (const MetricWithCi* m :
         {&rep.balanced_accuracy, &rep.sensitivity, &rep.specificity, &rep.auroc}) {
      CHECK(m->ci_low <= m->point + 1e-12);
      CHECK(m->ci_high >= m->point - 1e-12);
      CHECK(m->ci_low >= 0.0);
      CHECK(m->ci_high <= 1.0);
    }
  }

  SUBCASE("width shrinks with sample size") {
    auto make = [](int n, uint64_t seed)
        -> std::tuple<std::vector<int>, std::vector<int>, std::vector<double>> {
      Rng rng(seed);
      std::vector<int> y, p;
      std::vector<double> s;
      for (int i = 0; i < n; ++i) {
        const int label = i % 2;
        y.push_back(label);
        // True sensitivity/specificity 0.8.
        const bool correct = rng.next_double() < 0.8;
        p.push_back(correct ? label : 1 - label);
        s.push_back(p.back() ? 1.0 : -1.0);
      }
      return {y, p, s};
    };
    auto [y1, p1, s1] = make(100, 3);
    auto [y2, p2, s2] = make(1000, 3);
    const ConfidenceInterval small_ci =
        bootstrap_ci(y1, p1, s1, MetricKind::Sensitivity, 400, 11);
    const ConfidenceInterval big_ci =
        bootstrap_ci(y2, p2, s2, MetricKind::Sensitivity, 400, 11);
    CHECK(big_ci.high - big_ci.low < small_ci.high - small_ci.low);
  }

  SUBCASE("determinism") {
    Rng rng(6);
    std::vector<int> y, p;
    std::vector<double> s;
    for (int i = 0; i < 120; ++i) {
      y.push_back(i % 3 == 0 ? 1 : 0);
      s.push_back(rng.next_normal() + y.back());
      p.push_back(s.back() > 0.5 ? 1 : 0);
    }
    const ConfidenceInterval a = bootstrap_ci(y, p, s, MetricKind::Auroc, 300, 42);
    const ConfidenceInterval b = bootstrap_ci(y, p, s, MetricKind::Auroc, 300, 42);
    CHECK(a.low == b.low);
    CHECK(a.high == b.high);
    const ConfidenceInterval c = bootstrap_ci(y, p, s, MetricKind::Auroc, 300, 43);
    CHECK((c.low != a.low || c.high != a.high));
  }
}

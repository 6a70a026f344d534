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

#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace voicebench {

// 2x2 contingency table; rows are groups, columns are outcomes.
struct Table2x2 {
  int64_t a = 0, b = 0;
  int64_t c = 0, d = 0;
};

// All tests are two-sided.
struct TestResult {
  std::string test_name;
  double statistic = 0.0;
  double p_value = 1.0;
  bool computable = true;
  bool degenerate = false;
  std::string note;
};

// Exact two-sided p: sum of hypergeometric probabilities of all tables with
// the same margins whose probability does not exceed the observed table's
// (relative slack 1 + 1e-12). The statistic is the sample odds ratio.
TestResult fisher_exact(const Table2x2& t);

// Welch's unequal-variance t-test with Welch-Satterthwaite df.
TestResult welch_t_test(const std::vector<double>& x, const std::vector<double>& y);

// Midrank U statistic. Exact two-sided p by enumeration when
// n_x + n_y <= 12 and there are no ties; otherwise normal approximation
// with tie and continuity corrections.
TestResult mann_whitney_u(const std::vector<double>& x, const std::vector<double>& y);

double normal_cdf(double z);
// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double incomplete_beta(double a, double b, double x);
// P(T <= t) for Student's t with df degrees of freedom.
double student_t_cdf(double t, double df);

struct GroupAgeSummary {
  int64_t n = 0;
  double mean = 0.0, stddev = 0.0, min = 0.0, max = 0.0;
};

// Association between prediction correctness and patient sex / age.
struct FairnessReport {
  Table2x2 gender_table;  // rows: male, female; columns: correct, incorrect
  TestResult gender;      // Fisher exact
  TestResult age;         // Welch t-test, correct vs incorrect ages
  GroupAgeSummary age_correct;
  GroupAgeSummary age_incorrect;
  int64_t n_correct = 0;
  int64_t n_incorrect = 0;
};

// sex_is_male, ages and correct must be aligned to the same rows.
FairnessReport fairness_battery(const std::vector<bool>& sex_is_male,
                                const std::vector<double>& ages,
                                const std::vector<bool>& correct);

}  // namespace voicebench

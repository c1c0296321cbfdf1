/*
 * Copyright 2026 The RankSHAP Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef RANKSHAP_TESTS_TEST_UTIL_HPP_
#define RANKSHAP_TESTS_TEST_UTIL_HPP_

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "oracle/brute_force.hpp"
#include "rankshap/core.hpp"
#include "rankshap/io.hpp"
#include "rankshap/scoring.hpp"

namespace rankshap::testing {

inline std::filesystem::path data_dir() { return RANKSHAP_DATA_DIR; }

// Eight applicants with gpa, sat and essay grades, ids Bob..Osi.
inline Dataset admissions() {
  return read_dataset_csv(data_dir() / "admissions.csv");
}

// 0.4 gpa + 0.4 sat + 0.2 essay.
inline ScoringFunction admissions_scorer() {
  return ScoringFunction::linear(Eigen::Vector3d(0.4, 0.4, 0.2));
}

inline oracle::Table to_table(const Dataset& data) {
  oracle::Table t;
  for (Index i = 0; i < data.size(); ++i) {
    oracle::Row r;
    for (Index j = 0; j < data.num_features(); ++j) {
      r.push_back(data.values()(i, j));
    }
    t.push_back(std::move(r));
  }
  return t;
}

inline oracle::Scorer to_oracle(const ScoringFunction& f) {
  return [f](const oracle::Row& r) {
    return f(Eigen::Map<const Eigen::VectorXd>(r.data(),
                                               static_cast<Index>(r.size())));
  };
}

// Small random dataset. With `grid`, values come from {0, 1, 2} so that
// score ties are frequent.
inline Dataset random_dataset(std::mt19937_64& rng, Index n, Index d,
                              bool grid) {
  FeatureMatrix values(n, d);
  std::uniform_int_distribution<int> level(0, 2);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      values(i, j) = grid ? level(rng) : unit(rng);
    }
  }
  std::vector<std::string> names;
  for (Index j = 1; j <= d; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(std::move(values), std::move(names));
}

inline std::filesystem::path temp_path(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "rankshap-tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace rankshap::testing

#endif  // RANKSHAP_TESTS_TEST_UTIL_HPP_

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

// Synthetic datasets with independent or correlated features.

#ifndef RANKSHAP_SYNTH_HPP_
#define RANKSHAP_SYNTH_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rankshap/core.hpp"
#include "rankshap/scoring.hpp"

namespace rankshap {

struct FeatureDistribution {
  enum class Kind { kUniform, kGaussian, kBernoulli };
  Kind kind = Kind::kUniform;
  // uniform: [a, b); gaussian: mean a, standard deviation b; bernoulli: p = a.
  double a = 0.0;
  double b = 1.0;

  static FeatureDistribution uniform(double lo, double hi) {
    return {Kind::kUniform, lo, hi};
  }
  static FeatureDistribution gaussian(double mean, double sd) {
    return {Kind::kGaussian, mean, sd};
  }
  static FeatureDistribution bernoulli(double p) {
    return {Kind::kBernoulli, p, 0.0};
  }
};

struct SyntheticSpec {
  Index n = 2000;
  std::vector<FeatureDistribution> features;
  // Over the gaussian features only, in column order.
  std::optional<Eigen::MatrixXd> correlation;
  std::uint64_t seed = 0;

  void validate() const;
};

// Columns are named x1..xd. Deterministic in the spec (including seed).
Dataset generate_synthetic(const SyntheticSpec& spec);

// D1..D5, G3-indep, G3-neg, G3-mixed.
SyntheticSpec builtin_spec(std::string_view name, Index n = 2000,
                           std::uint64_t seed = 0);

// {"n": 500, "seed": 1, "features": [{"kind": "gaussian", "mean": 0.5,
//  "sd": 0.1}, {"kind": "uniform", "lo": 0, "hi": 1},
//  {"kind": "bernoulli", "p": 0.5}], "correlation": [[1]]}
SyntheticSpec parse_synthetic_spec(std::string_view json);

// The linear scorers used with the synthetic designs: f1 (0.8, 0.2),
// f2 (0.5, 0.5), f3 (0.2, 0.8), f4 (0.33, 0.33, 0.34).
ScoringFunction builtin_scorer(std::string_view name);

}  // namespace rankshap

#endif  // RANKSHAP_SYNTH_HPP_

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

// Evaluation of explanations: fidelity, agreement and sensitivity.

#ifndef RANKSHAP_METRICS_HPP_
#define RANKSHAP_METRICS_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "rankshap/core.hpp"
#include "rankshap/scoring.hpp"

namespace rankshap {

enum class SimilarityKind { kKendall, kJaccardTop2, kEuclidUnit };

SimilarityKind parse_similarity_kind(std::string_view name);
std::string to_string(SimilarityKind kind);
inline constexpr SimilarityKind kAllSimilarityKinds[] = {
    SimilarityKind::kKendall, SimilarityKind::kJaccardTop2,
    SimilarityKind::kEuclidUnit};

struct NeighborSpec {
  enum class Kind { kFeatureKnn, kRankWindow };
  Kind kind = Kind::kFeatureKnn;
  // Neighbours per item, or the half-width of the rank window.
  Index count = 10;
};

struct SensitivityTriple {
  Index reference = 0;
  Index neighbor = 0;
  double explanation_distance = 0.0;
  Index rank_distance = 0;
  double feature_distance = 0.0;
};

struct SensitivityResult {
  double score = 0.0;
  std::vector<SensitivityTriple> triples;
};

// 1 - |qoi_value - reconstruction| / z, clamped to [0, 1]. For pairwise
// kinds `qoi_value` is the observed outcome difference (see
// observed_pair_outcome) and the result is 1 when the sign of the summed
// contributions matches it, 0 otherwise.
double fidelity(const ExplanationVector& expl, double qoi_value, double z);

// rank -> n, score -> max - min observed score (1 when all scores tie),
// top-k -> 1.
double fidelity_normalizer(QoIKind qoi, const Ranking& ranking);

// payoff(u) - payoff(v) for the pair, where payoff is the base QoI evaluated
// on the original items. Positive for score when u scores higher; negative for
// rank when u ranks better.
double observed_pair_outcome(QoIKind qoi, const Ranking& ranking, Index v_index,
                             Index u_index);

// Mean fidelity over `expls`, each judged against the observed QoI of its
// subject (or pair).
double method_fidelity(const std::vector<ExplanationVector>& expls,
                       const Dataset& data, QoIKind qoi,
                       const ScoringFunction& scorer);

// Features ordered by decreasing |contribution|, ties by index.
std::vector<Index> importance_order(const Eigen::Ref<const Eigen::VectorXd>& e);

double similarity(const Eigen::Ref<const Eigen::VectorXd>& e1,
                  const Eigen::Ref<const Eigen::VectorXd>& e2,
                  SimilarityKind kind);

// Mean similarity over aligned explanation lists.
double method_agreement(const std::vector<ExplanationVector>& g,
                        const std::vector<ExplanationVector>& q,
                        SimilarityKind kind);

// Neighbours of item v, nearest first.
std::vector<Index> neighbors(const Dataset& data, const Ranking& ranking,
                             Index v_index, const NeighborSpec& spec);

// Features standardized per column (zero mean, unit sample deviation;
// constant columns become zero).
FeatureMatrix zscore(const FeatureMatrix& values);

SensitivityResult sensitivity(const Dataset& data,
                              const std::vector<ExplanationVector>& expls,
                              const NeighborSpec& nbr, SimilarityKind kind,
                              const Ranking& ranking);

}  // namespace rankshap

#endif  // RANKSHAP_METRICS_HPP_

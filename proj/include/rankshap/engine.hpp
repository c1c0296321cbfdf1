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

// Shapley-value attribution of ranking outcomes.
//
// For an item v and a feature i, every coalition S of the other features is
// visited. Features in S are "randomized": they take values from rows
// sampled out of D \ {v}, while the remaining features keep v's values. The
// payoff of S is the mean QoI over those hybrids. Feature i receives the
// weighted difference between the payoffs of S and S u {i}, with weight
// 1 / (d * C(d-1, |S|)).
//
// Contributions are oriented so that, for every QoI,
//   reconstruction = baseline + sum(contributions)
// where the baseline is the payoff with every feature randomized (always
// averaged over all of D \ {v}, whatever the sample count) and, in
// EXACT mode with unbounded coalitions, the reconstruction equals the QoI of
// v itself. For ranks this means helpful features carry negative values.
//
// Pairwise explanations replace sampling with the single partner row u and
// are anchored at v: baseline = payoff of v, and the contributions move it to
// the payoff of u's values (so for pairwise-rank they sum to
// rank(u) - rank(v)).

#ifndef RANKSHAP_ENGINE_HPP_
#define RANKSHAP_ENGINE_HPP_

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rankshap/core.hpp"
#include "rankshap/scoring.hpp"

namespace rankshap {

enum class SamplingMode {
  // Whole rows of D \ {v}, without replacement.
  kRowJoint,
  // Each feature drawn independently from its column of D \ {v}.
  kIndependentMarginal,
};

SamplingMode parse_sampling_mode(std::string_view name);
std::string to_string(SamplingMode mode);

struct EngineOptions {
  // Samples per coalition; nullopt is EXACT (all n-1 other rows).
  std::optional<Index> samples;
  // Largest randomized coalition; nullopt is unbounded (d-1).
  std::optional<int> max_coalition;
  SamplingMode sampling = SamplingMode::kRowJoint;
  std::uint64_t seed = 0;
  int parallelism = 1;

  bool exact() const { return !samples.has_value(); }
  // e.g. "m=exact;max_coalition=all;sampling=row-joint;seed=0"
  std::string fingerprint() const;
  void validate(Index n, Index d) const;
};

struct CoalitionWeight {
  Coalition coalition;
  double weight;
};

// Every S subset of {0..d-1} \ {i} with |S| <= max_size, ordered by size
// then mask, with weight 1/(d * C(d-1,|S|)). Bounded enumerations are
// renormalized to sum to one.
std::vector<CoalitionWeight> enumerate_coalitions(int d, int i, int max_size);

// Draws sample rows for item v. EXACT (nullopt) returns the other n-1 rows in
// dataset order. Deterministic in (seed, stream_key).
FeatureMatrix draw_samples(const Dataset& data, Index v_index,
                           std::optional<Index> m, SamplingMode mode,
                           std::uint64_t seed, std::string_view stream_key);

ExplanationVector explain_item(const Dataset& data, Index v_index, QoIKind qoi,
                               const ScoringFunction& scorer,
                               const EngineOptions& opts,
                               std::shared_ptr<const Ranking> ranking = nullptr);

// Explains why u and v are ordered as they are, from v's point of view.
ExplanationVector explain_pair(const Dataset& data, Index v_index,
                               Index u_index, QoIKind qoi,
                               const ScoringFunction& scorer,
                               const EngineOptions& opts,
                               std::shared_ptr<const Ranking> ranking = nullptr);

// One explanation per item, in item order. Identical for any parallelism.
std::vector<ExplanationVector> explain_all(const Dataset& data, QoIKind qoi,
                                           const ScoringFunction& scorer,
                                           const EngineOptions& opts);

// Pairwise explanations for each (v, u) in `pairs`, in order.
std::vector<ExplanationVector> explain_pairs(
    const Dataset& data, const std::vector<std::pair<Index, Index>>& pairs,
    QoIKind qoi, const ScoringFunction& scorer, const EngineOptions& opts);

}  // namespace rankshap

#endif  // RANKSHAP_ENGINE_HPP_

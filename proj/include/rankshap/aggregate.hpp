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

// Box-and-whisker summaries of explanations across bands of the ranking.

#ifndef RANKSHAP_AGGREGATE_HPP_
#define RANKSHAP_AGGREGATE_HPP_

#include <string>
#include <utility>
#include <vector>

#include "rankshap/core.hpp"
#include "rankshap/scoring.hpp"

namespace rankshap {

struct StratumSummary {
  Index stratum = 1;  // 1-based
  Index feature = 0;
  Index count = 0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double whisker_lo = 0.0;
  double whisker_hi = 0.0;
};

// Quantile of ascending `sorted` data, interpolating linearly between order
// statistics at position p * (size - 1).
template <typename Container>
double quantile(const Container& sorted, double p) {
  if (sorted.empty()) throw ValidationError("quantile of empty data");
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted[sorted.size() - 1];
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

// Ranks (lo, hi] of stratum s (1-based): lo = ceil((s-1) n / S),
// hi = ceil(s n / S).
std::pair<Index, Index> stratum_bounds(Index s, Index n, Index n_strata);

// Quartiles and Tukey whiskers (furthest points within 1.5 IQR).
StratumSummary summarize(std::vector<double> values);

// One summary per (stratum, feature), strata outermost. Explanations must be
// in item order, one per item.
std::vector<StratumSummary> stratify_aggregate(
    const std::vector<ExplanationVector>& expls, const Ranking& ranking,
    Index n_strata);

// Columns stratum,feature,count,q1,median,q3,whisker_lo,whisker_hi.
std::string strata_csv(const std::vector<StratumSummary>& summaries,
                       const std::vector<std::string>& feature_names);

}  // namespace rankshap

#endif  // RANKSHAP_AGGREGATE_HPP_

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

#include "rankshap/aggregate.hpp"

#include <algorithm>

#include "rankshap/io.hpp"

namespace rankshap {

std::pair<Index, Index> stratum_bounds(Index s, Index n, Index n_strata) {
  if (n_strata < 1 || n_strata > n) {
    throw ValidationError("number of strata must lie in [1, n]");
  }
  if (s < 1 || s > n_strata) throw ValidationError("stratum out of range");
  auto ceil_div = [](Index a, Index b) { return (a + b - 1) / b; };
  return {ceil_div((s - 1) * n, n_strata), ceil_div(s * n, n_strata)};
}

StratumSummary summarize(std::vector<double> values) {
  if (values.empty()) throw ValidationError("cannot summarize an empty stratum");
  std::sort(values.begin(), values.end());
  StratumSummary s;
  s.count = static_cast<Index>(values.size());
  s.q1 = quantile(values, 0.25);
  s.median = quantile(values, 0.5);
  s.q3 = quantile(values, 0.75);
  const double reach = 1.5 * (s.q3 - s.q1);
  const auto lo = std::lower_bound(values.begin(), values.end(), s.q1 - reach);
  const auto hi = std::upper_bound(values.begin(), values.end(), s.q3 + reach);
  s.whisker_lo = std::min(*lo, s.q1);
  s.whisker_hi = std::max(*(hi - 1), s.q3);
  return s;
}

std::vector<StratumSummary> stratify_aggregate(
    const std::vector<ExplanationVector>& expls, const Ranking& ranking,
    Index n_strata) {
  const Index n = ranking.size();
  if (static_cast<Index>(expls.size()) != n) {
    throw ValidationError("aggregation needs one explanation per item");
  }
  if (n_strata < 1 || n_strata > n) {
    throw ValidationError("strata must lie in [1, " + std::to_string(n) + "]");
  }
  const Index d = expls.front().contributions.size();
  for (Index i = 0; i < n; ++i) {
    const auto& e = expls[static_cast<std::size_t>(i)];
    if (e.subject != i || e.partner || e.contributions.size() != d) {
      throw ValidationError(
          "aggregation needs per-item explanations in item order");
    }
  }
  std::vector<StratumSummary> out;
  for (Index s = 1; s <= n_strata; ++s) {
    const auto [lo, hi] = stratum_bounds(s, n, n_strata);
    for (Index j = 0; j < d; ++j) {
      std::vector<double> values;
      for (Index r = lo + 1; r <= hi; ++r) {
        const Index item = ranking.order()[static_cast<std::size_t>(r - 1)];
        values.push_back(expls[static_cast<std::size_t>(item)].contributions(j));
      }
      StratumSummary summary = summarize(std::move(values));
      summary.stratum = s;
      summary.feature = j;
      out.push_back(summary);
    }
  }
  return out;
}

std::string strata_csv(const std::vector<StratumSummary>& summaries,
                       const std::vector<std::string>& feature_names) {
  std::string out = "stratum,feature,count,q1,median,q3,whisker_lo,whisker_hi\n";
  for (const auto& s : summaries) {
    out += std::to_string(s.stratum) + ',' +
           csv_escape(feature_names.at(static_cast<std::size_t>(s.feature))) +
           ',' + std::to_string(s.count) + ',' + format_double(s.q1) + ',' +
           format_double(s.median) + ',' + format_double(s.q3) + ',' +
           format_double(s.whisker_lo) + ',' + format_double(s.whisker_hi) +
           '\n';
  }
  return out;
}

}  // namespace rankshap

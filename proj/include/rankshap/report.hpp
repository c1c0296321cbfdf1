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

// Presentation: display sign, waterfall SVG and plot-data documents.

#ifndef RANKSHAP_REPORT_HPP_
#define RANKSHAP_REPORT_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "rankshap/aggregate.hpp"
#include "rankshap/core.hpp"
#include "rankshap/metrics.hpp"

namespace rankshap {

// Explanation documents always use the efficiency convention (contributions
// sum to reconstruction - baseline). The presentation convention flips rank
// contributions so that a positive value means "moved the item up".
enum class DisplaySign { kEfficiency, kPresentation };

DisplaySign parse_display_sign(std::string_view name);
std::string to_string(DisplaySign sign);

// +1 or -1: the factor applied to contributions of `qoi` for display.
double display_factor(QoIKind qoi, DisplaySign sign);

// Contributions as displayed.
std::vector<ExplanationVector> apply_display_sign(
    std::vector<ExplanationVector> expls, DisplaySign sign);

// True when a contribution of this sign improves the outcome (higher score,
// better rank, top-k membership). Sign-independent of the display choice.
bool is_helpful(QoIKind qoi, double contribution);

// Horizontal waterfall: baseline, one bar per feature (largest |phi| first)
// and the final value. Bars are red when helpful and blue otherwise. Geometry
// follows the efficiency convention so the last bar ends at reconstruction;
// the printed labels follow `sign`. Bars carry data-value, data-start and
// data-end attributes.
std::string waterfall_svg(const ExplanationVector& expl,
                          const std::vector<std::string>& feature_names,
                          std::string_view title,
                          DisplaySign sign = DisplaySign::kEfficiency);

// Per-stratum box statistics as JSON for external charting. `summaries`
// should already be computed on contributions as displayed under `sign`.
std::string strata_plot_json(const std::vector<StratumSummary>& summaries,
                             const std::vector<std::string>& feature_names,
                             Index n, Index n_strata, QoIKind qoi,
                             DisplaySign sign);

// Bar-chart data for pairwise explanations.
std::string pairwise_bars_json(const std::vector<ExplanationVector>& expls,
                               const Dataset& data, DisplaySign sign);

// Columns reference,neighbor,expl_dist,rank_dist,feat_dist.
std::string triples_csv(const std::vector<SensitivityTriple>& triples,
                        const Dataset& data);

}  // namespace rankshap

#endif  // RANKSHAP_REPORT_HPP_

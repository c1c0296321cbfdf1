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

// Quantities of interest evaluated on hybrid items.

#ifndef RANKSHAP_QOI_HPP_
#define RANKSHAP_QOI_HPP_

#include <memory>
#include <optional>

#include "rankshap/core.hpp"
#include "rankshap/scoring.hpp"

namespace rankshap {

// Fixed arguments of a payoff: the dataset, the scorer, the QoI, the item
// being explained and, for pairwise kinds, its partner. Holds references to
// `dataset` and `scorer`; both must outlive the context.
struct PayoffContext {
  const Dataset& dataset;
  const ScoringFunction& scorer;
  QoIKind qoi;
  Index v_index;
  std::optional<Index> partner;
  std::shared_ptr<const Ranking> base_ranking;

  // Validates indices, k and scorer arity. `ranking` may be supplied to
  // share one precomputed ranking across many contexts.
  static PayoffContext make(const Dataset& dataset,
                            const ScoringFunction& scorer, QoIKind qoi,
                            Index v_index,
                            std::optional<Index> partner = std::nullopt,
                            std::shared_ptr<const Ranking> ranking = nullptr);
};

// The outcome of `u` standing in for item v: its score, its replacement
// rank, or its top-k indicator.
double payoff_one(const PayoffContext& ctx,
                  const Eigen::Ref<const Eigen::VectorXd>& u);

// Mean over positionally paired rows of the signed QoI difference:
//   score: f(u1) - f(u2)
//   rank:  rank(u2) - rank(u1)   (positive when u1 ranks better)
//   topk:  +1 if only u1 is in the top-k, -1 if only u2, else 0
template <typename Derived1, typename Derived2>
double iota(const PayoffContext& ctx, const Eigen::MatrixBase<Derived1>& u1,
            const Eigen::MatrixBase<Derived2>& u2) {
  if (u1.rows() != u2.rows() || u1.cols() != u2.cols()) {
    throw ValidationError("iota: sample sets differ in shape");
  }
  if (u1.rows() < 1) throw ValidationError("iota: empty sample");
  if (u1.cols() != ctx.dataset.num_features()) {
    throw ValidationError("iota: rows have the wrong length");
  }
  // Rows are copied into a contiguous vector so any storage order works.
  Eigen::VectorXd a(u1.cols());
  Eigen::VectorXd b(u1.cols());
  double sum = 0.0;
  for (Index r = 0; r < u1.rows(); ++r) {
    a = u1.row(r).transpose();
    b = u2.row(r).transpose();
    const double pa = payoff_one(ctx, a);
    const double pb = payoff_one(ctx, b);
    sum += ctx.qoi.is_rank_like() ? pb - pa : pa - pb;
  }
  return sum / static_cast<double>(u1.rows());
}

// Payoff of the single hybrid that takes features in `s` from u and the rest
// from v. Requires a pairwise QoI.
double payoff_pair(const PayoffContext& ctx,
                   const Eigen::Ref<const Eigen::VectorXd>& v,
                   const Eigen::Ref<const Eigen::VectorXd>& u, Coalition s);

// The observed value of the (non-pairwise) QoI for item v itself.
double observed_qoi(const PayoffContext& ctx);

}  // namespace rankshap

#endif  // RANKSHAP_QOI_HPP_

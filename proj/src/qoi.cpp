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

#include "rankshap/qoi.hpp"

namespace rankshap {

PayoffContext PayoffContext::make(const Dataset& dataset,
                                  const ScoringFunction& scorer, QoIKind qoi,
                                  Index v_index, std::optional<Index> partner,
                                  std::shared_ptr<const Ranking> ranking) {
  scorer.check_compatible(dataset.num_features());
  qoi.validate(dataset.size());
  if (v_index < 0 || v_index >= dataset.size()) {
    throw ValidationError("item index " + std::to_string(v_index) +
                          " out of range");
  }
  if (qoi.is_pairwise()) {
    if (!partner) throw ValidationError("pairwise QoI requires a partner item");
    if (*partner < 0 || *partner >= dataset.size()) {
      throw ValidationError("partner index out of range");
    }
    if (*partner == v_index) {
      throw ValidationError("pairwise QoI requires two distinct items");
    }
  } else {
    partner.reset();
  }
  if (!ranking) {
    ranking = std::make_shared<const Ranking>(rank_all(scorer, dataset));
  } else if (ranking->size() != dataset.size()) {
    throw ValidationError("ranking does not match the dataset");
  }
  return PayoffContext{dataset, scorer, qoi, v_index, partner,
                       std::move(ranking)};
}

double payoff_one(const PayoffContext& ctx,
                  const Eigen::Ref<const Eigen::VectorXd>& u) {
  const double s = ctx.scorer(u);
  const auto base = ctx.qoi.base();
  if (base == QoIKind::Kind::kScore) return s;
  const Index rank =
      ctx.partner ? ctx.base_ranking->replacement_rank(s, ctx.v_index,
                                                       *ctx.partner)
                  : ctx.base_ranking->replacement_rank(s, ctx.v_index);
  if (base == QoIKind::Kind::kRank) return static_cast<double>(rank);
  return rank <= *ctx.qoi.k() ? 1.0 : 0.0;
}

double payoff_pair(const PayoffContext& ctx,
                   const Eigen::Ref<const Eigen::VectorXd>& v,
                   const Eigen::Ref<const Eigen::VectorXd>& u, Coalition s) {
  if (!ctx.qoi.is_pairwise()) {
    throw ValidationError("payoff_pair requires a pairwise QoI");
  }
  return payoff_one(ctx, compose_hybrid(v, u, s));
}

double observed_qoi(const PayoffContext& ctx) {
  const Ranking& r = *ctx.base_ranking;
  switch (ctx.qoi.base()) {
    case QoIKind::Kind::kScore: return r.score_of(ctx.v_index);
    case QoIKind::Kind::kRank:
      return static_cast<double>(r.rank_of(ctx.v_index));
    default:
      return r.rank_of(ctx.v_index) <= *ctx.qoi.k() ? 1.0 : 0.0;
  }
}

}  // namespace rankshap

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

#ifndef RANKSHAP_SCORING_HPP_
#define RANKSHAP_SCORING_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rankshap/core.hpp"

namespace rankshap {

class Expression;

// Maps a feature row to a real score. Immutable and cheap to copy.
class ScoringFunction {
 public:
  enum class Kind { kLinear, kCsRankings, kAtp, kExpression };

  // Exponents of the CSRankings geometric mean, in column order
  // AI, Systems, Theory, Interdisciplinary. They sum to the root, 27.
  static constexpr double kCsRankingsExponents[4] = {5.0, 12.0, 3.0, 7.0};

  static ScoringFunction linear(Eigen::VectorXd weights);
  // (prod_a (count_a + 1)^e_a)^(1/27) over four area columns.
  static ScoringFunction csrankings();
  // 100 * (first serve % + first serve points won % + second serve points
  // won % + service points won % + aces per match - double faults per
  // match), six columns in that order.
  static ScoringFunction atp();
  // Arithmetic over feature names: + - * / ^, parentheses, numeric
  // literals. Names that are not plain identifiers can be double-quoted.
  static ScoringFunction expression(std::string_view text,
                                    const std::vector<std::string>& names);

  Kind kind() const { return kind_; }
  const Eigen::VectorXd& weights() const { return weights_; }
  const std::string& expression_text() const { return text_; }
  // Feature count this scorer requires.
  Index arity() const { return arity_; }
  // Throws ValidationError if the scorer cannot be applied to d features.
  void check_compatible(Index d) const;

  // Throws ComputationError on a non-finite result.
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& v) const;

 private:
  ScoringFunction() = default;

  Kind kind_ = Kind::kLinear;
  Index arity_ = 0;
  Eigen::VectorXd weights_;
  std::string text_;
  std::shared_ptr<const Expression> expr_;
};

inline double score(const ScoringFunction& f,
                    const Eigen::Ref<const Eigen::VectorXd>& v) {
  return f(v);
}

// Scores every row of `data`.
std::vector<double> score_all(const ScoringFunction& f, const Dataset& data);

// Parses a JSON scorer document:
//   {"kind": "linear", "weights": [0.4, 0.4, 0.2]}
//   {"kind": "csrankings"} | {"kind": "atp"}
//   {"kind": "expression", "expression": "0.5 * x1 + x2 ^ 2"}
// Feature order comes from `feature_names` (the dataset header).
ScoringFunction parse_scorer_config(std::string_view document,
                                    const std::vector<std::string>& feature_names);

// A permutation of items, best first. Ties go to the smaller row index.
class Ranking {
 public:
  explicit Ranking(std::vector<double> scores);

  Index size() const { return static_cast<Index>(order_.size()); }
  const std::vector<Index>& order() const { return order_; }
  // 1-based.
  Index rank_of(Index item) const {
    return rank_of_[static_cast<std::size_t>(item)];
  }
  double score_of(Index item) const {
    return scores_[static_cast<std::size_t>(item)];
  }
  const std::vector<double>& scores() const { return scores_; }

  // Rank of an item with score `s` that replaces item `v_index`. The newcomer
  // keeps v_index for tie purposes: it ranks below score-tied incumbents
  // with a smaller index and above those with a larger one.
  Index replacement_rank(double s, Index v_index) const;

  // Pairwise variant: as above, except that a tie against `partner` places
  // the newcomer on the side that gives it the partner's base rank.
  Index replacement_rank(double s, Index v_index, Index partner) const;

 private:
  std::vector<double> scores_;
  std::vector<Index> order_;
  std::vector<Index> rank_of_;
};

Ranking rank_all(const ScoringFunction& f, const Dataset& data);

// Rank of `u` within D \ {v} U {u}.
Index rank_of_replacement(const Dataset& data, Index v_index,
                          const Eigen::Ref<const Eigen::VectorXd>& u,
                          const ScoringFunction& f);

}  // namespace rankshap

#endif  // RANKSHAP_SCORING_HPP_

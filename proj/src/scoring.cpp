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

#include "rankshap/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "expression.hpp"

namespace rankshap {

ScoringFunction ScoringFunction::linear(Eigen::VectorXd weights) {
  if (weights.size() < 1) throw ValidationError("linear scorer has no weights");
  if (!weights.allFinite()) {
    throw ValidationError("linear scorer weights must be finite");
  }
  ScoringFunction f;
  f.kind_ = Kind::kLinear;
  f.arity_ = weights.size();
  f.weights_ = std::move(weights);
  return f;
}

ScoringFunction ScoringFunction::csrankings() {
  ScoringFunction f;
  f.kind_ = Kind::kCsRankings;
  f.arity_ = 4;
  return f;
}

ScoringFunction ScoringFunction::atp() {
  ScoringFunction f;
  f.kind_ = Kind::kAtp;
  f.arity_ = 6;
  return f;
}

ScoringFunction ScoringFunction::expression(
    std::string_view text, const std::vector<std::string>& names) {
  ScoringFunction f;
  f.kind_ = Kind::kExpression;
  f.arity_ = static_cast<Index>(names.size());
  f.text_ = std::string(text);
  f.expr_ = std::make_shared<const Expression>(text, names);
  return f;
}

void ScoringFunction::check_compatible(Index d) const {
  if (d != arity_) {
    throw ValidationError("scorer expects " + std::to_string(arity_) +
                          " features, dataset has " + std::to_string(d));
  }
}

double ScoringFunction::operator()(
    const Eigen::Ref<const Eigen::VectorXd>& v) const {
  double s = 0.0;
  switch (kind_) {
    case Kind::kLinear:
      // Fixed left-to-right order: identical rows must score bit-identically.
      for (Index j = 0; j < arity_; ++j) s += weights_(j) * v(j);
      break;
    case Kind::kCsRankings: {
      double log_sum = 0.0;
      for (Index j = 0; j < 4; ++j) {
        log_sum += kCsRankingsExponents[j] * std::log(v(j) + 1.0);
      }
      s = std::exp(log_sum / 27.0);
      break;
    }
    case Kind::kAtp:
      s = 100.0 * (v(0) + v(1) + v(2) + v(3) + v(4) - v(5));
      break;
    case Kind::kExpression:
      s = expr_->evaluate(v);
      break;
  }
  if (!std::isfinite(s)) {
    throw ComputationError("scoring function produced a non-finite value");
  }
  return s;
}

std::vector<double> score_all(const ScoringFunction& f, const Dataset& data) {
  f.check_compatible(data.num_features());
  std::vector<double> scores(static_cast<std::size_t>(data.size()));
  for (Index i = 0; i < data.size(); ++i) {
    scores[static_cast<std::size_t>(i)] = f(data.row(i));
  }
  return scores;
}

ScoringFunction parse_scorer_config(
    std::string_view document, const std::vector<std::string>& feature_names) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(document);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("scorer config is not valid JSON: ") +
                          e.what());
  }
  if (!doc.is_object() || !doc.contains("kind") || !doc["kind"].is_string()) {
    throw ValidationError("scorer config must declare a string 'kind'");
  }
  const auto kind = doc["kind"].get<std::string>();
  const auto d = static_cast<Index>(feature_names.size());

  ScoringFunction f = [&] {
    if (kind == "linear") {
      if (!doc.contains("weights") || !doc["weights"].is_array()) {
        throw ValidationError("linear scorer requires a 'weights' list");
      }
      const auto& w = doc["weights"];
      Eigen::VectorXd weights(static_cast<Index>(w.size()));
      for (std::size_t j = 0; j < w.size(); ++j) {
        if (!w[j].is_number()) {
          throw ValidationError("linear scorer weights must be numbers");
        }
        weights(static_cast<Index>(j)) = w[j].get<double>();
      }
      return ScoringFunction::linear(std::move(weights));
    }
    if (kind == "csrankings") return ScoringFunction::csrankings();
    if (kind == "atp") return ScoringFunction::atp();
    if (kind == "expression") {
      if (!doc.contains("expression") || !doc["expression"].is_string()) {
        throw ValidationError("expression scorer requires an 'expression'");
      }
      return ScoringFunction::expression(doc["expression"].get<std::string>(),
                                         feature_names);
    }
    throw ValidationError("unknown scorer kind '" + kind + "'");
  }();
  if (f.arity() != d) {
    throw ValidationError("scorer '" + kind + "' expects " +
                          std::to_string(f.arity()) + " weights/features, "
                          "dataset header has " + std::to_string(d));
  }
  return f;
}

Ranking::Ranking(std::vector<double> scores) : scores_(std::move(scores)) {
  const auto n = scores_.size();
  order_.resize(n);
  std::iota(order_.begin(), order_.end(), Index{0});
  std::sort(order_.begin(), order_.end(), [&](Index a, Index b) {
    const double sa = scores_[static_cast<std::size_t>(a)];
    const double sb = scores_[static_cast<std::size_t>(b)];
    return sa > sb || (sa == sb && a < b);
  });
  rank_of_.resize(n);
  for (std::size_t pos = 0; pos < n; ++pos) {
    rank_of_[static_cast<std::size_t>(order_[pos])] =
        static_cast<Index>(pos) + 1;
  }
}

Index Ranking::replacement_rank(double s, Index v_index) const {
  // Items of D that precede the key (s, v_index) in (score desc, index asc)
  // order form a prefix of order_.
  const auto ahead = std::partition_point(
      order_.begin(), order_.end(), [&](Index w) {
        const double sw = scores_[static_cast<std::size_t>(w)];
        return sw > s || (sw == s && w < v_index);
      });
  auto count = static_cast<Index>(ahead - order_.begin());
  // v itself was removed.
  if (score_of(v_index) > s) --count;
  return count + 1;
}

Index Ranking::replacement_rank(double s, Index v_index, Index partner) const {
  Index rank = replacement_rank(s, v_index);
  if (score_of(partner) == s) {
    const bool counted = partner < v_index;
    const bool wanted = rank_of(v_index) < rank_of(partner);
    rank += static_cast<Index>(wanted) - static_cast<Index>(counted);
  }
  return rank;
}

Ranking rank_all(const ScoringFunction& f, const Dataset& data) {
  return Ranking(score_all(f, data));
}

Index rank_of_replacement(const Dataset& data, Index v_index,
                          const Eigen::Ref<const Eigen::VectorXd>& u,
                          const ScoringFunction& f) {
  if (v_index < 0 || v_index >= data.size()) {
    throw ValidationError("item index out of range");
  }
  if (u.size() != data.num_features()) {
    throw ValidationError("replacement row has the wrong length");
  }
  return rank_all(f, data).replacement_rank(f(u), v_index);
}

}  // namespace rankshap

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

#include "rankshap/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rankshap {
namespace {

// Sums of exact contributions land within rounding of an integer difference.
constexpr double kSignTolerance = 1e-9;

int sign_of(double x) {
  if (x > kSignTolerance) return 1;
  if (x < -kSignTolerance) return -1;
  return 0;
}

void check_pair(const Eigen::Ref<const Eigen::VectorXd>& e1,
                const Eigen::Ref<const Eigen::VectorXd>& e2) {
  if (e1.size() != e2.size()) {
    throw ValidationError("similarity: explanations have " +
                          std::to_string(e1.size()) + " and " +
                          std::to_string(e2.size()) + " features");
  }
  if (e1.size() < 2) throw ValidationError("similarity needs d >= 2");
}

std::vector<Index> neighbors_from(const FeatureMatrix& z, const Ranking& ranking,
                                  Index v, const NeighborSpec& spec) {
  const Index n = z.rows();
  if (spec.count < 1 || spec.count >= n) {
    throw ValidationError("neighbour count must lie in [1, n-1]");
  }
  std::vector<Index> out;
  if (spec.kind == NeighborSpec::Kind::kFeatureKnn) {
    std::vector<std::pair<double, Index>> dist;
    dist.reserve(static_cast<std::size_t>(n - 1));
    for (Index u = 0; u < n; ++u) {
      if (u != v) dist.emplace_back((z.row(u) - z.row(v)).squaredNorm(), u);
    }
    const auto k = static_cast<std::size_t>(spec.count);
    std::partial_sort(dist.begin(), dist.begin() + static_cast<long>(k),
                      dist.end());
    for (std::size_t t = 0; t < k; ++t) out.push_back(dist[t].second);
    return out;
  }
  const Index r = ranking.rank_of(v);
  for (Index delta = 1; delta <= spec.count; ++delta) {
    for (const Index q : {r - delta, r + delta}) {
      if (q >= 1 && q <= n) {
        out.push_back(ranking.order()[static_cast<std::size_t>(q - 1)]);
      }
    }
  }
  return out;
}

}  // namespace

SimilarityKind parse_similarity_kind(std::string_view name) {
  if (name == "kendall") return SimilarityKind::kKendall;
  if (name == "jaccard-top2" || name == "jaccard") {
    return SimilarityKind::kJaccardTop2;
  }
  if (name == "euclid-unit" || name == "euclidean") {
    return SimilarityKind::kEuclidUnit;
  }
  throw ValidationError("unknown similarity kind '" + std::string(name) + "'");
}

std::string to_string(SimilarityKind kind) {
  switch (kind) {
    case SimilarityKind::kKendall: return "kendall";
    case SimilarityKind::kJaccardTop2: return "jaccard-top2";
    case SimilarityKind::kEuclidUnit: return "euclid-unit";
  }
  return "?";
}

double fidelity(const ExplanationVector& expl, double qoi_value, double z) {
  if (!(z > 0.0)) throw ValidationError("fidelity normalizer must be positive");
  if (expl.qoi.is_pairwise()) {
    return sign_of(expl.total()) == sign_of(qoi_value) ? 1.0 : 0.0;
  }
  const double f = 1.0 - std::abs(qoi_value - expl.reconstruction) / z;
  return std::clamp(f, 0.0, 1.0);
}

double fidelity_normalizer(QoIKind qoi, const Ranking& ranking) {
  switch (qoi.base()) {
    case QoIKind::Kind::kRank: return static_cast<double>(ranking.size());
    case QoIKind::Kind::kScore: {
      const auto& s = ranking.scores();
      const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
      const double span = *hi - *lo;
      return span > 0.0 ? span : 1.0;
    }
    default: return 1.0;
  }
}

double observed_pair_outcome(QoIKind qoi, const Ranking& ranking, Index v_index,
                             Index u_index) {
  switch (qoi.base()) {
    case QoIKind::Kind::kScore:
      return ranking.score_of(u_index) - ranking.score_of(v_index);
    case QoIKind::Kind::kRank:
      return static_cast<double>(ranking.rank_of(u_index) -
                                 ranking.rank_of(v_index));
    default: {
      const Index k = *qoi.k();
      return (ranking.rank_of(u_index) <= k ? 1.0 : 0.0) -
             (ranking.rank_of(v_index) <= k ? 1.0 : 0.0);
    }
  }
}

double method_fidelity(const std::vector<ExplanationVector>& expls,
                       const Dataset& data, QoIKind qoi,
                       const ScoringFunction& scorer) {
  if (expls.empty()) throw ValidationError("no explanations to evaluate");
  qoi.validate(data.size());
  const Ranking ranking = rank_all(scorer, data);
  const double z = fidelity_normalizer(qoi, ranking);
  double sum = 0.0;
  for (const auto& e : expls) {
    if (e.subject < 0 || e.subject >= data.size()) {
      throw ValidationError("explanation subject out of range");
    }
    double observed = 0.0;
    if (qoi.is_pairwise()) {
      if (!e.partner) throw ValidationError("pairwise explanation lacks a partner");
      observed = observed_pair_outcome(qoi, ranking, e.subject, *e.partner);
    } else {
      switch (qoi.base()) {
        case QoIKind::Kind::kScore: observed = ranking.score_of(e.subject); break;
        case QoIKind::Kind::kRank:
          observed = static_cast<double>(ranking.rank_of(e.subject));
          break;
        default:
          observed = ranking.rank_of(e.subject) <= *qoi.k() ? 1.0 : 0.0;
      }
    }
    sum += fidelity(e, observed, z);
  }
  return sum / static_cast<double>(expls.size());
}

std::vector<Index> importance_order(
    const Eigen::Ref<const Eigen::VectorXd>& e) {
  std::vector<Index> order(static_cast<std::size_t>(e.size()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(e(a)) > std::abs(e(b));
  });
  return order;
}

double similarity(const Eigen::Ref<const Eigen::VectorXd>& e1,
                  const Eigen::Ref<const Eigen::VectorXd>& e2,
                  SimilarityKind kind) {
  check_pair(e1, e2);
  const Index d = e1.size();
  switch (kind) {
    case SimilarityKind::kKendall: {
      const auto o1 = importance_order(e1);
      const auto o2 = importance_order(e2);
      std::vector<Index> pos2(static_cast<std::size_t>(d));
      for (Index p = 0; p < d; ++p) pos2[static_cast<std::size_t>(o2[p])] = p;
      Index discordant = 0;
      for (Index a = 0; a < d; ++a) {
        for (Index b = a + 1; b < d; ++b) {
          if (pos2[static_cast<std::size_t>(o1[a])] >
              pos2[static_cast<std::size_t>(o1[b])]) {
            ++discordant;
          }
        }
      }
      return 1.0 - static_cast<double>(discordant) /
                       (static_cast<double>(d) * (d - 1) / 2.0);
    }
    case SimilarityKind::kJaccardTop2: {
      const auto o1 = importance_order(e1);
      const auto o2 = importance_order(e2);
      int common = 0;
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) common += o1[a] == o2[b];
      }
      return common / static_cast<double>(4 - common);
    }
    case SimilarityKind::kEuclidUnit: {
      const double n1 = e1.norm();
      const double n2 = e2.norm();
      if (n1 == 0.0 || n2 == 0.0) return n1 == n2 ? 1.0 : 0.0;
      const double dist = (e1 / n1 - e2 / n2).norm();
      return std::clamp(1.0 - dist / 2.0, 0.0, 1.0);
    }
  }
  return 0.0;
}

double method_agreement(const std::vector<ExplanationVector>& g,
                        const std::vector<ExplanationVector>& q,
                        SimilarityKind kind) {
  if (g.empty() || g.size() != q.size()) {
    throw ValidationError("agreement needs two aligned, non-empty lists");
  }
  double sum = 0.0;
  for (std::size_t t = 0; t < g.size(); ++t) {
    if (g[t].subject != q[t].subject || g[t].partner != q[t].partner) {
      throw ValidationError("agreement lists are not aligned at position " +
                            std::to_string(t));
    }
    sum += similarity(g[t].contributions, q[t].contributions, kind);
  }
  return sum / static_cast<double>(g.size());
}

FeatureMatrix zscore(const FeatureMatrix& values) {
  FeatureMatrix z = values;
  const Index n = values.rows();
  for (Index j = 0; j < values.cols(); ++j) {
    const double mean = values.col(j).mean();
    const double var = n > 1 ? (values.col(j).array() - mean).square().sum() /
                                   static_cast<double>(n - 1)
                             : 0.0;
    const double sd = std::sqrt(var);
    if (sd > 0.0) {
      z.col(j) = (values.col(j).array() - mean) / sd;
    } else {
      z.col(j).setZero();
    }
  }
  return z;
}

std::vector<Index> neighbors(const Dataset& data, const Ranking& ranking,
                             Index v_index, const NeighborSpec& spec) {
  if (v_index < 0 || v_index >= data.size()) {
    throw ValidationError("item index out of range");
  }
  return neighbors_from(zscore(data.values()), ranking, v_index, spec);
}

SensitivityResult sensitivity(const Dataset& data,
                              const std::vector<ExplanationVector>& expls,
                              const NeighborSpec& nbr, SimilarityKind kind,
                              const Ranking& ranking) {
  const Index n = data.size();
  if (static_cast<Index>(expls.size()) != n || ranking.size() != n) {
    throw ValidationError("sensitivity needs one explanation per item");
  }
  const FeatureMatrix z = zscore(data.values());
  SensitivityResult out;
  double sum = 0.0;
  for (Index v = 0; v < n; ++v) {
    const auto& ev = expls[static_cast<std::size_t>(v)];
    if (ev.subject != v) {
      throw ValidationError("explanations must be in item order");
    }
    for (const Index u : neighbors_from(z, ranking, v, nbr)) {
      const auto& eu = expls[static_cast<std::size_t>(u)];
      sum += similarity(ev.contributions, eu.contributions, kind);
      out.triples.push_back(
          {v, u, (ev.contributions - eu.contributions).norm(),
           std::abs(ranking.rank_of(v) - ranking.rank_of(u)),
           (z.row(v) - z.row(u)).norm()});
    }
  }
  out.score = out.triples.empty()
                  ? 1.0
                  : sum / static_cast<double>(out.triples.size());
  return out;
}

}  // namespace rankshap

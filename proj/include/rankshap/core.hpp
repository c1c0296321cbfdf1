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

// Shared data model: datasets, coalitions, quantities of interest and
// explanation vectors, plus the hybrid-item composition primitive.

#ifndef RANKSHAP_CORE_HPP_
#define RANKSHAP_CORE_HPP_

#include <Eigen/Dense>

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rankshap {

// Error taxonomy. The CLI maps these onto exit codes 1, 2 and 3.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ComputationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Index = Eigen::Index;
using FeatureRow = Eigen::VectorXd;
// Items are rows; row-major keeps each item contiguous.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// An immutable table of n items with d real-valued features each. Row order
// is significant: it is the tie-break order of every ranking.
class Dataset {
 public:
  Dataset(FeatureMatrix values, std::vector<std::string> feature_names,
          std::optional<std::vector<std::string>> ids = std::nullopt);

  Index size() const { return values_.rows(); }
  Index num_features() const { return values_.cols(); }

  const FeatureMatrix& values() const { return values_; }
  auto row(Index i) const { return values_.row(i).transpose(); }
  // Column j restricted to every item except `skip`.
  std::vector<double> column_without(Index j, Index skip) const;

  const std::vector<std::string>& feature_names() const {
    return feature_names_;
  }
  bool has_ids() const { return ids_.has_value(); }
  const std::optional<std::vector<std::string>>& ids() const { return ids_; }
  // Id when present, otherwise the decimal row index.
  std::string label(Index i) const;

  // Resolves an id, or a non-negative row index when no id matches.
  std::optional<Index> find(std::string_view selector) const;

  // FNV-1a over the shape, names, ids and the bit patterns of all values.
  std::uint64_t content_hash() const;

 private:
  FeatureMatrix values_;
  std::vector<std::string> feature_names_;
  std::optional<std::vector<std::string>> ids_;
};

// Builds a Dataset from a parsed CSV table (header row first). With
// `has_ids`, the first column holds item identifiers.
Dataset validate_dataset(const std::vector<std::vector<std::string>>& raw,
                         bool has_ids);

// A set of feature indices, stored as a bitmask (d <= 62).
class Coalition {
 public:
  static constexpr int kMaxFeatures = 62;

  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t mask) : mask_(mask) {}
  Coalition(std::initializer_list<int> members);

  static constexpr Coalition all(int d) {
    return Coalition(d >= 64 ? ~std::uint64_t{0}
                             : (std::uint64_t{1} << d) - 1);
  }

  constexpr bool contains(int j) const { return (mask_ >> j) & 1U; }
  constexpr Coalition with(int j) const {
    return Coalition(mask_ | (std::uint64_t{1} << j));
  }
  constexpr Coalition complement(int d) const {
    return Coalition(~mask_ & all(d).mask_);
  }
  constexpr int size() const { return std::popcount(mask_); }
  constexpr bool empty() const { return mask_ == 0; }
  constexpr std::uint64_t mask() const { return mask_; }
  constexpr bool valid_for(int d) const {
    return d <= kMaxFeatures && (mask_ & ~all(d).mask_) == 0;
  }
  std::vector<int> members() const;

  friend constexpr bool operator==(Coalition, Coalition) = default;

 private:
  std::uint64_t mask_ = 0;
};

// result[j] = u[j] for j in s, v[j] otherwise.
template <typename DerivedOut, typename DerivedV, typename DerivedU>
void compose_hybrid_into(Eigen::MatrixBase<DerivedOut>& out,
                         const Eigen::MatrixBase<DerivedV>& v,
                         const Eigen::MatrixBase<DerivedU>& u, Coalition s) {
  const Index d = v.size();
  for (Index j = 0; j < d; ++j) {
    out(j) = s.contains(static_cast<int>(j)) ? u(j) : v(j);
  }
}

template <typename DerivedV, typename DerivedU>
FeatureRow compose_hybrid(const Eigen::MatrixBase<DerivedV>& v,
                          const Eigen::MatrixBase<DerivedU>& u, Coalition s) {
  if (v.size() != u.size()) {
    throw ValidationError("compose_hybrid: rows have lengths " +
                          std::to_string(v.size()) + " and " +
                          std::to_string(u.size()));
  }
  if (!s.valid_for(static_cast<int>(v.size()))) {
    throw ValidationError("compose_hybrid: coalition out of range");
  }
  FeatureRow out(v.size());
  compose_hybrid_into(out, v, u, s);
  return out;
}

// Which payoff is being explained.
class QoIKind {
 public:
  enum class Kind { kScore, kRank, kTopK, kPairwiseScore, kPairwiseRank,
                    kPairwiseTopK };

  QoIKind() = default;
  explicit QoIKind(Kind kind, std::optional<Index> k = std::nullopt);

  static QoIKind score() { return QoIKind(Kind::kScore); }
  static QoIKind rank() { return QoIKind(Kind::kRank); }
  static QoIKind topk(Index k) { return QoIKind(Kind::kTopK, k); }
  static QoIKind pairwise_score() { return QoIKind(Kind::kPairwiseScore); }
  static QoIKind pairwise_rank() { return QoIKind(Kind::kPairwiseRank); }
  static QoIKind pairwise_topk(Index k) {
    return QoIKind(Kind::kPairwiseTopK, k);
  }
  // "score", "rank", "topk", "pairwise-score", "pairwise-rank",
  // "pairwise-topk".
  static QoIKind parse(std::string_view name,
                       std::optional<Index> k = std::nullopt);

  Kind kind() const { return kind_; }
  std::optional<Index> k() const { return k_; }
  bool is_pairwise() const;
  // The single-item payoff underlying a pairwise kind (identity otherwise).
  Kind base() const;
  bool is_rank_like() const { return base() == Kind::kRank; }
  std::string name() const;
  // Throws ValidationError unless k is consistent with n.
  void validate(Index n) const;

  friend bool operator==(const QoIKind&, const QoIKind&) = default;

 private:
  Kind kind_ = Kind::kScore;
  std::optional<Index> k_;
};

// Per-feature contributions for one item, or one ordered pair, under one QoI.
struct ExplanationVector {
  Eigen::VectorXd contributions;
  QoIKind qoi;
  Index subject = 0;
  // Set for pairwise kinds: the item whose feature values are moved onto
  // `subject`.
  std::optional<Index> partner;
  double baseline = 0.0;
  double reconstruction = 0.0;
  std::string options_fingerprint;

  double total() const { return contributions.sum(); }
  // Recomputes reconstruction from baseline and contributions.
  void finalize() { reconstruction = baseline + total(); }
};

}  // namespace rankshap

#endif  // RANKSHAP_CORE_HPP_

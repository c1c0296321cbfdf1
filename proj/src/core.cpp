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

#include "rankshap/core.hpp"

#include <charconv>
#include <cmath>
#include <cstring>
#include <unordered_set>

namespace rankshap {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv_mix(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= bytes[i];
    h *= kFnvPrime;
  }
}

void fnv_mix_string(std::uint64_t& h, std::string_view s) {
  const std::uint64_t len = s.size();
  fnv_mix(h, &len, sizeof(len));
  fnv_mix(h, s.data(), s.size());
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' ||
                        s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::optional<double> parse_real(std::string_view cell) {
  cell = trim(cell);
  if (!cell.empty() && cell.front() == '+') cell.remove_prefix(1);
  if (cell.empty()) return std::nullopt;
  double value = 0.0;
  const auto* end = cell.data() + cell.size();
  auto [ptr, ec] = std::from_chars(cell.data(), end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    return std::nullopt;
  }
  return value;
}

}  // namespace

Dataset::Dataset(FeatureMatrix values, std::vector<std::string> feature_names,
                 std::optional<std::vector<std::string>> ids)
    : values_(std::move(values)),
      feature_names_(std::move(feature_names)),
      ids_(std::move(ids)) {
  if (values_.rows() < 1) throw ValidationError("dataset has no items");
  if (values_.cols() < 1) throw ValidationError("dataset has no features");
  if (static_cast<Index>(feature_names_.size()) != values_.cols()) {
    throw ValidationError("expected " + std::to_string(values_.cols()) +
                          " feature names, got " +
                          std::to_string(feature_names_.size()));
  }
  if (!values_.allFinite()) {
    throw ValidationError("dataset contains non-finite values");
  }
  if (ids_) {
    if (static_cast<Index>(ids_->size()) != values_.rows()) {
      throw ValidationError("expected one id per item");
    }
    std::unordered_set<std::string> seen;
    for (const auto& id : *ids_) {
      if (!seen.insert(id).second) {
        throw ValidationError("duplicate id '" + id + "'");
      }
    }
  }
}

std::vector<double> Dataset::column_without(Index j, Index skip) const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(size()));
  for (Index i = 0; i < size(); ++i) {
    if (i != skip) out.push_back(values_(i, j));
  }
  return out;
}

std::string Dataset::label(Index i) const {
  if (ids_) return (*ids_)[static_cast<std::size_t>(i)];
  return std::to_string(i);
}

std::optional<Index> Dataset::find(std::string_view selector) const {
  if (ids_) {
    for (std::size_t i = 0; i < ids_->size(); ++i) {
      if ((*ids_)[i] == selector) return static_cast<Index>(i);
    }
  }
  Index idx = -1;
  const auto* end = selector.data() + selector.size();
  auto [ptr, ec] = std::from_chars(selector.data(), end, idx);
  if (ec == std::errc() && ptr == end && idx >= 0 && idx < size()) {
    return idx;
  }
  return std::nullopt;
}

std::uint64_t Dataset::content_hash() const {
  std::uint64_t h = kFnvOffset;
  const std::int64_t shape[2] = {size(), num_features()};
  fnv_mix(h, shape, sizeof(shape));
  for (const auto& name : feature_names_) fnv_mix_string(h, name);
  if (ids_) {
    for (const auto& id : *ids_) fnv_mix_string(h, id);
  }
  for (Index i = 0; i < size(); ++i) {
    for (Index j = 0; j < num_features(); ++j) {
      std::uint64_t bits = 0;
      const double value = values_(i, j);
      std::memcpy(&bits, &value, sizeof(bits));
      fnv_mix(h, &bits, sizeof(bits));
    }
  }
  return h;
}

Dataset validate_dataset(const std::vector<std::vector<std::string>>& raw,
                         bool has_ids) {
  if (raw.empty()) throw ValidationError("table has no header row");
  if (raw.size() < 2) throw ValidationError("table has no data rows");
  const auto& header = raw.front();
  const std::size_t first = has_ids ? 1 : 0;
  if (header.size() <= first) {
    throw ValidationError("header declares no feature columns");
  }
  std::vector<std::string> names;
  for (std::size_t c = first; c < header.size(); ++c) {
    names.emplace_back(trim(header[c]));
  }

  const auto n = static_cast<Index>(raw.size() - 1);
  const auto d = static_cast<Index>(names.size());
  FeatureMatrix values(n, d);
  std::vector<std::string> ids;
  for (Index i = 0; i < n; ++i) {
    const auto& row = raw[static_cast<std::size_t>(i) + 1];
    // Rows are reported 1-based, counting the header as row 1.
    const std::string where = "row " + std::to_string(i + 2);
    if (row.size() != header.size()) {
      throw ValidationError(where + ": expected " +
                            std::to_string(header.size()) + " cells, got " +
                            std::to_string(row.size()));
    }
    if (has_ids) ids.emplace_back(trim(row[0]));
    for (Index j = 0; j < d; ++j) {
      const auto& cell = row[first + static_cast<std::size_t>(j)];
      auto value = parse_real(cell);
      if (!value) {
        throw ValidationError(where + ", column '" +
                              names[static_cast<std::size_t>(j)] +
                              "': not a finite number: '" + cell + "'");
      }
      values(i, j) = *value;
    }
  }
  if (has_ids) return Dataset(std::move(values), std::move(names),
                              std::move(ids));
  return Dataset(std::move(values), std::move(names));
}

Coalition::Coalition(std::initializer_list<int> members) {
  for (int j : members) {
    if (j < 0 || j >= kMaxFeatures) {
      throw ValidationError("coalition member out of range");
    }
    mask_ |= std::uint64_t{1} << j;
  }
}

std::vector<int> Coalition::members() const {
  std::vector<int> out;
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

QoIKind::QoIKind(Kind kind, std::optional<Index> k) : kind_(kind), k_(k) {
  const bool needs_k = kind == Kind::kTopK || kind == Kind::kPairwiseTopK;
  if (needs_k && !k_) throw ValidationError("top-k QoI requires k");
  if (!needs_k) k_.reset();
  if (k_ && *k_ < 1) throw ValidationError("k must be a positive integer");
}

QoIKind QoIKind::parse(std::string_view name, std::optional<Index> k) {
  if (name == "score") return QoIKind(Kind::kScore);
  if (name == "rank") return QoIKind(Kind::kRank);
  if (name == "topk") return QoIKind(Kind::kTopK, k);
  if (name == "pairwise-score") return QoIKind(Kind::kPairwiseScore);
  if (name == "pairwise-rank") return QoIKind(Kind::kPairwiseRank);
  if (name == "pairwise-topk") return QoIKind(Kind::kPairwiseTopK, k);
  throw ValidationError("unknown QoI '" + std::string(name) + "'");
}

bool QoIKind::is_pairwise() const {
  return kind_ == Kind::kPairwiseScore || kind_ == Kind::kPairwiseRank ||
         kind_ == Kind::kPairwiseTopK;
}

QoIKind::Kind QoIKind::base() const {
  switch (kind_) {
    case Kind::kPairwiseScore: return Kind::kScore;
    case Kind::kPairwiseRank: return Kind::kRank;
    case Kind::kPairwiseTopK: return Kind::kTopK;
    default: return kind_;
  }
}

std::string QoIKind::name() const {
  switch (kind_) {
    case Kind::kScore: return "score";
    case Kind::kRank: return "rank";
    case Kind::kTopK: return "topk";
    case Kind::kPairwiseScore: return "pairwise-score";
    case Kind::kPairwiseRank: return "pairwise-rank";
    case Kind::kPairwiseTopK: return "pairwise-topk";
  }
  return "unknown";
}

void QoIKind::validate(Index n) const {
  if (k_ && *k_ > n) {
    throw ValidationError("k = " + std::to_string(*k_) +
                          " exceeds the number of items (" +
                          std::to_string(n) + ")");
  }
}

}  // namespace rankshap

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

#include "rankshap/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <random>
#include <thread>
#include <unordered_set>

#include "rankshap/qoi.hpp"

namespace rankshap {
namespace {

std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, std::string_view key) {
  return std::mt19937_64(splitmix64(seed ^ splitmix64(fnv1a(key))));
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int j = 1; j <= k; ++j) c = c * (n - k + j) / j;
  return c;
}

// Spreads a (d-1)-bit mask over {0..d-1} \ {i}.
std::uint64_t insert_gap(std::uint64_t compact, int i) {
  const std::uint64_t low = compact & ((std::uint64_t{1} << i) - 1);
  return low | ((compact & ~((std::uint64_t{1} << i) - 1)) << 1);
}

// Runs body(0..count-1) on up to `jobs` threads. Every index is handled
// exactly once; the lowest failing index is rethrown.
void parallel_for(Index count, int jobs,
                  const std::function<void(Index)>& body) {
  jobs = static_cast<int>(std::min<Index>(std::max(jobs, 1), count));
  if (jobs <= 1) {
    for (Index t = 0; t < count; ++t) body(t);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<Index> next{0};
  auto worker = [&] {
    for (Index t = next++; t < count; t = next++) {
      try {
        body(t);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(jobs));
  for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::string stream_key(Index item, int feature, Coalition s) {
  return "item=" + std::to_string(item) + "/feature=" +
         std::to_string(feature) + "/coalition=" + std::to_string(s.mask());
}

int coalition_bound(const EngineOptions& opts, Index d) {
  return opts.max_coalition ? *opts.max_coalition : static_cast<int>(d - 1);
}

void check_engine_inputs(const Dataset& data, const EngineOptions& opts) {
  if (data.size() < 2) {
    throw ValidationError("explanations need at least two items");
  }
  if (data.num_features() > Coalition::kMaxFeatures) {
    throw ValidationError("at most 62 features are supported");
  }
  opts.validate(data.size(), data.num_features());
}

// Runs the per-feature loops of an item explanation. With `jobs` > 1 the
// features are split across threads; each writes only its own entry.
ExplanationVector explain_item_impl(const Dataset& data, Index v_index,
                                    QoIKind qoi, const ScoringFunction& scorer,
                                    const EngineOptions& opts,
                                    std::shared_ptr<const Ranking> ranking,
                                    int jobs) {
  if (qoi.is_pairwise()) {
    throw ValidationError("explain_item needs a per-item QoI, got " +
                          qoi.name());
  }
  check_engine_inputs(data, opts);
  const PayoffContext ctx = PayoffContext::make(data, scorer, qoi, v_index,
                                                std::nullopt,
                                                std::move(ranking));
  const Index d = data.num_features();
  const int bound = coalition_bound(opts, d);
  const auto v = data.row(v_index).eval();
  // iota is positive when the smaller coalition does better; ranks improve
  // downward, so they are flipped to keep reconstruction = QoI(v).
  const double sign = qoi.is_rank_like() ? -1.0 : 1.0;

  // EXACT draws do not depend on the stream key, so one copy serves all.
  FeatureMatrix exact_rows;
  if (opts.exact()) {
    exact_rows = draw_samples(data, v_index, std::nullopt, opts.sampling,
                              opts.seed, "exact");
  }

  ExplanationVector out;
  out.contributions = Eigen::VectorXd::Zero(d);
  parallel_for(d, jobs, [&](Index fi) {
    const int i = static_cast<int>(fi);
    FeatureMatrix u1;
    FeatureMatrix u2;
    FeatureMatrix drawn;
    double phi = 0.0;
    for (const CoalitionWeight& cw : enumerate_coalitions(
             static_cast<int>(d), i, bound)) {
      if (!opts.exact()) {
        drawn = draw_samples(data, v_index, opts.samples, opts.sampling,
                             opts.seed, stream_key(v_index, i, cw.coalition));
      }
      const FeatureMatrix& rows = opts.exact() ? exact_rows : drawn;
      u1.resize(rows.rows(), d);
      u2.resize(rows.rows(), d);
      const Coalition s = cw.coalition;
      const Coalition si = s.with(i);
      for (Index r = 0; r < rows.rows(); ++r) {
        for (Index j = 0; j < d; ++j) {
          const int jj = static_cast<int>(j);
          u1(r, j) = s.contains(jj) ? rows(r, j) : v(j);
          u2(r, j) = si.contains(jj) ? rows(r, j) : v(j);
        }
      }
      phi += cw.weight * sign * iota(ctx, u1, u2);
    }
    out.contributions(fi) = phi;
  });

  // The baseline is a property of the dataset, not of the approximation, so
  // it always averages over every other row.
  const FeatureMatrix base_rows =
      opts.exact() ? exact_rows
                   : draw_samples(data, v_index, std::nullopt,
                                  SamplingMode::kRowJoint, opts.seed, "exact");
  double base = 0.0;
  for (Index r = 0; r < base_rows.rows(); ++r) {
    base += payoff_one(ctx, base_rows.row(r).transpose());
  }
  out.baseline = base / static_cast<double>(base_rows.rows());
  out.qoi = qoi;
  out.subject = v_index;
  out.options_fingerprint = opts.fingerprint();
  out.finalize();
  return out;
}

ExplanationVector explain_pair_impl(const Dataset& data, Index v_index,
                                    Index u_index, QoIKind qoi,
                                    const ScoringFunction& scorer,
                                    const EngineOptions& opts,
                                    std::shared_ptr<const Ranking> ranking) {
  if (!qoi.is_pairwise()) {
    throw ValidationError("explain_pair needs a pairwise QoI, got " +
                          qoi.name());
  }
  check_engine_inputs(data, opts);
  const PayoffContext ctx = PayoffContext::make(data, scorer, qoi, v_index,
                                                u_index, std::move(ranking));
  const Index d = data.num_features();
  const int bound = coalition_bound(opts, d);
  const auto v = data.row(v_index).eval();
  const auto u = data.row(u_index).eval();
  // Contributions are c(S u {i}) - c(S); iota gives the opposite for score
  // and top-k and exactly this for rank.
  const double sign = qoi.is_rank_like() ? 1.0 : -1.0;

  ExplanationVector out;
  out.contributions = Eigen::VectorXd::Zero(d);
  Eigen::Matrix<double, 1, Eigen::Dynamic> h1(d);
  Eigen::Matrix<double, 1, Eigen::Dynamic> h2(d);
  for (int i = 0; i < d; ++i) {
    double phi = 0.0;
    for (const CoalitionWeight& cw :
         enumerate_coalitions(static_cast<int>(d), i, bound)) {
      const Coalition s = cw.coalition;
      const Coalition si = s.with(i);
      for (Index j = 0; j < d; ++j) {
        const int jj = static_cast<int>(j);
        h1(j) = s.contains(jj) ? u(j) : v(j);
        h2(j) = si.contains(jj) ? u(j) : v(j);
      }
      phi += cw.weight * sign * iota(ctx, h1, h2);
    }
    out.contributions(i) = phi;
  }
  out.baseline = payoff_one(ctx, v);
  out.qoi = qoi;
  out.subject = v_index;
  out.partner = u_index;
  out.options_fingerprint = opts.fingerprint();
  out.finalize();
  return out;
}

}  // namespace

SamplingMode parse_sampling_mode(std::string_view name) {
  if (name == "row-joint") return SamplingMode::kRowJoint;
  if (name == "independent" || name == "independent-marginal") {
    return SamplingMode::kIndependentMarginal;
  }
  throw ValidationError("unknown sampling mode '" + std::string(name) + "'");
}

std::string to_string(SamplingMode mode) {
  return mode == SamplingMode::kRowJoint ? "row-joint"
                                         : "independent-marginal";
}

std::string EngineOptions::fingerprint() const {
  return "m=" + (samples ? std::to_string(*samples) : std::string("exact")) +
         ";max_coalition=" +
         (max_coalition ? std::to_string(*max_coalition) : std::string("all")) +
         ";sampling=" + to_string(sampling) + ";seed=" + std::to_string(seed);
}

void EngineOptions::validate(Index n, Index d) const {
  if (samples) {
    if (*samples < 1) throw ValidationError("sample count must be at least 1");
    if (sampling == SamplingMode::kRowJoint && *samples > n - 1) {
      throw ValidationError("sample count " + std::to_string(*samples) +
                            " exceeds the " + std::to_string(n - 1) +
                            " other items");
    }
  } else if (sampling != SamplingMode::kRowJoint) {
    throw ValidationError("EXACT mode requires row-joint sampling");
  }
  if (max_coalition && (*max_coalition < 0 || *max_coalition > d - 1)) {
    throw ValidationError("max coalition size must lie in [0, " +
                          std::to_string(d - 1) + "]");
  }
  if (parallelism < 1) throw ValidationError("parallelism must be positive");
}

std::vector<CoalitionWeight> enumerate_coalitions(int d, int i, int max_size) {
  std::vector<CoalitionWeight> out;
  const int others = d - 1;
  max_size = std::min(max_size, others);
  double total = 0.0;
  for (int k = 0; k <= max_size; ++k) {
    const double w = 1.0 / (d * binomial(others, k));
    if (k == 0) {
      out.push_back({Coalition(), w});
      total += w;
      continue;
    }
    // Gosper's hack: successive masks with k bits set, in increasing order.
    const std::uint64_t limit = std::uint64_t{1} << others;
    for (std::uint64_t m = (std::uint64_t{1} << k) - 1; m < limit;) {
      out.push_back({Coalition(insert_gap(m, i)), w});
      total += w;
      const std::uint64_t c = m & -m;
      const std::uint64_t r = m + c;
      m = (((r ^ m) >> 2) / c) | r;
    }
  }
  if (max_size < others) {
    for (auto& cw : out) cw.weight /= total;
  }
  return out;
}

FeatureMatrix draw_samples(const Dataset& data, Index v_index,
                           std::optional<Index> m, SamplingMode mode,
                           std::uint64_t seed, std::string_view stream_key) {
  const Index n = data.size();
  const Index d = data.num_features();
  if (n < 2) throw ValidationError("no other items to sample from");
  if (v_index < 0 || v_index >= n) {
    throw ValidationError("item index out of range");
  }
  // Position p among the other items maps back to a dataset row.
  auto other = [v_index](Index p) { return p < v_index ? p : p + 1; };

  if (!m) {
    if (mode != SamplingMode::kRowJoint) {
      throw ValidationError("EXACT mode requires row-joint sampling");
    }
    FeatureMatrix rows(n - 1, d);
    for (Index p = 0; p < n - 1; ++p) rows.row(p) = data.values().row(other(p));
    return rows;
  }
  if (*m < 1) throw ValidationError("sample count must be at least 1");

  auto rng = make_stream(seed, stream_key);
  FeatureMatrix rows(*m, d);
  if (mode == SamplingMode::kIndependentMarginal) {
    std::uniform_int_distribution<Index> pick(0, n - 2);
    for (Index r = 0; r < *m; ++r) {
      for (Index j = 0; j < d; ++j) rows(r, j) = data.values()(other(pick(rng)), j);
    }
    return rows;
  }
  if (*m > n - 1) {
    throw ValidationError("sample count exceeds the number of other items");
  }
  // Floyd's algorithm: m distinct positions out of n-1. Sorted so that m = n-1
  // reproduces the EXACT row order.
  std::unordered_set<Index> seen;
  seen.reserve(static_cast<std::size_t>(*m) * 2);
  std::vector<Index> chosen;
  chosen.reserve(static_cast<std::size_t>(*m));
  for (Index j = n - 1 - *m; j < n - 1; ++j) {
    const Index t = std::uniform_int_distribution<Index>(0, j)(rng);
    const Index pick = seen.insert(t).second ? t : j;
    if (pick == j) seen.insert(j);
    chosen.push_back(pick);
  }
  std::sort(chosen.begin(), chosen.end());
  for (Index r = 0; r < *m; ++r) {
    rows.row(r) = data.values().row(other(chosen[static_cast<std::size_t>(r)]));
  }
  return rows;
}

ExplanationVector explain_item(const Dataset& data, Index v_index, QoIKind qoi,
                               const ScoringFunction& scorer,
                               const EngineOptions& opts,
                               std::shared_ptr<const Ranking> ranking) {
  return explain_item_impl(data, v_index, qoi, scorer, opts,
                           std::move(ranking), opts.parallelism);
}

ExplanationVector explain_pair(const Dataset& data, Index v_index,
                               Index u_index, QoIKind qoi,
                               const ScoringFunction& scorer,
                               const EngineOptions& opts,
                               std::shared_ptr<const Ranking> ranking) {
  return explain_pair_impl(data, v_index, u_index, qoi, scorer, opts,
                           std::move(ranking));
}

std::vector<ExplanationVector> explain_all(const Dataset& data, QoIKind qoi,
                                           const ScoringFunction& scorer,
                                           const EngineOptions& opts) {
  check_engine_inputs(data, opts);
  scorer.check_compatible(data.num_features());
  const auto ranking = std::make_shared<const Ranking>(rank_all(scorer, data));
  std::vector<ExplanationVector> out(static_cast<std::size_t>(data.size()));
  parallel_for(data.size(), opts.parallelism, [&](Index t) {
    try {
      out[static_cast<std::size_t>(t)] =
          explain_item_impl(data, t, qoi, scorer, opts, ranking, 1);
    } catch (const ValidationError& e) {
      throw ValidationError("item " + data.label(t) + ": " + e.what());
    } catch (const ComputationError& e) {
      throw ComputationError("item " + data.label(t) + ": " + e.what());
    }
  });
  return out;
}

std::vector<ExplanationVector> explain_pairs(
    const Dataset& data, const std::vector<std::pair<Index, Index>>& pairs,
    QoIKind qoi, const ScoringFunction& scorer, const EngineOptions& opts) {
  check_engine_inputs(data, opts);
  scorer.check_compatible(data.num_features());
  const auto ranking = std::make_shared<const Ranking>(rank_all(scorer, data));
  std::vector<ExplanationVector> out(pairs.size());
  parallel_for(static_cast<Index>(pairs.size()), opts.parallelism,
               [&](Index t) {
                 const auto [v, u] = pairs[static_cast<std::size_t>(t)];
                 out[static_cast<std::size_t>(t)] = explain_pair_impl(
                     data, v, u, qoi, scorer, opts, ranking);
               });
  return out;
}

}  // namespace rankshap

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

#include "rankshap/synth.hpp"

#include <cmath>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

namespace rankshap {
namespace {

using Kind = FeatureDistribution::Kind;

Index gaussian_count(const SyntheticSpec& spec) {
  Index g = 0;
  for (const auto& f : spec.features) g += f.kind == Kind::kGaussian;
  return g;
}

// A factor L with L * L^T equal to the correlation matrix.
Eigen::MatrixXd correlation_factor(const Eigen::MatrixXd& c) {
  Eigen::LLT<Eigen::MatrixXd> llt(c);
  if (llt.info() == Eigen::Success) return llt.matrixL();
  // Singular but positive semi-definite (e.g. perfect correlation).
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(c);
  const Eigen::VectorXd lambda = eig.eigenvalues();
  if (lambda.minCoeff() < -1e-10) {
    throw ValidationError("correlation matrix is not positive semi-definite");
  }
  return eig.eigenvectors() *
         lambda.cwiseMax(0.0).cwiseSqrt().asDiagonal();
}

double number(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key) || !obj[key].is_number()) {
    throw ValidationError(std::string("synthetic feature needs numeric '") +
                          key + "'");
  }
  return obj[key].get<double>();
}

}  // namespace

void SyntheticSpec::validate() const {
  if (n < 1) throw ValidationError("synthetic n must be at least 1");
  if (features.empty()) throw ValidationError("synthetic spec has no features");
  if (static_cast<int>(features.size()) > Coalition::kMaxFeatures) {
    throw ValidationError("at most 62 features are supported");
  }
  for (const auto& f : features) {
    switch (f.kind) {
      case Kind::kUniform:
        if (!(f.a < f.b)) throw ValidationError("uniform needs lo < hi");
        break;
      case Kind::kGaussian:
        if (!(f.b > 0.0)) throw ValidationError("gaussian sd must be positive");
        break;
      case Kind::kBernoulli:
        if (!(f.a >= 0.0 && f.a <= 1.0)) {
          throw ValidationError("bernoulli p must lie in [0, 1]");
        }
        break;
    }
  }
  if (correlation) {
    const Index g = gaussian_count(*this);
    const auto& c = *correlation;
    if (c.rows() != g || c.cols() != g) {
      throw ValidationError("correlation must be " + std::to_string(g) + "x" +
                            std::to_string(g) + " (one row per gaussian)");
    }
    for (Index i = 0; i < g; ++i) {
      if (c(i, i) != 1.0) {
        throw ValidationError("correlation diagonal must be 1");
      }
      for (Index j = 0; j < g; ++j) {
        if (c(i, j) != c(j, i) || std::abs(c(i, j)) > 1.0) {
          throw ValidationError(
              "correlation must be symmetric with entries in [-1, 1]");
        }
      }
    }
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const Index d = static_cast<Index>(spec.features.size());
  const Index g = gaussian_count(spec);
  const Eigen::MatrixXd factor = spec.correlation
                                     ? correlation_factor(*spec.correlation)
                                     : Eigen::MatrixXd::Identity(g, g);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FeatureMatrix values(spec.n, d);
  Eigen::VectorXd z(g);
  for (Index r = 0; r < spec.n; ++r) {
    for (Index t = 0; t < g; ++t) z(t) = normal(rng);
    const Eigen::VectorXd correlated = factor * z;
    Index t = 0;
    for (Index j = 0; j < d; ++j) {
      const auto& f = spec.features[static_cast<std::size_t>(j)];
      switch (f.kind) {
        case Kind::kUniform: values(r, j) = f.a + (f.b - f.a) * unit(rng); break;
        case Kind::kGaussian: values(r, j) = f.a + f.b * correlated(t++); break;
        case Kind::kBernoulli: values(r, j) = unit(rng) < f.a ? 1.0 : 0.0; break;
      }
    }
  }
  std::vector<std::string> names;
  for (Index j = 1; j <= d; ++j) names.push_back("x" + std::to_string(j));
  return Dataset(std::move(values), std::move(names));
}

SyntheticSpec builtin_spec(std::string_view name, Index n, std::uint64_t seed) {
  using F = FeatureDistribution;
  SyntheticSpec s;
  s.n = n;
  s.seed = seed;
  auto corr = [](std::initializer_list<double> upper, Index g) {
    Eigen::MatrixXd c = Eigen::MatrixXd::Identity(g, g);
    auto it = upper.begin();
    for (Index i = 0; i < g; ++i) {
      for (Index j = i + 1; j < g; ++j) c(i, j) = c(j, i) = *it++;
    }
    return c;
  };
  if (name == "D1") {
    s.features = {F::gaussian(0.5, 0.1), F::bernoulli(0.5)};
  } else if (name == "D2") {
    s.features = {F::uniform(0.0, 1.0), F::gaussian(0.5, 0.1)};
  } else if (name == "D3") {
    s.features = {F::uniform(0.0, 1.0), F::uniform(0.0, 1.0)};
  } else if (name == "D4") {
    s.features = {F::gaussian(0.5, 0.05), F::gaussian(0.75, 0.016)};
    s.correlation = corr({-0.8}, 2);
  } else if (name == "D5") {
    s.features = {F::gaussian(0.5, 0.1), F::gaussian(0.5, 0.05)};
  } else if (name == "G3-indep" || name == "G3-neg" || name == "G3-mixed") {
    s.features = {F::gaussian(0.5, 0.1), F::gaussian(0.5, 0.1),
                  F::gaussian(0.5, 0.1)};
    // Pairs in order (x1,x2), (x1,x3), (x2,x3).
    if (name == "G3-neg") s.correlation = corr({-0.8, 0.0, 0.0}, 3);
    if (name == "G3-mixed") s.correlation = corr({-0.8, 0.6, -0.2}, 3);
  } else {
    throw ValidationError("unknown builtin dataset '" + std::string(name) + "'");
  }
  return s;
}

SyntheticSpec parse_synthetic_spec(std::string_view json) try {
  const auto doc = nlohmann::json::parse(json);
  if (!doc.is_object() || !doc.contains("features") ||
      !doc["features"].is_array()) {
    throw ValidationError("synthetic spec needs a 'features' list");
  }
  SyntheticSpec s;
  if (doc.contains("n")) s.n = doc["n"].get<Index>();
  if (doc.contains("seed")) s.seed = doc["seed"].get<std::uint64_t>();
  for (const auto& f : doc["features"]) {
    const auto kind = f.value("kind", std::string());
    if (kind == "uniform") {
      s.features.push_back(
          FeatureDistribution::uniform(number(f, "lo"), number(f, "hi")));
    } else if (kind == "gaussian") {
      s.features.push_back(
          FeatureDistribution::gaussian(number(f, "mean"), number(f, "sd")));
    } else if (kind == "bernoulli") {
      s.features.push_back(FeatureDistribution::bernoulli(number(f, "p")));
    } else {
      throw ValidationError("unknown feature distribution '" + kind + "'");
    }
  }
  if (doc.contains("correlation")) {
    const auto& c = doc["correlation"];
    const auto g = static_cast<Index>(c.size());
    Eigen::MatrixXd m(g, g);
    for (Index i = 0; i < g; ++i) {
      if (!c[i].is_array() || static_cast<Index>(c[i].size()) != g) {
        throw ValidationError("correlation must be a square matrix");
      }
      for (Index j = 0; j < g; ++j) m(i, j) = c[i][j].get<double>();
    }
    s.correlation = std::move(m);
  }
  s.validate();
  return s;
} catch (const nlohmann::json::exception& e) {
  throw ValidationError(std::string("malformed synthetic spec: ") + e.what());
}

ScoringFunction builtin_scorer(std::string_view name) {
  if (name == "f1") return ScoringFunction::linear(Eigen::Vector2d(0.8, 0.2));
  if (name == "f2") return ScoringFunction::linear(Eigen::Vector2d(0.5, 0.5));
  if (name == "f3") return ScoringFunction::linear(Eigen::Vector2d(0.2, 0.8));
  if (name == "f4") {
    return ScoringFunction::linear(Eigen::Vector3d(0.33, 0.33, 0.34));
  }
  throw ValidationError("unknown builtin scorer '" + std::string(name) + "'");
}

}  // namespace rankshap

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

#ifndef RANKSHAP_SRC_EXPRESSION_HPP_
#define RANKSHAP_SRC_EXPRESSION_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "rankshap/core.hpp"

namespace rankshap {

// Arithmetic expression compiled to a postfix program over feature columns.
class Expression {
 public:
  // Throws ValidationError on syntax errors or unknown feature names.
  Expression(std::string_view text, const std::vector<std::string>& names);

  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& v) const;
  // Highest feature index referenced, or -1.
  Index max_feature() const { return max_feature_; }

 private:
  enum class Op { kConst, kFeature, kNeg, kAdd, kSub, kMul, kDiv, kPow };
  struct Instr {
    Op op;
    double value = 0.0;
    Index feature = 0;
  };

  friend class ExpressionParser;

  std::vector<Instr> program_;
  std::size_t max_stack_ = 0;
  Index max_feature_ = -1;
};

}  // namespace rankshap

#endif  // RANKSHAP_SRC_EXPRESSION_HPP_

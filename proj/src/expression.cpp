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

#include "expression.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>

namespace rankshap {

// Recursive descent:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | '"' name '"' | '(' expr ')'
class ExpressionParser {
 public:
  ExpressionParser(std::string_view text,
                   const std::vector<std::string>& names, Expression& out)
      : text_(text), names_(names), out_(out) {}

  void run() {
    parse_expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected '" + rest() + "'");
  }

 private:
  using Op = Expression::Op;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression \"" + std::string(text_) +
                          "\" at offset " + std::to_string(pos_) + ": " +
                          what);
  }

  std::string rest() const {
    return std::string(text_.substr(pos_, std::min<std::size_t>(8, text_.size() - pos_)));
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  // Accepts an ASCII operator or one of its typographic spellings.
  bool accept(char ascii) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ascii) {
      ++pos_;
      return true;
    }
    std::string_view alt;
    switch (ascii) {
      case '-': alt = "\xE2\x88\x92"; break;  // U+2212 minus sign
      case '*': alt = "\xC3\x97"; break;      // U+00D7 multiplication sign
      case '/': alt = "\xC3\xB7"; break;      // U+00F7 division sign
      default: return false;
    }
    if (text_.substr(pos_, alt.size()) == alt) {
      pos_ += alt.size();
      return true;
    }
    return false;
  }

  void emit(Op op, double value = 0.0, Index feature = 0) {
    out_.program_.push_back({op, value, feature});
    switch (op) {
      case Op::kConst:
      case Op::kFeature: ++depth_; break;
      case Op::kNeg: break;
      default: --depth_; break;
    }
    out_.max_stack_ = std::max(out_.max_stack_, depth_);
  }

  void parse_expr() {
    parse_term();
    for (;;) {
      if (accept('+')) {
        parse_term();
        emit(Op::kAdd);
      } else if (accept('-')) {
        parse_term();
        emit(Op::kSub);
      } else {
        return;
      }
    }
  }

  void parse_term() {
    parse_unary();
    for (;;) {
      if (accept('*')) {
        parse_unary();
        emit(Op::kMul);
      } else if (accept('/')) {
        parse_unary();
        emit(Op::kDiv);
      } else {
        return;
      }
    }
  }

  void parse_unary() {
    if (accept('-')) {
      parse_unary();
      emit(Op::kNeg);
    } else if (accept('+')) {
      parse_unary();
    } else {
      parse_power();
    }
  }

  void parse_power() {
    parse_primary();
    if (accept('^')) {
      parse_unary();
      emit(Op::kPow);
    }
  }

  void parse_primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of expression");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      parse_expr();
      if (!accept(')')) fail("expected ')'");
      return;
    }
    if (c == '"') {
      const auto close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated quoted name");
      emit_feature(text_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      double value = 0.0;
      const char* begin = text_.data() + pos_;
      auto [ptr, ec] = std::from_chars(begin, text_.data() + text_.size(),
                                       value);
      if (ec != std::errc()) fail("malformed number");
      pos_ += static_cast<std::size_t>(ptr - begin);
      emit(Op::kConst, value);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos_;
      while (pos_ < text_.size() &&
             (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
              text_[pos_] == '_')) {
        ++pos_;
      }
      emit_feature(text_.substr(start, pos_ - start));
      return;
    }
    fail("unexpected '" + rest() + "'");
  }

  void emit_feature(std::string_view name) {
    const auto it = std::find(names_.begin(), names_.end(), name);
    if (it == names_.end()) {
      throw ValidationError("expression references undeclared feature '" +
                            std::string(name) + "'");
    }
    const auto j = static_cast<Index>(it - names_.begin());
    out_.max_feature_ = std::max(out_.max_feature_, j);
    emit(Op::kFeature, 0.0, j);
  }

  std::string_view text_;
  const std::vector<std::string>& names_;
  Expression& out_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
};

Expression::Expression(std::string_view text,
                       const std::vector<std::string>& names) {
  ExpressionParser(text, names, *this).run();
}

double Expression::evaluate(const Eigen::Ref<const Eigen::VectorXd>& v) const {
  constexpr std::size_t kInline = 32;
  std::array<double, kInline> small{};
  std::vector<double> large;
  double* stack = small.data();
  if (max_stack_ > kInline) {
    large.resize(max_stack_);
    stack = large.data();
  }
  std::size_t top = 0;
  for (const Instr& ins : program_) {
    switch (ins.op) {
      case Op::kConst: stack[top++] = ins.value; break;
      case Op::kFeature: stack[top++] = v(ins.feature); break;
      case Op::kNeg: stack[top - 1] = -stack[top - 1]; break;
      case Op::kAdd: --top; stack[top - 1] += stack[top]; break;
      case Op::kSub: --top; stack[top - 1] -= stack[top]; break;
      case Op::kMul: --top; stack[top - 1] *= stack[top]; break;
      case Op::kDiv: --top; stack[top - 1] /= stack[top]; break;
      case Op::kPow:
        --top;
        stack[top - 1] = std::pow(stack[top - 1], stack[top]);
        break;
    }
  }
  return stack[0];
}

}  // namespace rankshap

// Copyright 2026 The hvsinglet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef HVSINGLET_EXPR_HPP_
#define HVSINGLET_EXPR_HPP_

// A small total expression language for candidate functions G(λ, a, b) and
// hidden-variable weights.
//
//   expr   := term (("+" | "-") term)*
//   term   := unary (("*" | "/") unary)*
//   unary  := "-" unary | power
//   power  := atom ("^" unary)?            right-associative
//   atom   := NUMBER | IDENT | IDENT "(" expr ("," expr)* ")" | "(" expr ")"
//   NUMBER := digits ["." digits] [("e"|"E") ["+"|"-"] digits]  (or "." digits ...)
//   IDENT  := [a-z][a-z0-9]*
//
// Precedence: ^ > unary minus > * / > + -, so -2^2 = -4. Whitespace is
// insignificant and "#" starts a comment that runs to the end of the line.
//
// Variables: ab = a·b, ua = u·a, ub = u·b, va = v·a, vb = v·b, l1..l4.
// Functions: sgn (sgn(0) = +1), abs, sqrt, arccos, min, max (two or more
// arguments).

#include <array>
#include <bitset>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "hvsinglet/errors.hpp"

namespace hvs::expr {

enum class Var : std::uint8_t { AB, UA, UB, VA, VB, L1, L2, L3, L4 };
inline constexpr std::size_t kVarCount = 9;
inline constexpr std::array<std::string_view, kVarCount> kVarNames = {"ab", "ua", "ub", "va", "vb",
                                                                      "l1", "l2", "l3", "l4"};

enum class Func : std::uint8_t { Sgn, Abs, Sqrt, Arccos, Min, Max };
inline constexpr std::array<std::string_view, 6> kFuncNames = {"sgn", "abs", "sqrt", "arccos", "min", "max"};

enum class Op : std::uint8_t { Lit, VarRef, Neg, Add, Sub, Mul, Div, Pow, Call };

inline std::optional<Var> var_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kVarCount; ++i) {
    if (kVarNames[i] == s) return static_cast<Var>(i);
  }
  return std::nullopt;
}

inline std::optional<Func> func_from_name(std::string_view s) {
  for (std::size_t i = 0; i < kFuncNames.size(); ++i) {
    if (kFuncNames[i] == s) return static_cast<Func>(i);
  }
  return std::nullopt;
}

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  Op op = Op::Lit;
  double value = 0.0;
  Var var = Var::AB;
  Func func = Func::Sgn;
  std::vector<NodePtr> args;
};

inline NodePtr lit(double v) { return std::make_shared<const Node>(Node{Op::Lit, v, {}, {}, {}}); }
inline NodePtr var(Var v) { return std::make_shared<const Node>(Node{Op::VarRef, 0.0, v, {}, {}}); }
inline NodePtr unary(Op op, NodePtr x) { return std::make_shared<const Node>(Node{op, 0.0, {}, {}, {std::move(x)}}); }
inline NodePtr binary(Op op, NodePtr l, NodePtr r) {
  return std::make_shared<const Node>(Node{op, 0.0, {}, {}, {std::move(l), std::move(r)}});
}
inline NodePtr call(Func f, std::vector<NodePtr> args) {
  return std::make_shared<const Node>(Node{Op::Call, 0.0, {}, f, std::move(args)});
}

inline bool equal(const Node& p, const Node& q) {
  if (p.op != q.op || p.args.size() != q.args.size()) return false;
  switch (p.op) {
    case Op::Lit:
      if (p.value != q.value) return false;
      break;
    case Op::VarRef:
      if (p.var != q.var) return false;
      break;
    case Op::Call:
      if (p.func != q.func) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < p.args.size(); ++i) {
    if (!equal(*p.args[i], *q.args[i])) return false;
  }
  return true;
}

/// Syntax error at a byte offset, with the set of tokens that would have
/// been accepted there.
class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string message, std::vector<std::string> expected)
      : Error(format(offset, message, expected)),
        offset_(offset),
        message_(std::move(message)),
        expected_(std::move(expected)) {}

  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }
  const std::vector<std::string>& expected() const { return expected_; }

 private:
  static std::string format(std::size_t offset, const std::string& msg,
                            const std::vector<std::string>& expected) {
    std::string s = "at byte " + std::to_string(offset) + ": " + msg;
    if (!expected.empty()) {
      s += "; expected one of:";
      for (const auto& e : expected) s += " " + e;
    }
    return s;
  }

  std::size_t offset_;
  std::string message_;
  std::vector<std::string> expected_;
};

class UnknownIdentifier : public ParseError {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : ParseError(offset, "unknown identifier '" + name + "'", {}), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

class UnboundVariable : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

/// Immutable parsed expression; cheap to copy and safe to share.
class Expr {
 public:
  explicit Expr(NodePtr root) : root_(std::move(root)) {}

  const Node& root() const { return *root_; }

  /// Canonical text: minimal parentheses, shortest round-trip literals.
  std::string to_string() const;

  std::bitset<kVarCount> variables() const {
    std::bitset<kVarCount> out;
    collect(*root_, out);
    return out;
  }

  /// True if the expression reads any of ab, ua, ub, va, vb.
  bool uses_settings() const {
    const auto v = variables();
    for (std::size_t i = 0; i < 5; ++i) {
      if (v[i]) return true;
    }
    return false;
  }

  friend bool operator==(const Expr& p, const Expr& q) { return equal(*p.root_, *q.root_); }

 private:
  static void collect(const Node& n, std::bitset<kVarCount>& out) {
    if (n.op == Op::VarRef) out.set(static_cast<std::size_t>(n.var));
    for (const auto& c : n.args) collect(*c, out);
  }

  NodePtr root_;
};

namespace detail {

enum class Tok : std::uint8_t { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, Comma, End, Invalid };

struct Token {
  Tok kind = Tok::End;
  std::size_t offset = 0;
  std::string_view text;
  double number = 0.0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    skip_blank();
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) return t;
    const char c = src_[pos_];
    auto single = [&](Tok k) {
      t.kind = k;
      t.text = src_.substr(pos_, 1);
      ++pos_;
      return t;
    };
    switch (c) {
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '*': return single(Tok::Star);
      case '/': return single(Tok::Slash);
      case '^': return single(Tok::Caret);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case ',': return single(Tok::Comma);
      default: break;
    }
    if (is_lower(c)) {
      const std::size_t start = pos_;
      while (pos_ < src_.size() && (is_lower(src_[pos_]) || is_digit(src_[pos_]))) ++pos_;
      t.kind = Tok::Ident;
      t.text = src_.substr(start, pos_ - start);
      return t;
    }
    if (is_digit(c) || (c == '.' && pos_ + 1 < src_.size() && is_digit(src_[pos_ + 1]))) {
      return number(t);
    }
    t.kind = Tok::Invalid;
    t.text = src_.substr(pos_, 1);
    return t;
  }

 private:
  static bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
  static bool is_digit(char c) { return c >= '0' && c <= '9'; }

  void skip_blank() {
    while (pos_ < src_.size()) {
      const char c = src_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v') {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < src_.size() && src_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  Token number(Token t) {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      while (pos_ < src_.size() && is_digit(src_[pos_])) ++pos_;
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p >= src_.size() || !is_digit(src_[p])) {
        throw ParseError(p, "malformed exponent in number", {"digit"});
      }
      while (p < src_.size() && is_digit(src_[p])) ++p;
      pos_ = p;
    }
    t.kind = Tok::Number;
    t.text = src_.substr(start, pos_ - start);
    const auto res = std::from_chars(t.text.data(), t.text.data() + t.text.size(), t.number);
    if (res.ec != std::errc() || !std::isfinite(t.number)) {
      throw ParseError(start, "number out of range", {});
    }
    return t;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline const std::vector<std::string>& operand_start() {
  static const std::vector<std::string> v = {"number", "identifier", "(", "-"};
  return v;
}

class Parser {
 public:
  explicit Parser(std::string_view src) : lex_(src) { advance(); }

  Expr parse_all() {
    NodePtr e = expr();
    if (cur_.kind != Tok::End) fail_after_operand({"end of input"});
    return Expr(std::move(e));
  }

 private:
  void advance() { cur_ = lex_.next(); }

  [[noreturn]] void fail(const std::string& msg, std::vector<std::string> expected) const {
    throw ParseError(cur_.offset, msg, std::move(expected));
  }

  std::string found() const {
    switch (cur_.kind) {
      case Tok::End: return "unexpected end of input";
      case Tok::Invalid: return "unexpected character '" + std::string(cur_.text) + "'";
      default: return "unexpected '" + std::string(cur_.text) + "'";
    }
  }

  [[noreturn]] void fail_after_operand(std::vector<std::string> closers) const {
    std::vector<std::string> expected = {"+", "-", "*", "/", "^"};
    expected.insert(expected.end(), closers.begin(), closers.end());
    fail(found(), std::move(expected));
  }

  NodePtr expr() {
    NodePtr lhs = term();
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      const Op op = cur_.kind == Tok::Plus ? Op::Add : Op::Sub;
      advance();
      lhs = binary(op, std::move(lhs), term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = unary_expr();
    while (cur_.kind == Tok::Star || cur_.kind == Tok::Slash) {
      const Op op = cur_.kind == Tok::Star ? Op::Mul : Op::Div;
      advance();
      lhs = binary(op, std::move(lhs), unary_expr());
    }
    return lhs;
  }

  NodePtr unary_expr() {
    if (cur_.kind == Tok::Minus) {
      advance();
      return unary(Op::Neg, unary_expr());
    }
    return power();
  }

  NodePtr power() {
    NodePtr base = atom();
    if (cur_.kind == Tok::Caret) {
      advance();
      return binary(Op::Pow, std::move(base), unary_expr());
    }
    return base;
  }

  NodePtr atom() {
    switch (cur_.kind) {
      case Tok::Number: {
        const double v = cur_.number;
        advance();
        return lit(v);
      }
      case Tok::LParen: {
        advance();
        NodePtr e = expr();
        if (cur_.kind != Tok::RParen) fail_after_operand({")"});
        advance();
        return e;
      }
      case Tok::Ident: return identifier();
      default: fail(found(), operand_start());
    }
  }

  NodePtr identifier() {
    const Token id = cur_;
    advance();
    if (const auto v = var_from_name(id.text)) {
      if (cur_.kind == Tok::LParen) {
        fail("'" + std::string(id.text) + "' is a variable and cannot be called",
             {"+", "-", "*", "/", "^", "end of input"});
      }
      return var(*v);
    }
    const auto f = func_from_name(id.text);
    if (!f) throw UnknownIdentifier(id.offset, std::string(id.text));
    if (cur_.kind != Tok::LParen) fail(found(), {"("});
    advance();
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (cur_.kind == Tok::Comma) {
      advance();
      args.push_back(expr());
    }
    if (cur_.kind != Tok::RParen) fail_after_operand({",", ")"});
    const bool variadic = *f == Func::Min || *f == Func::Max;
    if (variadic ? args.size() < 2 : args.size() != 1) {
      throw ParseError(id.offset,
                       std::string(id.text) + (variadic ? " takes at least two arguments"
                                                        : " takes exactly one argument"),
                       {});
    }
    advance();
    return call(*f, std::move(args));
  }

  Lexer lex_;
  Token cur_;
};

constexpr int precedence(Op op) {
  switch (op) {
    case Op::Add:
    case Op::Sub: return 1;
    case Op::Mul:
    case Op::Div: return 2;
    case Op::Neg: return 3;
    case Op::Pow: return 4;
    default: return 5;
  }
}

inline void print(const Node& n, std::string& out) {
  auto child = [&](const Node& c, bool parens) {
    if (parens) out += '(';
    print(c, out);
    if (parens) out += ')';
  };
  switch (n.op) {
    case Op::Lit: {
      char buf[64];
      const auto res = std::to_chars(buf, buf + sizeof buf, n.value);
      out.append(buf, res.ptr);
      return;
    }
    case Op::VarRef: out += kVarNames[static_cast<std::size_t>(n.var)]; return;
    case Op::Neg:
      out += '-';
      child(*n.args[0], precedence(n.args[0]->op) < 3);
      return;
    case Op::Pow:
      child(*n.args[0], precedence(n.args[0]->op) <= 4);
      out += '^';
      child(*n.args[1], precedence(n.args[1]->op) < 3);
      return;
    case Op::Call:
      out += kFuncNames[static_cast<std::size_t>(n.func)];
      out += '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) out += ", ";
        print(*n.args[i], out);
      }
      out += ')';
      return;
    default: {
      const int p = precedence(n.op);
      static constexpr std::array<const char*, 4> sym = {" + ", " - ", " * ", " / "};
      child(*n.args[0], precedence(n.args[0]->op) < p);
      out += sym[static_cast<std::size_t>(n.op) - static_cast<std::size_t>(Op::Add)];
      child(*n.args[1], precedence(n.args[1]->op) <= p);
      return;
    }
  }
}

}  // namespace detail

inline std::string Expr::to_string() const {
  std::string out;
  detail::print(*root_, out);
  return out;
}

inline Expr parse(std::string_view source) { return detail::Parser(source).parse_all(); }

/// Values of the expression variables.
class Bindings {
 public:
  Bindings& set(Var v, double x) {
    values_[static_cast<std::size_t>(v)] = x;
    bound_.set(static_cast<std::size_t>(v));
    return *this;
  }

  Bindings& set(std::string_view name, double x) {
    const auto v = var_from_name(name);
    if (!v) throw InvalidArgument("no expression variable named '" + std::string(name) + "'");
    return set(*v, x);
  }

  bool is_bound(Var v) const { return bound_[static_cast<std::size_t>(v)]; }
  double get(Var v) const { return values_[static_cast<std::size_t>(v)]; }

 private:
  std::array<double, kVarCount> values_{};
  std::bitset<kVarCount> bound_;
};

namespace detail {

inline double eval(const Node& n, const Bindings& b) {
  switch (n.op) {
    case Op::Lit: return n.value;
    case Op::VarRef:
      if (!b.is_bound(n.var)) {
        throw UnboundVariable("variable '" + std::string(kVarNames[static_cast<std::size_t>(n.var)]) +
                              "' is not bound");
      }
      return b.get(n.var);
    case Op::Neg: return -eval(*n.args[0], b);
    case Op::Add: return eval(*n.args[0], b) + eval(*n.args[1], b);
    case Op::Sub: return eval(*n.args[0], b) - eval(*n.args[1], b);
    case Op::Mul: return eval(*n.args[0], b) * eval(*n.args[1], b);
    case Op::Div: {
      const double num = eval(*n.args[0], b);
      const double den = eval(*n.args[1], b);
      if (!(std::abs(den) >= 1e-300)) throw DomainError("division by a value below 1e-300");
      return num / den;
    }
    case Op::Pow: {
      const double r = std::pow(eval(*n.args[0], b), eval(*n.args[1], b));
      if (std::isnan(r)) throw DomainError("power of a negative base to a non-integer exponent");
      return r;
    }
    case Op::Call: {
      const double x = eval(*n.args[0], b);
      switch (n.func) {
        case Func::Sgn: return x >= 0.0 ? 1.0 : -1.0;
        case Func::Abs: return std::abs(x);
        case Func::Sqrt:
          if (x < 0.0) throw DomainError("sqrt of a negative value");
          return std::sqrt(x);
        case Func::Arccos:
          if (!(x >= -1.0 && x <= 1.0)) throw DomainError("arccos outside [-1, 1]");
          return std::acos(x);
        case Func::Min:
        case Func::Max: {
          double acc = x;
          for (std::size_t i = 1; i < n.args.size(); ++i) {
            const double y = eval(*n.args[i], b);
            acc = n.func == Func::Min ? std::min(acc, y) : std::max(acc, y);
          }
          return acc;
        }
      }
      break;
    }
  }
  throw Error("malformed expression node");
}

}  // namespace detail

inline double eval(const Expr& e, const Bindings& b) { return detail::eval(e.root(), b); }

inline double eval(const Expr& e, const std::map<std::string, double>& values) {
  Bindings b;
  for (const auto& [k, v] : values) b.set(k, v);
  return eval(e, b);
}

}  // namespace hvs::expr

#endif  // HVSINGLET_EXPR_HPP_

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

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hvsinglet/expr.hpp"
#include "hvsinglet/random.hpp"
#include "expr_reference.hpp"

namespace hvs::expr {
namespace {

using namespace reference;

// ---------------------------------------------------------------------------

TEST(Parse, SmallestCompound) {
  const Expr e = parse("1 - ab");
  EXPECT_EQ(e, Expr(binary(Op::Sub, lit(1), var(Var::AB))));
  EXPECT_EQ(e.to_string(), "1 - ab");
}

TEST(Parse, HallStyleProduct) {
  const Expr e = parse("sgn(ua)*sgn(vb)*ab");
  const Expr ref(binary(Op::Mul,
                        binary(Op::Mul, call(Func::Sgn, {var(Var::UA)}), call(Func::Sgn, {var(Var::VB)})),
                        var(Var::AB)));
  EXPECT_EQ(e, ref);
  EXPECT_EQ(e.to_string(), "sgn(ua) * sgn(vb) * ab");
  EXPECT_EQ(parse(e.to_string()), e);
}

TEST(Parse, PowerIsRightAssociative) {
  EXPECT_DOUBLE_EQ(eval(parse("2 ^ 3 ^ 2"), Bindings{}), 512.0);
  EXPECT_EQ(parse("2^3^2"), parse("2^(3^2)"));
}

TEST(Parse, PowerBindsTighterThanUnaryMinus) {
  EXPECT_DOUBLE_EQ(eval(parse("-2^2"), Bindings{}), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("(-2)^2"), Bindings{}), 4.0);
  EXPECT_DOUBLE_EQ(eval(parse("2^-2"), Bindings{}), 0.25);
  EXPECT_DOUBLE_EQ(eval(parse("--3"), Bindings{}), 3.0);
  EXPECT_DOUBLE_EQ(eval(parse("-2*3"), Bindings{}), -6.0);
  EXPECT_DOUBLE_EQ(eval(parse("1 - 2 - 3"), Bindings{}), -4.0);
  EXPECT_DOUBLE_EQ(eval(parse("8 / 4 / 2"), Bindings{}), 1.0);
  EXPECT_DOUBLE_EQ(eval(parse("1 + 2 * 3"), Bindings{}), 7.0);
}

TEST(Parse, NumbersAndComments) {
  EXPECT_DOUBLE_EQ(eval(parse("1.5e-3"), Bindings{}), 1.5e-3);
  EXPECT_DOUBLE_EQ(eval(parse(".5"), Bindings{}), 0.5);
  EXPECT_DOUBLE_EQ(eval(parse("2E2"), Bindings{}), 200.0);
  EXPECT_DOUBLE_EQ(eval(parse("1 + # one\n 2 # two"), Bindings{}), 3.0);
  EXPECT_DOUBLE_EQ(eval(parse("max(1, 5, 3)"), Bindings{}), 5.0);
  EXPECT_DOUBLE_EQ(eval(parse("min(4, -1)"), Bindings{}), -1.0);
}

TEST(Eval, Examples) {
  EXPECT_DOUBLE_EQ(eval(parse("1 - ab"), {{"ab", 0.5}}), 0.5);
  EXPECT_DOUBLE_EQ(eval(parse("sgn(0)"), Bindings{}), 1.0);
  EXPECT_DOUBLE_EQ(eval(parse("sgn(-0.1)"), Bindings{}), -1.0);
  EXPECT_NEAR(eval(parse("(1-ab^2)*l1"), {{"ab", 0.6}, {"l1", -1.0}}), -0.64, 1e-15);
  EXPECT_DOUBLE_EQ(eval(parse("arccos(-1)"), Bindings{}), std::acos(-1.0));
}

TEST(Eval, Errors) {
  EXPECT_THROW(eval(parse("ab + 1"), Bindings{}), UnboundVariable);
  EXPECT_THROW(eval(parse("sqrt(-1)"), Bindings{}), DomainError);
  EXPECT_THROW(eval(parse("arccos(1.5)"), Bindings{}), DomainError);
  EXPECT_THROW(eval(parse("1 / 0"), Bindings{}), DomainError);
  EXPECT_THROW(eval(parse("1 / 1e-301"), Bindings{}), DomainError);
  EXPECT_THROW(eval(parse("(-2)^0.5"), Bindings{}), DomainError);
  EXPECT_THROW(eval(parse("1"), {{"xy", 1.0}}), InvalidArgument);
  EXPECT_NO_THROW(eval(parse("1 / 1e-300"), Bindings{}));
}

TEST(Variables, SettingsUseDetected) {
  EXPECT_TRUE(parse("l1 * ab").uses_settings());
  EXPECT_TRUE(parse("max(l1, vb)").uses_settings());
  EXPECT_FALSE(parse("1 + l1 * l4").uses_settings());
  const auto v = parse("ua + l2").variables();
  EXPECT_TRUE(v[static_cast<std::size_t>(Var::UA)]);
  EXPECT_TRUE(v[static_cast<std::size_t>(Var::L2)]);
  EXPECT_EQ(v.count(), 2u);
}

struct ErrorCase {
  const char* source;
  std::size_t offset;
  const char* expected_token;  // must appear in the expected set, if non-empty
};

class GrammarError : public ::testing::TestWithParam<ErrorCase> {};

TEST_P(GrammarError, PositionedDiagnostic) {
  const ErrorCase c = GetParam();
  try {
    parse(c.source);
    FAIL() << "parsed: " << c.source;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), c.offset) << c.source << ": " << e.what();
    if (*c.expected_token) {
      const auto& ex = e.expected();
      EXPECT_NE(std::find(ex.begin(), ex.end(), c.expected_token), ex.end()) << c.source << ": " << e.what();
    }
    EXPECT_NE(std::string(e.what()).find("at byte " + std::to_string(c.offset)), std::string::npos);
  }
}

INSTANTIATE_TEST_SUITE_P(Cases, GrammarError,
                         ::testing::Values(ErrorCase{"", 0, "number"}, ErrorCase{"1 +", 3, "identifier"},
                                           ErrorCase{"(1", 2, ")"}, ErrorCase{"1 2", 2, "end of input"},
                                           ErrorCase{"1 $ 2", 2, "+"}, ErrorCase{"sgn 1", 4, "("},
                                           ErrorCase{"min(1,", 6, "("}, ErrorCase{"max(1 2)", 6, ","},
                                           ErrorCase{"2e", 2, "digit"}, ErrorCase{"2e+x", 3, "digit"},
                                           ErrorCase{"Ab", 0, "("}, ErrorCase{"ab(1)", 2, ""},
                                           ErrorCase{"min(1)", 0, ""}, ErrorCase{"sqrt(1, 2)", 0, ""},
                                           ErrorCase{"1 + # comment", 13, "number"},
                                           ErrorCase{"1e999", 0, ""}, ErrorCase{")", 0, "-"},
                                           ErrorCase{"2 ^", 3, "number"}));

TEST(GrammarErrors, UnknownIdentifier) {
  try {
    parse("1 + foo(2)");
    FAIL();
  } catch (const UnknownIdentifier& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_EQ(e.name(), "foo");
  }
  EXPECT_THROW(parse("l5"), UnknownIdentifier);
}

TEST(Printer, MinimalParentheses) {
  EXPECT_EQ(parse("(1 + 2) * 3").to_string(), "(1 + 2) * 3");
  EXPECT_EQ(parse("1 + (2 * 3)").to_string(), "1 + 2 * 3");
  EXPECT_EQ(parse("1 - (2 - 3)").to_string(), "1 - (2 - 3)");
  EXPECT_EQ(parse("(1 - 2) - 3").to_string(), "1 - 2 - 3");
  EXPECT_EQ(parse("(2^3)^2").to_string(), "(2^3)^2");
  EXPECT_EQ(parse("-(2^2)").to_string(), "-2^2");
  EXPECT_EQ(parse("(-2)^2").to_string(), "(-2)^2");
  EXPECT_EQ(parse("2^(-2)").to_string(), "2^-2");
  EXPECT_EQ(parse("-(1 + ab)").to_string(), "-(1 + ab)");
  EXPECT_EQ(parse("1 - -ab").to_string(), "1 - -ab");
  EXPECT_EQ(parse("1.5e-3").to_string(), "0.0015");
}

TEST(Fuzz, CorpusRoundTrips) {
  const auto corpus = fuzz_corpus();
  ASSERT_EQ(corpus.size(), 200u);
  for (const std::string& src : corpus) {
    const Expr e = parse(src);
    const std::string canon = e.to_string();
    const Expr again = parse(canon);
    EXPECT_EQ(again, e) << src << "\n  -> " << canon;
    EXPECT_EQ(again.to_string(), canon);
  }
}

TEST(Fuzz, CorpusAgreesWithReferenceEvaluator) {
  const auto corpus = fuzz_corpus();
  Rng rng(77);
  int evaluated = 0, domain = 0;
  for (const std::string& src : corpus) {
    const Expr e = parse(src);
    for (int k = 0; k < 5; ++k) {
      const auto vars = random_bindings(rng);
      const std::optional<double> want = ref_eval(src, vars);
      const std::optional<double> want_canon = ref_eval(e.to_string(), vars);
      ASSERT_EQ(want.has_value(), want_canon.has_value()) << src;
      if (!want) {
        EXPECT_THROW(eval(e, vars), DomainError) << src;
        ++domain;
        continue;
      }
      const double got = eval(e, vars);
      EXPECT_TRUE(close(got, *want)) << src << "\n  got " << got << " want " << *want;
      EXPECT_TRUE(close(*want_canon, *want)) << e.to_string();
      ++evaluated;
    }
  }
  EXPECT_GT(evaluated, 500);
  EXPECT_GT(domain, 0);
}

TEST(Expr, SharedAndImmutable) {
  const Expr e = parse("ab * 2");
  const Expr copy = e;
  EXPECT_EQ(&copy.root(), &e.root());
  Bindings b;
  b.set(Var::AB, 3.0);
  EXPECT_DOUBLE_EQ(eval(copy, b), 6.0);
  EXPECT_THROW(b.set("zz", 1.0), InvalidArgument);
}

}  // namespace
}  // namespace hvs::expr

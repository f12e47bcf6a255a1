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
#include <string>

#include "hvsinglet/model.hpp"
#include "hvsinglet/zoo.hpp"

namespace hvs {
namespace {

class EachModel : public ::testing::TestWithParam<ModelKind> {};

TEST_P(EachModel, KernelTablesAreProbabilities) {
  const Model m = make_model(GetParam());
  Rng rng(12);
  for (int i = 0; i < 200; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const HiddenSample h = m.sampler(a, b, rng);
    EXPECT_NO_THROW(checked_kernel(m, h, a, b)) << m.name;
  }
}

TEST_P(EachModel, ReproducesSingletStatistics) {
  const Model m = make_model(GetParam());
  Rng rng(13);
  for (int i = 0; i < 3; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const JointEstimate e = estimate_joint(m, a, b, 100000, derive_seed(5, i));
    const JointTable q = qm_joint(a, b);
    for (Outcome s : kOutcomes) {
      for (Outcome t : kOutcomes) {
        EXPECT_TRUE(e.at(s, t).agrees_with(q.at(s, t)))
            << m.name << " " << describe_settings(a, b) << " p=" << e.at(s, t).mean << " qm=" << q.at(s, t);
      }
    }
  }
}

TEST_P(EachModel, PerfectAnticorrelationAtEqualSettings) {
  const Model m = make_model(GetParam());
  Rng rng(14);
  for (int i = 0; i < 5; ++i) {
    const UnitVec a = sample_unit_sphere(rng);
    if (m.is_atomic()) {
      const JointTable t = exact_average(m, a, a);
      EXPECT_NEAR(t.at(Outcome::Plus, Outcome::Plus), 0.0, 1e-12) << m.name;
      EXPECT_NEAR(t.at(Outcome::Minus, Outcome::Minus), 0.0, 1e-12) << m.name;
    }
    const JointEstimate e = estimate_joint(m, a, a, 20000, derive_seed(6, i));
    EXPECT_TRUE(e.at(Outcome::Plus, Outcome::Plus).agrees_with(0.0)) << m.name;
    EXPECT_TRUE(e.at(Outcome::Minus, Outcome::Minus).agrees_with(0.0)) << m.name;
  }
}

TEST_P(EachModel, AtomicModelsAverageExactly) {
  const Model m = make_model(GetParam());
  if (!m.is_atomic()) GTEST_SKIP() << m.name << " has a continuous distribution";
  Rng rng(15);
  for (int i = 0; i < 50; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const JointTable t = exact_average(m, a, b), q = qm_joint(a, b);
    double wsum = 0;
    for (const Atom& at : m.atoms(a, b)) {
      EXPECT_GE(at.weight, 0.0);
      wsum += at.weight;
    }
    EXPECT_NEAR(wsum, 1.0, 1e-12);
    for (Outcome s : kOutcomes) {
      for (Outcome r : kOutcomes) EXPECT_NEAR(t.at(s, r), q.at(s, r), 1e-12) << m.name;
    }
  }
}

TEST_P(EachModel, NameRoundTrips) {
  const ModelKind k = GetParam();
  EXPECT_EQ(model_kind_from_name(canonical_name(k)), k);
  EXPECT_EQ(model_from_spec(canonical_name(k)).kind, k);
}

INSTANTIATE_TEST_SUITE_P(Zoo, EachModel,
                         ::testing::Values(ModelKind::Brans, ModelKind::TonerBacon, ModelKind::CerfFull,
                                           ModelKind::CerfReduced, ModelKind::Groblacher, ModelKind::Hall,
                                           ModelKind::DiLorenzo),
                         [](const auto& info) {
                           std::string n(canonical_name(info.param));
                           for (char& c : n) {
                             if (c == '-') c = '_';
                           }
                           return n;
                         });

TEST(PrBox, SatisfiesDefiningRelation) {
  Rng rng(1);
  for (Outcome x : kOutcomes) {
    for (Outcome y : kOutcomes) {
      int plus = 0;
      for (int i = 0; i < 4000; ++i) {
        const auto [oa, ob] = pr_box(x, y, rng);
        const double lhs = 4.0 - 2.0 * std::abs(value(oa) + value(ob));
        EXPECT_DOUBLE_EQ(lhs, (1.0 - value(x)) * (1.0 - value(y)));
        plus += oa == Outcome::Plus;
      }
      EXPECT_NEAR(plus / 4000.0, 0.5, 0.04);
    }
  }
}

TEST(PrBox, ProductTable) {
  EXPECT_EQ(pr_product(Outcome::Minus, Outcome::Minus), -1.0);
  EXPECT_EQ(pr_product(Outcome::Plus, Outcome::Minus), 1.0);
  EXPECT_EQ(pr_product(Outcome::Minus, Outcome::Plus), 1.0);
  EXPECT_EQ(pr_product(Outcome::Plus, Outcome::Plus), 1.0);
}

TEST(TonerBacon, AliceMarginalIsDeterministic) {
  const Model m = make_model(ModelKind::TonerBacon);
  const UnitVec a = UnitVec::from(0, 0, 1), b = UnitVec::from(1, 0, 0);
  const HiddenSample h = hidden::TonerBacon{UnitVec::from(0.1, 0.2, 0.9), UnitVec::from(0.5, -0.5, 0.1)};
  const JointTable t = m.kernel(h, a, b);
  EXPECT_DOUBLE_EQ(marginal_A(t, Outcome::Plus), 1.0);
  EXPECT_DOUBLE_EQ(marginal_A(t, Outcome::Minus), 0.0);
}

TEST(TonerBacon, BitIsSignProduct) {
  const UnitVec u = UnitVec::from(1, 0, 0), v = UnitVec::from(0, 1, 0);
  EXPECT_EQ(toner_bacon_bit(u, v, UnitVec::from(1, 1, 0)), Outcome::Plus);
  EXPECT_EQ(toner_bacon_bit(u, v, UnitVec::from(1, -1, 0)), Outcome::Minus);
}

TEST(Cerf, InputsRejectParallelVectors) {
  const UnitVec u = UnitVec::from(0, 0, 1);
  EXPECT_THROW(cerf_inputs(u, u, u, u), DegenerateInput);
  EXPECT_THROW(cerf_inputs(u, -u, u, u), DegenerateInput);
}

TEST(Cerf, CFunctionVanishesAtEqualAndOppositeSettings) {
  Rng rng(2);
  for (int i = 0; i < 500; ++i) {
    const UnitVec u = sample_unit_sphere(rng), v = sample_unit_sphere(rng), a = sample_unit_sphere(rng);
    EXPECT_NEAR(cerf_C(u, v, a, a), 0.0, 1e-12);
    EXPECT_NEAR(cerf_C(u, v, a, -a), 0.0, 1e-12);
  }
}

TEST(Cerf, ReducedMarginalsAreHalf) {
  const Model m = make_model(ModelKind::CerfReduced);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const JointTable t = m.kernel(m.sampler(a, b, rng), a, b);
    EXPECT_NEAR(marginal_A(t, Outcome::Plus), 0.5, 1e-15);
    EXPECT_NEAR(marginal_B(t, Outcome::Minus), 0.5, 1e-15);
    EXPECT_NEAR(std::abs(correlator(t)), 1.0, 1e-15);
  }
}

TEST(Cerf, ExceptionalDirections) {
  const Model m = make_model(ModelKind::CerfReduced);
  const UnitVec u = UnitVec::from(1, 0, 0), v = UnitVec::from(0, 1, 0);
  const HiddenSample h = hidden::CerfReduced{u, v};
  EXPECT_TRUE(m.exceptional(h, u));
  EXPECT_TRUE(m.exceptional(h, -v));
  EXPECT_TRUE(m.exceptional(h, UnitVec::from(1, 1, 0)));
  EXPECT_TRUE(m.exceptional(h, UnitVec::from(1, -1, 0)));
  EXPECT_FALSE(m.exceptional(h, UnitVec::from(0, 0, 1)));
}

TEST(Hall, EqualSettingsAreSampled) {
  const Model m = make_model(ModelKind::Hall);
  Rng rng(4);
  const UnitVec a = UnitVec::from(0.3, -0.4, 0.5);
  const JointEstimate e = estimate_joint(m, a, a, 20000, 1);
  EXPECT_NEAR(e.at(Outcome::Plus, Outcome::Minus).mean, 0.5, 0.03);
  const JointEstimate f = estimate_joint(m, a, -a, 20000, 2);
  EXPECT_NEAR(f.at(Outcome::Plus, Outcome::Minus).mean, 0.0, 1e-12);
}

TEST(Hall, MarginalsAreZeroOrOne) {
  const Model m = make_model(ModelKind::Hall);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const double ma = marginal_A(m.kernel(m.sampler(a, b, rng), a, b), Outcome::Plus);
    EXPECT_TRUE(ma == 0.0 || ma == 1.0);
  }
}

TEST(DiLorenzo, WeightsValidated) {
  EXPECT_NO_THROW(DiLorenzoWeights::paired(0.1, 0.4));
  EXPECT_THROW(DiLorenzoWeights(0.1, 0.2, 0.3, 0.4), InvalidParams);
  EXPECT_THROW(DiLorenzoWeights::paired(0.3, 0.3), InvalidParams);
  EXPECT_THROW(DiLorenzoWeights::paired(-0.1, 0.6), InvalidParams);
}

TEST(DiLorenzo, NonSymmetricWeightsStillReproduce) {
  ModelParams p;
  p.dilorenzo = DiLorenzoWeights::paired(0.1, 0.4);
  const Model m = make_model(ModelKind::DiLorenzo, p);
  Rng rng(6);
  for (int i = 0; i < 20; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const JointTable t = exact_average(m, a, b), q = qm_joint(a, b);
    for (Outcome s : kOutcomes) {
      for (Outcome r : kOutcomes) EXPECT_NEAR(t.at(s, r), q.at(s, r), 1e-12);
    }
  }
}

TEST(Groblacher, AtomsSatisfyConstraints) {
  Rng rng(7);
  for (int i = 0; i < 50; ++i) {
    const UnitVec a = sample_unit_sphere(rng), b = sample_unit_sphere(rng);
    const GroblacherCheck chk = check_groblacher_atoms(groblacher_atoms(a, b, 0.5), a, b);
    EXPECT_LE(chk.max_support_excess, 1e-12);
    EXPECT_LE(chk.max_first_moment, 1e-12);
    EXPECT_LE(chk.weight_sum_error, 1e-12);
  }
  ModelParams bad;
  bad.groblacher_equatorial_weight = 0.0;
  EXPECT_THROW(make_model(ModelKind::Groblacher, bad), InvalidParams);
}

TEST(Brans, AtomsCarryTheSettings) {
  const UnitVec a = UnitVec::from(1, 0, 0), b = UnitVec::from(0, 1, 0);
  for (const Atom& at : brans_atoms(a, b)) {
    const auto& s = std::get<hidden::Brans>(at.sample);
    EXPECT_EQ(s.u, a);
    EXPECT_EQ(s.v, b);
    EXPECT_NEAR(at.weight, 0.25, 1e-15);
  }
}

TEST(ModelSpec, ParsesAndRejects) {
  const Model m = model_from_spec("dilorenzo:0.2,0.3");
  EXPECT_EQ(m.kind, ModelKind::DiLorenzo);
  EXPECT_EQ(m.name, "dilorenzo:0.2,0.3");
  EXPECT_THROW(model_from_spec("bohm"), InvalidParams);
  EXPECT_THROW(model_from_spec("dilorenzo:0.2"), InvalidParams);
  EXPECT_THROW(model_from_spec("dilorenzo:0.2,x"), InvalidParams);
  EXPECT_THROW(model_from_spec("dilorenzo:0.2,0.2"), InvalidParams);
  EXPECT_THROW(model_from_spec("hall:0.5,0.5"), InvalidParams);
  EXPECT_EQ(all_models().size(), 7u);
}

TEST(DeclaredProfiles, ClassificationTable) {
  using H = Hypothesis;
  const auto V = Verdict::Violated, S = Verdict::Satisfied;
  auto row = [](ModelKind k) { return declared_profile(k); };
  EXPECT_EQ(row(ModelKind::Brans)[H::UC], V);
  EXPECT_EQ(row(ModelKind::Brans)[H::RC], S);
  EXPECT_EQ(row(ModelKind::TonerBacon)[H::SI_B], V);
  EXPECT_EQ(row(ModelKind::TonerBacon)[H::UC], S);
  EXPECT_EQ(row(ModelKind::CerfFull)[H::UC], V);
  EXPECT_EQ(row(ModelKind::CerfFull)[H::RC], V);
  EXPECT_EQ(row(ModelKind::CerfReduced)[H::RC], V);
  EXPECT_EQ(row(ModelKind::CerfReduced)[H::UC], S);
  EXPECT_EQ(row(ModelKind::Groblacher)[H::Malus_A], S);
  EXPECT_EQ(row(ModelKind::Hall)[H::Malus_B], V);
  EXPECT_EQ(row(ModelKind::DiLorenzo)[H::RC], S);
  EXPECT_EQ(row(ModelKind::DiLorenzo)[H::UC], V);
}

}  // namespace
}  // namespace hvs

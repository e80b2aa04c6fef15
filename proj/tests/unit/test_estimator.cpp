#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "qdarwin/darwinism.hpp"
#include "qdarwin/estimator.hpp"
#include "qdarwin/graphstate.hpp"

namespace {

using namespace qdarwin;
using namespace qdarwin::estimator;
using oracle::MatrixXcd;
using qcore::all_pauli_strings;

DensityMatrix star_state() {
  return DensityMatrix::from_pure(graphstate::named_state(graphstate::named::StarExperimental{}));
}

DensityMatrix diamond_state() {
  return DensityMatrix::from_pure(graphstate::named_state(graphstate::named::DiamondCanonical{}));
}

CorrelatorTable full_table(const DensityMatrix& rho) {
  const auto strings = all_pauli_strings(4);
  return correlator_table(rho, strings);
}

CorrelatorTable star_table(const DensityMatrix& rho) {
  const auto strings = star_required_strings();
  return correlator_table(rho, strings);
}

// Correlators computed directly as Tr(rho p) with explicit Kronecker products.
CorrelatorTable oracle_table(const MatrixXcd& rho, const std::vector<PauliString>& strings) {
  CorrelatorTable t;
  for (const auto& p : strings) {
    t.set(p, {(rho * oracle::pauli_string(p.str())).trace().real(), std::nullopt});
  }
  return t;
}

TEST(CorrelatorTable, SetValidatesEntries) {
  CorrelatorTable t;
  EXPECT_THROW(t.set(PauliString::parse("ZZZ"), {0.5, std::nullopt}), ValidationError);
  EXPECT_THROW(t.set(PauliString::parse("ZZZZ"), {1.2, std::nullopt}), ValidationError);
  EXPECT_THROW(t.set(PauliString::parse("ZZZZ"), {0.2, -0.1}), ValidationError);
  EXPECT_THROW(t.set(PauliString::parse("IIII"), {0.9, std::nullopt}), ValidationError);
  EXPECT_NO_THROW(t.set(PauliString::parse("IIII"), {1.0, std::nullopt}));
  EXPECT_NO_THROW(t.set(PauliString::parse("ZZZZ"), {1.0 + 5e-10, std::nullopt}));
  EXPECT_THROW(t.at(PauliString::parse("XXXX")), ValidationError);
}

TEST(CorrelatorTable, IdentityWithinSigmaIsAccepted) {
  CorrelatorTable t;
  EXPECT_NO_THROW(t.set(PauliString::parse("IIII"), {0.995, 0.01}));
  EXPECT_THROW(t.set(PauliString::parse("IIII"), {0.9, 0.01}), ValidationError);
}

TEST(CorrelatorTableFromState, StarExamples) {
  const auto t = star_table(star_state());
  EXPECT_NEAR(t.value(PauliString::parse("ZZZZ")), 1.0, 1e-12);
  EXPECT_NEAR(t.value(PauliString::parse("IIII")), 1.0, 1e-12);
  EXPECT_NEAR(t.value(PauliString::parse("ZIII")), 0.0, 1e-12);
  EXPECT_FALSE(t.at(PauliString::parse("ZZZZ")).sigma.has_value());
}

TEST(CorrelatorTableFromState, RejectsNonFourQubitStates) {
  const auto strings = star_required_strings();
  EXPECT_THROW(correlator_table(DensityMatrix::maximally_mixed(3), strings), ValidationError);
}

TEST(ReconstructDensity, IdealStates) {
  const auto ghz = DensityMatrix::from_pure(graphstate::named_state(graphstate::named::Ghz{4}));
  for (const auto& rho : {ghz, diamond_state(), star_state()}) {
    const auto r = reconstruct_density(full_table(rho));
    EXPECT_LE((r.entries() - rho.entries()).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_TRUE(r.physical());
  }
}

TEST(ReconstructDensity, IdentityOnlyTableIsMaximallyMixed) {
  CorrelatorTable t;
  for (const auto& p : all_pauli_strings(4)) t.set(p, {p.is_identity() ? 1.0 : 0.0, std::nullopt});
  const auto r = reconstruct_density(t);
  EXPECT_LE((r.entries() - MatrixXcd::Identity(16, 16) / 16.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(ReconstructDensity, RoundTripOnRandomMixedStates) {
  std::mt19937_64 rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    const MatrixXcd m = oracle::random_density(4, rng, 1 + trial % 5);
    const auto r = reconstruct_density(full_table(DensityMatrix(m, true)));
    EXPECT_LE((r.entries() - m).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ReconstructDensity, FlagsUnphysicalTablesAndRejectsMissingStrings) {
  auto t = full_table(star_state());
  t.set(PauliString::parse("XXXX"), {-1.0, std::nullopt});
  EXPECT_FALSE(reconstruct_density(t).physical());
  EXPECT_THROW(reconstruct_density(star_table(star_state())), ValidationError);
}

TEST(StarRequiredStrings, ThirtyTwoDistinctStrings) {
  const auto s = star_required_strings();
  EXPECT_EQ(s.size(), 32U);
  EXPECT_EQ(std::set<PauliString>(s.begin(), s.end()).size(), 32U);
  int zi = 0;
  int xy = 0;
  for (const auto& p : s) {
    const auto str = p.str();
    if (str.find_first_not_of("ZI") == std::string::npos) ++zi;
    if (str.find_first_not_of("XY") == std::string::npos) ++xy;
  }
  EXPECT_EQ(zi, 16);
  EXPECT_EQ(xy, 16);
}

TEST(StarParameters, IdealStarState) {
  const auto params = star_parameters(star_table(star_state()));
  EXPECT_NEAR(params.P, 0.5, 1e-12);
  EXPECT_NEAR(std::abs(params.C - Complex(0.5, 0.0)), 0.0, 1e-12);
  EXPECT_NEAR(params.branch_weight, 1.0, 1e-12);
  EXPECT_TRUE(params.physical);
  EXPECT_FALSE(params.sigma_P.has_value());
}

TEST(StarParameters, PureBranchAndMaximallyMixed) {
  const auto branch = DensityMatrix::from_pure(qcore::StateVector::from_bits("0101"));
  const auto p1 = star_parameters(star_table(branch));
  EXPECT_NEAR(p1.P, 1.0, 1e-12);
  EXPECT_NEAR(std::abs(p1.C), 0.0, 1e-12);
  EXPECT_TRUE(p1.physical);

  const auto mixed = star_parameters(star_table(DensityMatrix::maximally_mixed(4)));
  EXPECT_NEAR(mixed.P, 1.0 / 16.0, 1e-12);
  EXPECT_NEAR(std::abs(mixed.C), 0.0, 1e-12);
  EXPECT_FALSE(mixed.physical);
}

TEST(StarParameters, RecoversTwoBranchParametersOnGrid) {
  for (int i = 1; i <= 9; ++i) {
    const double P = 0.1 * i;
    const double c_max = std::sqrt(P * (1.0 - P));
    for (double frac : {0.0, 0.3, 0.7, 1.0}) {
      for (double arg : {0.0, 0.9, -2.4}) {
        const Complex C = std::polar(frac * c_max, arg);
        const MatrixXcd rho = oracle::two_branch(P, C);
        const auto params = star_parameters(oracle_table(rho, star_required_strings()));
        EXPECT_NEAR(params.P, P, 1e-10);
        EXPECT_NEAR(std::abs(params.C - C), 0.0, 1e-10);
        EXPECT_TRUE(params.physical);
      }
    }
  }
}

TEST(StarParameters, RejectsMissingStrings) {
  CorrelatorTable t;
  t.set(PauliString::parse("ZZZZ"), {1.0, std::nullopt});
  EXPECT_THROW(star_parameters(t), ValidationError);
}

TEST(StarMutualInformation, Examples) {
  StarParameters ideal;
  ideal.P = 0.5;
  ideal.C = 0.5;
  EXPECT_NEAR(star_mutual_information(ideal, 1), 1.0, 1e-12);
  EXPECT_NEAR(star_mutual_information(ideal, 2), 1.0, 1e-12);
  EXPECT_NEAR(star_mutual_information(ideal, 3), 2.0, 1e-12);
  const auto [fp, fm] = branch_values(ideal);
  EXPECT_NEAR(fp, 1.0, 1e-12);
  EXPECT_NEAR(fm, 0.0, 1e-12);

  StarParameters branch;
  branch.P = 1.0;
  EXPECT_NEAR(star_mutual_information(branch, 1), 0.0, 1e-12);
  EXPECT_THROW(star_mutual_information(ideal, 4), ValidationError);
  EXPECT_THROW(star_mutual_information(ideal, 0), ValidationError);
}

TEST(StarMutualInformation, BranchValuesAreBlockEigenvalues) {
  for (int i = 0; i <= 10; ++i) {
    const double P = 0.1 * i;
    for (double frac : {0.0, 0.5, 1.0}) {
      const Complex C = std::polar(frac * std::sqrt(P * (1.0 - P)), 0.6);
      StarParameters params;
      params.P = P;
      params.C = C;
      const auto [fp, fm] = branch_values(params);
      EXPECT_EQ(fp + fm, 1.0);
      MatrixXcd block(2, 2);
      block << P, C, std::conj(C), 1.0 - P;
      const auto ev = qcore::hermitian_eigenvalues(block);
      EXPECT_NEAR(fp, ev[0], 1e-10);
      EXPECT_NEAR(fm, ev[1], 1e-10);
    }
  }
}

TEST(StarMutualInformation, ClosedFormMatchesExactMatrix) {
  for (int i = 1; i <= 9; ++i) {
    const double P = 0.1 * i;
    const double c_max = std::sqrt(P * (1.0 - P));
    for (double frac : {0.0, 0.25, 0.5, 0.75, 1.0}) {
      for (double arg : {0.0, 1.7}) {
        const Complex C = std::polar(frac * c_max, arg);
        const MatrixXcd m = oracle::two_branch(P, C);
        const DensityMatrix rho(m, true);
        StarParameters params;
        params.P = P;
        params.C = C;
        const std::vector<darwinism::Fragment> fragments{{1}, {1, 2}, {1, 2, 3}};
        for (int delta = 1; delta <= 3; ++delta) {
          const auto& f = fragments[static_cast<std::size_t>(delta - 1)];
          const double exact = darwinism::mutual_information(rho, 0, f);
          ASSERT_NEAR(star_mutual_information(params, delta), exact, 1e-8)
              << "P=" << P << " |C|=" << std::abs(C) << " delta=" << delta;
          ASSERT_NEAR(exact, oracle::mutual_information(m, 4, 0, f), 1e-8);
        }
      }
    }
  }
}

TEST(StarMutualInformation, RejectsInconsistentInputsUnlessClamped) {
  StarParameters bad;
  bad.P = 0.5;
  bad.C = 0.7;  // |C|^2 > P(1-P)
  EXPECT_THROW(star_mutual_information(bad, 3), ValidationError);
  StarMiOptions clamp;
  clamp.clamp = true;
  EXPECT_NEAR(star_mutual_information(bad, 3, clamp), 2.0, 1e-12);

  StarParameters out_of_range;
  out_of_range.P = 1.2;
  EXPECT_THROW(star_mutual_information(out_of_range, 1), ValidationError);
  EXPECT_NEAR(star_mutual_information(out_of_range, 1, clamp), 0.0, 1e-12);
}

TEST(StarMutualInformation, LiteralFormulaForComparison) {
  StarParameters ideal;
  ideal.P = 0.5;
  ideal.C = 0.5;
  const auto [fp, fm] = branch_values(ideal, BranchFormula::kLiteral);
  EXPECT_NEAR(fp + fm, 2.0 * ideal.P - 1.0, 1e-15);
  StarMiOptions literal;
  literal.formula = BranchFormula::kLiteral;
  EXPECT_NEAR(star_mutual_information(ideal, 3, literal), 2.0, 1e-12);
  EXPECT_NEAR(star_mutual_information(ideal, 1, literal), 1.0, 1e-12);
}

TEST(StarCurve, IdealStarState) {
  const auto curve = star_curve(star_parameters(star_table(star_state())));
  ASSERT_EQ(curve.points.size(), 3U);
  EXPECT_NEAR(curve.at_delta(1).mean_mi, 1.0, 1e-9);
  EXPECT_NEAR(curve.at_delta(2).mean_mi, 1.0, 1e-9);
  EXPECT_NEAR(curve.at_delta(3).mean_mi, 2.0, 1e-9);
  EXPECT_NEAR(curve.system_entropy, 1.0, 1e-12);
}

TEST(PlanMeasurements, Star) {
  const auto plan = plan_measurements(PlanTarget::kStar);
  EXPECT_EQ(plan.n_correlators(), 32U);
  EXPECT_EQ(plan.n_settings(), 17U);
  const auto zzzz = PauliString::parse("ZZZZ");
  ASSERT_NE(std::find(plan.settings.begin(), plan.settings.end(), zzzz), plan.settings.end());
  const auto covered = std::count_if(plan.correlators.begin(), plan.correlators.end(),
                                     [&](const PauliString& c) { return covers(zzzz, c); });
  EXPECT_EQ(covered, 16);
}

TEST(PlanMeasurements, FullTomography) {
  const auto plan = plan_measurements(PlanTarget::kFullTomography);
  EXPECT_EQ(plan.n_correlators(), 255U);
  EXPECT_EQ(plan.n_settings(), 81U);
  EXPECT_EQ(plan.n_projectors(), 1296U);
}

TEST(PlanMeasurements, SettingsDistinctFullWeightAndCovering) {
  for (auto target : {PlanTarget::kStar, PlanTarget::kFullTomography}) {
    const auto plan = plan_measurements(target);
    EXPECT_EQ(std::set<PauliString>(plan.settings.begin(), plan.settings.end()).size(),
              plan.settings.size());
    for (const auto& s : plan.settings) EXPECT_TRUE(s.is_full_weight());
    for (const auto& c : plan.correlators) {
      EXPECT_TRUE(std::any_of(plan.settings.begin(), plan.settings.end(),
                              [&](const PauliString& s) { return covers(s, c); }))
          << c.str();
    }
  }
}

TEST(PlanMeasurements, TargetNames) {
  EXPECT_EQ(parse_plan_target("star"), PlanTarget::kStar);
  EXPECT_EQ(parse_plan_target("full_tomography"), PlanTarget::kFullTomography);
  EXPECT_EQ(to_string(PlanTarget::kFullTomography), "full_tomography");
  EXPECT_THROW(parse_plan_target("partial"), ValidationError);
}

TEST(Covers, MarginalizationRule) {
  EXPECT_TRUE(covers(PauliString::parse("XYZZ"), PauliString::parse("XIZI")));
  EXPECT_FALSE(covers(PauliString::parse("XYZZ"), PauliString::parse("YIII")));
  EXPECT_TRUE(covers(PauliString::parse("XYZZ"), PauliString::parse("IIII")));
}

TEST(DiamondMutualInformation, Examples) {
  const auto diamond = diamond_mutual_information(full_table(diamond_state()), 0);
  EXPECT_NEAR(diamond.at_delta(1).mean_mi, 1.0 / 3.0, 1e-9);
  EXPECT_NEAR(diamond.at_delta(2).mean_mi, 5.0 / 3.0, 1e-9);
  EXPECT_NEAR(diamond.at_delta(3).mean_mi, 2.0, 1e-9);

  const auto star = diamond_mutual_information(full_table(star_state()), 0);
  EXPECT_NEAR(star.at_delta(1).mean_mi, 1.0, 1e-9);
  EXPECT_NEAR(star.at_delta(2).mean_mi, 1.0, 1e-9);
  EXPECT_NEAR(star.at_delta(3).mean_mi, 2.0, 1e-9);

  const auto mixed = diamond_mutual_information(full_table(DensityMatrix::maximally_mixed(4)), 0);
  for (const auto& p : mixed.points) EXPECT_NEAR(p.mean_mi, 0.0, 1e-9);
}

}  // namespace

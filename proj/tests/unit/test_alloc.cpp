#include <gtest/gtest.h>

#include <cmath>

#include "enrel/alloc.hpp"
#include "enrel/errors.hpp"
#include "support.hpp"

using namespace enrel;
using enrel::testing::random_tree;
using enrel::testing::Rng;

namespace {

const auto kExp = EnergyFailureModel::exponential(0.5, 1.0);
const GateKind kAnd = GateKind::and_();

double max_path_sum(const GateTree& t, const Allocation& a) {
  double best = 0.0;
  for (const auto& p : maximal_paths(t)) {
    double s = 0.0;
    for (GateId g : p) s += a.eps[g];
    best = std::max(best, s);
  }
  return best;
}

}  // namespace

TEST(MinEnergy, BalancedExample) {
  const auto t = gen_balanced(2, 1, kAnd);
  const auto r = min_energy_alloc(t, kExp, 0.15);
  EXPECT_NEAR(r.allocation.eps[0], 0.10, 1e-12);
  EXPECT_NEAR(r.allocation.eps[1], 0.10, 1e-12);
  EXPECT_NEAR(r.allocation.eps[2], 0.05, 1e-12);
  EXPECT_NEAR(r.allocation.energy[0], std::log(5.0), 1e-10);
  EXPECT_NEAR(r.allocation.energy[2], std::log(10.0), 1e-10);
  EXPECT_NEAR(r.allocation.total_energy, 2 * std::log(5.0) + std::log(10.0), 1e-10);
  EXPECT_NEAR(r.allocation.total_energy, 5.5215, 1e-4);
  EXPECT_TRUE(r.kkt.certified(1e-8));
}

TEST(MinEnergy, LineIsUniform) {
  const std::vector<EnergyFailureModel> models{kExp, EnergyFailureModel::polynomial(0.5, 2.0),
                                               EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5)};
  for (const auto& m : models) {
    for (std::size_t len : {2u, 3u, 7u}) {
      const auto r = min_energy_alloc(gen_line(len, kAnd), m, 0.15);
      for (double e : r.allocation.eps) EXPECT_NEAR(e, 0.15 / len, 1e-8 * 0.15 / len) << m.spec();
    }
  }
}

TEST(MinEnergy, SingleGate) {
  const auto r = min_energy_alloc(gen_balanced(2, 0, kAnd), kExp, 0.05);
  EXPECT_EQ(r.allocation.eps[0], 0.05);
  EXPECT_NEAR(r.allocation.total_energy, std::log(10.0), 1e-12);
}

TEST(MinEnergy, Preconditions) {
  const auto t = gen_balanced(2, 1, kAnd);
  EXPECT_THROW(min_energy_alloc(t, kExp, 0.0), DomainError);
  EXPECT_THROW(min_energy_alloc(t, kExp, 0.6), DomainError);
  EXPECT_NO_THROW(min_energy_alloc(t, kExp, 0.5));
  EXPECT_THROW(min_energy_alloc(t, kExp, 0.1, {.eta = 0.1}), DomainError);
  EXPECT_THROW(min_energy_alloc(t, kExp, 0.1, {.eta = 0.0}), DomainError);
}

TEST(MinEnergy, TakesTargetDirectly) {
  const auto t = gen_balanced(3, 2, kAnd);
  const auto target = make_target(0.05);
  EXPECT_EQ(min_energy_alloc(t, kExp, target).allocation.eps,
            min_energy_alloc(t, kExp, target.gamma).allocation.eps);
}

TEST(MinEnergy, ConvergenceErrorCarriesBestIterate) {
  const auto t = gen_balanced(3, 3, kAnd);
  const auto m = EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.3);
  try {
    min_energy_alloc(t, m, 0.2, {.max_iterations = 0, .homogeneous_start = false});
    FAIL() << "expected non-convergence";
  } catch (const ConvergenceError& e) {
    EXPECT_EQ(e.best().eps.size(), t.size());
  }
}

TEST(MinEnergy, RandomTreesCertifiedAndPathExact) {
  Rng rng(2024);
  const std::vector<EnergyFailureModel> models{kExp, EnergyFailureModel::polynomial(0.5, 0.5),
                                               EnergyFailureModel::polynomial(0.5, 2.0),
                                               EnergyFailureModel::stretched_exponential(0.5, 2.0, 0.6)};
  for (int i = 0; i < 40; ++i) {
    const auto t = random_tree(rng);
    for (const auto& m : models) {
      for (double g : {1e-3, 0.05, 0.4}) {
        const auto r = min_energy_alloc(t, m, g);
        EXPECT_TRUE(r.kkt.certified(1e-8)) << m.spec() << " gates=" << t.size();
        for (const auto& p : maximal_paths(t)) {
          double s = 0.0;
          for (GateId id : p) s += r.allocation.eps[id];
          EXPECT_NEAR(s, g, 1e-8 * g);
        }
        double total = 0.0;
        for (std::size_t j = 0; j < t.size(); ++j) {
          EXPECT_NEAR(r.allocation.energy[j], m.psi(r.allocation.eps[j]),
                      1e-10 * std::max(1.0, r.allocation.energy[j]));
          total += r.allocation.energy[j];
        }
        EXPECT_DOUBLE_EQ(total, r.allocation.total_energy);
      }
    }
  }
}

TEST(MinEnergy, ColdStartAgreesWithHomogeneousStart) {
  Rng rng(99);
  for (int i = 0; i < 30; ++i) {
    const auto t = random_tree(rng);
    for (const auto& m : {kExp, EnergyFailureModel::polynomial(0.5, 0.5)}) {
      const auto warm = min_energy_alloc(t, m, 0.1);
      const auto cold = min_energy_alloc(t, m, 0.1, {.homogeneous_start = false});
      EXPECT_NEAR(cold.allocation.total_energy, warm.allocation.total_energy,
                  1e-9 * warm.allocation.total_energy);
    }
  }
}

TEST(MinEnergy, TotalDecreasesInGamma) {
  Rng rng(8);
  for (int i = 0; i < 10; ++i) {
    const auto t = random_tree(rng, {.min_gates = 2, .max_gates = 40});
    double prev = INFINITY;
    for (double g = 0.01; g <= 0.5; g += 0.01) {
      const double e = min_energy_alloc(t, kExp, g).allocation.total_energy;
      EXPECT_LT(e, prev);
      prev = e;
    }
  }
}

TEST(MinEnergy, IterationsStayFlatWithDepth) {
  const auto m = EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5);
  std::size_t worst = 0;
  for (std::size_t d = 1; d <= 8; ++d) {
    const auto r = min_energy_alloc(gen_balanced(2, d, kAnd), m, 0.1, {.homogeneous_start = false});
    worst = std::max(worst, r.stats.newton_iterations);
    // Each iteration is linear work, so total work per gate is bounded.
    EXPECT_LE(r.stats.node_evaluations, 200 * (1u << (d + 1)));
  }
  EXPECT_LE(worst, 30u);
}

TEST(Oracle, Examples) {
  const auto t = gen_balanced(2, 1, kAnd);
  const auto o = oracle_min_energy(t, kExp, 0.15);
  EXPECT_NEAR(o.total_energy, 2 * std::log(5.0) + std::log(10.0), 1e-6 * 5.5215);
  const auto single = oracle_min_energy(gen_balanced(2, 0, kAnd), kExp, 0.07);
  EXPECT_EQ(single.eps[0], 0.07);
  EXPECT_THROW(oracle_min_energy(gen_balanced(2, 3, kAnd), kExp, 0.1), PreconditionError);
}

TEST(Oracle, AdjudicatesPolynomialExponent) {
  const auto m = EnergyFailureModel::polynomial(0.5, 0.5);
  const auto t = gen_balanced(2, 1, kAnd);
  const auto oracle = oracle_min_energy(t, m, 0.1);
  const auto solver = min_energy_alloc(t, m, 0.1).allocation;
  const auto printed = enrel::testing::printed_polynomial_alloc(t, m, 0.1);
  EXPECT_NEAR(solver.total_energy, oracle.total_energy, 1e-9 * oracle.total_energy);
  EXPECT_GT(printed.total_energy, oracle.total_energy * (1 + 1e-3));
  // Leaf over root ratio is k^(beta/(1+beta)).
  EXPECT_NEAR(oracle.eps[0] / oracle.eps[2], std::pow(2.0, 0.5 / 1.5), 1e-6);
}

TEST(Oracle, MatchesSolverOnSmallRandomTrees) {
  Rng rng(31);
  for (int i = 0; i < 40; ++i) {
    const auto t = random_tree(rng, {.max_gates = 12});
    for (const auto& m : {kExp, EnergyFailureModel::polynomial(0.5, 2.0),
                          EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.7)}) {
      const double a = min_energy_alloc(t, m, 0.2).allocation.total_energy;
      const double b = oracle_min_energy(t, m, 0.2).total_energy;
      EXPECT_LE(a, b * (1 + 1e-6));
      EXPECT_NEAR(a, b, 1e-6 * b);
    }
  }
}

TEST(Eth, Examples) {
  EXPECT_NEAR(eth(gen_balanced(2, 1, kAnd), kExp), 2 * std::log(1.5) + std::log(3.0), 1e-10);
  EXPECT_NEAR(eth(gen_balanced(2, 1, kAnd), kExp), 1.9095, 1e-4);
  EXPECT_EQ(eth(gen_balanced(2, 0, kAnd), kExp), 0.0);
  EXPECT_NEAR(eth(gen_line(2, kAnd), kExp), 2 * std::log(2.0), 1e-10);
}

TEST(MaxReliability, Examples) {
  const auto t = gen_balanced(2, 1, kAnd);
  const auto r = max_reliability_alloc(t, kExp, 5.5215);
  EXPECT_NEAR(r.y_min, 0.15, 1e-5);
  EXPECT_NEAR(r.delta_min.delta, 0.0945, 5e-5);
  ASSERT_TRUE(r.kkt.budget_residual);
  EXPECT_LE(*r.kkt.budget_residual, 1e-6);

  const auto line = max_reliability_alloc(gen_line(3, kAnd), kExp, 3 * std::log(10.0));
  for (double e : line.allocation.eps) EXPECT_NEAR(e, 0.05, 1e-7);
  EXPECT_NEAR(line.y_min, 0.15, 1e-6);
}

TEST(MaxReliability, StrictlyDecreasingInBudget) {
  const auto t = gen_balanced(3, 2, kAnd);
  double prev = INFINITY;
  for (double e = eth(t, kExp) + 0.5; e < 200; e *= 1.3) {
    const auto r = max_reliability_alloc(t, kExp, e);
    EXPECT_LT(r.y_min, prev);
    prev = r.y_min;
  }
}

TEST(MaxReliability, RoundTrip) {
  Rng rng(17);
  for (int i = 0; i < 10; ++i) {
    const auto t = random_tree(rng, {.max_gates = 30});
    for (const auto& m : {kExp, EnergyFailureModel::polynomial(0.5, 1.0)}) {
      const double budget = eth(t, m) * 1.5 + 2.0;
      const auto r = max_reliability_alloc(t, m, budget);
      const double back = min_energy_alloc(t, m, r.y_min).allocation.total_energy;
      EXPECT_NEAR(back, budget, 1e-6 * budget);
      EXPECT_TRUE(r.kkt.certified(1e-6)) << r.kkt.max_child_sum_residual << " "
                                         << r.kkt.max_path_residual;
    }
  }
}

TEST(MaxReliability, Errors) {
  const auto t = gen_balanced(2, 1, kAnd);
  EXPECT_THROW(max_reliability_alloc(t, kExp, 1.0), DomainError);
  EXPECT_THROW(max_reliability_alloc(t, kExp, 0.0), DomainError);
  EXPECT_THROW(max_reliability_alloc(t, kExp, -3.0), DomainError);
  EXPECT_THROW(max_reliability_alloc(t, kExp, 5.0, 0.5), DomainError);
  const auto at_eth = max_reliability_alloc(t, kExp, eth(t, kExp));
  EXPECT_DOUBLE_EQ(at_eth.y_min, 0.5);
}

TEST(ClosedForm, ExponentialExamples) {
  const auto a = closed_form_symmetric(2, 1, kExp, 0.15, AllocMode::MinEnergy);
  EXPECT_NEAR(a.level_eps[0], 0.05, 1e-15);
  EXPECT_NEAR(a.level_eps[1], 0.10, 1e-15);
  const auto b = closed_form_symmetric(2, 1, kExp, 5.5215, AllocMode::MaxReliability);
  EXPECT_NEAR(b.level_eps[1], 0.10, 1e-5);
  EXPECT_NEAR(b.gamma, 0.15, 1e-5);
  EXPECT_NEAR(b.total_energy, 5.5215, 1e-10);
  const auto c = closed_form_symmetric(2, 2, kExp, 0.175, AllocMode::MinEnergy);
  EXPECT_NEAR(c.level_eps[0], 0.025, 1e-15);
  EXPECT_NEAR(c.level_eps[1], 0.05, 1e-15);
  EXPECT_NEAR(c.level_eps[2], 0.10, 1e-15);
  EXPECT_NEAR(c.gamma, 0.175, 1e-15);
}

TEST(ClosedForm, AgreesWithSolverForBothFamilies) {
  for (std::size_t k : {2u, 3u}) {
    for (std::size_t d = 0; d <= 3; ++d) {
      const auto t = gen_balanced(k, d, kAnd);
      for (const auto& m : {kExp, EnergyFailureModel::polynomial(0.5, 0.5),
                            EnergyFailureModel::polynomial(0.4, 2.0)}) {
        const auto cf = closed_form_symmetric(k, d, m, 0.2, AllocMode::MinEnergy);
        const auto expanded = expand_symmetric(t, m, cf);
        const auto r = min_energy_alloc(t, m, 0.2);
        for (GateId g = 0; g < t.size(); ++g) {
          EXPECT_NEAR(r.allocation.eps[g], expanded.eps[g], 1e-10 * expanded.eps[g]);
        }
        const double budget = cf.total_energy;
        const auto mr = closed_form_symmetric(k, d, m, budget, AllocMode::MaxReliability);
        EXPECT_NEAR(mr.gamma, 0.2, 1e-10);
      }
    }
  }
}

TEST(ClosedForm, ReportsPrintedPolynomialRatio) {
  const auto s = closed_form_symmetric(2, 2, EnergyFailureModel::polynomial(0.5, 0.5), 0.1,
                                       AllocMode::MinEnergy);
  EXPECT_NEAR(s.level_ratio, std::pow(2.0, -1.0 / 3.0), 1e-15);
  ASSERT_TRUE(s.printed_ratio);
  EXPECT_NEAR(*s.printed_ratio, 2.0, 1e-15);
  EXPECT_FALSE(closed_form_symmetric(2, 2, EnergyFailureModel::polynomial(0.5, 1.0), 0.1,
                                     AllocMode::MinEnergy)
                   .printed_ratio);
}

TEST(ClosedForm, Errors) {
  EXPECT_THROW(closed_form_symmetric(2, 1, kExp, 2.0, AllocMode::MinEnergy), DomainError);
  EXPECT_THROW(closed_form_symmetric(2, 1, kExp, 0.5, AllocMode::MaxReliability), DomainError);
  EXPECT_THROW(closed_form_symmetric(2, 1, EnergyFailureModel::stretched_exponential(0.5, 1, 0.5),
                                     0.1, AllocMode::MinEnergy),
               PreconditionError);
}

TEST(CertifyKkt, Examples) {
  const auto t = gen_balanced(2, 1, kAnd);
  const auto hand = allocation_from_eps(kExp, {0.10, 0.10, 0.05});
  const auto r = certify_kkt(t, kExp, hand, PathBudget{0.15});
  EXPECT_LT(r.max_child_sum_residual, 1e-14);
  EXPECT_LT(r.max_path_residual, 1e-14);
  EXPECT_TRUE(r.certified(1e-8));

  const auto uniform = allocation_from_eps(kExp, {0.075, 0.075, 0.075});
  const auto u = certify_kkt(t, kExp, uniform, PathBudget{0.15});
  EXPECT_GT(u.max_child_sum_residual, 0.5);
  EXPECT_LT(u.max_path_residual, 1e-14);
  EXPECT_FALSE(u.certified(1e-8));

  EXPECT_THROW(certify_kkt(t, kExp, allocation_from_eps(kExp, {0.1}), PathBudget{0.1}),
               PreconditionError);
}

TEST(Allocation, FromEnergyMatchesFromEps) {
  const auto a = allocation_from_energy(kExp, {std::log(5.0), std::log(10.0)});
  EXPECT_NEAR(a.eps[0], 0.1, 1e-15);
  EXPECT_NEAR(a.eps[1], 0.05, 1e-15);
  EXPECT_NEAR(a.total_energy, std::log(50.0), 1e-14);
  EXPECT_NEAR(max_path_sum(gen_line(2, kAnd), a), 0.15, 1e-15);
}

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

#include "enrel/efmodel.hpp"
#include "enrel/errors.hpp"

using namespace enrel;

namespace {

std::vector<EnergyFailureModel> all_families() {
  return {EnergyFailureModel::exponential(0.5, 1.0), EnergyFailureModel::polynomial(0.5, 0.5),
          EnergyFailureModel::polynomial(0.5, 2.0), EnergyFailureModel::polynomial(0.5, 3.0),
          EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5),
          EnergyFailureModel::stretched_exponential(0.3, 2.0, 0.8)};
}

}  // namespace

TEST(Chi, Examples) {
  const auto ex = EnergyFailureModel::exponential(0.5, 1.0);
  EXPECT_DOUBLE_EQ(ex.chi(0.0), 0.5);
  EXPECT_NEAR(ex.chi(std::log(5.0)), 0.1, 1e-15);
  EXPECT_DOUBLE_EQ(EnergyFailureModel::polynomial(0.5, 2.0).chi(1.0), 0.125);
  EXPECT_THROW(ex.chi(-1.0), DomainError);
  EXPECT_THROW(ex.chi(INFINITY), DomainError);
}

TEST(Psi, Examples) {
  const auto ex = EnergyFailureModel::exponential(0.5, 1.0);
  EXPECT_DOUBLE_EQ(ex.psi(0.5), 0.0);
  EXPECT_NEAR(ex.psi(0.1), 1.6094379124341003, 1e-14);
  EXPECT_NEAR(EnergyFailureModel::polynomial(0.5, 2.0).psi(0.125), 1.0, 1e-14);
  EXPECT_THROW(ex.psi(0.0), DomainError);
  EXPECT_THROW(ex.psi(0.6), DomainError);
}

TEST(PsiPrime, Examples) {
  const auto ex = EnergyFailureModel::exponential(0.5, 1.0);
  EXPECT_DOUBLE_EQ(ex.psi_prime(0.25), -4.0);
  EXPECT_DOUBLE_EQ(ex.psi_prime(0.5), -2.0);
  EXPECT_NEAR(EnergyFailureModel::polynomial(0.5, 1.0).psi_prime(0.1), -50.0, 1e-12);
}

TEST(Factories, RejectInvalidParameters) {
  EXPECT_THROW(EnergyFailureModel::exponential(0.0, 1.0), DomainError);
  EXPECT_THROW(EnergyFailureModel::exponential(1.5, 1.0), DomainError);
  EXPECT_THROW(EnergyFailureModel::exponential(0.5, -1.0), DomainError);
  EXPECT_THROW(EnergyFailureModel::polynomial(0.5, 0.0), DomainError);
  EXPECT_THROW(EnergyFailureModel::stretched_exponential(0.5, 1.0, 1.5), DomainError);
}

TEST(ValidatePhysical, Examples) {
  EXPECT_TRUE(validate_physical(EnergyFailureModel::exponential(0.5, 1.0)).passed());
  EXPECT_TRUE(validate_physical(EnergyFailureModel::polynomial(0.5, 3.0)).passed());
  EXPECT_TRUE(validate_physical(EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5)).passed());
}

TEST(ValidatePhysical, ReportsInvalidParametersWithoutThrowing) {
  const auto r = validate_physical(Family::StretchedExponential, 0.5, 1.0, 2.0);
  EXPECT_FALSE(r.parameters_valid);
  EXPECT_FALSE(r.passed());
}

TEST(Psi, RoundTripThroughChi) {
  for (const auto& m : all_families()) {
    for (double e = 1e-6; e < 1e4; e *= 1.7) {
      if (m.chi(e) < 1e-300) break;
      EXPECT_NEAR(m.psi(m.chi(e)), e, 1e-10 * (1.0 + e)) << m.spec() << " e=" << e;
    }
  }
}

TEST(Psi, StrictlyDecreasingAndConvex) {
  std::mt19937_64 rng(7);
  for (const auto& m : all_families()) {
    std::uniform_real_distribution<double> u(1e-6, m.eps0());
    std::uniform_real_distribution<double> w(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      double a = u(rng), b = u(rng);
      if (a == b) continue;
      if (a > b) std::swap(a, b);
      EXPECT_GT(m.psi(a), m.psi(b));
      const double t = w(rng);
      const double mid = m.psi(t * a + (1 - t) * b);
      const double chord = t * m.psi(a) + (1 - t) * m.psi(b);
      EXPECT_LE(mid, chord + 1e-10 * std::abs(chord)) << m.spec();
    }
  }
}

TEST(PsiPrime, MatchesCentralDifferences) {
  for (const auto& m : all_families()) {
    for (double eps = 1e-5; eps < 0.95 * m.eps0(); eps *= 1.9) {
      const double h = 1e-6 * eps;
      const double fd = (m.psi(eps + h) - m.psi(eps - h)) / (2 * h);
      EXPECT_NEAR(m.psi_prime(eps), fd, 1e-6 * std::abs(m.psi_prime(eps))) << m.spec();
      const double fd2 = (m.psi_prime(eps + h) - m.psi_prime(eps - h)) / (2 * h);
      EXPECT_NEAR(m.psi_second(eps), fd2, 1e-5 * m.psi_second(eps)) << m.spec();
    }
  }
}

TEST(EpsAtPrice, InvertsPsiPrime) {
  for (const auto& m : all_families()) {
    for (double eps = 1e-8; eps < m.eps0(); eps *= 3.0) {
      EXPECT_NEAR(m.eps_at_price(-m.psi_prime(eps)), eps, 1e-10 * eps) << m.spec();
    }
  }
}

TEST(Dominance, PointwiseChiOrderCarriesToPsi) {
  const auto ex = EnergyFailureModel::exponential(0.5, 1.0);
  const std::vector<EnergyFailureModel> others{EnergyFailureModel::polynomial(0.5, 1.0),
                                               EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5)};
  for (const auto& other : others) {
    // Determine the pointwise order on the grid, then check psi follows it.
    bool ex_below = true, other_below = true;
    for (double e = 1e-3; e < 50.0; e *= 1.3) {
      ex_below = ex_below && ex.chi(e) <= other.chi(e);
      other_below = other_below && other.chi(e) <= ex.chi(e);
    }
    for (double eps = 1e-6; eps < 0.5; eps *= 2.0) {
      if (ex_below) {
        EXPECT_LE(ex.psi(eps), other.psi(eps) + 1e-12);
      }
      if (other_below) {
        EXPECT_LE(other.psi(eps), ex.psi(eps) + 1e-12);
      }
    }
  }
}

TEST(ParseModelSpec, AcceptsAllFamilies) {
  EXPECT_EQ(parse_model_spec("exp:0.5:1.0"), EnergyFailureModel::exponential(0.5, 1.0));
  EXPECT_EQ(parse_model_spec("poly:0.5:2.0"), EnergyFailureModel::polynomial(0.5, 2.0));
  EXPECT_EQ(parse_model_spec("poly:0.5:1:2.0"), EnergyFailureModel::polynomial(0.5, 2.0));
  EXPECT_EQ(parse_model_spec("sexp:0.5:1.0:0.5"),
            EnergyFailureModel::stretched_exponential(0.5, 1.0, 0.5));
  const auto m = EnergyFailureModel::stretched_exponential(0.25, 3.0, 0.75);
  EXPECT_EQ(parse_model_spec(m.spec()), m);
}

TEST(ParseModelSpec, ErrorsNameTheField) {
  try {
    parse_model_spec("exp:abc:1");
    FAIL();
  } catch (const std::invalid_argument& e) {
    EXPECT_NE(std::string(e.what()).find("eps0"), std::string::npos);
  }
  EXPECT_THROW(parse_model_spec("weird:0.5:1"), std::invalid_argument);
  EXPECT_THROW(parse_model_spec("exp:0.5"), std::invalid_argument);
  EXPECT_THROW(parse_model_spec("exp:2:1"), std::invalid_argument);
}

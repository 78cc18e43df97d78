#pragma once

#include <cmath>

#include "enrel/efmodel.hpp"

namespace enrel::detail {

// psi and psi'' without the eps <= eps0 check. For the exponential and
// polynomial families these are the analytic continuations past eps0; the
// stretched family is only ever evaluated below eps0 here.

inline double psi_ext(const EnergyFailureModel& m, double eps) {
  const double a = m.eps0();
  switch (m.family()) {
    case Family::Exponential:
      return std::log(a / eps) / m.c();
    case Family::Polynomial:
      return std::pow(a / eps, 1.0 / m.beta()) - 1.0;
    case Family::StretchedExponential: {
      const double u = std::max(0.0, std::log(a / eps) / m.c());
      return m.beta() == 1.0 ? u : std::pow(u, 1.0 / m.beta());
    }
  }
  return 0.0;
}

inline double psi_second_ext(const EnergyFailureModel& m, double eps) {
  const double a = m.eps0();
  switch (m.family()) {
    case Family::Exponential:
      return 1.0 / (m.c() * eps * eps);
    case Family::Polynomial: {
      const double b = m.beta();
      return (1.0 / b) * (1.0 / b + 1.0) * std::pow(a, 1.0 / b) * std::pow(eps, -1.0 / b - 2.0);
    }
    case Family::StretchedExponential:
      return m.psi_second(std::min(eps, a));
  }
  return 0.0;
}

}  // namespace enrel::detail

#include <cmath>
#include <string>

#include "enrel/alloc.hpp"
#include "enrel/errors.hpp"

namespace enrel {

SymmetricSolution closed_form_symmetric(std::size_t k, std::size_t d,
                                        const EnergyFailureModel& model, double value,
                                        AllocMode mode) {
  if (k < 2) throw PreconditionError("closed forms need k >= 2");
  if (model.family() == Family::StretchedExponential) {
    throw PreconditionError("closed forms exist for the exponential and polynomial families only");
  }
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(mode == AllocMode::MinEnergy ? "gamma" : "energy budget") +
                      " must be positive and finite");
  }

  const double kd = static_cast<double>(k);
  const double a = model.eps0();
  const double beta = model.beta();
  SymmetricSolution s;
  s.level_eps.assign(d + 1, 0.0);

  // count[i] = k^i gates at distance i from the root.
  std::vector<double> count(d + 1);
  for (std::size_t i = 0; i <= d; ++i) count[i] = std::pow(kd, static_cast<double>(i));

  double eps_d = 0.0;
  if (model.family() == Family::Exponential) {
    s.level_ratio = 1.0 / kd;
    if (mode == AllocMode::MinEnergy) {
      eps_d = value * (1.0 - 1.0 / kd) / (1.0 - std::pow(kd, -static_cast<double>(d + 1)));
    } else {
      double weighted = 0.0, total = 0.0;
      for (std::size_t i = 0; i <= d; ++i) {
        weighted += count[i] * std::log(a * std::pow(kd, static_cast<double>(d - i)));
        total += count[i];
      }
      eps_d = std::exp((weighted - model.c() * value) / total);
    }
  } else {
    const double kt = std::pow(kd, -beta / (1.0 + beta));
    s.level_ratio = kt;
    if (beta != 1.0) s.printed_ratio = std::pow(kd, beta / (1.0 - beta));
    if (mode == AllocMode::MinEnergy) {
      double geometric = 0.0;
      for (std::size_t j = 0; j <= d; ++j) geometric += std::pow(kt, static_cast<double>(j));
      eps_d = value / geometric;
    } else {
      double weighted = 0.0, total = 0.0;
      for (std::size_t i = 0; i <= d; ++i) {
        weighted += count[i] * std::pow(kt, -static_cast<double>(d - i) / beta);
        total += count[i];
      }
      eps_d = std::pow(std::pow(a, 1.0 / beta) * weighted / (value + total), beta);
    }
  }

  for (std::size_t i = 0; i <= d; ++i) {
    s.level_eps[i] = eps_d * std::pow(s.level_ratio, static_cast<double>(d - i));
    if (!(s.level_eps[i] > 0.0 && s.level_eps[i] <= a)) {
      throw DomainError("level " + std::to_string(i) + " gets eps = " +
                        std::to_string(s.level_eps[i]) + " outside (0, eps0]");
    }
  }
  for (std::size_t i = 0; i <= d; ++i) {
    s.gamma += s.level_eps[i];
    s.total_energy += count[i] * model.psi(s.level_eps[i]);
  }
  return s;
}

Allocation expand_symmetric(const GateTree& balanced, const EnergyFailureModel& model,
                            const SymmetricSolution& solution) {
  if (balanced.depth() + 1 != solution.level_eps.size()) {
    throw PreconditionError("tree depth does not match the number of levels");
  }
  std::vector<double> eps(balanced.size());
  for (GateId g = 0; g < balanced.size(); ++g) eps[g] = solution.level_eps[balanced.level(g)];
  return allocation_from_eps(model, std::move(eps));
}

}  // namespace enrel

#include "enrel/efmodel.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <system_error>

#include "enrel/errors.hpp"

namespace enrel {
namespace {

void require_valid(Family family, double eps0, double c, double beta) {
  if (!(eps0 > 0.0 && eps0 <= 1.0)) {
    throw DomainError("energy-failure model: eps0 must lie in (0, 1], got " +
                      std::to_string(eps0));
  }
  if (family != Family::Polynomial && !(c > 0.0 && std::isfinite(c))) {
    throw DomainError("energy-failure model: c must be positive and finite, got " +
                      std::to_string(c));
  }
  if (!(beta > 0.0 && std::isfinite(beta))) {
    throw DomainError("energy-failure model: beta must be positive and finite, got " +
                      std::to_string(beta));
  }
  if (family == Family::StretchedExponential && beta > 1.0) {
    throw DomainError("stretched-exponential model: beta must lie in (0, 1], got " +
                      std::to_string(beta));
  }
}

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) return std::to_string(v);
  return std::string(buf, end);
}

void check_eps(const EnergyFailureModel& m, double eps) {
  if (!(eps > 0.0)) {
    throw DomainError("failure probability must be positive (psi diverges at 0), got " +
                      std::to_string(eps));
  }
  if (eps > m.eps0()) {
    throw DomainError("failure probability " + std::to_string(eps) + " exceeds eps0 = " +
                      std::to_string(m.eps0()));
  }
}

// Solves e^s + m s = K for s (m > 0). The left side is convex and increasing,
// so Newton converges from any starting point.
double solve_exp_plus_linear(double m, double K) {
  double s = K > 1.0 ? std::log(K) : K / (1.0 + m);
  for (int it = 0; it < 100; ++it) {
    const double es = std::exp(s);
    const double step = (es + m * s - K) / (es + m);
    s -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(s))) break;
  }
  return s;
}

}  // namespace

std::string_view family_name(Family family) {
  switch (family) {
    case Family::Exponential: return "exp";
    case Family::Polynomial: return "poly";
    case Family::StretchedExponential: return "sexp";
  }
  return "?";
}

EnergyFailureModel EnergyFailureModel::exponential(double eps0, double c) {
  require_valid(Family::Exponential, eps0, c, 1.0);
  return {Family::Exponential, eps0, c, 1.0};
}

EnergyFailureModel EnergyFailureModel::polynomial(double eps0, double beta) {
  require_valid(Family::Polynomial, eps0, 1.0, beta);
  return {Family::Polynomial, eps0, 1.0, beta};
}

EnergyFailureModel EnergyFailureModel::stretched_exponential(double eps0, double c,
                                                             double beta) {
  require_valid(Family::StretchedExponential, eps0, c, beta);
  return {Family::StretchedExponential, eps0, c, beta};
}

double EnergyFailureModel::chi(double e) const {
  if (!(e >= 0.0) || !std::isfinite(e)) {
    throw DomainError("energy must be finite and non-negative, got " + std::to_string(e));
  }
  switch (family_) {
    case Family::Exponential: return eps0_ * std::exp(-c_ * e);
    case Family::Polynomial: return eps0_ / std::pow(1.0 + e, beta_);
    case Family::StretchedExponential: return eps0_ * std::exp(-c_ * std::pow(e, beta_));
  }
  return 0.0;
}

double EnergyFailureModel::psi(double eps) const {
  check_eps(*this, eps);
  const double log_ratio = std::log(eps0_ / eps);
  switch (family_) {
    case Family::Exponential: return log_ratio / c_;
    case Family::Polynomial: return std::pow(eps0_ / eps, 1.0 / beta_) - 1.0;
    case Family::StretchedExponential: return std::pow(log_ratio / c_, 1.0 / beta_);
  }
  return 0.0;
}

double EnergyFailureModel::psi_prime(double eps) const {
  check_eps(*this, eps);
  switch (family_) {
    case Family::Exponential: return -1.0 / (c_ * eps);
    case Family::Polynomial:
      return -(1.0 / beta_) * std::pow(eps0_, 1.0 / beta_) * std::pow(eps, -1.0 / beta_ - 1.0);
    case Family::StretchedExponential: {
      if (beta_ == 1.0) return -1.0 / (c_ * eps);
      const double L = std::log(eps0_ / eps);
      return -(1.0 / beta_) * std::pow(L / c_, 1.0 / beta_ - 1.0) / (c_ * eps);
    }
  }
  return 0.0;
}

double EnergyFailureModel::psi_second(double eps) const {
  check_eps(*this, eps);
  switch (family_) {
    case Family::Exponential: return 1.0 / (c_ * eps * eps);
    case Family::Polynomial:
      return (1.0 / beta_) * (1.0 / beta_ + 1.0) * std::pow(eps0_, 1.0 / beta_) *
             std::pow(eps, -1.0 / beta_ - 2.0);
    case Family::StretchedExponential: {
      if (beta_ == 1.0) return 1.0 / (c_ * eps * eps);
      const double L = std::log(eps0_ / eps);
      const double m = 1.0 / beta_ - 1.0;
      const double u = L / c_;
      return (1.0 / (beta_ * c_)) / (eps * eps) *
             (std::pow(u, m) + (m / c_) * std::pow(u, m - 1.0));
    }
  }
  return 0.0;
}

double EnergyFailureModel::eps_at_price(double price) const {
  if (!(price > 0.0) || !std::isfinite(price)) {
    throw DomainError("price must be positive and finite, got " + std::to_string(price));
  }
  switch (family_) {
    case Family::Exponential: return 1.0 / (c_ * price);
    case Family::Polynomial: {
      const double scale = std::pow(eps0_, 1.0 / beta_) / beta_;
      return std::pow(scale / price, beta_ / (1.0 + beta_));
    }
    case Family::StretchedExponential: {
      if (beta_ == 1.0) return 1.0 / (c_ * price);
      // With t = ln(eps0/eps): -psi'(eps) = (t/c)^m e^t / (beta c eps0), m = 1/beta - 1.
      // Taking logs and substituting t = e^s gives e^s + m s = K.
      const double m = 1.0 / beta_ - 1.0;
      const double K = std::log(price * beta_ * c_ * eps0_) + m * std::log(c_);
      const double t = std::exp(solve_exp_plus_linear(m, K));
      return eps0_ * std::exp(-t);
    }
  }
  return 0.0;
}

std::string EnergyFailureModel::spec() const {
  switch (family_) {
    case Family::Exponential: return "exp:" + format_number(eps0_) + ":" + format_number(c_);
    case Family::Polynomial: return "poly:" + format_number(eps0_) + ":" + format_number(beta_);
    case Family::StretchedExponential:
      return "sexp:" + format_number(eps0_) + ":" + format_number(c_) + ":" +
             format_number(beta_);
  }
  return {};
}

EnergyFailureModel parse_model_spec(std::string_view text) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(':', start);
    fields.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  const std::string where = "model spec '" + std::string(text) + "'";

  auto number = [&](std::size_t index, const char* name) {
    if (index >= fields.size()) {
      throw std::invalid_argument(where + ": missing field " + name);
    }
    const auto f = fields[index];
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
    if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
      throw std::invalid_argument(where + ": field " + name + " is not a number: '" +
                                  std::string(f) + "'");
    }
    return v;
  };
  auto expect_count = [&](std::size_t lo, std::size_t hi) {
    if (fields.size() < lo || fields.size() > hi) {
      throw std::invalid_argument(where + ": wrong number of fields");
    }
  };

  const auto family = fields.front();
  try {
    if (family == "exp") {
      expect_count(3, 3);
      return EnergyFailureModel::exponential(number(1, "eps0"), number(2, "c"));
    }
    if (family == "poly") {
      expect_count(3, 4);
      const double eps0 = number(1, "eps0");
      const double beta = fields.size() == 4 ? number(3, "beta") : number(2, "beta");
      return EnergyFailureModel::polynomial(eps0, beta);
    }
    if (family == "sexp") {
      expect_count(4, 4);
      return EnergyFailureModel::stretched_exponential(number(1, "eps0"), number(2, "c"),
                                                       number(3, "beta"));
    }
  } catch (const DomainError& e) {
    throw std::invalid_argument(where + ": " + e.what());
  }
  throw std::invalid_argument(where + ": field family must be one of exp, poly, sexp, got '" +
                              std::string(family) + "'");
}

PhysicalityReport validate_physical(Family family, double eps0, double c, double beta,
                                    std::size_t grid_points) {
  try {
    switch (family) {
      case Family::Exponential:
        return validate_physical(EnergyFailureModel::exponential(eps0, c), grid_points);
      case Family::Polynomial:
        return validate_physical(EnergyFailureModel::polynomial(eps0, beta), grid_points);
      case Family::StretchedExponential:
        return validate_physical(EnergyFailureModel::stretched_exponential(eps0, c, beta),
                                 grid_points);
    }
  } catch (const DomainError& e) {
    PhysicalityReport report;
    report.parameters_valid = false;
    report.failures.emplace_back(e.what());
    return report;
  }
  return {};
}

PhysicalityReport validate_physical(const EnergyFailureModel& model, std::size_t grid_points) {
  PhysicalityReport report;
  report.grid_points = grid_points < 3 ? 3 : grid_points;
  const std::size_t n = report.grid_points;

  std::vector<double> e(n), f(n);
  const double lo = std::log(1e-6), hi = std::log(1e6);
  for (std::size_t i = 0; i < n; ++i) {
    e[i] = std::exp(lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1));
    f[i] = model.chi(e[i]);
  }

  // Equal neighbours only count once chi has underflowed below normal range.
  const double tiny = std::numeric_limits<double>::min();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (f[i + 1] > f[i] || (f[i + 1] == f[i] && f[i] >= tiny)) ++report.monotonicity_violations;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double chord =
        ((e[i + 1] - e[i]) * f[i - 1] + (e[i] - e[i - 1]) * f[i + 1]) / (e[i + 1] - e[i - 1]);
    if (chord - f[i] < -1e-12) ++report.convexity_violations;
  }
  report.limit_at_zero_ok = std::abs(model.chi(0.0) - model.eps0()) <= 1e-15 * model.eps0();
  const double last = f.back();
  report.tail_decreasing = last == 0.0 || model.chi(1e300) < last;

  if (report.monotonicity_violations > 0) {
    report.failures.push_back(std::to_string(report.monotonicity_violations) +
                              " monotonicity violation(s) on the energy grid");
  }
  if (report.convexity_violations > 0) {
    report.failures.push_back(std::to_string(report.convexity_violations) +
                              " convexity violation(s) on the energy grid");
  }
  if (!report.limit_at_zero_ok) report.failures.emplace_back("chi(0) differs from eps0");
  if (!report.tail_decreasing) {
    report.failures.emplace_back("chi does not keep decreasing beyond the grid");
  }
  return report;
}

}  // namespace enrel

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace enrel {

enum class Family { Exponential, Polynomial, StretchedExponential };

std::string_view family_name(Family family);

/// Energy-failure function chi (energy -> gate failure probability) together
/// with its analytic inverse psi and the derivatives of psi.
///
/// Closed forms, with a = eps0:
///   Exponential           chi(e) = a exp(-c e)
///   Polynomial            chi(e) = a / (1 + e)^beta
///   StretchedExponential  chi(e) = a exp(-c e^beta),  0 < beta <= 1
///
/// Instances are immutable and always hold valid parameters; the factories
/// throw DomainError otherwise.
class EnergyFailureModel {
 public:
  static EnergyFailureModel exponential(double eps0, double c);
  static EnergyFailureModel polynomial(double eps0, double beta);
  static EnergyFailureModel stretched_exponential(double eps0, double c, double beta);

  Family family() const { return family_; }
  double eps0() const { return eps0_; }
  double c() const { return c_; }
  double beta() const { return beta_; }

  /// Failure probability at energy e >= 0.
  double chi(double e) const;
  /// Energy needed for failure probability eps in (0, eps0].
  double psi(double eps) const;
  /// d psi / d eps, negative on (0, eps0) for every family.
  double psi_prime(double eps) const;
  /// d^2 psi / d eps^2, positive on (0, eps0).
  double psi_second(double eps) const;

  /// Failure probability at which psi'(eps) = -price, for price > 0.
  ///
  /// This is the stationary point of psi(eps) + price * eps. For the
  /// exponential and polynomial families the result may exceed eps0 when
  /// price < -psi'(eps0); it is the analytic continuation and callers that
  /// need a probability must check it.
  double eps_at_price(double price) const;

  /// Canonical `family:eps0:c[:beta]` spelling accepted by parse_model_spec.
  std::string spec() const;

  friend bool operator==(const EnergyFailureModel&, const EnergyFailureModel&) = default;

 private:
  EnergyFailureModel(Family family, double eps0, double c, double beta)
      : family_(family), eps0_(eps0), c_(c), beta_(beta) {}

  Family family_;
  double eps0_;
  double c_;
  double beta_;
};

/// Parses `exp:EPS0:C`, `poly:EPS0:BETA` (or `poly:EPS0:C:BETA`, C ignored)
/// and `sexp:EPS0:C:BETA`. Throws std::invalid_argument naming the field.
EnergyFailureModel parse_model_spec(std::string_view text);

struct PhysicalityReport {
  std::size_t grid_points = 0;
  bool parameters_valid = true;
  std::size_t monotonicity_violations = 0;
  std::size_t convexity_violations = 0;
  bool limit_at_zero_ok = false;
  bool tail_decreasing = false;
  std::vector<std::string> failures;

  bool passed() const { return failures.empty(); }
};

/// Samples chi on a logarithmic energy grid over [1e-6, 1e6] and reports
/// where it fails to be strictly decreasing or convex, and whether
/// chi(0) = eps0 and chi keeps decreasing past the grid.
PhysicalityReport validate_physical(const EnergyFailureModel& model,
                                    std::size_t grid_points = 200);

/// Same check for raw parameters; invalid parameters are reported, not thrown.
PhysicalityReport validate_physical(Family family, double eps0, double c, double beta,
                                    std::size_t grid_points = 200);

}  // namespace enrel

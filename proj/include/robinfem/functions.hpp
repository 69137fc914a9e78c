#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace robinfem {

// T_k(s) = max(-k, min(s, k)). Accepts k = +inf (identity).
double truncate(double s, double k);

// V_delta: 1 on (-inf, delta], affine (2*delta - s)/delta on (delta, 2*delta),
// 0 on [2*delta, inf).
double v_delta(double s, double delta);

// phi_{t,eps}: 0 on (-inf, t], affine (s - t)/eps on (t, t+eps), 1 above.
double phi_t_eps(double s, double t, double eps);

// Integrability exponent r = max(2(N-1)/(N + eta(N-2)), 1) required of the
// boundary source for finite-energy solutions. N >= 2.
double g_integrability_exponent(int N, double eta);

struct MarcinkiewiczExponents {
  double interior;  // N(p-1)/(N-p)
  double boundary;  // (N-1)(p-1)/(N-p)
  double gradient;  // N(p-1)/(N-1)
};

// Weak-Lebesgue exponents of the solution, its trace, and its gradient.
// Throws std::invalid_argument unless 1 < p < N.
MarcinkiewiczExponents marcinkiewicz_exponents(int N, double p);

// Boundary absorption nonlinearity sigma. Power family sigma(s) = scale*s^q;
// the tabulated family interpolates (s, sigma) samples linearly and is the
// escape hatch for custom shapes. sigma(0) = 0 always; sigma(s) >= s^{p-1}
// is a structural requirement checked by validate().
struct SigmaSpec {
  enum class Family { Power, Tabulated };

  Family family = Family::Power;
  double exponent = 1.0;  // q >= 0 (power family)
  double scale = 1.0;     // > 0
  std::vector<std::pair<double, double>> samples;  // tabulated family
  bool increasing = true;  // monotonicity flag; gates the uniqueness check

  double value(double s) const;
  double derivative(double s) const;
  double truncated(double s, double n) const;             // sigma_n = T_n(sigma)
  double truncated_derivative(double s, double n) const;  // branch below the kink

  // Samples sigma on a log grid in [1e-6, 1e6] and reports every violation of
  // sigma(s) >= s^{p-1}, sigma(0) = 0, and (if flagged) monotonicity.
  std::vector<std::string> validate(double p) const;
};

// Boundary source nonlinearity h, possibly blowing up at 0.
//   PowerSingular: h(s) = c1 * s^{-eta}
//   Bounded:       h == c1
//   Rational:      h(s) = c1 / (s^eta + shift)
//   Tabulated:     linear interpolation of samples (finite at 0)
struct HSpec {
  enum class Family { PowerSingular, Bounded, Rational, Tabulated };

  Family family = Family::PowerSingular;
  double eta = 1.0;    // >= 0
  double c1 = 1.0;     // > 0
  double s1 = 1.0;     // growth threshold: h(s) <= c1/s^eta checked on (0, s1]
  double shift = 1.0;  // rational family denominator shift, > 0
  std::vector<std::pair<double, double>> samples;
  bool nonincreasing = true;  // monotonicity flag; gates the uniqueness check

  bool singular_at_zero() const;

  // h(s) for s > 0; returns +inf at s = 0 for singular families. Negative s
  // throws std::invalid_argument for singular families.
  double value(double s) const;
  double derivative(double s) const;
  double truncated(double s, double n) const;  // h_n = T_n(h), h_n(0) = n if h(0) = inf
  double truncated_derivative(double s, double n) const;

  // Checks h(s) <= c1/s^eta on (0, s1], limsup at infinity, and monotonicity
  // where flagged, on sample grids; returns violation messages.
  std::vector<std::string> validate() const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace robinfem

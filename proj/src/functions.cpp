#include "robinfem/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace robinfem {

double truncate(double s, double k) {
  return std::max(-k, std::min(s, k));
}

double v_delta(double s, double delta) {
  if (s <= delta) return 1.0;
  if (s >= 2.0 * delta) return 0.0;
  return (2.0 * delta - s) / delta;
}

double phi_t_eps(double s, double t, double eps) {
  if (s <= t) return 0.0;
  if (s >= t + eps) return 1.0;
  return (s - t) / eps;
}

double g_integrability_exponent(int N, double eta) {
  if (N < 2) throw std::invalid_argument("g_integrability_exponent: N must be >= 2");
  const double num = 2.0 * (N - 1);
  const double den = N + eta * (N - 2);
  return std::max(num / den, 1.0);
}

MarcinkiewiczExponents marcinkiewicz_exponents(int N, double p) {
  if (!(p > 1.0 && p < static_cast<double>(N))) {
    throw std::invalid_argument("marcinkiewicz_exponents: requires 1 < p < N");
  }
  const double n = static_cast<double>(N);
  return {n * (p - 1.0) / (n - p), (n - 1.0) * (p - 1.0) / (n - p),
          n * (p - 1.0) / (n - 1.0)};
}

namespace {

double interp_samples(const std::vector<std::pair<double, double>>& samples, double s) {
  if (samples.empty()) throw std::invalid_argument("tabulated spec has no samples");
  if (s <= samples.front().first) return samples.front().second;
  if (s >= samples.back().first) return samples.back().second;
  auto it = std::upper_bound(samples.begin(), samples.end(), s,
                             [](double v, const auto& pr) { return v < pr.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  const double t = (s - lo.first) / (hi.first - lo.first);
  return lo.second + t * (hi.second - lo.second);
}

double interp_slope(const std::vector<std::pair<double, double>>& samples, double s) {
  if (samples.size() < 2) return 0.0;
  if (s <= samples.front().first || s >= samples.back().first) return 0.0;
  auto it = std::upper_bound(samples.begin(), samples.end(), s,
                             [](double v, const auto& pr) { return v < pr.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  return (hi.second - lo.second) / (hi.first - lo.first);
}

std::vector<double> log_grid(double lo, double hi, int count) {
  std::vector<double> g(count);
  const double llo = std::log(lo), lhi = std::log(hi);
  for (int i = 0; i < count; ++i) {
    g[i] = std::exp(llo + (lhi - llo) * i / (count - 1));
  }
  return g;
}

}  // namespace

double SigmaSpec::value(double s) const {
  switch (family) {
    case Family::Power:
      if (s == 0.0) return 0.0;
      return scale * std::pow(s, exponent);
    case Family::Tabulated:
      return interp_samples(samples, s);
  }
  return 0.0;
}

double SigmaSpec::derivative(double s) const {
  switch (family) {
    case Family::Power:
      if (exponent == 1.0) return scale;
      if (s <= 0.0) return exponent > 1.0 ? 0.0 : 0.0;  // one-sided at 0
      return scale * exponent * std::pow(s, exponent - 1.0);
    case Family::Tabulated:
      return interp_slope(samples, s);
  }
  return 0.0;
}

double SigmaSpec::truncated(double s, double n) const {
  return truncate(value(s), n);
}

double SigmaSpec::truncated_derivative(double s, double n) const {
  return value(s) <= n ? derivative(s) : 0.0;
}

std::vector<std::string> SigmaSpec::validate(double p) const {
  std::vector<std::string> issues;
  if (scale <= 0.0) issues.push_back("sigma: scale must be positive");
  if (exponent < 0.0) issues.push_back("sigma: exponent must be >= 0");
  if (std::abs(value(0.0)) > 1e-14) issues.push_back("sigma: sigma(0) != 0");
  double prev = 0.0;
  bool growth_ok = true, mono_ok = true;
  for (double s : log_grid(1e-6, 1e6, 1000)) {
    const double v = value(s);
    if (v < std::pow(s, p - 1.0) * (1.0 - 1e-12)) growth_ok = false;
    if (increasing && v < prev - 1e-12 * std::max(1.0, std::abs(prev))) mono_ok = false;
    prev = v;
  }
  if (!growth_ok) {
    std::ostringstream os;
    os << "sigma: sigma(s) >= s^{p-1} violated on the sample grid for p = " << p;
    issues.push_back(os.str());
  }
  if (!mono_ok) issues.push_back("sigma: flagged increasing but decreases on the sample grid");
  return issues;
}

bool HSpec::singular_at_zero() const {
  switch (family) {
    case Family::PowerSingular:
      return eta > 0.0;
    case Family::Bounded:
    case Family::Rational:
    case Family::Tabulated:
      return false;
  }
  return false;
}

double HSpec::value(double s) const {
  if (s < 0.0 && singular_at_zero()) {
    throw std::invalid_argument("HSpec: negative argument to singular h");
  }
  switch (family) {
    case Family::PowerSingular:
      if (eta == 0.0) return c1;
      if (s <= 0.0) return kInfinity;
      return c1 * std::pow(s, -eta);
    case Family::Bounded:
      return c1;
    case Family::Rational:
      return c1 / (std::pow(std::max(s, 0.0), eta) + shift);
    case Family::Tabulated:
      return interp_samples(samples, s);
  }
  return 0.0;
}

double HSpec::derivative(double s) const {
  switch (family) {
    case Family::PowerSingular:
      if (eta == 0.0 || s <= 0.0) return 0.0;
      return -c1 * eta * std::pow(s, -eta - 1.0);
    case Family::Bounded:
      return 0.0;
    case Family::Rational: {
      if (s <= 0.0) return 0.0;
      const double den = std::pow(s, eta) + shift;
      return -c1 * eta * std::pow(s, eta - 1.0) / (den * den);
    }
    case Family::Tabulated:
      return interp_slope(samples, s);
  }
  return 0.0;
}

double HSpec::truncated(double s, double n) const {
  const double v = value(s);
  return std::isfinite(v) ? truncate(v, n) : n;
}

double HSpec::truncated_derivative(double s, double n) const {
  // h decreasing through the kink: the branch below the kink (smaller s) is
  // the constant n, so at h(s) >= n the derivative is 0.
  const double v = value(s);
  return (!std::isfinite(v) || v >= n) ? 0.0 : derivative(s);
}

std::vector<std::string> HSpec::validate() const {
  std::vector<std::string> issues;
  if (c1 <= 0.0) issues.push_back("h: c1 must be positive");
  if (eta < 0.0) issues.push_back("h: eta must be >= 0");
  if (s1 <= 0.0) issues.push_back("h: s1 must be positive");
  if (family == Family::Rational && shift <= 0.0) issues.push_back("h: shift must be positive");

  bool growth_ok = true;
  for (double s : log_grid(1e-9, s1, 400)) {
    const double bound = eta == 0.0 ? c1 : c1 * std::pow(s, -eta);
    if (value(s) > bound * (1.0 + 1e-12)) growth_ok = false;
  }
  if (!growth_ok) issues.push_back("h: h(s) <= c1/s^eta violated on (0, s1]");

  double sup_tail = 0.0;
  for (double s : log_grid(1.0, 1e9, 400)) sup_tail = std::max(sup_tail, value(s));
  if (!std::isfinite(sup_tail)) issues.push_back("h: unbounded as s -> infinity");

  if (nonincreasing) {
    double prev = kInfinity;
    for (double s : log_grid(1e-9, 1e9, 800)) {
      const double v = value(s);
      if (v > prev + 1e-12 * std::max(1.0, prev)) {
        issues.push_back("h: flagged nonincreasing but increases on the sample grid");
        break;
      }
      prev = v;
    }
  }
  return issues;
}

}  // namespace robinfem

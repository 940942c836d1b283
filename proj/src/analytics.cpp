#include "hpb/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

namespace hpb {

namespace {

constexpr double sqr(double x) { return x * x; }

// Sum of |terms| used to judge whether a polynomial value is "zero".
double abs_sum(std::initializer_list<double> terms) {
  double s = 0.0;
  for (double t : terms) s += std::abs(t);
  return s;
}

}  // namespace

double evaluate_polynomial(std::span<const double> coeffs, double x) {
  double v = 0.0;
  for (double c : coeffs) v = v * x + c;
  return v;
}

std::vector<double> real_polynomial_roots(std::span<const double> coeffs) {
  if (coeffs.empty() || coeffs.front() == 0.0) {
    throw Error(ErrorKind::Domain, "polynomial needs a nonzero leading coefficient");
  }
  std::vector<double> roots;
  size_t degree = coeffs.size() - 1;
  while (degree > 0 && coeffs[degree] == 0.0) {
    roots.push_back(0.0);
    --degree;
  }
  if (degree > 0) {
    // Rescale x = s y so the monic coefficients are O(1).
    double s = 0.0;
    for (size_t k = 1; k <= degree; ++k) {
      s = std::max(s, std::pow(std::abs(coeffs[k] / coeffs[0]), 1.0 / static_cast<double>(k)));
    }
    if (s == 0.0) s = 1.0;

    const auto n = static_cast<Eigen::Index>(degree);
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
      companion(0, k) = -coeffs[static_cast<size_t>(k) + 1] / coeffs[0] /
                        std::pow(s, static_cast<double>(k + 1));
    }
    for (Eigen::Index k = 1; k < n; ++k) companion(k, k - 1) = 1.0;

    Eigen::EigenSolver<Eigen::MatrixXd> es(companion, false);
    if (es.info() != Eigen::Success) {
      throw Error(ErrorKind::Singular, "companion eigenvalue iteration did not converge");
    }
    for (Eigen::Index k = 0; k < n; ++k) {
      const std::complex<double> r = es.eigenvalues()(k) * s;
      if (std::abs(r.imag()) >= kRealRootTolerance) {
        std::ostringstream msg;
        msg << "polynomial root " << r << " is not real; dressed-state polynomials of a "
            << "Hermitian Hamiltonian must have real roots";
        throw Error(ErrorKind::Singular, msg.str());
      }
      roots.push_back(r.real());
    }
  }

  // Two Newton steps on the original polynomial.
  std::vector<double> deriv;
  for (size_t k = 0; k + 1 < coeffs.size(); ++k) {
    deriv.push_back(coeffs[k] * static_cast<double>(coeffs.size() - 1 - k));
  }
  for (double& r : roots) {
    for (int it = 0; it < 2; ++it) {
      const double dp = evaluate_polynomial(deriv, r);
      if (dp == 0.0) break;
      const double step = evaluate_polynomial(coeffs, r) / dp;
      if (!std::isfinite(step) || std::abs(step) > 1e-6 * std::max(1.0, std::abs(r))) break;
      r -= step;
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::array<double, 4> single_excitation_polynomial(const SystemParams& p) {
  const double g1s = sqr(p.g1), g2s = sqr(p.g2);
  return {1.0, -p.delta, -(g1s + g2s), p.delta * g2s};
}

std::array<double, 5> two_excitation_polynomial(const SystemParams& p) {
  const double g1s = sqr(p.g1), g2s = sqr(p.g2), d = p.delta;
  return {1.0, -2.0 * d, sqr(d) - 3.0 * (g1s + g2s), d * (3.0 * g1s + 4.0 * g2s),
          -2.0 * sqr(d) * g2s + 2.0 * sqr(g1s - g2s)};
}

std::array<double, 3> single_excitation_roots(const SystemParams& params) {
  const auto c = single_excitation_polynomial(params);
  const auto r = real_polynomial_roots(c);
  return {r[0], r[1], r[2]};
}

std::array<double, 4> two_excitation_roots(const SystemParams& params) {
  const auto c = two_excitation_polynomial(params);
  const auto r = real_polynomial_roots(c);
  return {r[0], r[1], r[2], r[3]};
}

DressedSpectrum dressed_spectrum(const SystemParams& params) {
  return {single_excitation_roots(params), two_excitation_roots(params), params.delta};
}

std::array<double, 3> ela_branches(double delta, const SystemParams& params) {
  SystemParams p = params;
  p.delta = delta;
  return single_excitation_roots(p);
}

CgG2Denominator cgg2_denominator(const SystemParams& p) {
  const double D = p.Delta, d = p.delta, gs = sqr(p.g1);
  return {8 * std::pow(D, 4) - 8 * d * std::pow(D, 3) + 2 * sqr(d) * sqr(D) -
              12 * gs * sqr(D) + 7 * d * gs * D - sqr(d) * gs,
          std::pow(D, 3) - d * sqr(D) - 2 * gs * D + d * gs};
}

namespace {

struct Condition {
  std::string name;
  double distance;  // in kappa units along Delta
};

std::vector<Condition> analytic_conditions(const SystemParams& p) {
  std::vector<Condition> out;
  for (int k : {2, 3, 4}) {
    out.push_back({"interference line delta = " + std::to_string(k) + " Delta",
                   std::abs(p.delta / k - p.Delta)});
  }
  try {
    for (double e : single_excitation_roots(p)) {
      std::ostringstream name;
      name << "one-photon resonance Delta = " << e;
      out.push_back({name.str(), std::abs(p.Delta - e)});
    }
    for (double e : two_excitation_roots(p)) {
      std::ostringstream name;
      name << "two-photon resonance 2 Delta = " << e;
      out.push_back({name.str(), std::abs(p.Delta - 0.5 * e)});
    }
  } catch (const Error&) {
    // Spectrum unavailable; the interference lines still apply.
  }
  return out;
}

}  // namespace

std::string nearest_analytic_condition(const SystemParams& params) {
  const auto conditions = analytic_conditions(params);
  const auto it = std::min_element(conditions.begin(), conditions.end(),
                                   [](const Condition& a, const Condition& b) {
                                     return a.distance < b.distance;
                                   });
  std::ostringstream out;
  out << it->name << " (distance " << it->distance << " kappa in Delta)";
  return out.str();
}

AmplitudeState amplitude_steady_state(const SystemParams& params) {
  params.validate();
  const Complex i_unit(0.0, 1.0);
  const double eta = params.eta;
  const double g1 = params.g1, g2 = params.g2;
  const double r2 = std::sqrt(2.0);
  const Complex q1 = -(params.Delta - params.delta) - 0.5 * i_unit * params.qubit_decay(1);
  const Complex q2 = -params.Delta - 0.5 * i_unit * params.qubit_decay(2);
  const Complex c = -params.Delta - 0.5 * i_unit * params.kappa;

  // Unknown order: eg0, ge0, gg1, ee0, eg1, ge1, gg2.
  Eigen::Matrix<Complex, 7, 7> m = Eigen::Matrix<Complex, 7, 7>::Zero();
  m(0, 0) = q1; m(0, 2) = g1; m(0, 3) = eta;
  m(1, 1) = q2; m(1, 2) = g2; m(1, 3) = eta;
  m(2, 0) = g1; m(2, 1) = g2; m(2, 2) = c; m(2, 4) = eta; m(2, 5) = eta;
  m(3, 0) = eta; m(3, 1) = eta; m(3, 3) = q1 + q2; m(3, 4) = g2; m(3, 5) = g1;
  m(4, 2) = eta; m(4, 3) = g2; m(4, 4) = q1 + c; m(4, 6) = r2 * g1;
  m(5, 2) = eta; m(5, 3) = g1; m(5, 5) = q2 + c; m(5, 6) = r2 * g2;
  m(6, 4) = r2 * g1; m(6, 5) = r2 * g2; m(6, 6) = 2.0 * c;

  Eigen::Matrix<Complex, 7, 1> rhs = Eigen::Matrix<Complex, 7, 1>::Zero();
  rhs(0) = -eta;  // drive out of C_gg0 = 1
  rhs(1) = -eta;

  const Eigen::PartialPivLU<Eigen::Matrix<Complex, 7, 7>> lu(m);
  const double rcond = lu.rcond();
  if (!(rcond > 1e-13)) {
    std::ostringstream msg;
    msg << "amplitude equations singular (rcond " << rcond << ") near "
        << nearest_analytic_condition(params);
    throw Error(ErrorKind::Singular, msg.str());
  }
  const Eigen::Matrix<Complex, 7, 1> x = lu.solve(rhs);

  AmplitudeState s{x(0), x(1), x(2), x(3), x(4), x(5), x(6), eta > kWeakDriveLimit * params.kappa};
  return s;
}

Complex analytic_cgg2(const SystemParams& params) {
  params.validate();
  if (params.g1 != params.g2) {
    throw Error(ErrorKind::Domain, "closed-form C_gg2 requires symmetric coupling g1 == g2");
  }
  const double D = params.Delta, d = params.delta, gs = sqr(params.g1);
  const double numerator_lines = (d - 2 * D) * (d - 3 * D) * (d - 4 * D);
  if (numerator_lines == 0.0) return 0.0;

  const auto f = cgg2_denominator(params);
  const double scale_two = abs_sum({8 * std::pow(D, 4), 8 * d * std::pow(D, 3),
                                    2 * sqr(d) * sqr(D), 12 * gs * sqr(D), 7 * d * gs * D,
                                    sqr(d) * gs});
  const double scale_one = abs_sum({std::pow(D, 3), d * sqr(D), 2 * gs * D, d * gs});
  const bool pole_two = std::abs(f.two_photon_factor) <= 1e-12 * scale_two;
  const bool pole_one = std::abs(f.one_photon_factor) <= 1e-12 * scale_one;
  if (pole_two || pole_one) {
    throw Error(ErrorKind::Singular,
                std::string("closed-form C_gg2 has a pole: drive is on a ") +
                    (pole_one ? "one-photon resonance (Delta = eps_1)"
                              : "two-photon resonance (2 Delta = eps_2)"));
  }
  const double F = f.two_photon_factor * f.one_photon_factor;
  return -std::sqrt(2.0) * sqr(params.eta) * gs * numerator_lines / (2.0 * F);
}

bool closed_form_cgg2_valid(const SystemParams& p) {
  constexpr double kMinDetuning = 10.0;
  constexpr double kMinResonanceGap = 5.0;
  constexpr double kMinLineGap = 10.0;
  const double k = p.kappa;
  if (p.g1 != p.g2) return false;
  if (std::abs(p.Delta) < kMinDetuning * k || std::abs(p.delta) < kMinDetuning * k) return false;
  for (int line : {2, 3, 4}) {
    if (std::abs(p.delta - line * p.Delta) < kMinLineGap * k) return false;
  }
  for (double e : single_excitation_roots(p)) {
    if (std::abs(p.Delta - e) < kMinResonanceGap * k) return false;
  }
  for (double e : two_excitation_roots(p)) {
    if (std::abs(2.0 * p.Delta - e) < kMinResonanceGap * k) return false;
  }
  return true;
}

double truncated_g2(const AmplitudeState& state) {
  const double one = std::abs(state.c_gg1);
  if (!(one > 1e-14)) {
    throw Error(ErrorKind::Undefined,
                "truncated g2 undefined: C_gg1 vanishes (single-photon interference "
                "blockade on the delta = 2 Delta channel)");
  }
  return 2.0 * std::norm(state.c_gg2) / sqr(std::norm(state.c_gg1));
}

const char* to_string(HpbBranch branch) {
  return branch == HpbBranch::Primary ? "primary" : "secondary";
}

TrajectoryPoint hpb_trajectory(double K, HpbBranch branch) {
  if (!(K > 0.0) || !std::isfinite(K)) {
    throw Error(ErrorKind::Domain, "coupling ratio K must be positive");
  }
  if (branch == HpbBranch::Primary) {
    const double x = std::sqrt(2.0 * K * K * K / (2.0 * K + 1.0));
    return {x, x * sqr(1.0 + 1.0 / K)};
  }
  const double radicand = K * K - 0.5;
  if (!(radicand > 0.0)) {
    throw Error(ErrorKind::Domain, "secondary branch needs K > 1/sqrt(2)");
  }
  const double x = std::sqrt(radicand);
  return {x, 3.0 * x};
}

SystemParams hpb_params(const SystemParams& base, double K, HpbBranch branch) {
  const TrajectoryPoint pt = hpb_trajectory(K, branch);
  SystemParams p = base;
  p.g2 = K * base.g1;
  p.Delta = pt.Delta_over_g1 * base.g1;
  p.delta = pt.delta_over_g1 * base.g1;
  return p;
}

}  // namespace hpb

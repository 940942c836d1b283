#pragma once

// Closed-form and few-level results for the two-qubit cavity:
//   - dressed-state polynomials of the one- and two-excitation manifolds
//   - drive detunings resonant with the one-excitation states (ELA branches)
//   - weak-drive amplitude steady state truncated at two excitations
//   - the symmetric-coupling closed form of the two-photon amplitude and its
//     interference zeros at delta = 2 Delta, 3 Delta, 4 Delta
//   - hybrid-blockade trajectories as a function of K = g2 / g1
//
// Energies are in units of kappa and measured in the frame where qubit 2 and
// the cavity sit at zero, i.e. eps_j = E_j - j omega_0.

#include <array>
#include <span>
#include <string>
#include <vector>

#include "hpb/model.hpp"

namespace hpb {

inline constexpr double kRealRootTolerance = 1e-9;

// Real roots of a real polynomial via companion-matrix eigenvalues.
// `coeffs` is highest degree first with a nonzero leading coefficient.
// Exactly-zero trailing coefficients are deflated as exact zero roots.
// Throws ErrorKind::Singular if a root has |Im| >= kRealRootTolerance.
std::vector<double> real_polynomial_roots(std::span<const double> coeffs);

// Horner evaluation, highest degree first.
double evaluate_polynomial(std::span<const double> coeffs, double x);

// (e - delta)(e^2 - g2^2) - g1^2 e = 0, expanded.
std::array<double, 4> single_excitation_polynomial(const SystemParams& params);

// e^4 + delta^2 (e^2 - 2 g2^2) + 2 (g1^2 - g2^2)^2 - 3 e^2 (g1^2 + g2^2)
//   + delta e (-2 e^2 + 3 g1^2 + 4 g2^2) = 0, expanded.
std::array<double, 5> two_excitation_polynomial(const SystemParams& params);

// Sorted ascending.
std::array<double, 3> single_excitation_roots(const SystemParams& params);
std::array<double, 4> two_excitation_roots(const SystemParams& params);

struct DressedSpectrum {
  std::array<double, 3> single_excitation{};
  std::array<double, 4> two_excitation{};
  double delta = 0.0;
};

DressedSpectrum dressed_spectrum(const SystemParams& params);

// Drive detunings Delta = eps_1 at which the drive is resonant with each
// one-excitation dressed state, evaluated at the given delta.
std::array<double, 3> ela_branches(double delta, const SystemParams& params);

struct AmplitudeState {
  Complex c_eg0, c_ge0, c_gg1, c_ee0, c_eg1, c_ge1, c_gg2;
  // eta above the weak-drive regime (0.05 kappa); amplitudes still computed.
  bool strong_drive_warning = false;
};

inline constexpr double kWeakDriveLimit = 0.05;

// Stationary solution of the two-excitation amplitude equations with
// C_gg0 = 1 and complex detunings
//   q1 = -(Delta - delta) - i gamma/2, q2 = -Delta - i gamma/2, c = -Delta - i kappa/2.
// Throws ErrorKind::Singular, naming the closest analytic condition, when the
// 7x7 system is too ill-conditioned.
AmplitudeState amplitude_steady_state(const SystemParams& params);

// Symmetric-coupling closed form
//   C_gg2 = -sqrt(2) eta^2 g^2 (delta - 2 Delta)(delta - 3 Delta)(delta - 4 Delta) / (2 F)
// valid for Delta, delta >> kappa, gamma. Throws ErrorKind::Domain if
// g1 != g2 and ErrorKind::Singular at a pole of F.
Complex analytic_cgg2(const SystemParams& params);

// The two factors of F. The first vanishes on two-photon resonances
// (2 Delta = eps_2), the second on one-photon resonances (Delta = eps_1).
struct CgG2Denominator {
  double two_photon_factor;
  double one_photon_factor;
};
CgG2Denominator cgg2_denominator(const SystemParams& params);

// Region where the closed form is expected to track the dissipative amplitude
// solve: g1 == g2, |Delta|, |delta| >= 10 kappa, the drive at least 5 kappa from
// every one-photon (Delta = eps_1) and two-photon (2 Delta = eps_2) resonance,
// and delta at least 10 kappa from each interference line.
bool closed_form_cgg2_valid(const SystemParams& params);

// 2 |C_gg2|^2 / |C_gg1|^4. Throws ErrorKind::Undefined when C_gg1 vanishes.
double truncated_g2(const AmplitudeState& state);

enum class HpbBranch { Primary, Secondary };

const char* to_string(HpbBranch branch);

struct TrajectoryPoint {
  double Delta_over_g1;
  double delta_over_g1;
};

// Primary:   Delta/g1 = sqrt(2 K^3 / (2K + 1)), delta = Delta (1 + 1/K)^2.
// Secondary: Delta/g1 = sqrt(K^2 - 1/2),        delta = 3 Delta.
TrajectoryPoint hpb_trajectory(double K, HpbBranch branch);

// Parameters at the trajectory point for K: g2 = K g1 with base.g1 kept.
SystemParams hpb_params(const SystemParams& base, double K, HpbBranch branch);

// Human-readable name of the analytic condition closest to the parameters:
// one of the interference lines or a one-/two-photon resonance.
std::string nearest_analytic_condition(const SystemParams& params);

}  // namespace hpb

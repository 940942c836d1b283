#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hpb/operator_algebra.hpp"

namespace hpb {

// Physical parameters in units of the cavity decay rate kappa.
//
// delta = omega_1 - omega_2 is the qubit-qubit detuning and
// Delta = omega_d - omega_0 the drive detuning from qubit 2 and the cavity.
struct SystemParams {
  double g1 = 10.0;
  double g2 = 10.0;
  double delta = 0.0;
  double Delta = 0.0;
  double eta = 0.1;
  double kappa = 1.0;
  // Qubit decay, shared by both qubits. The value 1.0 is an assumption: the
  // figure runs this toolkit reproduces do not state it.
  double gamma = 1.0;
  // Per-qubit override for qubit 2. Unset means both qubits decay at gamma.
  std::optional<double> gamma2;
  // Global drive phase: eta -> eta * exp(i * drive_phase).
  double drive_phase = 0.0;

  double qubit_decay(int qubit) const {
    return qubit == 2 && gamma2 ? *gamma2 : gamma;
  }

  // Throws ErrorKind::Domain for negative rates or non-finite values.
  void validate() const;
};

enum class ModelVariant { TwoQubit, SingleQubit1, SingleQubit2 };

const char* to_string(ModelVariant variant);

// Hilbert space for the variant at the given truncation.
HilbertConfig config_for(ModelVariant variant, int n_cav);

// Rotating-frame Hamiltonian
//   H = (-Delta + delta) s1+ s1- - Delta s2+ s2- - Delta a+a
//       + sum_j g_j (sj+ a + sj- a+) + eta sum_j (sj+ + sj-)
// restricted to the qubits the variant keeps. The drive acts on qubits only.
Operator build_hamiltonian(const SystemParams& params, ModelVariant variant,
                           const HilbertConfig& config);

struct CollapseChannel {
  Operator op;
  double rate;
  std::string name;
};

// Dissipator convention: D[c] rho = 0.5 * rate * (2 c rho c+ - c+c rho - rho c+c).
// Channels with zero rate are omitted.
std::vector<CollapseChannel> collapse_operators(const SystemParams& params,
                                                ModelVariant variant,
                                                const HilbertConfig& config);

// Composite-space cavity operators.
Operator cavity_annihilation(const HilbertConfig& config);
Operator photon_number(const HilbertConfig& config);

// N = sum_j sj+ sj- + a+a.
Operator excitation_number(const HilbertConfig& config);

}  // namespace hpb

#include "hpb/model.hpp"

#include <cmath>

namespace hpb {

void SystemParams::validate() const {
  const double values[] = {g1, g2, delta, Delta, eta, kappa, gamma, drive_phase};
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::Domain, "parameters must be finite");
  }
  if (gamma2 && !std::isfinite(*gamma2)) {
    throw Error(ErrorKind::Domain, "parameters must be finite");
  }
  if (!(kappa > 0.0)) throw Error(ErrorKind::Domain, "kappa must be positive");
  if (gamma < 0.0 || (gamma2 && *gamma2 < 0.0)) {
    throw Error(ErrorKind::Domain, "qubit decay rate must be nonnegative");
  }
  if (g1 < 0.0 || g2 < 0.0) throw Error(ErrorKind::Domain, "couplings must be nonnegative");
  if (eta < 0.0) throw Error(ErrorKind::Domain, "drive strength must be nonnegative");
}

const char* to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::TwoQubit: return "two-qubit";
    case ModelVariant::SingleQubit1: return "single-qubit-1";
    case ModelVariant::SingleQubit2: return "single-qubit-2";
  }
  return "unknown";
}

HilbertConfig config_for(ModelVariant variant, int n_cav) {
  HilbertConfig config{n_cav, variant == ModelVariant::TwoQubit ? 2 : 1};
  config.validate();
  return config;
}

namespace {

void require_consistent(ModelVariant variant, const HilbertConfig& config) {
  config.validate();
  const int expected = variant == ModelVariant::TwoQubit ? 2 : 1;
  if (config.qubit_count != expected) {
    throw Error(ErrorKind::Dimension, std::string("variant ") + to_string(variant) +
                                          " needs qubit_count " +
                                          std::to_string(expected));
  }
}

struct QubitTerm {
  int slot;
  int label;  // 1 or 2, the physical qubit this slot holds
  double detuning;
  double coupling;
};

std::vector<QubitTerm> qubit_terms(const SystemParams& p, ModelVariant variant) {
  const QubitTerm q1{0, 1, -p.Delta + p.delta, p.g1};
  const QubitTerm q2{1, 2, -p.Delta, p.g2};
  switch (variant) {
    case ModelVariant::TwoQubit: return {q1, q2};
    case ModelVariant::SingleQubit1: return {q1};
    case ModelVariant::SingleQubit2: return {{0, 2, q2.detuning, q2.coupling}};
  }
  return {};
}

}  // namespace

Operator cavity_annihilation(const HilbertConfig& config) {
  return embed(annihilation(config.n_cav), config.cavity_slot(), config);
}

Operator photon_number(const HilbertConfig& config) {
  const Operator a = cavity_annihilation(config);
  return a.adjoint() * a;
}

Operator excitation_number(const HilbertConfig& config) {
  Operator n = photon_number(config);
  for (int slot = 0; slot < config.qubit_count; ++slot) {
    const Operator s = embed(sigma_minus(), slot, config);
    n = n + s.adjoint() * s;
  }
  return n;
}

Operator build_hamiltonian(const SystemParams& params, ModelVariant variant,
                           const HilbertConfig& config) {
  params.validate();
  require_consistent(variant, config);

  const Operator a = cavity_annihilation(config);
  const Operator ad = a.adjoint();
  const Complex drive = params.eta * std::exp(Complex(0.0, params.drive_phase));

  Matrix h = -params.Delta * (ad * a).entries();
  for (const auto& q : qubit_terms(params, variant)) {
    const Operator sm = embed(sigma_minus(), q.slot, config);
    const Operator sp = sm.adjoint();
    h += q.detuning * (sp * sm).entries();
    h += q.coupling * (sp * a + sm * ad).entries();
    h += drive * sp.entries() + std::conj(drive) * sm.entries();
  }
  // Exact Hermiticity regardless of summation order.
  return Operator(0.5 * (h + h.adjoint()));
}

std::vector<CollapseChannel> collapse_operators(const SystemParams& params,
                                                ModelVariant variant,
                                                const HilbertConfig& config) {
  params.validate();
  require_consistent(variant, config);

  std::vector<CollapseChannel> channels;
  channels.push_back({cavity_annihilation(config), params.kappa, "cavity"});
  for (const auto& q : qubit_terms(params, variant)) {
    const double rate = params.qubit_decay(q.label);
    if (rate == 0.0) continue;
    channels.push_back({embed(sigma_minus(), q.slot, config), rate,
                        "qubit" + std::to_string(q.label)});
  }
  return channels;
}

}  // namespace hpb

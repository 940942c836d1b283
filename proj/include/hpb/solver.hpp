#pragma once

#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "hpb/model.hpp"

namespace hpb {

struct DensityMatrix {
  Matrix entries;
  // ||L(rho)||_inf evaluated with the matrix-form Liouvillian.
  double residual = 0.0;
  double min_eigenvalue = 0.0;

  int dim() const { return static_cast<int>(entries.rows()); }
  double trace_error() const;        // |Tr rho - 1|
  double hermiticity_error() const;  // max |rho - rho^dagger|
};

struct Observables {
  double mean_photon = 0.0;
  // Unset when mean_photon <= kDarkCavityThreshold.
  std::optional<double> g2_zero;
  std::vector<double> pn;
  // Only filled by callers that also ran the single-qubit references.
  std::optional<double> radiance;
};

inline constexpr double kDarkCavityThreshold = 1e-14;
inline constexpr double kPositivityTolerance = -1e-8;
inline constexpr double kTruncationTolerance = 1e-6;

// Negative-control hook: builds the superoperator with the commutator sign
// flipped. Only tests and `validate` use it.
struct SolverOptions {
  bool corrupt_commutator_sign = false;
};

using SparseMatrix = Eigen::SparseMatrix<Complex>;

// Column-stacked superoperator: vec(rho)[j * D + i] = rho(i, j).
SparseMatrix liouvillian_superoperator(const Operator& hamiltonian,
                                       const std::vector<CollapseChannel>& channels,
                                       const SolverOptions& options = {});

// L(rho) evaluated directly on the matrix, independent of the superoperator.
Matrix apply_liouvillian(const Operator& hamiltonian,
                         const std::vector<CollapseChannel>& channels, const Matrix& rho);

// Stationary state from the trace-constrained linear system. Throws
// ErrorKind::Singular when the stationary state is not unique and
// ErrorKind::Positivity when rho has an eigenvalue below -1e-8.
DensityMatrix steady_state(const SystemParams& params, ModelVariant variant,
                           const HilbertConfig& config, const SolverOptions& options = {});

struct EvolutionStats {
  double t_final = 0.0;
  long steps = 0;
  double max_trace_drift = 0.0;
};

// Integrates d(rho)/dt = L(rho) from |g..g,0> with an adaptive Dormand-Prince
// stepper until ||L(rho)||_inf < tol. Throws ErrorKind::Timeout at t_max.
DensityMatrix evolve_to_steady(const SystemParams& params, ModelVariant variant,
                               const HilbertConfig& config, double t_max, double tol,
                               EvolutionStats* stats = nullptr);

Observables observables(const DensityMatrix& rho, const HilbertConfig& config);

// Relative excess of the two-qubit photon number over the sum of the two
// single-qubit references. Uses config.n_cav for all three solves.
double radiance_witness(const SystemParams& params, const HilbertConfig& config);

struct TruncationReport {
  bool converged = true;
  double drift = 0.0;
};

// Compares mean photon number and g2 at n_cav and n_cav + 3.
TruncationReport truncation_check(const SystemParams& params, ModelVariant variant,
                                  const HilbertConfig& config);

// Steady state, observables and truncation report at config.n_cav, sharing the
// n_cav solve between the observables and the truncation comparison.
struct CheckedSolution {
  DensityMatrix rho;
  Observables obs;
  TruncationReport truncation;
};

CheckedSolution solve_checked(const SystemParams& params, ModelVariant variant,
                              const HilbertConfig& config);

// Relative drift between two observable sets as used by truncation_check.
double observable_drift(const Observables& a, const Observables& b);

}  // namespace hpb

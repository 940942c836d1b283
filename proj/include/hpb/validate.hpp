#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "hpb/solver.hpp"

namespace hpb {

struct CheckRecord {
  std::string name;
  bool passed = false;
  double value = 0.0;      // worst observed quantity
  double threshold = 0.0;  // bound it is compared against
  std::string detail;
};

struct ValidationOptions {
  // g1, g2, eta, kappa, gamma of the solver grid; Delta and delta are set per point.
  SystemParams base;
  int n_cav = 5;
  SolverOptions solver;
  unsigned seed = 20240611;
  // Qubit decay used for the trajectory local-minimum check, in units of kappa.
  double trajectory_gamma = 0.1;
};

// Ten (Delta, delta) points covering conventional, unconventional and hybrid
// blockade at g1 = g2 = 10 kappa, in units of kappa.
std::vector<SystemParams> solver_validation_grid(const SystemParams& base);

// Eigenvalues of the one- (eg0, ge0, gg1) or two-excitation (ee0, eg1, ge1, gg2)
// block of the eta = 0, Delta = 0 Hamiltonian, sorted ascending.
std::vector<double> excitation_block_eigenvalues(const SystemParams& params, int excitations);

// Runs every check; never throws for numerical failures, which become failed records.
std::vector<CheckRecord> run_validation(const ValidationOptions& options = {});

nlohmann::json to_json(const CheckRecord& record);

}  // namespace hpb

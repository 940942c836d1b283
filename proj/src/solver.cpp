#include "hpb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <boost/numeric/odeint.hpp>

namespace hpb {

double DensityMatrix::trace_error() const { return std::abs(entries.trace() - 1.0); }

double DensityMatrix::hermiticity_error() const {
  return max_abs_diff(entries, entries.adjoint());
}

namespace {

constexpr double kSingularGrowth = 1e12;

using Triplet = Eigen::Triplet<Complex>;

// Appends scale * (a (x) b) for the nonzero entries of a and b.
void add_kron(std::vector<Triplet>& out, const Matrix& a, const Matrix& b, Complex scale) {
  const Eigen::Index m = b.rows();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex(0.0)) continue;
      for (Eigen::Index k = 0; k < m; ++k) {
        for (Eigen::Index l = 0; l < m; ++l) {
          const Complex bkl = b(k, l);
          if (bkl == Complex(0.0)) continue;
          out.emplace_back(static_cast<int>(i * m + k), static_cast<int>(j * m + l),
                           scale * aij * bkl);
        }
      }
    }
  }
}

std::vector<Triplet> superoperator_triplets(const Operator& hamiltonian,
                                            const std::vector<CollapseChannel>& channels,
                                            const SolverOptions& options) {
  const Matrix& h = hamiltonian.entries();
  const Eigen::Index d = h.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Complex i_unit(0.0, 1.0);
  const Complex unitary = options.corrupt_commutator_sign ? i_unit : -i_unit;

  std::vector<Triplet> t;
  // -i (H rho - rho H)  ->  -i (I (x) H - H^T (x) I)
  add_kron(t, id, h, unitary);
  add_kron(t, h.transpose(), id, -unitary);
  for (const auto& ch : channels) {
    const Matrix& c = ch.op.entries();
    const Matrix cdc = c.adjoint() * c;
    add_kron(t, c.conjugate(), c, ch.rate);
    add_kron(t, id, cdc, -0.5 * ch.rate);
    add_kron(t, cdc.transpose(), id, -0.5 * ch.rate);
  }
  return t;
}

}  // namespace

SparseMatrix liouvillian_superoperator(const Operator& hamiltonian,
                                       const std::vector<CollapseChannel>& channels,
                                       const SolverOptions& options) {
  const auto n = static_cast<Eigen::Index>(hamiltonian.dim()) * hamiltonian.dim();
  const auto t = superoperator_triplets(hamiltonian, channels, options);
  SparseMatrix l(n, n);
  l.setFromTriplets(t.begin(), t.end());
  return l;
}

namespace {

// L(rho) = -i (H_eff rho - rho H_eff^dagger) + sum_k r_k c_k rho c_k^dagger with
// H_eff = H - (i/2) sum_k r_k c_k^dagger c_k. The factors are a few dozen
// nonzeros, so they are applied entry by entry.
class LiouvillianAction {
 public:
  LiouvillianAction(const Operator& hamiltonian, const std::vector<CollapseChannel>& channels) {
    Matrix h_eff = hamiltonian.entries();
    for (const auto& ch : channels) {
      const Matrix& c = ch.op.entries();
      h_eff -= Complex(0.0, 0.5 * ch.rate) * (c.adjoint() * c);
      jumps_.push_back({nonzeros(c), ch.rate});
    }
    h_eff_ = nonzeros(h_eff);
  }

  void operator()(const Eigen::Ref<const Matrix>& rho, Eigen::Ref<Matrix> out) const {
    const Complex minus_i(0.0, -1.0);
    out.setZero();
    for (const auto& [i, j, v] : h_eff_) {
      out.row(i) += (minus_i * v) * rho.row(j);
      // (rho H_eff^dagger)(:, i) += rho(:, j) conj(v)
      out.col(i) -= (minus_i * std::conj(v)) * rho.col(j);
    }
    Matrix rho_cd(rho.rows(), rho.cols());
    for (const auto& [entries, rate] : jumps_) {
      rho_cd.setZero();
      for (const auto& [i, j, v] : entries) rho_cd.col(i) += std::conj(v) * rho.col(j);
      for (const auto& [i, j, v] : entries) out.row(i) += (rate * v) * rho_cd.row(j);
    }
  }

  Matrix operator()(const Matrix& rho) const {
    Matrix out(rho.rows(), rho.cols());
    (*this)(rho, out);
    return out;
  }

 private:
  struct Entry {
    Eigen::Index row, col;
    Complex value;
  };
  struct Jump {
    std::vector<Entry> entries;
    double rate;
  };

  static std::vector<Entry> nonzeros(const Matrix& m) {
    std::vector<Entry> out;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        if (m(i, j) != Complex(0.0)) out.push_back({i, j, m(i, j)});
      }
    }
    return out;
  }

  std::vector<Entry> h_eff_;
  std::vector<Jump> jumps_;
};

}  // namespace

Matrix apply_liouvillian(const Operator& hamiltonian,
                         const std::vector<CollapseChannel>& channels, const Matrix& rho) {
  return LiouvillianAction(hamiltonian, channels)(rho);
}

namespace {

double min_eigenvalue(const Matrix& rho) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void require_positive(const DensityMatrix& rho, const HilbertConfig& config) {
  if (rho.min_eigenvalue < kPositivityTolerance) {
    std::ostringstream msg;
    msg << "density matrix has eigenvalue " << rho.min_eigenvalue
        << " below tolerance; increase n_cav (currently " << config.n_cav << ")";
    throw Error(ErrorKind::Positivity, msg.str());
  }
}

}  // namespace

DensityMatrix steady_state(const SystemParams& params, ModelVariant variant,
                           const HilbertConfig& config, const SolverOptions& options) {
  const Operator h = build_hamiltonian(params, variant, config);
  const auto channels = collapse_operators(params, variant, config);
  const int d = h.dim();
  const Eigen::Index n = static_cast<Eigen::Index>(d) * d;

  // Replace the equation for d(rho_00)/dt by the trace functional Tr rho = 1.
  auto t = superoperator_triplets(h, channels, options);
  std::erase_if(t, [](const Triplet& x) { return x.row() == 0; });
  for (int k = 0; k < d; ++k) t.emplace_back(0, k * d + k, Complex(1.0));
  SparseMatrix system(n, n);
  system.setFromTriplets(t.begin(), t.end());
  system.makeCompressed();

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(system);
  if (lu.info() != Eigen::Success) {
    throw Error(ErrorKind::Singular,
                "trace-constrained Liouvillian is singular: the stationary state is not "
                "unique (" + lu.lastErrorMessage() + ")");
  }
  // A second stationary state survives the trace row as a near-zero pivot, so
  // LU can still succeed. Probe ||A^-1|| with a fixed pseudo-random vector.
  {
    std::mt19937_64 rng(12345);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    Vector probe(n);
    for (Eigen::Index k = 0; k < n; ++k) probe(k) = Complex(u(rng), u(rng));
    const Vector y = lu.solve(probe);
    double norm_a = 0.0;
    for (Eigen::Index k = 0; k < system.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(system, k); it; ++it) {
        norm_a = std::max(norm_a, std::abs(it.value()));
      }
    }
    const double growth = norm_a * y.cwiseAbs().maxCoeff() / probe.cwiseAbs().maxCoeff();
    if (!std::isfinite(growth) || growth > kSingularGrowth) {
      std::ostringstream msg;
      msg << "trace-constrained Liouvillian is singular (condition estimate " << growth
          << "): the stationary state is not unique";
      throw Error(ErrorKind::Singular, msg.str());
    }
  }

  Vector rhs = Vector::Zero(n);
  rhs(0) = 1.0;
  Vector x = lu.solve(rhs);
  // One step of iterative refinement tightens the small populations that
  // g2 depends on.
  x += lu.solve(rhs - system * x);

  const double solve_residual = (system * x - rhs).cwiseAbs().maxCoeff();
  if (!x.allFinite() || !(solve_residual < 1e-8)) {
    throw Error(ErrorKind::Singular,
                "trace-constrained Liouvillian is numerically singular (solve residual " +
                    std::to_string(solve_residual) + ")");
  }

  Matrix rho = Eigen::Map<const Matrix>(x.data(), d, d);
  rho = 0.5 * (rho + rho.adjoint()).eval();

  DensityMatrix out;
  out.entries = std::move(rho);
  out.residual = apply_liouvillian(h, channels, out.entries).cwiseAbs().maxCoeff();
  out.min_eigenvalue = min_eigenvalue(out.entries);
  require_positive(out, config);
  return out;
}

DensityMatrix evolve_to_steady(const SystemParams& params, ModelVariant variant,
                               const HilbertConfig& config, double t_max, double tol,
                               EvolutionStats* stats) {
  if (!(t_max > 0.0) || !(tol > 0.0)) {
    throw Error(ErrorKind::Domain, "t_max and tol must be positive");
  }
  namespace odeint = boost::numeric::odeint;
  using State = std::vector<double>;

  const Operator h = build_hamiltonian(params, variant, config);
  const auto channels = collapse_operators(params, variant, config);
  const int d = h.dim();

  // Complex d x d matrix stored as interleaved (re, im) pairs, column-major.
  auto as_matrix = [d](State& s) {
    return Eigen::Map<Matrix>(reinterpret_cast<Complex*>(s.data()), d, d);
  };
  auto as_const_matrix = [d](const State& s) {
    return Eigen::Map<const Matrix>(reinterpret_cast<const Complex*>(s.data()), d, d);
  };

  State state(2 * static_cast<size_t>(d) * d, 0.0);
  as_matrix(state)(0, 0) = 1.0;

  const LiouvillianAction action(h, channels);
  auto rhs = [&](const State& x, State& dxdt, double /*t*/) {
    action(as_const_matrix(x), as_matrix(dxdt));
  };

  auto stepper = odeint::make_controlled(1e-13, 1e-11, odeint::runge_kutta_dopri5<State>());
  double t = 0.0;
  double dt = 1e-3;
  long steps = 0;
  double max_trace_drift = 0.0;
  double residual = action(Matrix(as_const_matrix(state))).cwiseAbs().maxCoeff();

  while (residual >= tol) {
    if (t >= t_max) {
      std::ostringstream msg;
      msg << "time evolution reached t_max = " << t_max << " with residual " << residual
          << " above tolerance " << tol;
      throw Error(ErrorKind::Timeout, msg.str());
    }
    dt = std::min(dt, t_max - t);
    if (stepper.try_step(rhs, state, t, dt) == odeint::success) {
      ++steps;
      const Matrix current = as_const_matrix(state);
      max_trace_drift = std::max(max_trace_drift, std::abs(current.trace() - 1.0));
      residual = action(current).cwiseAbs().maxCoeff();
    }
  }

  DensityMatrix out;
  out.entries = as_const_matrix(state);
  out.entries = 0.5 * (out.entries + out.entries.adjoint()).eval();
  out.residual = apply_liouvillian(h, channels, out.entries).cwiseAbs().maxCoeff();
  out.min_eigenvalue = min_eigenvalue(out.entries);
  if (stats) *stats = {t, steps, max_trace_drift};
  require_positive(out, config);
  return out;
}

Observables observables(const DensityMatrix& rho, const HilbertConfig& config) {
  config.validate();
  if (rho.dim() != config.dim()) {
    throw Error(ErrorKind::Dimension, "density matrix does not match the Hilbert config");
  }
  const Operator a = cavity_annihilation(config);
  const Operator ad = a.adjoint();
  const Matrix& r = rho.entries;

  Observables obs;
  obs.mean_photon = ((ad * a).entries() * r).trace().real();
  const double pair = ((ad * ad * a * a).entries() * r).trace().real();
  if (obs.mean_photon > kDarkCavityThreshold) {
    obs.g2_zero = pair / (obs.mean_photon * obs.mean_photon);
  }

  obs.pn.assign(static_cast<size_t>(config.n_cav), 0.0);
  const int qubit_states = config.dim() / config.n_cav;
  for (int q = 0; q < qubit_states; ++q) {
    for (int k = 0; k < config.n_cav; ++k) {
      const int idx = q * config.n_cav + k;
      obs.pn[static_cast<size_t>(k)] += r(idx, idx).real();
    }
  }
  return obs;
}

double radiance_witness(const SystemParams& params, const HilbertConfig& config) {
  if (!(params.eta > 0.0)) {
    throw Error(ErrorKind::Undefined, "radiance witness needs a nonzero drive");
  }
  auto mean_photon = [&](ModelVariant v) {
    const HilbertConfig c = config_for(v, config.n_cav);
    return observables(steady_state(params, v, c), c).mean_photon;
  };
  const double two = mean_photon(ModelVariant::TwoQubit);
  const double singles =
      mean_photon(ModelVariant::SingleQubit1) + mean_photon(ModelVariant::SingleQubit2);
  if (singles < kDarkCavityThreshold) {
    throw Error(ErrorKind::Undefined,
                "radiance witness undefined: single-qubit reference emission vanishes");
  }
  return (two - singles) / singles;
}

double observable_drift(const Observables& a, const Observables& b) {
  auto relative = [](double x, double y) {
    const double scale = std::max(std::abs(x), std::abs(y));
    return scale == 0.0 ? 0.0 : std::abs(x - y) / scale;
  };
  double drift = 0.0;
  const bool dark_a = a.mean_photon <= kDarkCavityThreshold;
  const bool dark_b = b.mean_photon <= kDarkCavityThreshold;
  if (!(dark_a && dark_b)) drift = relative(a.mean_photon, b.mean_photon);
  if (a.g2_zero.has_value() != b.g2_zero.has_value()) {
    return std::numeric_limits<double>::infinity();
  }
  if (a.g2_zero) drift = std::max(drift, relative(*a.g2_zero, *b.g2_zero));
  return drift;
}

CheckedSolution solve_checked(const SystemParams& params, ModelVariant variant,
                              const HilbertConfig& config) {
  CheckedSolution out;
  out.rho = steady_state(params, variant, config);
  out.obs = observables(out.rho, config);

  HilbertConfig larger = config;
  larger.n_cav += 3;
  const Observables wide = observables(steady_state(params, variant, larger), larger);
  out.truncation.drift = observable_drift(out.obs, wide);
  out.truncation.converged = out.truncation.drift < kTruncationTolerance;
  return out;
}

TruncationReport truncation_check(const SystemParams& params, ModelVariant variant,
                                  const HilbertConfig& config) {
  return solve_checked(params, variant, config).truncation;
}

}  // namespace hpb

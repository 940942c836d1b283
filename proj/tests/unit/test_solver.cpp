#include <cmath>
#include <random>

#include "doctest.h"

#include "hpb/analytics.hpp"
#include "hpb/solver.hpp"

using namespace hpb;

namespace {

const HilbertConfig kTwo = config_for(ModelVariant::TwoQubit, 5);

SystemParams hpb_point(double eta = 0.1) {
  SystemParams p;
  p.Delta = std::sqrt(2.0 / 3.0) * p.g1;
  p.delta = 4.0 * p.Delta;
  p.eta = eta;
  return p;
}

SystemParams at(double Delta, double delta, double eta = 0.1) {
  SystemParams p;
  p.Delta = Delta;
  p.delta = delta;
  p.eta = eta;
  return p;
}

Matrix random_density(int d, std::mt19937& rng) {
  std::normal_distribution<double> n;
  Matrix m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = Complex(n(rng), n(rng));
  Matrix rho = m * m.adjoint();
  return rho / rho.trace();
}

void check_physical(const DensityMatrix& rho) {
  CHECK(rho.trace_error() < 1e-10);
  CHECK(rho.hermiticity_error() < 1e-10);
  CHECK(rho.min_eigenvalue >= kPositivityTolerance);
  CHECK(rho.residual < 1e-10);
}

}  // namespace

TEST_CASE("superoperator and matrix-form Liouvillian agree") {
  std::mt19937 rng(3);
  const SystemParams p = at(3.0, -7.0, 0.4);
  const Operator h = build_hamiltonian(p, ModelVariant::TwoQubit, kTwo);
  const auto ch = collapse_operators(p, ModelVariant::TwoQubit, kTwo);
  const SparseMatrix L = liouvillian_superoperator(h, ch);
  for (int trial = 0; trial < 3; ++trial) {
    const Matrix rho = random_density(kTwo.dim(), rng);
    const Vector vec = Eigen::Map<const Vector>(rho.data(), rho.size());
    const Vector lv = L * vec;
    const Matrix direct = apply_liouvillian(h, ch, rho);
    CHECK((Eigen::Map<const Matrix>(lv.data(), rho.rows(), rho.cols()) - direct)
              .cwiseAbs().maxCoeff() < 1e-11);
    // Lindblad generators are trace preserving and map Hermitian to Hermitian.
    CHECK(std::abs(direct.trace()) < 1e-11);
    CHECK(max_abs_diff(direct, direct.adjoint()) < 1e-11);
  }
}

TEST_CASE("no drive relaxes to the vacuum") {
  const SystemParams p = at(1.0, 2.0, 0.0);
  const DensityMatrix rho = steady_state(p, ModelVariant::TwoQubit, kTwo);
  for (int i = 0; i < rho.dim(); ++i) {
    for (int j = 0; j < rho.dim(); ++j) {
      const double expected = i == 0 && j == 0 ? 1.0 : 0.0;
      CHECK(std::abs(rho.entries(i, j) - expected) < 1e-12);
    }
  }
  const Observables obs = observables(rho, kTwo);
  CHECK(std::abs(obs.mean_photon) < 1e-12);
  CHECK_FALSE(obs.g2_zero.has_value());
  CHECK(obs.pn[0] == doctest::Approx(1.0));
  for (size_t k = 1; k < obs.pn.size(); ++k) CHECK(std::abs(obs.pn[k]) < 1e-12);

  const DensityMatrix evolved = evolve_to_steady(p, ModelVariant::TwoQubit, kTwo, 10.0, 1e-12);
  CHECK(std::abs(evolved.entries(0, 0) - 1.0) < 1e-14);
}

TEST_CASE("steady states are physical across blockade regimes") {
  const double g = 10.0;
  for (const SystemParams& p :
       {hpb_point(), at(std::sqrt(2.0) * g, 0.0), at(15.0, 45.0), at(10.0, 20.0), at(-8.0, 15.0)}) {
    for (auto v : {ModelVariant::TwoQubit, ModelVariant::SingleQubit1, ModelVariant::SingleQubit2}) {
      const HilbertConfig config = config_for(v, 5);
      const DensityMatrix rho = steady_state(p, v, config);
      check_physical(rho);
      const Observables obs = observables(rho, config);
      double total = 0.0, mean = 0.0;
      for (size_t n = 0; n < obs.pn.size(); ++n) {
        CHECK(obs.pn[n] >= -1e-10);
        total += obs.pn[n];
        mean += static_cast<double>(n) * obs.pn[n];
      }
      CHECK(std::abs(total - 1.0) < 1e-9);
      CHECK(std::abs(mean - obs.mean_photon) < 1e-9);
    }
  }
}

TEST_CASE("steady state agrees with time evolution") {
  for (const SystemParams& p : {hpb_point(), at(5.0, 12.0, 0.3)}) {
    const DensityMatrix ss = steady_state(p, ModelVariant::TwoQubit, kTwo);
    EvolutionStats stats;
    const DensityMatrix ev = evolve_to_steady(p, ModelVariant::TwoQubit, kTwo, 2000.0, 1e-9, &stats);
    CHECK(max_abs_diff(ss.entries, ev.entries) < 1e-7);
    CHECK(stats.max_trace_drift < 1e-9);
    CHECK(stats.steps > 0);
  }
}

TEST_CASE("time evolution reports a timeout with its residual") {
  try {
    evolve_to_steady(hpb_point(), ModelVariant::TwoQubit, kTwo, 0.5, 1e-12);
    FAIL("expected a timeout");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Timeout);
    CHECK(std::string(e.what()).find("residual") != std::string::npos);
  }
  CHECK_THROWS_AS(evolve_to_steady(hpb_point(), ModelVariant::TwoQubit, kTwo, -1.0, 1e-9), Error);
}

TEST_CASE("undamped driven qubits have no unique steady state") {
  SystemParams p = at(1.0, 0.5, 0.1);
  p.g1 = p.g2 = 0.0;
  p.gamma = 0.0;
  try {
    steady_state(p, ModelVariant::TwoQubit, kTwo);
    FAIL("expected a singular system");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Singular);
  }
}

TEST_CASE("hybrid blockade point statistics") {
  const SystemParams p = hpb_point();
  const Observables obs = observables(steady_state(p, ModelVariant::TwoQubit, kTwo), kTwo);
  CHECK(obs.mean_photon > 1e-3);
  CHECK(obs.mean_photon < 1e-2);
  REQUIRE(obs.g2_zero.has_value());
  CHECK(*obs.g2_zero < 1e-3);
  CHECK(obs.pn[2] < 1e-3 * obs.pn[1]);
  const double R = radiance_witness(p, kTwo);
  CHECK(R > 1.0);
  CHECK(R < 6.0);
}

TEST_CASE("g2 depends only on |eta|") {
  for (const SystemParams& base : {hpb_point(), at(5.0, 12.0, 0.2)}) {
    SystemParams rotated = base;
    rotated.drive_phase = M_PI / 2;
    const Observables a = observables(steady_state(base, ModelVariant::TwoQubit, kTwo), kTwo);
    const Observables b = observables(steady_state(rotated, ModelVariant::TwoQubit, kTwo), kTwo);
    CHECK(std::abs(*a.g2_zero - *b.g2_zero) < 1e-10 * std::max(1.0, *a.g2_zero));
    CHECK(std::abs(a.mean_photon - b.mean_photon) < 1e-14);
  }
}

TEST_CASE("uncoupled second qubit reduces the witness to the single-qubit sum") {
  SystemParams p = at(4.0, 9.0, 0.1);
  p.g2 = 0.0;
  const double n2 = observables(steady_state(p, ModelVariant::TwoQubit, kTwo), kTwo).mean_photon;
  const HilbertConfig one = config_for(ModelVariant::SingleQubit1, 5);
  const double n11 = observables(steady_state(p, ModelVariant::SingleQubit1, one), one).mean_photon;
  const double n12 = observables(steady_state(p, ModelVariant::SingleQubit2, one), one).mean_photon;
  CHECK(std::abs(n2 - n11) < 1e-12 * std::max(n2, 1e-6) + 1e-16);
  // The second single-qubit reference has g2 = 0 and leaves the cavity dark.
  CHECK(n12 < 1e-20);
  CHECK(radiance_witness(p, kTwo) == doctest::Approx((n2 - n11 - n12) / (n11 + n12)));
}

TEST_CASE("radiance witness needs a drive") {
  try {
    radiance_witness(at(1.0, 1.0, 0.0), kTwo);
    FAIL("expected an undefined witness");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Undefined);
  }
}

TEST_CASE("truncation check") {
  const TruncationReport weak = truncation_check(hpb_point(), ModelVariant::TwoQubit, kTwo);
  CHECK(weak.converged);
  CHECK(weak.drift < kTruncationTolerance);

  const TruncationReport dark = truncation_check(at(3.0, 1.0, 0.0), ModelVariant::TwoQubit, kTwo);
  CHECK(dark.converged);
  CHECK(dark.drift == 0.0);

  SystemParams strong = at(0.0, 0.0, 5.0);
  const TruncationReport bad =
      truncation_check(strong, ModelVariant::TwoQubit, config_for(ModelVariant::TwoQubit, 3));
  CHECK_FALSE(bad.converged);
  CHECK(bad.drift > kTruncationTolerance);
}

TEST_CASE("observable drift") {
  Observables a, b;
  a.mean_photon = b.mean_photon = 0.0;
  CHECK(observable_drift(a, b) == 0.0);
  a.mean_photon = 1.0;
  b.mean_photon = 1.1;
  a.g2_zero = 0.5;
  b.g2_zero = 0.5;
  CHECK(observable_drift(a, b) == doctest::Approx(0.1).epsilon(0.05));
  b.g2_zero.reset();
  CHECK(std::isinf(observable_drift(a, b)));
}

TEST_CASE("weak-drive pure state reproduces the truncated g2") {
  const SystemParams p = hpb_point(0.01);
  const AmplitudeState s = amplitude_steady_state(p);
  Vector psi = Vector::Zero(kTwo.dim());
  psi(basis_index({0, 0, 0}, kTwo)) = 1.0;
  psi(basis_index({1, 0, 0}, kTwo)) = s.c_eg0;
  psi(basis_index({0, 1, 0}, kTwo)) = s.c_ge0;
  psi(basis_index({0, 0, 1}, kTwo)) = s.c_gg1;
  psi(basis_index({1, 1, 0}, kTwo)) = s.c_ee0;
  psi(basis_index({1, 0, 1}, kTwo)) = s.c_eg1;
  psi(basis_index({0, 1, 1}, kTwo)) = s.c_ge1;
  psi(basis_index({0, 0, 2}, kTwo)) = s.c_gg2;
  psi.normalize();
  DensityMatrix rho;
  rho.entries = psi * psi.adjoint();
  const Observables obs = observables(rho, kTwo);
  REQUIRE(obs.g2_zero.has_value());
  const double truncated = truncated_g2(s);
  CHECK(std::abs(*obs.g2_zero - truncated) / truncated < 0.10);
}

TEST_CASE("flipped commutator sign is caught by the residual") {
  SolverOptions corrupt;
  corrupt.corrupt_commutator_sign = true;
  const DensityMatrix rho = steady_state(hpb_point(), ModelVariant::TwoQubit, kTwo, corrupt);
  CHECK(rho.residual > 1e-6);
}

TEST_CASE("observables reject a mismatched config") {
  const DensityMatrix rho = steady_state(hpb_point(), ModelVariant::TwoQubit, kTwo);
  CHECK_THROWS_AS(observables(rho, config_for(ModelVariant::TwoQubit, 6)), Error);
}

#pragma once

// Dense complex operators on the composite space qubit1 (x) qubit2 (x) cavity.
//
// Basis convention, used by every module:
//   - qubit basis is (g, e), index 0 = ground, 1 = excited
//   - cavity basis is the Fock states 0 .. n_cav-1
//   - composite index is lexicographic over (qubit1, qubit2, cavity), i.e.
//     index = (q1 * 2 + q2) * n_cav + n for two qubits and
//     index = q * n_cav + n for a single qubit.

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hpb/error.hpp"

namespace hpb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

struct HilbertConfig {
  int n_cav = 5;
  int qubit_count = 2;

  int dim() const { return (qubit_count == 2 ? 4 : 2) * n_cav; }
  int slot_count() const { return qubit_count + 1; }
  int cavity_slot() const { return qubit_count; }
  std::vector<int> subsystem_dims() const;

  // Throws ErrorKind::Dimension unless n_cav >= 3 and qubit_count is 1 or 2.
  void validate() const;
};

// A square complex matrix. Immutable once built; arithmetic returns new values.
class Operator {
 public:
  explicit Operator(Matrix entries);

  static Operator identity(int dim);
  static Operator zero(int dim);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  Complex operator()(int row, int col) const { return entries_(row, col); }

  Operator adjoint() const { return Operator(entries_.adjoint()); }

  // Largest elementwise |A - A^dagger|.
  double hermiticity_error() const;

  friend Operator operator*(const Operator& a, const Operator& b);
  friend Operator operator+(const Operator& a, const Operator& b);
  friend Operator operator-(const Operator& a, const Operator& b);
  friend Operator operator*(Complex s, const Operator& a);
  friend Operator operator*(double s, const Operator& a) {
    return Complex(s, 0.0) * a;
  }

 private:
  Matrix entries_;
};

// Truncated cavity annihilation operator: sqrt(n) on the first superdiagonal.
Operator annihilation(int n_cav);

// Two-level lowering operator |g><e| in (g, e) ordering.
Operator sigma_minus();

// Kronecker product a (x) b.
Operator kron(const Operator& a, const Operator& b);

// I (x) ... (x) op (x) ... (x) I with op placed at `slot`.
Operator embed(const Operator& op, int slot, const HilbertConfig& config);

Operator commutator(const Operator& a, const Operator& b);

// Largest elementwise absolute difference.
double max_abs_diff(const Matrix& a, const Matrix& b);

struct BasisLabel {
  int qubit1 = 0;  // 0 = g, 1 = e
  int qubit2 = 0;  // ignored when qubit_count == 1
  int photons = 0;

  bool operator==(const BasisLabel&) const = default;
};

int basis_index(const BasisLabel& label, const HilbertConfig& config);
BasisLabel basis_label(int index, const HilbertConfig& config);

// "|eg1>" style label; single-qubit spaces print one qubit letter.
std::string to_string(const BasisLabel& label, const HilbertConfig& config);

}  // namespace hpb

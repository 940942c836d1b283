#include "hpb/operator_algebra.hpp"

#include <cmath>
#include <utility>

namespace hpb {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Config: return "config";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Positivity: return "positivity";
    case ErrorKind::Timeout: return "timeout";
    case ErrorKind::Undefined: return "undefined";
  }
  return "unknown";
}

std::vector<int> HilbertConfig::subsystem_dims() const {
  std::vector<int> dims(static_cast<size_t>(qubit_count), 2);
  dims.push_back(n_cav);
  return dims;
}

void HilbertConfig::validate() const {
  if (qubit_count != 1 && qubit_count != 2) {
    throw Error(ErrorKind::Dimension,
                "qubit_count must be 1 or 2, got " + std::to_string(qubit_count));
  }
  if (n_cav < 3) {
    throw Error(ErrorKind::Dimension,
                "n_cav must be at least 3 to hold two-photon states, got " +
                    std::to_string(n_cav));
  }
}

Operator::Operator(Matrix entries) : entries_(std::move(entries)) {
  if (entries_.rows() == 0 || entries_.rows() != entries_.cols()) {
    throw Error(ErrorKind::Dimension, "operator must be a non-empty square matrix");
  }
}

Operator Operator::identity(int dim) { return Operator(Matrix::Identity(dim, dim)); }

Operator Operator::zero(int dim) { return Operator(Matrix::Zero(dim, dim)); }

double Operator::hermiticity_error() const {
  return max_abs_diff(entries_, entries_.adjoint());
}

namespace {

void require_same_dim(const Operator& a, const Operator& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorKind::Dimension, std::string(what) + ": dimension mismatch " +
                                          std::to_string(a.dim()) + " vs " +
                                          std::to_string(b.dim()));
  }
}

}  // namespace

Operator operator*(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "product");
  return Operator(a.entries_ * b.entries_);
}

Operator operator+(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "sum");
  return Operator(a.entries_ + b.entries_);
}

Operator operator-(const Operator& a, const Operator& b) {
  require_same_dim(a, b, "difference");
  return Operator(a.entries_ - b.entries_);
}

Operator operator*(Complex s, const Operator& a) { return Operator(s * a.entries_); }

Operator annihilation(int n_cav) {
  if (n_cav < 2) {
    throw Error(ErrorKind::Dimension,
                "annihilation operator needs n_cav >= 2, got " + std::to_string(n_cav));
  }
  Matrix a = Matrix::Zero(n_cav, n_cav);
  for (int n = 1; n < n_cav; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return Operator(std::move(a));
}

Operator sigma_minus() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = 1.0;
  return Operator(std::move(s));
}

Operator kron(const Operator& a, const Operator& b) {
  const Matrix& x = a.entries();
  const Matrix& y = b.entries();
  const Eigen::Index m = y.rows();
  Matrix out(x.rows() * m, x.cols() * m);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      out.block(i * m, j * m, m, m) = x(i, j) * y;
    }
  }
  return Operator(std::move(out));
}

Operator embed(const Operator& op, int slot, const HilbertConfig& config) {
  config.validate();
  const auto dims = config.subsystem_dims();
  if (slot < 0 || slot >= static_cast<int>(dims.size())) {
    throw Error(ErrorKind::Dimension, "slot " + std::to_string(slot) +
                                          " out of range for " +
                                          std::to_string(dims.size()) + " subsystems");
  }
  if (op.dim() != dims[static_cast<size_t>(slot)]) {
    throw Error(ErrorKind::Dimension,
                "operator of dim " + std::to_string(op.dim()) + " cannot act on slot " +
                    std::to_string(slot) + " of dim " +
                    std::to_string(dims[static_cast<size_t>(slot)]));
  }
  Operator out = slot == 0 ? op : Operator::identity(dims[0]);
  for (int s = 1; s < static_cast<int>(dims.size()); ++s) {
    out = kron(out, s == slot ? op : Operator::identity(dims[static_cast<size_t>(s)]));
  }
  return out;
}

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorKind::Dimension, "max_abs_diff: shape mismatch");
  }
  if (a.size() == 0) return 0.0;
  return (a - b).cwiseAbs().maxCoeff();
}

int basis_index(const BasisLabel& label, const HilbertConfig& config) {
  config.validate();
  auto bit = [](int v) { return v == 0 || v == 1; };
  if (!bit(label.qubit1) || (config.qubit_count == 2 && !bit(label.qubit2)) ||
      label.photons < 0 || label.photons >= config.n_cav) {
    throw Error(ErrorKind::Dimension, "basis label outside the truncated space");
  }
  const int qubits = config.qubit_count == 2 ? label.qubit1 * 2 + label.qubit2 : label.qubit1;
  return qubits * config.n_cav + label.photons;
}

BasisLabel basis_label(int index, const HilbertConfig& config) {
  config.validate();
  if (index < 0 || index >= config.dim()) {
    throw Error(ErrorKind::Dimension, "basis index " + std::to_string(index) + " out of range");
  }
  BasisLabel label;
  label.photons = index % config.n_cav;
  const int qubits = index / config.n_cav;
  if (config.qubit_count == 2) {
    label.qubit1 = qubits / 2;
    label.qubit2 = qubits % 2;
  } else {
    label.qubit1 = qubits;
  }
  return label;
}

std::string to_string(const BasisLabel& label, const HilbertConfig& config) {
  auto letter = [](int v) { return v == 0 ? 'g' : 'e'; };
  std::string s = "|";
  s += letter(label.qubit1);
  if (config.qubit_count == 2) s += letter(label.qubit2);
  s += std::to_string(label.photons);
  s += ">";
  return s;
}

}  // namespace hpb

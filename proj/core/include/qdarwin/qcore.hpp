// Dense state-vector and density-matrix primitives.
//
// Qubit ordering: qubit 0 is the most significant bit of the amplitude
// index, so |q0 q1 ... q(n-1)> reads left to right like a written ket.
// All entropies are in bits.

#pragma once

#include <compare>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qdarwin {

using Complex = std::complex<double>;

/// Raised for invalid user input (bad indices, malformed specs, ...).
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace qdarwin

namespace qdarwin::qcore {

inline constexpr double kNormTolerance = 1e-10;
inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kNegativeEigenvalueTolerance = 1e-9;

inline constexpr int kDefaultMaxQubits = 24;

/// Largest simulable register, in qubits. Process-wide; defaults to 24.
int max_qubits();
void set_max_qubits(int n);

class StateVector {
 public:
  /// Takes ownership of `amplitudes`; they must already be unit-norm.
  StateVector(int n_qubits, std::vector<Complex> amplitudes);

  /// Rescales `amplitudes` to unit norm. Throws on the zero vector.
  static StateVector normalized(int n_qubits, std::vector<Complex> amplitudes);
  static StateVector basis(int n_qubits, std::uint64_t index);
  /// Basis state from a bit string such as "0101" (qubit 0 first).
  static StateVector from_bits(std::string_view bits);
  /// |+>^{\otimes n}
  static StateVector plus(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return amplitudes_.size(); }
  std::span<const Complex> amplitudes() const { return amplitudes_; }
  const Complex& operator[](std::size_t i) const { return amplitudes_[i]; }
  double norm() const;

 private:
  int n_qubits_;
  std::vector<Complex> amplitudes_;
};

class DensityMatrix {
 public:
  /// Checks shape, hermiticity and unit trace. `physical` records whether
  /// the caller guarantees positive semidefiniteness; use `checked` to
  /// have it computed from the spectrum instead.
  DensityMatrix(Eigen::MatrixXcd entries, bool physical);

  static DensityMatrix from_pure(const StateVector& psi);
  /// Computes the physical flag from the eigenvalues.
  static DensityMatrix checked(Eigen::MatrixXcd entries);
  static DensityMatrix maximally_mixed(int n_qubits);

  int n_qubits() const { return n_qubits_; }
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Eigen::MatrixXcd& entries() const { return entries_; }
  Complex operator()(std::size_t row, std::size_t col) const {
    return entries_(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col));
  }
  bool physical() const { return physical_; }
  double purity() const;

 private:
  int n_qubits_;
  Eigen::MatrixXcd entries_;
  bool physical_;
};

enum class Pauli : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char to_char(Pauli p);
Pauli pauli_from_char(char c);

class PauliString {
 public:
  PauliString() = default;
  explicit PauliString(std::vector<Pauli> labels);
  /// Parses "XIZY"; also accepts the index form "1032".
  static PauliString parse(std::string_view text);
  static PauliString identity(int n_qubits);

  int n_qubits() const { return static_cast<int>(labels_.size()); }
  Pauli operator[](std::size_t i) const { return labels_[i]; }
  std::span<const Pauli> labels() const { return labels_; }
  int weight() const;
  bool is_identity() const { return weight() == 0; }
  bool is_full_weight() const { return weight() == n_qubits(); }
  std::string str() const;

  /// Bit mask (qubit 0 = MSB) of the positions flipped by X or Y.
  std::uint64_t flip_mask() const;
  /// Bit mask of the non-identity positions.
  std::uint64_t support_mask() const;

  auto operator<=>(const PauliString&) const = default;

 private:
  std::vector<Pauli> labels_;
};

/// All 4^n strings in lexicographic I < X < Y < Z order.
std::vector<PauliString> all_pauli_strings(int n_qubits);

Eigen::MatrixXcd pauli_matrix(const PauliString& p);

/// Gate description. Matrices act on the listed targets in order.
class Gate {
 public:
  enum class Kind { kHadamard, kPauliX, kPauliZ, kSwap, kControlledPhase, kSingleQubit };

  static Gate hadamard(int q);
  static Gate pauli_x(int q);
  static Gate pauli_z(int q);
  static Gate swap(int a, int b);
  /// diag(1, 1, 1, e^{i phase}) on (a, b).
  static Gate controlled_phase(int a, int b, double phase);
  /// Throws ValidationError unless `u` is unitary within 1e-10.
  static Gate single_qubit(int q, const Eigen::Matrix2cd& u);

  Kind kind() const { return kind_; }
  std::span<const int> targets() const { return targets_; }
  int arity() const { return static_cast<int>(targets_.size()); }
  double phase() const { return phase_; }
  bool is_entangling() const { return kind_ == Kind::kControlledPhase; }
  /// 2x2 matrix of a single-qubit gate; throws for two-qubit kinds.
  Eigen::Matrix2cd matrix() const;
  std::string name() const;

 private:
  Gate(Kind kind, std::vector<int> targets) : kind_(kind), targets_(std::move(targets)) {}

  Kind kind_;
  std::vector<int> targets_;
  double phase_ = 0.0;
  Eigen::Matrix2cd matrix_ = Eigen::Matrix2cd::Identity();
};

StateVector apply_gate(const StateVector& state, const Gate& gate);
StateVector apply_circuit(const StateVector& state, std::span<const Gate> circuit);

/// Kronecker product with a's qubits first.
StateVector tensor_product(const StateVector& a, const StateVector& b);
DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b);

/// Reduced state on `keep`, output qubits ordered as listed.
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);
/// Same, straight from amplitudes without forming the global projector.
DensityMatrix partial_trace(const StateVector& psi, std::span<const int> keep);

/// Descending eigenvalues of a Hermitian matrix.
std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m);
std::vector<double> hermitian_eigenvalues(const DensityMatrix& rho);

/// -sum p log2 p over a spectrum, 0 log 0 = 0. Values in [-1e-9, 0) count
/// as zero; anything more negative throws.
double entropy_from_spectrum(std::span<const double> spectrum);
double von_neumann_entropy(const DensityMatrix& rho);
/// Entropy of the reduction of a pure state to `qubits`. Uses whichever
/// side of the bipartition is smaller.
double subsystem_entropy(const StateVector& psi, std::span<const int> qubits);
double subsystem_entropy(const DensityMatrix& rho, std::span<const int> qubits);

double pauli_expectation(const DensityMatrix& rho, const PauliString& p);
double pauli_expectation(const StateVector& psi, const PauliString& p);

double fidelity(const StateVector& a, const StateVector& b);
double fidelity(const StateVector& psi, const DensityMatrix& rho);
/// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; reduces to
/// tr(rho sigma) when either input is pure.
double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma);

/// max over global phase of |<a|b>|, i.e. |<a|b>|.
double phase_insensitive_overlap(const StateVector& a, const StateVector& b);
bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol = 1e-10);

/// (1 - weight) rho + weight * I/d
DensityMatrix depolarize(const DensityMatrix& rho, double weight);

}  // namespace qdarwin::qcore

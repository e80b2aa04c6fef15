#include "qdarwin/qcore.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>

#include <Eigen/Eigenvalues>

namespace qdarwin::qcore {

namespace {

std::atomic<int> g_max_qubits{kDefaultMaxQubits};

constexpr Complex kI{0.0, 1.0};

void require_size(int n_qubits) {
  if (n_qubits < 1) {
    throw ValidationError("register must hold at least one qubit");
  }
  if (n_qubits > max_qubits()) {
    throw ValidationError("register of " + std::to_string(n_qubits) +
                          " qubits exceeds the configured maximum of " +
                          std::to_string(max_qubits()));
  }
}

std::uint64_t bit_of(int n_qubits, int q) {
  return std::uint64_t{1} << (n_qubits - 1 - q);
}

void require_qubits(int n_qubits, std::span<const int> qubits, bool allow_empty) {
  if (!allow_empty && qubits.empty()) {
    throw ValidationError("qubit list must not be empty");
  }
  std::uint64_t seen = 0;
  for (int q : qubits) {
    if (q < 0 || q >= n_qubits) {
      throw ValidationError("qubit index " + std::to_string(q) + " out of range for " +
                            std::to_string(n_qubits) + " qubits");
    }
    const auto b = bit_of(n_qubits, q);
    if (seen & b) {
      throw ValidationError("duplicate qubit index " + std::to_string(q));
    }
    seen |= b;
  }
}

// Global index offsets for every local index of `qubits` (first listed = MSB
// of the local index).
std::vector<std::uint64_t> scatter_table(int n_qubits, std::span<const int> qubits) {
  const std::size_t k = qubits.size();
  std::vector<std::uint64_t> table(std::size_t{1} << k);
  for (std::size_t local = 0; local < table.size(); ++local) {
    std::uint64_t global = 0;
    for (std::size_t pos = 0; pos < k; ++pos) {
      if ((local >> (k - 1 - pos)) & 1U) {
        global |= bit_of(n_qubits, qubits[pos]);
      }
    }
    table[local] = global;
  }
  return table;
}

std::vector<int> complement(int n_qubits, std::span<const int> qubits) {
  std::vector<int> rest;
  for (int q = 0; q < n_qubits; ++q) {
    if (std::find(qubits.begin(), qubits.end(), q) == qubits.end()) {
      rest.push_back(q);
    }
  }
  return rest;
}

bool is_unitary(const Eigen::MatrixXcd& u) {
  const Eigen::MatrixXcd prod = u * u.adjoint();
  return (prod - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff() <=
         kNormTolerance;
}

int qubits_for_dim(Eigen::Index dim) {
  if (dim < 2 || !std::has_single_bit(static_cast<std::uint64_t>(dim))) {
    throw ValidationError("matrix dimension must be a power of two >= 2");
  }
  return std::countr_zero(static_cast<std::uint64_t>(dim));
}

// Phase picked up by basis state |j> under the Pauli string: P|j> = phase |j ^ flip>.
Complex pauli_phase(const PauliString& p, std::uint64_t j) {
  const int n = p.n_qubits();
  std::uint64_t sign_mask = 0;
  int n_y = 0;
  for (int q = 0; q < n; ++q) {
    const Pauli label = p[static_cast<std::size_t>(q)];
    if (label == Pauli::Y) {
      ++n_y;
      sign_mask |= bit_of(n, q);
    } else if (label == Pauli::Z) {
      sign_mask |= bit_of(n, q);
    }
  }
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex phase = kIPowers[n_y % 4];
  if (std::popcount(j & sign_mask) % 2 == 1) {
    phase = -phase;
  }
  return phase;
}

double checked_real(Complex value) {
  if (std::abs(value.imag()) > 1e-9) {
    throw std::runtime_error("Pauli expectation has an imaginary residue of " +
                             std::to_string(value.imag()));
  }
  return value.real();
}

}  // namespace

int max_qubits() { return g_max_qubits.load(std::memory_order_relaxed); }

void set_max_qubits(int n) {
  if (n < 1 || n > 62) {
    throw ValidationError("maximum qubit count must lie in [1, 62]");
  }
  g_max_qubits.store(n, std::memory_order_relaxed);
}

// ---------------------------------------------------------------------------
// StateVector

StateVector::StateVector(int n_qubits, std::vector<Complex> amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  require_size(n_qubits);
  if (amplitudes_.size() != (std::size_t{1} << n_qubits)) {
    throw ValidationError("amplitude count must equal 2^n_qubits");
  }
  if (std::abs(norm() - 1.0) > kNormTolerance) {
    throw ValidationError("state vector is not normalized (norm " + std::to_string(norm()) + ")");
  }
}

StateVector StateVector::normalized(int n_qubits, std::vector<Complex> amplitudes) {
  double sq = 0.0;
  for (const auto& a : amplitudes) sq += std::norm(a);
  if (!(sq > 0.0) || !std::isfinite(sq)) {
    throw ValidationError("cannot normalize a zero or non-finite vector");
  }
  const double scale = 1.0 / std::sqrt(sq);
  for (auto& a : amplitudes) a *= scale;
  return StateVector(n_qubits, std::move(amplitudes));
}

StateVector StateVector::basis(int n_qubits, std::uint64_t index) {
  require_size(n_qubits);
  std::vector<Complex> amps(std::size_t{1} << n_qubits);
  if (index >= amps.size()) {
    throw ValidationError("basis index out of range");
  }
  amps[index] = 1.0;
  return StateVector(n_qubits, std::move(amps));
}

StateVector StateVector::from_bits(std::string_view bits) {
  std::uint64_t index = 0;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ValidationError("basis label must contain only 0 and 1");
    }
    index = (index << 1) | static_cast<std::uint64_t>(c == '1');
  }
  return basis(static_cast<int>(bits.size()), index);
}

StateVector StateVector::plus(int n_qubits) {
  require_size(n_qubits);
  const std::size_t dim = std::size_t{1} << n_qubits;
  return StateVector(n_qubits,
                     std::vector<Complex>(dim, Complex(1.0 / std::sqrt(static_cast<double>(dim)))));
}

double StateVector::norm() const {
  double sq = 0.0;
  for (const auto& a : amplitudes_) sq += std::norm(a);
  return std::sqrt(sq);
}

// ---------------------------------------------------------------------------
// DensityMatrix

DensityMatrix::DensityMatrix(Eigen::MatrixXcd entries, bool physical)
    : n_qubits_(0), entries_(std::move(entries)), physical_(physical) {
  if (entries_.rows() != entries_.cols()) {
    throw ValidationError("density matrix must be square");
  }
  n_qubits_ = qubits_for_dim(entries_.rows());
  if (2 * n_qubits_ > max_qubits()) {
    throw ValidationError("density matrix exceeds the configured size cap");
  }
  if ((entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw ValidationError("density matrix is not Hermitian");
  }
  const Complex tr = entries_.trace();
  if (std::abs(tr - Complex(1.0)) > kTraceTolerance) {
    throw ValidationError("density matrix trace is " + std::to_string(tr.real()) + ", not 1");
  }
}

DensityMatrix DensityMatrix::from_pure(const StateVector& psi) {
  const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(),
                                             static_cast<Eigen::Index>(psi.dim()));
  return DensityMatrix(v * v.adjoint(), true);
}

DensityMatrix DensityMatrix::checked(Eigen::MatrixXcd entries) {
  DensityMatrix rho(std::move(entries), false);
  const auto spectrum = hermitian_eigenvalues(rho.entries());
  rho.physical_ = spectrum.back() >= -kNegativeEigenvalueTolerance;
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int n_qubits) {
  require_size(n_qubits);
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << n_qubits);
  return DensityMatrix(Eigen::MatrixXcd::Identity(dim, dim) / static_cast<double>(dim), true);
}

double DensityMatrix::purity() const {
  // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
  return entries_.squaredNorm();
}

// ---------------------------------------------------------------------------
// Pauli strings

char to_char(Pauli p) {
  static constexpr char kLetters[4] = {'I', 'X', 'Y', 'Z'};
  return kLetters[static_cast<int>(p)];
}

Pauli pauli_from_char(char c) {
  switch (c) {
    case 'I': case 'i': case '0': return Pauli::I;
    case 'X': case 'x': case '1': return Pauli::X;
    case 'Y': case 'y': case '2': return Pauli::Y;
    case 'Z': case 'z': case '3': return Pauli::Z;
    default:
      throw ValidationError(std::string("invalid Pauli symbol '") + c + "'");
  }
}

PauliString::PauliString(std::vector<Pauli> labels) : labels_(std::move(labels)) {
  if (labels_.empty()) {
    throw ValidationError("Pauli string must not be empty");
  }
  if (labels_.size() > 62) {
    throw ValidationError("Pauli string too long");
  }
}

PauliString PauliString::parse(std::string_view text) {
  std::vector<Pauli> labels;
  labels.reserve(text.size());
  for (char c : text) labels.push_back(pauli_from_char(c));
  return PauliString(std::move(labels));
}

PauliString PauliString::identity(int n_qubits) {
  return PauliString(std::vector<Pauli>(static_cast<std::size_t>(n_qubits), Pauli::I));
}

int PauliString::weight() const {
  return static_cast<int>(
      std::count_if(labels_.begin(), labels_.end(), [](Pauli p) { return p != Pauli::I; }));
}

std::string PauliString::str() const {
  std::string out;
  out.reserve(labels_.size());
  for (Pauli p : labels_) out.push_back(to_char(p));
  return out;
}

std::uint64_t PauliString::flip_mask() const {
  std::uint64_t mask = 0;
  const int n = n_qubits();
  for (int q = 0; q < n; ++q) {
    const Pauli p = labels_[static_cast<std::size_t>(q)];
    if (p == Pauli::X || p == Pauli::Y) mask |= bit_of(n, q);
  }
  return mask;
}

std::uint64_t PauliString::support_mask() const {
  std::uint64_t mask = 0;
  const int n = n_qubits();
  for (int q = 0; q < n; ++q) {
    if (labels_[static_cast<std::size_t>(q)] != Pauli::I) mask |= bit_of(n, q);
  }
  return mask;
}

std::vector<PauliString> all_pauli_strings(int n_qubits) {
  if (n_qubits < 1 || n_qubits > 8) {
    throw ValidationError("all_pauli_strings supports 1..8 qubits");
  }
  const std::size_t count = std::size_t{1} << (2 * n_qubits);
  std::vector<PauliString> out;
  out.reserve(count);
  for (std::size_t code = 0; code < count; ++code) {
    std::vector<Pauli> labels(static_cast<std::size_t>(n_qubits));
    for (int q = 0; q < n_qubits; ++q) {
      labels[static_cast<std::size_t>(q)] =
          static_cast<Pauli>((code >> (2 * (n_qubits - 1 - q))) & 3U);
    }
    out.emplace_back(std::move(labels));
  }
  return out;
}

Eigen::MatrixXcd pauli_matrix(const PauliString& p) {
  const auto dim = static_cast<Eigen::Index>(std::uint64_t{1} << p.n_qubits());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(dim, dim);
  const std::uint64_t flip = p.flip_mask();
  for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(dim); ++j) {
    m(static_cast<Eigen::Index>(j ^ flip), static_cast<Eigen::Index>(j)) = pauli_phase(p, j);
  }
  return m;
}

// ---------------------------------------------------------------------------
// Gates

Gate Gate::hadamard(int q) { return Gate(Kind::kHadamard, {q}); }
Gate Gate::pauli_x(int q) { return Gate(Kind::kPauliX, {q}); }
Gate Gate::pauli_z(int q) { return Gate(Kind::kPauliZ, {q}); }
Gate Gate::swap(int a, int b) { return Gate(Kind::kSwap, {a, b}); }

Gate Gate::controlled_phase(int a, int b, double phase) {
  if (!std::isfinite(phase)) {
    throw ValidationError("controlled-phase angle must be finite");
  }
  Gate g(Kind::kControlledPhase, {a, b});
  g.phase_ = phase;
  return g;
}

Gate Gate::single_qubit(int q, const Eigen::Matrix2cd& u) {
  if (!is_unitary(u)) {
    throw ValidationError("single-qubit matrix is not unitary within 1e-10");
  }
  Gate g(Kind::kSingleQubit, {q});
  g.matrix_ = u;
  return g;
}

Eigen::Matrix2cd Gate::matrix() const {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (kind_) {
    case Kind::kHadamard: m << r, r, r, -r; return m;
    case Kind::kPauliX: m << 0, 1, 1, 0; return m;
    case Kind::kPauliZ: m << 1, 0, 0, -1; return m;
    case Kind::kSingleQubit: return matrix_;
    case Kind::kSwap:
    case Kind::kControlledPhase: break;
  }
  throw std::logic_error("matrix() called on a two-qubit gate");
}

std::string Gate::name() const {
  std::string base;
  switch (kind_) {
    case Kind::kHadamard: base = "H"; break;
    case Kind::kPauliX: base = "X"; break;
    case Kind::kPauliZ: base = "Z"; break;
    case Kind::kSwap: base = "SWAP"; break;
    case Kind::kControlledPhase: base = "CPHASE(" + std::to_string(phase_) + ")"; break;
    case Kind::kSingleQubit: base = "U"; break;
  }
  base += "[";
  for (std::size_t i = 0; i < targets_.size(); ++i) {
    if (i) base += ",";
    base += std::to_string(targets_[i]);
  }
  return base + "]";
}

StateVector apply_gate(const StateVector& state, const Gate& gate) {
  const int n = state.n_qubits();
  require_qubits(n, gate.targets(), false);
  std::vector<Complex> amps(state.amplitudes().begin(), state.amplitudes().end());
  const std::uint64_t dim = amps.size();

  switch (gate.kind()) {
    case Gate::Kind::kSwap: {
      const auto ba = bit_of(n, gate.targets()[0]);
      const auto bb = bit_of(n, gate.targets()[1]);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & ba) && !(i & bb)) std::swap(amps[i], amps[(i & ~ba) | bb]);
      }
      break;
    }
    case Gate::Kind::kControlledPhase: {
      const auto both = bit_of(n, gate.targets()[0]) | bit_of(n, gate.targets()[1]);
      const Complex factor = std::exp(kI * gate.phase());
      for (std::uint64_t i = 0; i < dim; ++i) {
        if ((i & both) == both) amps[i] *= factor;
      }
      break;
    }
    default: {
      const Eigen::Matrix2cd u = gate.matrix();
      const auto b = bit_of(n, gate.targets()[0]);
      for (std::uint64_t i = 0; i < dim; ++i) {
        if (i & b) continue;
        const Complex a0 = amps[i];
        const Complex a1 = amps[i | b];
        amps[i] = u(0, 0) * a0 + u(0, 1) * a1;
        amps[i | b] = u(1, 0) * a0 + u(1, 1) * a1;
      }
      break;
    }
  }
  // Unitary gates keep the norm up to round-off; renormalize the drift away.
  return StateVector::normalized(n, std::move(amps));
}

StateVector apply_circuit(const StateVector& state, std::span<const Gate> circuit) {
  StateVector out = state;
  for (const auto& g : circuit) out = apply_gate(out, g);
  return out;
}

StateVector tensor_product(const StateVector& a, const StateVector& b) {
  const int n = a.n_qubits() + b.n_qubits();
  require_size(n);
  std::vector<Complex> amps;
  amps.reserve(a.dim() * b.dim());
  for (const auto& x : a.amplitudes()) {
    for (const auto& y : b.amplitudes()) amps.push_back(x * y);
  }
  return StateVector::normalized(n, std::move(amps));
}

DensityMatrix tensor_product(const DensityMatrix& a, const DensityMatrix& b) {
  require_size(2 * (a.n_qubits() + b.n_qubits()));
  const auto da = a.entries().rows();
  const auto db = b.entries().rows();
  Eigen::MatrixXcd out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      out.block(i * db, j * db, db, db) = a.entries()(i, j) * b.entries();
    }
  }
  return DensityMatrix(std::move(out), a.physical() && b.physical());
}

// ---------------------------------------------------------------------------
// Partial trace

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  require_qubits(n, keep, false);
  const auto rest = complement(n, keep);
  const auto keep_off = scatter_table(n, keep);
  const auto rest_off = scatter_table(n, rest);

  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  const auto& m = rho.entries();
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index b = 0; b < dk; ++b) {
      Complex sum = 0.0;
      for (const auto r : rest_off) {
        sum += m(static_cast<Eigen::Index>(keep_off[a] | r),
                 static_cast<Eigen::Index>(keep_off[b] | r));
      }
      out(a, b) = sum;
    }
  }
  return DensityMatrix(std::move(out), rho.physical());
}

DensityMatrix partial_trace(const StateVector& psi, std::span<const int> keep) {
  const int n = psi.n_qubits();
  require_qubits(n, keep, false);
  const auto rest = complement(n, keep);
  const auto keep_off = scatter_table(n, keep);
  const auto rest_off = scatter_table(n, rest);

  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  const auto dr = static_cast<Eigen::Index>(rest_off.size());
  Eigen::MatrixXcd block(dk, dr);
  for (Eigen::Index a = 0; a < dk; ++a) {
    for (Eigen::Index r = 0; r < dr; ++r) {
      block(a, r) = psi[keep_off[a] | rest_off[r]];
    }
  }
  Eigen::MatrixXcd reduced = block * block.adjoint();
  // Exact Hermitian symmetrization; the product is Hermitian up to round-off.
  reduced = 0.5 * (reduced + reduced.adjoint()).eval();
  return DensityMatrix(std::move(reduced), true);
}

// ---------------------------------------------------------------------------
// Spectra and entropies

std::vector<double> hermitian_eigenvalues(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) {
    throw ValidationError("eigenvalues requested for a non-square matrix");
  }
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
    throw ValidationError("matrix is not Hermitian within 1e-10");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("Hermitian eigensolver did not converge");
  }
  const Eigen::VectorXd& ev = solver.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

std::vector<double> hermitian_eigenvalues(const DensityMatrix& rho) {
  return hermitian_eigenvalues(rho.entries());
}

double entropy_from_spectrum(std::span<const double> spectrum) {
  double h = 0.0;
  for (double p : spectrum) {
    if (p < -kNegativeEigenvalueTolerance) {
      throw ValidationError("eigenvalue " + std::to_string(p) +
                            " below -1e-9 in a state treated as physical");
    }
    if (p <= 1e-12) continue;
    h -= p * std::log2(p);
  }
  return std::max(h, 0.0);
}

double von_neumann_entropy(const DensityMatrix& rho) {
  if (!rho.physical()) {
    throw ValidationError("entropy requires a physical density matrix; project it first");
  }
  return entropy_from_spectrum(hermitian_eigenvalues(rho));
}

double subsystem_entropy(const StateVector& psi, std::span<const int> qubits) {
  const int n = psi.n_qubits();
  require_qubits(n, qubits, true);
  if (qubits.empty() || static_cast<int>(qubits.size()) == n) return 0.0;
  if (2 * static_cast<int>(qubits.size()) > n) {
    const auto rest = complement(n, qubits);
    return von_neumann_entropy(partial_trace(psi, rest));
  }
  return von_neumann_entropy(partial_trace(psi, qubits));
}

double subsystem_entropy(const DensityMatrix& rho, std::span<const int> qubits) {
  require_qubits(rho.n_qubits(), qubits, true);
  if (qubits.empty()) return 0.0;
  if (static_cast<int>(qubits.size()) == rho.n_qubits()) return von_neumann_entropy(rho);
  return von_neumann_entropy(partial_trace(rho, qubits));
}

// ---------------------------------------------------------------------------
// Expectations and fidelities

double pauli_expectation(const DensityMatrix& rho, const PauliString& p) {
  if (p.n_qubits() != rho.n_qubits()) {
    throw ValidationError("Pauli string length " + std::to_string(p.n_qubits()) +
                          " does not match " + std::to_string(rho.n_qubits()) + " qubits");
  }
  const std::uint64_t flip = p.flip_mask();
  Complex sum = 0.0;
  for (std::uint64_t j = 0; j < rho.dim(); ++j) {
    sum += rho(j, j ^ flip) * pauli_phase(p, j);
  }
  return checked_real(sum);
}

double pauli_expectation(const StateVector& psi, const PauliString& p) {
  if (p.n_qubits() != psi.n_qubits()) {
    throw ValidationError("Pauli string length does not match the state");
  }
  const std::uint64_t flip = p.flip_mask();
  Complex sum = 0.0;
  for (std::uint64_t j = 0; j < psi.dim(); ++j) {
    sum += std::conj(psi[j ^ flip]) * pauli_phase(p, j) * psi[j];
  }
  return checked_real(sum);
}

double fidelity(const StateVector& a, const StateVector& b) {
  const double o = phase_insensitive_overlap(a, b);
  return std::clamp(o * o, 0.0, 1.0);
}

double fidelity(const StateVector& psi, const DensityMatrix& rho) {
  if (psi.dim() != rho.dim()) {
    throw ValidationError("fidelity of states with different dimensions");
  }
  const Eigen::Map<const Eigen::VectorXcd> v(psi.amplitudes().data(),
                                             static_cast<Eigen::Index>(psi.dim()));
  const Complex f = v.dot(rho.entries() * v);
  return std::clamp(f.real(), 0.0, 1.0);
}

double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
  if (rho.dim() != sigma.dim()) {
    throw ValidationError("fidelity of states with different dimensions");
  }
  if (std::abs(rho.purity() - 1.0) < 1e-10 || std::abs(sigma.purity() - 1.0) < 1e-10) {
    const Complex f = (rho.entries() * sigma.entries()).trace();
    return std::clamp(f.real(), 0.0, 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
  const Eigen::VectorXd root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXcd sqrt_rho = es.eigenvectors() * root.asDiagonal() *
                                    es.eigenvectors().adjoint();
  Eigen::MatrixXcd inner = sqrt_rho * sigma.entries() * sqrt_rho;
  inner = 0.5 * (inner + inner.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es2(inner, Eigen::EigenvaluesOnly);
  const double t = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
  return std::clamp(t * t, 0.0, 1.0);
}

double phase_insensitive_overlap(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) {
    throw ValidationError("overlap of states with different dimensions");
  }
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return std::abs(s);
}

bool equal_up_to_global_phase(const StateVector& a, const StateVector& b, double tol) {
  return a.dim() == b.dim() && std::abs(1.0 - phase_insensitive_overlap(a, b)) <= tol;
}

DensityMatrix depolarize(const DensityMatrix& rho, double weight) {
  if (!(weight >= 0.0 && weight <= 1.0)) {
    throw ValidationError("depolarizing weight must lie in [0, 1]");
  }
  const auto d = rho.entries().rows();
  Eigen::MatrixXcd out = (1.0 - weight) * rho.entries() +
                         (weight / static_cast<double>(d)) * Eigen::MatrixXcd::Identity(d, d);
  return DensityMatrix(std::move(out), rho.physical());
}

}  // namespace qdarwin::qcore

// Brute-force reference implementations used only by the tests. They share
// no code with the library: partial traces loop over every matrix element,
// entropies use the general (non-Hermitian) eigensolver, Pauli operators are
// built from explicit Kronecker products.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "qdarwin/qcore.hpp"

namespace oracle {

using Complex = std::complex<double>;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

inline int bit(std::uint64_t index, int n, int q) { return static_cast<int>((index >> (n - 1 - q)) & 1U); }

inline VectorXcd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  VectorXcd v(std::int64_t{1} << n);
  for (auto& a : v) a = Complex(g(rng), g(rng));
  return v / v.norm();
}

inline qdarwin::qcore::StateVector random_state(int n, std::mt19937_64& rng) {
  const VectorXcd v = random_vector(n, rng);
  return qdarwin::qcore::StateVector(n, std::vector<Complex>(v.data(), v.data() + v.size()));
}

/// Random mixed state of the given rank (Wishart-like).
inline MatrixXcd random_density(int n, std::mt19937_64& rng, int rank = -1) {
  const std::int64_t d = std::int64_t{1} << n;
  if (rank < 0) rank = static_cast<int>(d);
  std::normal_distribution<double> g;
  MatrixXcd a(d, rank);
  for (std::int64_t i = 0; i < a.size(); ++i) a.data()[i] = Complex(g(rng), g(rng));
  MatrixXcd rho = a * a.adjoint();
  rho /= rho.trace();
  return 0.5 * (rho + rho.adjoint());
}

inline MatrixXcd projector(const qdarwin::qcore::StateVector& psi) {
  VectorXcd v(static_cast<std::int64_t>(psi.dim()));
  for (std::size_t i = 0; i < psi.dim(); ++i) v(static_cast<std::int64_t>(i)) = psi[i];
  return v * v.adjoint();
}

/// Element-by-element partial trace; the output keeps `keep` in the order given.
inline MatrixXcd partial_trace(const MatrixXcd& rho, int n, const std::vector<int>& keep) {
  const std::uint64_t d = std::uint64_t{1} << n;
  const std::int64_t dk = std::int64_t{1} << keep.size();
  std::vector<bool> kept(static_cast<std::size_t>(n), false);
  for (int q : keep) kept[static_cast<std::size_t>(q)] = true;
  MatrixXcd out = MatrixXcd::Zero(dk, dk);
  for (std::uint64_t i = 0; i < d; ++i) {
    for (std::uint64_t j = 0; j < d; ++j) {
      bool same_env = true;
      for (int q = 0; q < n && same_env; ++q) {
        if (!kept[static_cast<std::size_t>(q)] && bit(i, n, q) != bit(j, n, q)) same_env = false;
      }
      if (!same_env) continue;
      std::int64_t ki = 0;
      std::int64_t kj = 0;
      for (int q : keep) {
        ki = (ki << 1) | bit(i, n, q);
        kj = (kj << 1) | bit(j, n, q);
      }
      out(ki, kj) += rho(static_cast<std::int64_t>(i), static_cast<std::int64_t>(j));
    }
  }
  return out;
}

inline double entropy(const MatrixXcd& rho) {
  // Singular values coincide with eigenvalues for a positive semidefinite input.
  Eigen::JacobiSVD<MatrixXcd> svd(rho);
  double h = 0.0;
  for (const double p : svd.singularValues()) {
    if (p > 1e-12) h -= p * std::log2(p);
  }
  return h;
}

inline double mutual_information(const MatrixXcd& rho, int n, int system,
                                 const std::vector<int>& fragment) {
  std::vector<int> joint{system};
  joint.insert(joint.end(), fragment.begin(), fragment.end());
  return entropy(partial_trace(rho, n, {system})) + entropy(partial_trace(rho, n, fragment)) -
         entropy(partial_trace(rho, n, joint));
}

inline MatrixXcd pauli(char c) {
  MatrixXcd m(2, 2);
  const Complex i(0.0, 1.0);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

inline MatrixXcd kron(const MatrixXcd& a, const MatrixXcd& b) {
  MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (std::int64_t r = 0; r < a.rows(); ++r) {
    for (std::int64_t c = 0; c < a.cols(); ++c) {
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
    }
  }
  return out;
}

inline MatrixXcd pauli_string(const std::string& s) {
  MatrixXcd m = pauli(s.front());
  for (std::size_t k = 1; k < s.size(); ++k) m = kron(m, pauli(s[k]));
  return m;
}

/// P |0101><0101| + (1-P) |1010><1010| + C |0101><1010| + C* |1010><0101|.
inline MatrixXcd two_branch(double P, Complex C) {
  MatrixXcd rho = MatrixXcd::Zero(16, 16);
  rho(5, 5) = P;
  rho(10, 10) = 1.0 - P;
  rho(5, 10) = C;
  rho(10, 5) = std::conj(C);
  return rho;
}

inline double binary_entropy(double p) {
  double h = 0.0;
  for (double x : {p, 1.0 - p}) {
    if (x > 0.0) h -= x * std::log2(x);
  }
  return h;
}

inline qdarwin::qcore::DensityMatrix density(const MatrixXcd& m) {
  return qdarwin::qcore::DensityMatrix::checked(m);
}

}  // namespace oracle

#include "qdarwin/graphstate.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace qdarwin::graphstate {

namespace {

constexpr double kPassThreshold = 1.0 - 1e-9;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

StateVector ket(int n, std::initializer_list<std::pair<const char*, double>> terms) {
  std::vector<Complex> amps(std::size_t{1} << n);
  for (const auto& [bits, coeff] : terms) {
    amps[std::stoull(bits, nullptr, 2)] += coeff;
  }
  return StateVector::normalized(n, std::move(amps));
}

}  // namespace

GraphSpec::GraphSpec(int n_qubits, int system, std::vector<Edge> edges)
    : n_qubits_(n_qubits), system_(system), edges_(std::move(edges)) {
  if (n_qubits < 1) {
    throw ValidationError("graph must have at least one qubit");
  }
  if (system < 0 || system >= n_qubits) {
    throw ValidationError("system index " + std::to_string(system) + " out of range");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges_) {
    if (e.a < 0 || e.a >= n_qubits || e.b < 0 || e.b >= n_qubits) {
      throw ValidationError("edge (" + std::to_string(e.a) + ", " + std::to_string(e.b) +
                            ") references a qubit out of range");
    }
    if (e.a == e.b) {
      throw ValidationError("self edge on qubit " + std::to_string(e.a));
    }
    if (!std::isfinite(e.phase)) {
      throw ValidationError("edge phase must be finite");
    }
    if (!seen.emplace(std::min(e.a, e.b), std::max(e.a, e.b)).second) {
      throw ValidationError("duplicate edge (" + std::to_string(e.a) + ", " +
                            std::to_string(e.b) + ")");
    }
  }
}

StateVector build_graph_state(const GraphSpec& spec) {
  // All controlled-phase gates are diagonal, so the phase of each basis
  // amplitude is the sum of the phases of the edges it fully occupies.
  const int n = spec.n_qubits();
  StateVector plus = StateVector::plus(n);
  std::vector<Complex> amps(plus.amplitudes().begin(), plus.amplitudes().end());
  std::vector<std::pair<std::uint64_t, double>> masks;
  for (const auto& e : spec.edges()) {
    masks.emplace_back((std::uint64_t{1} << (n - 1 - e.a)) | (std::uint64_t{1} << (n - 1 - e.b)),
                       e.phase);
  }
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    double total = 0.0;
    for (const auto& [mask, phase] : masks) {
      if ((i & mask) == mask) total += phase;
    }
    if (total != 0.0) amps[i] *= std::polar(1.0, total);
  }
  return StateVector::normalized(n, std::move(amps));
}

GraphSpec star_spec(int n_env, double phi) {
  if (n_env < 1) {
    throw ValidationError("star graph needs at least one environment qubit");
  }
  std::vector<Edge> edges;
  for (int k = 1; k <= n_env; ++k) edges.push_back({0, k, phi});
  return GraphSpec(n_env + 1, 0, std::move(edges));
}

GraphSpec diamond_spec(int n_env, double phi, double theta) {
  if (n_env < 2) {
    throw ValidationError("diamond graph needs at least two environment qubits");
  }
  std::vector<Edge> edges;
  for (int k = 1; k <= n_env; ++k) edges.push_back({0, k, phi});
  for (int j = 1; j < n_env; ++j) edges.push_back({j, j + 1, theta});
  return GraphSpec(n_env + 1, 0, std::move(edges));
}

GraphSpec ising_as_graph(int n_qubits, const CouplingMap& couplings, double time) {
  if (!std::isfinite(time)) {
    throw ValidationError("evolution time must be finite");
  }
  std::vector<Edge> edges;
  for (const auto& [pair, rate] : couplings) {
    if (!std::isfinite(rate)) {
      throw ValidationError("coupling rates must be finite");
    }
    edges.push_back({pair.first, pair.second, -rate * time});
  }
  return GraphSpec(n_qubits, 0, std::move(edges));
}

StateVector evolve_ising(int n_qubits, const CouplingMap& couplings, double time) {
  const auto spec = ising_as_graph(n_qubits, couplings, time);
  const int n = spec.n_qubits();
  // Diagonal generator: accumulate g_jk over occupied pairs, then one phase.
  StateVector plus = StateVector::plus(n);
  std::vector<Complex> amps(plus.amplitudes().begin(), plus.amplitudes().end());
  for (std::uint64_t i = 0; i < amps.size(); ++i) {
    double energy = 0.0;
    for (const auto& [pair, rate] : couplings) {
      const bool bj = (i >> (n - 1 - pair.first)) & 1U;
      const bool bk = (i >> (n - 1 - pair.second)) & 1U;
      if (bj && bk) energy += rate;
    }
    amps[i] *= std::polar(1.0, -energy * time);
  }
  return StateVector::normalized(n, std::move(amps));
}

StateVector named_state(const NamedStateId& id) {
  static constexpr double h = 0.5;
  return std::visit(
      overloaded{
          [](const named::Star& s) { return build_graph_state(star_spec(s.n_env, s.phi)); },
          [](const named::Diamond& d) {
            return build_graph_state(diamond_spec(d.n_env, d.phi, d.theta));
          },
          [](const named::Ghz& g) {
            if (g.n < 2) throw ValidationError("GHZ state needs at least two qubits");
            std::vector<Complex> amps(std::size_t{1} << g.n);
            amps.front() = amps.back() = 1.0;
            return StateVector::normalized(g.n, std::move(amps));
          },
          [](const named::HyperentangledXi&) {
            return ket(4, {{"0001", h}, {"0010", h}, {"1101", h}, {"1110", h}});
          },
          [](const named::StarExperimental&) {
            return ket(4, {{"0101", 1.0}, {"1010", 1.0}});
          },
          [](const named::DiamondExperimental&) {
            // -(|HH> - |VV>)|l r> + (|HV> + |VH>)|r l>
            return ket(4, {{"0001", -h}, {"1101", h}, {"0110", h}, {"1010", h}});
          },
          [](const named::DiamondCanonical&) {
            return ket(4, {{"0001", -h}, {"0110", h}, {"1010", h}, {"1101", h}});
          },
      },
      id);
}

NamedStateId parse_named_state(std::string_view name) {
  if (name == "hyperentangled_xi") return named::HyperentangledXi{};
  if (name == "star_experimental") return named::StarExperimental{};
  if (name == "diamond_experimental") return named::DiamondExperimental{};
  if (name == "diamond_canonical") return named::DiamondCanonical{};
  if (name.starts_with("ghz") && name.size() > 3) {
    const std::string digits(name.substr(3));
    if (std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      return named::Ghz{std::stoi(digits)};
    }
  }
  throw ValidationError("unknown named state '" + std::string(name) + "'");
}

std::string to_string(const NamedStateId& id) {
  return std::visit(
      overloaded{
          [](const named::Star& s) {
            return "star(n_env=" + std::to_string(s.n_env) + ",phi=" + std::to_string(s.phi) + ")";
          },
          [](const named::Diamond& d) {
            return "diamond(n_env=" + std::to_string(d.n_env) + ",phi=" + std::to_string(d.phi) +
                   ",theta=" + std::to_string(d.theta) + ")";
          },
          [](const named::Ghz& g) { return "ghz" + std::to_string(g.n); },
          [](const named::HyperentangledXi&) { return std::string("hyperentangled_xi"); },
          [](const named::StarExperimental&) { return std::string("star_experimental"); },
          [](const named::DiamondExperimental&) { return std::string("diamond_experimental"); },
          [](const named::DiamondCanonical&) { return std::string("diamond_canonical"); },
      },
      id);
}

EquivalenceReport check_local_equivalence(const StateVector& a, const StateVector& b,
                                          std::span<const Gate> circuit) {
  if (a.n_qubits() != b.n_qubits()) {
    throw ValidationError("equivalence check between registers of different size");
  }
  for (const auto& g : circuit) {
    if (g.is_entangling()) {
      throw ValidationError("circuit contains entangling gate " + g.name() +
                            "; only single-qubit gates and Swap are allowed");
    }
  }
  const StateVector mapped = qcore::apply_circuit(a, circuit);
  const double f = qcore::fidelity(mapped, b);
  return {f, f >= kPassThreshold};
}

std::vector<Gate> star_to_ghz_circuit(int n_env) {
  std::vector<Gate> circuit;
  for (int k = 1; k <= n_env; ++k) circuit.push_back(Gate::hadamard(k));
  return circuit;
}

std::vector<Gate> diamond_to_canonical_circuit() {
  return {Gate::hadamard(0), Gate::hadamard(1), Gate::pauli_x(1), Gate::hadamard(2),
          Gate::hadamard(3), Gate::pauli_z(3), Gate::swap(1, 2)};
}

std::vector<Gate> star_experimental_to_ghz_circuit() {
  return {Gate::pauli_x(1), Gate::pauli_x(3)};
}

}  // namespace qdarwin::graphstate

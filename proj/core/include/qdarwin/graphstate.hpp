// Weighted graph states: construction, the Ising-evolution picture, the
// star/diamond families and the fixed four-qubit resource states.
//
// Qubit indices are 0-based. The system is qubit 0 for every built-in
// family; environment qubits are 1..n_env.

#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "qdarwin/qcore.hpp"

namespace qdarwin::graphstate {

using qcore::Gate;
using qcore::StateVector;

struct Edge {
  int a;
  int b;
  double phase;  // radians; the controlled-phase angle on (a, b)
};

class GraphSpec {
 public:
  /// Throws ValidationError for out-of-range or self edges, duplicate
  /// unordered pairs, non-finite phases, or a system index out of range.
  GraphSpec(int n_qubits, int system, std::vector<Edge> edges);

  int n_qubits() const { return n_qubits_; }
  int system() const { return system_; }
  std::span<const Edge> edges() const { return edges_; }
  int n_env() const { return n_qubits_ - 1; }

 private:
  int n_qubits_;
  int system_;
  std::vector<Edge> edges_;
};

/// prod over edges of C(phase) applied to |+>^n. Edge order does not matter.
StateVector build_graph_state(const GraphSpec& spec);

/// System 0 joined to each of the n_env environment qubits with phase phi.
GraphSpec star_spec(int n_env, double phi);
/// Star edges plus an open chain (j, j+1, theta) over consecutive
/// environment qubits. Needs n_env >= 2.
GraphSpec diamond_spec(int n_env, double phi, double theta);

/// Unordered pair -> coupling rate g_jk. Keys are normalized to (min, max).
using CouplingMap = std::map<std::pair<int, int>, double>;

/// exp(-i H t) |+>^n with H = sum g_jk |11><11|_jk. This is the graph state
/// whose edge phases are -g_jk * t.
StateVector evolve_ising(int n_qubits, const CouplingMap& couplings, double time);

/// Phase-gate network equivalent to evolve_ising under the sign convention
/// phase = -g t.
GraphSpec ising_as_graph(int n_qubits, const CouplingMap& couplings, double time);

namespace named {
struct Star { int n_env; double phi; };
struct Diamond { int n_env; double phi; double theta; };
struct Ghz { int n; };
struct HyperentangledXi {};
struct StarExperimental {};
struct DiamondExperimental {};
struct DiamondCanonical {};
}  // namespace named

using NamedStateId = std::variant<named::Star, named::Diamond, named::Ghz, named::HyperentangledXi,
                                  named::StarExperimental, named::DiamondExperimental,
                                  named::DiamondCanonical>;

/// Kets under the encoding H, l -> 0 and V, r -> 1 in qubit order 1234:
///   hyperentangled_xi    1/2 (|00>+|11>) (x) (|01>+|10>)
///   star_experimental    (|0101> + |1010>)/sqrt2
///   diamond_experimental 1/2 [-(|00>-|11>)|01> + (|01>+|10>)|10>]
///   diamond_canonical    1/2 (-|0001> + |0110> + |1010> + |1101>)
StateVector named_state(const NamedStateId& id);

/// Parses "hyperentangled_xi", "star_experimental", "diamond_experimental",
/// "diamond_canonical" and "ghzN" (e.g. "ghz4").
NamedStateId parse_named_state(std::string_view name);
std::string to_string(const NamedStateId& id);

struct EquivalenceReport {
  double fidelity;
  bool pass;
};

/// |<b| U_circuit |a>|^2, passing at >= 1 - 1e-9. The circuit may hold only
/// single-qubit gates and Swap.
EquivalenceReport check_local_equivalence(const StateVector& a, const StateVector& b,
                                          std::span<const Gate> circuit);

/// Hadamards on every environment qubit: star graph state -> GHZ.
std::vector<Gate> star_to_ghz_circuit(int n_env);
/// H(0), X.H(1), H(2), Z.H(3) then Swap(1, 2): diamond graph -> diamond_canonical.
std::vector<Gate> diamond_to_canonical_circuit();
/// Bit flips on qubits 1 and 3: star_experimental -> GHZ4.
std::vector<Gate> star_experimental_to_ghz_circuit();

}  // namespace qdarwin::graphstate

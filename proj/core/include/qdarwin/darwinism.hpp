// System-fragment mutual information and redundancy curves.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qdarwin/qcore.hpp"

namespace qdarwin::darwinism {

using qcore::DensityMatrix;
using qcore::StateVector;

/// Ordered set of environment qubit indices.
using Fragment = std::vector<int>;

/// All C(|environment|, delta) subsets of `environment`, lexicographic.
std::vector<Fragment> enumerate_fragments(std::span<const int> environment, int delta);
/// Same with environment qubits 1..n_env (system at 0).
std::vector<Fragment> enumerate_fragments(int n_env, int delta);

/// Every qubit except `system`, ascending.
std::vector<int> environment_of(int n_qubits, int system);

/// I(S:F) = H(S) + H(F) - H(SF) in bits, clamped at 0.
double mutual_information(const StateVector& global, int system, const Fragment& fragment);
double mutual_information(const DensityMatrix& global, int system, const Fragment& fragment);

struct FragmentValue {
  Fragment fragment;
  double mi;
};

/// Per-fragment values for every fragment of size `delta`.
std::vector<FragmentValue> fragment_values(const StateVector& global, int system, int delta);
std::vector<FragmentValue> fragment_values(const DensityMatrix& global, int system, int delta);

struct CurvePoint {
  int delta = 0;
  double mean_mi = 0.0;
  double min_mi = 0.0;
  double max_mi = 0.0;
  std::size_t n_fragments = 0;
  std::optional<double> std_error;
};

struct MICurve {
  std::vector<CurvePoint> points;
  double system_entropy = 0.0;
  int n_env = 0;

  const CurvePoint& at_delta(int delta) const;
};

struct CurveOptions {
  /// When false min/max collapse onto the mean.
  bool with_minmax = true;
  /// Sizes with more fragments than this are sampled instead of enumerated.
  std::uint64_t exhaustive_limit = 1'000'000;
  std::size_t sample_size = 4096;
  std::uint64_t seed = 0x5eed;
};

/// One point per fragment size 1..n_env: mean, min and max of I(S:F) over
/// all fragments of that size. Sampled sizes report a standard error.
MICurve mi_curve(const StateVector& global, int system, const CurveOptions& options = {});
MICurve mi_curve(const DensityMatrix& global, int system, const CurveOptions& options = {});

enum class CurveShape { kPlateau, kGrowing, kOther };

std::string_view to_string(CurveShape shape);

/// plateau: system entropy above tolerance and |mean - H(S)| <= tol for
///          every delta in 1..n_env-1.
/// growing: mean increases by more than tol on at least two consecutive
///          steps.
/// Needs at least three points.
CurveShape classify_curve(const MICurve& curve, double slope_tol);

}  // namespace qdarwin::darwinism

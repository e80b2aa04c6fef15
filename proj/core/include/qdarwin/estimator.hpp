// Correlator-based analysis of the four-qubit resource: Pauli correlator
// tables, linear-inversion reconstruction, the two-branch (P, C) model of
// the star state with its closed-form mutual information, and measurement
// planning.

#pragma once

#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qdarwin/darwinism.hpp"
#include "qdarwin/qcore.hpp"

namespace qdarwin::estimator {

using qdarwin::Complex;
using qcore::DensityMatrix;
using qcore::PauliString;

inline constexpr int kResourceQubits = 4;

struct Correlator {
  double value = 0.0;
  std::optional<double> sigma;
};

class CorrelatorTable {
 public:
  /// Rejects values outside [-1-1e-9, 1+1e-9], negative sigmas, strings of
  /// the wrong length, and an identity entry that is not 1.
  void set(const PauliString& p, Correlator c);
  bool contains(const PauliString& p) const { return entries_.contains(p); }
  const Correlator& at(const PauliString& p) const;
  double value(const PauliString& p) const { return at(p).value; }
  std::size_t size() const { return entries_.size(); }
  const std::map<PauliString, Correlator>& entries() const { return entries_; }

 private:
  std::map<PauliString, Correlator> entries_;
};

/// Exact expectation values on a four-qubit state.
CorrelatorTable correlator_table(const DensityMatrix& rho, std::span<const PauliString> strings);

/// rho = 1/16 sum_p C_p p over all 256 strings. The result's physical flag
/// reflects its spectrum.
DensityMatrix reconstruct_density(const CorrelatorTable& table);

/// Two-branch model rho = P |0101><0101| + (1-P) |1010><1010|
///                        + C |0101><1010| + h.c.
struct StarParameters {
  double P = 0.0;
  Complex C{0.0, 0.0};
  std::optional<double> sigma_P;
  std::optional<double> sigma_C;
  /// Population of |0101> plus |1010>; 1 for states inside the model.
  double branch_weight = 0.0;
  bool physical = false;
};

/// The 32 strings entering P and C: signed sums over index permutations of
/// ZIII-, ZZII-, ZZZI-type Z/I strings and XXXY-, XYYY-, XXYY-type X/Y
/// strings, plus IIII, ZZZZ, XXXX and YYYY.
std::vector<PauliString> star_required_strings();

/// Population of |0101> and coherence <0101|rho|1010> from the 32 strings.
StarParameters star_parameters(const CorrelatorTable& table);

enum class BranchFormula {
  /// f+- = (1 +- sqrt(4|C|^2 + (1-2P)^2)) / 2, the eigenvalues of the
  /// 2x2 coherence block.
  kEigenvalue,
  /// f+- = (2P - 1 +- sqrt(4|C|^2 + (1-2P)^2)) / 2 with Re(f log f) taken
  /// on the complex logarithm. Kept for comparison only.
  kLiteral,
};

struct StarMiOptions {
  BranchFormula formula = BranchFormula::kEigenvalue;
  /// Clip P and f+- into [0, 1] instead of rejecting them. Used on noisy
  /// estimates where |C|^2 can slightly exceed P(1-P).
  bool clamp = false;
};

/// f+ and f- for the selected formula (before clamping).
std::pair<double, double> branch_values(const StarParameters& params,
                                        BranchFormula formula = BranchFormula::kEigenvalue);

/// Closed-form I(S:F) for fragment sizes 1, 2 and 3, in bits:
///   I1 = I2 = h(P),   I3 = 2 h(P) - H(f+, f-).
double star_mutual_information(const StarParameters& params, int delta,
                               const StarMiOptions& options = {});

/// Closed-form curve (delta = 1, 2, 3) with system entropy h(P).
darwinism::MICurve star_curve(const StarParameters& params, const StarMiOptions& options = {});

enum class PlanTarget { kStar, kFullTomography };

std::string_view to_string(PlanTarget target);
PlanTarget parse_plan_target(std::string_view text);

struct MeasurementPlan {
  PlanTarget target;
  std::vector<PauliString> correlators;
  /// Full-weight strings; each correlator is a marginal of one of them.
  std::vector<PauliString> settings;

  std::size_t n_correlators() const { return correlators.size(); }
  std::size_t n_settings() const { return settings.size(); }
  /// Settings times 2^4 outcomes; 6^4 = 1296 for full tomography.
  std::size_t n_projectors() const { return settings.size() * 16; }
};

/// True when `setting` measures every non-identity position of `correlator`
/// in the same basis, so the correlator is a marginal of its outcomes.
bool covers(const PauliString& setting, const PauliString& correlator);

MeasurementPlan plan_measurements(PlanTarget target);

/// Reconstructs, projects onto the physical set when needed, and evaluates
/// the fragment curve of the resulting state.
darwinism::MICurve diamond_mutual_information(const CorrelatorTable& table, int system,
                                              const darwinism::CurveOptions& options = {});

}  // namespace qdarwin::estimator

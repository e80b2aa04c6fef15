// Finite-statistics acquisition: multinomial sampling per measurement
// setting, correlator estimation with binomial one-sigma errors, bootstrap
// error bars on mutual-information curves, and projection of
// linear-inversion results onto the physical set.
//
// Outcome bit strings use 0 for the +1 eigenvalue and 1 for -1, qubit 0
// first.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qdarwin/darwinism.hpp"
#include "qdarwin/estimator.hpp"
#include "qdarwin/qcore.hpp"

namespace qdarwin::measurement {

using qcore::DensityMatrix;
using qcore::PauliString;
using qcore::StateVector;

struct OutcomeCounts {
  PauliString setting;
  std::uint64_t shots = 0;
  /// Indexed by outcome (qubit 0 = MSB); size 2^n.
  std::vector<std::uint64_t> counts;

  /// Throws unless the setting is full weight, counts has 2^n entries and
  /// they sum to shots > 0.
  void validate() const;
};

enum class ShotModel {
  kFixed,    // exactly shots_per_setting per setting
  kPoisson,  // Poisson-distributed total with mean shots_per_setting
};

struct RunConfig {
  /// About nine seconds of data at 500 coincidences per second.
  std::uint64_t shots_per_setting = 4500;
  std::uint64_t seed = 0;
  std::size_t bootstrap_resamples = 500;
  ShotModel shot_model = ShotModel::kFixed;

  void validate() const;
};

/// Born probabilities of the 2^n outcomes when each qubit is measured in
/// the eigenbasis of its symbol in `setting`.
std::vector<double> outcome_probabilities(const StateVector& state, const PauliString& setting);
std::vector<double> outcome_probabilities(const DensityMatrix& state, const PauliString& setting);

/// Multinomial sample. The random stream is derived from (cfg.seed,
/// setting), so the result does not depend on which other settings are
/// sampled or in what order.
OutcomeCounts sample_setting(const StateVector& state, const PauliString& setting,
                             const RunConfig& cfg);
OutcomeCounts sample_setting(const DensityMatrix& state, const PauliString& setting,
                             const RunConfig& cfg);

/// Parity estimate of `correlator` from one setting's counts, with sigma
/// sqrt((1 - c^2) / shots).
estimator::Correlator marginal_correlator(const OutcomeCounts& data,
                                          const PauliString& correlator);

/// Estimates each wanted string from every setting that covers it,
/// combining settings by inverse-variance weighting. The identity string
/// is exactly 1.
estimator::CorrelatorTable estimate_correlators(std::span<const OutcomeCounts> data,
                                                std::span<const PauliString> wanted);

/// Euclidean projection of a spectrum onto the probability simplex.
std::vector<double> project_spectrum(std::span<const double> spectrum);

/// Nearest (Frobenius) positive-semidefinite unit-trace matrix. Inputs
/// already flagged physical are returned unchanged.
DensityMatrix project_to_physical(const DensityMatrix& rho);

enum class Pipeline {
  kClosedForm,      // star plan, (P, C) model, closed-form I1..I3
  kReconstruction,  // full tomography plan, linear inversion, projection
};

std::string_view to_string(Pipeline pipeline);
Pipeline parse_pipeline(std::string_view text);

struct EstimateResult {
  darwinism::MICurve curve;  // points carry bootstrap std_error
  estimator::CorrelatorTable table;
  std::vector<OutcomeCounts> data;
  std::optional<estimator::StarParameters> star;
};

/// Plans, samples every setting, estimates and bootstraps.
EstimateResult estimate_mi_curve(const StateVector& state, int system, const RunConfig& cfg,
                                 Pipeline pipeline);
EstimateResult estimate_mi_curve(const DensityMatrix& state, int system, const RunConfig& cfg,
                                 Pipeline pipeline);

/// Same analysis on stored counts (no sampling of the state).
EstimateResult estimate_from_counts(std::vector<OutcomeCounts> data, int system,
                                    const RunConfig& cfg, Pipeline pipeline);

/// The point estimate only, without bootstrap.
darwinism::MICurve curve_from_counts(std::span<const OutcomeCounts> data, int system,
                                     Pipeline pipeline);

}  // namespace qdarwin::measurement

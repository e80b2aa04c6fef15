#include "qdarwin/measurement.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <random>
#include <string>

#include <Eigen/Eigenvalues>

#include "parallel.hpp"

namespace qdarwin::measurement {

namespace {

using qcore::Pauli;

enum class Stream : std::uint32_t { kSample = 1, kBootstrap = 2 };

std::uint64_t setting_code(const PauliString& setting) {
  std::uint64_t code = 0;
  for (Pauli p : setting.labels()) code = code * 4 + static_cast<std::uint64_t>(p);
  return code;
}

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream, std::uint64_t index,
                         const PauliString& setting) {
  const std::uint64_t code = setting_code(setting);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32), static_cast<std::uint32_t>(code),
                    static_cast<std::uint32_t>(code >> 32),
                    static_cast<std::uint32_t>(setting.n_qubits())};
  return std::mt19937_64(seq);
}

void require_full_weight(const PauliString& setting) {
  if (!setting.is_full_weight()) {
    throw ValidationError("setting " + setting.str() +
                          " contains identity symbols; sample a full-weight setting and "
                          "marginalize instead");
  }
}

// Single-qubit change of basis that maps the eigenbasis of `p` onto Z.
Eigen::Matrix2cd basis_change(Pauli p) {
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Matrix2cd m;
  switch (p) {
    case Pauli::X: m << r, r, r, -r; break;
    case Pauli::Y: m << r, Complex(0, -r), r, Complex(0, r); break;  // H S^dagger
    default: m.setIdentity(); break;
  }
  return m;
}

std::vector<double> normalize_probabilities(std::vector<double> probs) {
  for (auto& p : probs) p = std::max(p, 0.0);
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (!(total > 0.0)) {
    throw std::runtime_error("outcome distribution has zero mass");
  }
  for (auto& p : probs) p /= total;
  return probs;
}

std::vector<std::uint64_t> multinomial(std::uint64_t shots, std::span<const double> probs,
                                       std::mt19937_64& rng) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  std::size_t last = probs.size() - 1;
  while (last > 0 && probs[last] <= 0.0) --last;
  std::uint64_t remaining = shots;
  double mass = 1.0;
  for (std::size_t i = 0; i < last && remaining > 0; ++i) {
    if (probs[i] <= 0.0) {
      mass -= probs[i];
      continue;
    }
    const double p = mass > 0.0 ? std::clamp(probs[i] / mass, 0.0, 1.0) : 1.0;
    std::binomial_distribution<std::uint64_t> draw(remaining, p);
    const std::uint64_t k = draw(rng);
    counts[i] = k;
    remaining -= k;
    mass -= probs[i];
  }
  counts[last] += remaining;
  return counts;
}

std::uint64_t draw_shots(const RunConfig& cfg, std::mt19937_64& rng) {
  if (cfg.shot_model == ShotModel::kFixed) return cfg.shots_per_setting;
  std::poisson_distribution<std::uint64_t> draw(static_cast<double>(cfg.shots_per_setting));
  std::uint64_t shots = 0;
  while (shots == 0) shots = draw(rng);
  return shots;
}

template <class State>
OutcomeCounts sample_impl(const State& state, const PauliString& setting, const RunConfig& cfg) {
  cfg.validate();
  const auto probs = outcome_probabilities(state, setting);
  auto rng = make_rng(cfg.seed, Stream::kSample, 0, setting);
  const std::uint64_t shots = draw_shots(cfg, rng);
  return {setting, shots, multinomial(shots, probs, rng)};
}

OutcomeCounts resample(const OutcomeCounts& data, std::uint64_t seed, std::size_t index) {
  std::vector<double> freq(data.counts.size());
  for (std::size_t i = 0; i < freq.size(); ++i) {
    freq[i] = static_cast<double>(data.counts[i]) / static_cast<double>(data.shots);
  }
  auto rng = make_rng(seed, Stream::kBootstrap, index, data.setting);
  return {data.setting, data.shots, multinomial(data.shots, freq, rng)};
}

template <class State>
EstimateResult estimate_impl(const State& state, int system, const RunConfig& cfg,
                             Pipeline pipeline) {
  cfg.validate();
  if (state.n_qubits() != estimator::kResourceQubits) {
    throw ValidationError("estimation runs on four-qubit states");
  }
  const auto plan = estimator::plan_measurements(
      pipeline == Pipeline::kClosedForm ? estimator::PlanTarget::kStar
                                        : estimator::PlanTarget::kFullTomography);
  std::vector<OutcomeCounts> data(plan.settings.size());
  detail::parallel_for(plan.settings.size(), [&](std::size_t i) {
    data[i] = sample_impl(state, plan.settings[i], cfg);
  });
  return estimate_from_counts(std::move(data), system, cfg, pipeline);
}

}  // namespace

void OutcomeCounts::validate() const {
  require_full_weight(setting);
  if (counts.size() != (std::size_t{1} << setting.n_qubits())) {
    throw ValidationError("counts for " + setting.str() + " must cover all 2^n outcomes");
  }
  if (shots == 0) {
    throw ValidationError("shots must be positive");
  }
  const auto total = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (total != shots) {
    throw ValidationError("counts for " + setting.str() + " sum to " + std::to_string(total) +
                          ", expected " + std::to_string(shots));
  }
}

void RunConfig::validate() const {
  if (shots_per_setting == 0) throw ValidationError("shots_per_setting must be positive");
  if (bootstrap_resamples == 0) throw ValidationError("bootstrap_resamples must be positive");
}

std::vector<double> outcome_probabilities(const StateVector& state, const PauliString& setting) {
  require_full_weight(setting);
  if (setting.n_qubits() != state.n_qubits()) {
    throw ValidationError("setting length does not match the state");
  }
  StateVector rotated = state;
  for (int q = 0; q < state.n_qubits(); ++q) {
    const Pauli p = setting[static_cast<std::size_t>(q)];
    if (p == Pauli::Z) continue;
    rotated = qcore::apply_gate(rotated, qcore::Gate::single_qubit(q, basis_change(p)));
  }
  std::vector<double> probs(rotated.dim());
  for (std::size_t i = 0; i < probs.size(); ++i) probs[i] = std::norm(rotated[i]);
  return normalize_probabilities(std::move(probs));
}

std::vector<double> outcome_probabilities(const DensityMatrix& state, const PauliString& setting) {
  require_full_weight(setting);
  if (setting.n_qubits() != state.n_qubits()) {
    throw ValidationError("setting length does not match the state");
  }
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Identity(1, 1);
  for (Pauli p : setting.labels()) {
    const Eigen::Matrix2cd b = basis_change(p);
    Eigen::MatrixXcd next(u.rows() * 2, u.cols() * 2);
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = u(i, j) * b;
    }
    u = std::move(next);
  }
  const Eigen::MatrixXcd rotated = u * state.entries() * u.adjoint();
  std::vector<double> probs(state.dim());
  for (std::size_t i = 0; i < probs.size(); ++i) {
    probs[i] = rotated(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return normalize_probabilities(std::move(probs));
}

OutcomeCounts sample_setting(const StateVector& state, const PauliString& setting,
                             const RunConfig& cfg) {
  return sample_impl(state, setting, cfg);
}

OutcomeCounts sample_setting(const DensityMatrix& state, const PauliString& setting,
                             const RunConfig& cfg) {
  return sample_impl(state, setting, cfg);
}

estimator::Correlator marginal_correlator(const OutcomeCounts& data,
                                          const PauliString& correlator) {
  if (!estimator::covers(data.setting, correlator)) {
    throw ValidationError("setting " + data.setting.str() + " does not cover " +
                          correlator.str());
  }
  const std::uint64_t support = correlator.support_mask();
  std::int64_t signed_sum = 0;
  for (std::uint64_t o = 0; o < data.counts.size(); ++o) {
    const auto c = static_cast<std::int64_t>(data.counts[o]);
    signed_sum += (std::popcount(o & support) % 2 == 0) ? c : -c;
  }
  const double shots = static_cast<double>(data.shots);
  const double value = static_cast<double>(signed_sum) / shots;
  return {value, std::sqrt(std::max(0.0, 1.0 - value * value) / shots)};
}

estimator::CorrelatorTable estimate_correlators(std::span<const OutcomeCounts> data,
                                                std::span<const PauliString> wanted) {
  for (const auto& d : data) d.validate();
  estimator::CorrelatorTable table;
  for (const auto& w : wanted) {
    if (w.is_identity()) {
      table.set(w, {1.0, 0.0});
      continue;
    }
    std::vector<estimator::Correlator> found;
    for (const auto& d : data) {
      if (estimator::covers(d.setting, w)) found.push_back(marginal_correlator(d, w));
    }
    if (found.empty()) {
      throw ValidationError("no measured setting covers " + w.str());
    }
    if (found.size() == 1) {
      table.set(w, found.front());
      continue;
    }
    // Zero-variance estimates (parity constant on every shot) dominate any
    // weighted average; average just those.
    const auto exact = std::count_if(found.begin(), found.end(),
                                     [](const auto& c) { return *c.sigma == 0.0; });
    double value = 0.0;
    double sigma = 0.0;
    if (exact > 0) {
      for (const auto& c : found) {
        if (*c.sigma == 0.0) value += c.value;
      }
      value /= static_cast<double>(exact);
    } else {
      double weight_sum = 0.0;
      for (const auto& c : found) {
        const double w_i = 1.0 / (*c.sigma * *c.sigma);
        value += w_i * c.value;
        weight_sum += w_i;
      }
      value /= weight_sum;
      sigma = std::sqrt(1.0 / weight_sum);
    }
    table.set(w, {value, sigma});
  }
  return table;
}

std::vector<double> project_spectrum(std::span<const double> spectrum) {
  if (spectrum.empty()) return {};
  std::vector<double> sorted(spectrum.begin(), spectrum.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  double prefix = 0.0;
  double shift = 0.0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    prefix += sorted[k];
    const double candidate = (prefix - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) shift = candidate;
  }
  std::vector<double> out(spectrum.size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) out[i] = std::max(spectrum[i] - shift, 0.0);
  return out;
}

DensityMatrix project_to_physical(const DensityMatrix& rho) {
  if (rho.physical()) return rho;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho.entries());
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver failed during physical projection");
  }
  const Eigen::VectorXd& ev = es.eigenvalues();
  const auto projected = project_spectrum(std::span<const double>(ev.data(), ev.size()));
  const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(projected.data(), ev.size());
  Eigen::MatrixXcd out = es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  out /= out.trace().real();
  return DensityMatrix(std::move(out), true);
}

std::string_view to_string(Pipeline pipeline) {
  return pipeline == Pipeline::kClosedForm ? "closed_form" : "reconstruction";
}

Pipeline parse_pipeline(std::string_view text) {
  if (text == "closed_form") return Pipeline::kClosedForm;
  if (text == "reconstruction") return Pipeline::kReconstruction;
  throw ValidationError("unknown pipeline '" + std::string(text) + "'");
}

namespace {

struct PointEstimate {
  estimator::CorrelatorTable table;
  std::optional<estimator::StarParameters> star;
  darwinism::MICurve curve;
};

PointEstimate point_estimate(std::span<const OutcomeCounts> data, int system, Pipeline pipeline) {
  PointEstimate out;
  if (pipeline == Pipeline::kClosedForm) {
    if (system != 0) {
      throw ValidationError("the closed-form pipeline analyses system qubit 0");
    }
    out.table = estimate_correlators(data, estimator::star_required_strings());
    out.star = estimator::star_parameters(out.table);
    out.curve = estimator::star_curve(*out.star, {.clamp = true});
  } else {
    out.table = estimate_correlators(data, qcore::all_pauli_strings(estimator::kResourceQubits));
    out.curve = estimator::diamond_mutual_information(out.table, system);
  }
  return out;
}

}  // namespace

darwinism::MICurve curve_from_counts(std::span<const OutcomeCounts> data, int system,
                                     Pipeline pipeline) {
  return point_estimate(data, system, pipeline).curve;
}

EstimateResult estimate_from_counts(std::vector<OutcomeCounts> data, int system,
                                    const RunConfig& cfg, Pipeline pipeline) {
  cfg.validate();
  for (const auto& d : data) {
    d.validate();
    if (d.setting.n_qubits() != estimator::kResourceQubits) {
      throw ValidationError("estimation runs on four-qubit settings");
    }
  }
  auto point = point_estimate(data, system, pipeline);
  EstimateResult result;
  result.table = std::move(point.table);
  result.star = point.star;
  result.curve = std::move(point.curve);

  const std::size_t n_points = result.curve.points.size();
  std::vector<std::vector<double>> boot(cfg.bootstrap_resamples);
  detail::parallel_for(cfg.bootstrap_resamples, [&](std::size_t b) {
    std::vector<OutcomeCounts> replica;
    replica.reserve(data.size());
    for (const auto& d : data) replica.push_back(resample(d, cfg.seed, b));
    const auto curve = curve_from_counts(replica, system, pipeline);
    boot[b].reserve(n_points);
    for (const auto& p : curve.points) boot[b].push_back(p.mean_mi);
  });

  for (std::size_t k = 0; k < n_points; ++k) {
    std::vector<double> vals(boot.size());
    for (std::size_t b = 0; b < boot.size(); ++b) vals[b] = boot[b][k];
    const double mean = detail::pairwise_sum(vals.data(), vals.size()) /
                        static_cast<double>(vals.size());
    for (auto& v : vals) v = (v - mean) * (v - mean);
    const double denom = vals.size() > 1 ? static_cast<double>(vals.size() - 1) : 1.0;
    result.curve.points[k].std_error =
        std::sqrt(detail::pairwise_sum(vals.data(), vals.size()) / denom);
  }
  result.data = std::move(data);
  return result;
}

EstimateResult estimate_mi_curve(const StateVector& state, int system, const RunConfig& cfg,
                                 Pipeline pipeline) {
  return estimate_impl(state, system, cfg, pipeline);
}

EstimateResult estimate_mi_curve(const DensityMatrix& state, int system, const RunConfig& cfg,
                                 Pipeline pipeline) {
  return estimate_impl(state, system, cfg, pipeline);
}

}  // namespace qdarwin::measurement

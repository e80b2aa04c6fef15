#include "qdarwin/estimator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <string>

#include "qdarwin/measurement.hpp"

namespace qdarwin::estimator {

namespace {

using qcore::Pauli;

constexpr double kRangeSlack = 1e-9;
constexpr int kN = kResourceQubits;

// Bits of the two computational branches, qubit 0 first.
constexpr unsigned kBranchA = 0b0101;  // weighted by P
constexpr unsigned kBranchB = 0b1010;

PauliString string_from_masks(unsigned z_mask, unsigned y_mask, bool xy_family) {
  std::vector<Pauli> labels(kN, Pauli::I);
  for (int q = 0; q < kN; ++q) {
    const unsigned bit = 1U << (kN - 1 - q);
    if (xy_family) {
      labels[static_cast<std::size_t>(q)] = (y_mask & bit) ? Pauli::Y : Pauli::X;
    } else if (z_mask & bit) {
      labels[static_cast<std::size_t>(q)] = Pauli::Z;
    }
  }
  return PauliString(std::move(labels));
}

// <b| Z_A |b> for branch bits b and support A.
int z_sign(unsigned branch, unsigned support) {
  return std::popcount(branch & support) % 2 == 0 ? 1 : -1;
}

double binary_entropy_term(double p) {
  return p <= 1e-12 ? 0.0 : -p * std::log2(p);
}

void require_in_unit_interval(double v, const char* what) {
  if (v < -kRangeSlack || v > 1.0 + kRangeSlack) {
    throw ValidationError(std::string(what) + " = " + std::to_string(v) +
                          " lies outside [0, 1]; input is inconsistent with the two-branch model");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// CorrelatorTable

void CorrelatorTable::set(const PauliString& p, Correlator c) {
  if (p.n_qubits() != kN) {
    throw ValidationError("correlator strings must have four symbols, got '" + p.str() + "'");
  }
  if (!std::isfinite(c.value) || c.value < -1.0 - kRangeSlack || c.value > 1.0 + kRangeSlack) {
    throw ValidationError("correlator " + p.str() + " = " + std::to_string(c.value) +
                          " outside [-1, 1]");
  }
  if (c.sigma && !(*c.sigma >= 0.0)) {
    throw ValidationError("correlator " + p.str() + " has a negative sigma");
  }
  if (p.is_identity()) {
    const double tol = c.sigma ? std::max(*c.sigma, kRangeSlack) : kRangeSlack;
    if (std::abs(c.value - 1.0) > tol) {
      throw ValidationError("identity correlator must equal 1");
    }
  }
  entries_[p] = c;
}

const Correlator& CorrelatorTable::at(const PauliString& p) const {
  const auto it = entries_.find(p);
  if (it == entries_.end()) {
    throw ValidationError("correlator table is missing " + p.str());
  }
  return it->second;
}

CorrelatorTable correlator_table(const DensityMatrix& rho, std::span<const PauliString> strings) {
  if (rho.n_qubits() != kN) {
    throw ValidationError("correlator tables are defined on four-qubit states");
  }
  CorrelatorTable table;
  for (const auto& p : strings) {
    table.set(p, {qcore::pauli_expectation(rho, p), std::nullopt});
  }
  return table;
}

DensityMatrix reconstruct_density(const CorrelatorTable& table) {
  const auto all = qcore::all_pauli_strings(kN);
  std::size_t missing = 0;
  for (const auto& p : all) missing += table.contains(p) ? 0 : 1;
  if (missing > 0) {
    throw ValidationError("reconstruction needs all 256 correlators; " + std::to_string(missing) +
                          " missing");
  }
  // Each Pauli string contributes c/16 on the entries (j ^ flip, j); summing
  // its matrix is cheaper than a dense 16x16 product per string.
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(16, 16);
  for (const auto& p : all) {
    const double c = table.value(p);
    if (c == 0.0) continue;
    rho += (c / 16.0) * qcore::pauli_matrix(p);
  }
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix::checked(std::move(rho));
}

// ---------------------------------------------------------------------------
// Two-branch model

std::vector<PauliString> star_required_strings() {
  std::vector<PauliString> out;
  out.reserve(32);
  for (unsigned support = 0; support < 16; ++support) {
    out.push_back(string_from_masks(support, 0, false));
  }
  for (unsigned y_mask = 0; y_mask < 16; ++y_mask) {
    out.push_back(string_from_masks(0, y_mask, true));
  }
  return out;
}

StarParameters star_parameters(const CorrelatorTable& table) {
  StarParameters out;

  // Projectors on the two branches, |b><b| = prod_q (I + (-1)^{b_q} Z_q)/2,
  // expanded over the Z/I strings.
  double p_sum = 0.0;
  double q_sum = 0.0;
  double p_var = 0.0;
  double even_var = 0.0;
  bool have_sigmas = true;
  for (unsigned support = 0; support < 16; ++support) {
    const auto& c = table.at(string_from_masks(support, 0, false));
    p_sum += z_sign(kBranchA, support) * c.value;
    q_sum += z_sign(kBranchB, support) * c.value;
    if (c.sigma) {
      p_var += *c.sigma * *c.sigma;
      if (std::popcount(support) % 2 == 0) even_var += *c.sigma * *c.sigma;
    } else {
      have_sigmas = false;
    }
  }
  out.P = p_sum / 16.0;
  out.branch_weight = (p_sum + q_sum) / 16.0;

  // C = <0101| rho |1010> = tr(rho |1010><0101|). On each qubit
  // |1><0| = (X - iY)/2 and |0><1| = (X + iY)/2, so the operator expands to
  // 1/16 sum_A i^{|A|} t_A X_{not A} Y_A with t_q = -1 where the ket bit is 1.
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  Complex c_sum = 0.0;
  double c_var = 0.0;
  for (unsigned y_mask = 0; y_mask < 16; ++y_mask) {
    const auto& c = table.at(string_from_masks(0, y_mask, true));
    const int t = z_sign(kBranchB, y_mask);
    c_sum += kIPowers[std::popcount(y_mask) % 4] * static_cast<double>(t) * c.value;
    if (c.sigma) {
      c_var += *c.sigma * *c.sigma;
    } else {
      have_sigmas = false;
    }
  }
  out.C = c_sum / 16.0;

  double weight_tol = kRangeSlack;
  double p_tol = kRangeSlack;
  if (have_sigmas) {
    out.sigma_P = std::sqrt(p_var) / 16.0;
    out.sigma_C = std::sqrt(c_var) / 16.0;
    weight_tol = std::max(weight_tol, 3.0 * 2.0 * std::sqrt(even_var) / 16.0);
    p_tol = std::max(p_tol, 3.0 * *out.sigma_P);
  }
  out.physical = std::abs(out.branch_weight - 1.0) <= weight_tol && out.P >= -p_tol &&
                 out.P <= 1.0 + p_tol;
  return out;
}

std::pair<double, double> branch_values(const StarParameters& params, BranchFormula formula) {
  const double P = params.P;
  const double root = std::sqrt(4.0 * std::norm(params.C) + (1.0 - 2.0 * P) * (1.0 - 2.0 * P));
  const double centre = formula == BranchFormula::kEigenvalue ? 1.0 : 2.0 * P - 1.0;
  return {(centre + root) / 2.0, (centre - root) / 2.0};
}

double star_mutual_information(const StarParameters& params, int delta,
                               const StarMiOptions& options) {
  if (delta < 1 || delta > 3) {
    throw ValidationError("closed-form mutual information is defined for fragment sizes 1..3");
  }
  double P = params.P;
  if (options.clamp) {
    P = std::clamp(P, 0.0, 1.0);
  } else if (options.formula == BranchFormula::kEigenvalue) {
    require_in_unit_interval(P, "P");
  }
  const double h_p = binary_entropy_term(P) + binary_entropy_term(1.0 - P);
  if (delta < 3) return h_p;

  StarParameters used = params;
  used.P = P;
  auto [f_plus, f_minus] = branch_values(used, options.formula);

  if (options.formula == BranchFormula::kLiteral) {
    // Re(f log f) on the principal complex logarithm is f log|f|.
    auto re_flogf = [](double f) { return std::abs(f) <= 1e-12 ? 0.0 : f * std::log2(std::abs(f)); };
    return re_flogf(f_plus) + re_flogf(f_minus) + 2.0 * h_p;
  }

  if (options.clamp) {
    f_minus = std::clamp(f_minus, 0.0, 1.0);
    f_plus = 1.0 - f_minus;
  } else {
    require_in_unit_interval(f_plus, "f+");
    require_in_unit_interval(f_minus, "f-");
  }
  const double h_f = binary_entropy_term(f_plus) + binary_entropy_term(f_minus);
  return std::max(0.0, 2.0 * h_p - h_f);
}

darwinism::MICurve star_curve(const StarParameters& params, const StarMiOptions& options) {
  darwinism::MICurve curve;
  curve.n_env = 3;
  const double P = options.clamp ? std::clamp(params.P, 0.0, 1.0) : params.P;
  curve.system_entropy = binary_entropy_term(P) + binary_entropy_term(1.0 - P);
  static constexpr std::size_t kFragments[3] = {3, 3, 1};
  for (int delta = 1; delta <= 3; ++delta) {
    darwinism::CurvePoint p;
    p.delta = delta;
    p.mean_mi = p.min_mi = p.max_mi = star_mutual_information(params, delta, options);
    p.n_fragments = kFragments[delta - 1];
    curve.points.push_back(p);
  }
  return curve;
}

// ---------------------------------------------------------------------------
// Measurement planning

std::string_view to_string(PlanTarget target) {
  return target == PlanTarget::kStar ? "star" : "full_tomography";
}

PlanTarget parse_plan_target(std::string_view text) {
  if (text == "star") return PlanTarget::kStar;
  if (text == "full_tomography") return PlanTarget::kFullTomography;
  throw ValidationError("unknown plan target '" + std::string(text) + "'");
}

bool covers(const PauliString& setting, const PauliString& correlator) {
  if (setting.n_qubits() != correlator.n_qubits() || !setting.is_full_weight()) return false;
  for (int q = 0; q < setting.n_qubits(); ++q) {
    const auto c = correlator[static_cast<std::size_t>(q)];
    if (c != Pauli::I && c != setting[static_cast<std::size_t>(q)]) return false;
  }
  return true;
}

MeasurementPlan plan_measurements(PlanTarget target) {
  MeasurementPlan plan{target, {}, {}};
  if (target == PlanTarget::kStar) {
    plan.correlators = star_required_strings();
  } else {
    for (auto& p : qcore::all_pauli_strings(kN)) {
      if (!p.is_identity()) plan.correlators.push_back(std::move(p));
    }
  }
  // Each correlator is measured in the setting obtained by filling its
  // identity slots with Z; deduplicate in first-use order.
  std::set<PauliString> seen;
  for (const auto& c : plan.correlators) {
    std::vector<Pauli> labels(c.labels().begin(), c.labels().end());
    for (auto& l : labels) {
      if (l == Pauli::I) l = Pauli::Z;
    }
    PauliString setting(std::move(labels));
    if (seen.insert(setting).second) plan.settings.push_back(std::move(setting));
  }
  return plan;
}

darwinism::MICurve diamond_mutual_information(const CorrelatorTable& table, int system,
                                              const darwinism::CurveOptions& options) {
  DensityMatrix rho = reconstruct_density(table);
  if (!rho.physical()) rho = measurement::project_to_physical(rho);
  return darwinism::mi_curve(rho, system, options);
}

}  // namespace qdarwin::estimator

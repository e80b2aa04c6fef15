#include "qdarwin/darwinism.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "parallel.hpp"

namespace qdarwin::darwinism {

namespace {

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) {
    const auto num = static_cast<std::uint64_t>(n - k + i);
    if (r > std::numeric_limits<std::uint64_t>::max() / num) {
      return std::numeric_limits<std::uint64_t>::max();
    }
    r = r * num / static_cast<std::uint64_t>(i);
  }
  return r;
}

void validate_fragment(int n_qubits, int system, const Fragment& fragment) {
  if (system < 0 || system >= n_qubits) {
    throw ValidationError("system index " + std::to_string(system) + " out of range");
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_qubits), false);
  for (int q : fragment) {
    if (q < 0 || q >= n_qubits) {
      throw ValidationError("fragment index " + std::to_string(q) + " out of range");
    }
    if (q == system) {
      throw ValidationError("fragment contains the system qubit");
    }
    if (seen[static_cast<std::size_t>(q)]) {
      throw ValidationError("fragment lists qubit " + std::to_string(q) + " twice");
    }
    seen[static_cast<std::size_t>(q)] = true;
  }
}

template <class State>
double mi_given_system_entropy(const State& global, int system, const Fragment& fragment,
                               double h_system) {
  if (fragment.empty()) return 0.0;
  Fragment joint;
  joint.reserve(fragment.size() + 1);
  joint.push_back(system);
  joint.insert(joint.end(), fragment.begin(), fragment.end());
  const double h_fragment = qcore::subsystem_entropy(global, fragment);
  const double h_joint = qcore::subsystem_entropy(global, joint);
  return std::max(0.0, h_system + h_fragment - h_joint);
}

template <class State>
double mi_impl(const State& global, int system, const Fragment& fragment) {
  validate_fragment(global.n_qubits(), system, fragment);
  const int s[1] = {system};
  return mi_given_system_entropy(global, system, fragment, qcore::subsystem_entropy(global, s));
}

template <class State>
std::vector<FragmentValue> values_impl(const State& global, int system, int delta) {
  const auto env = environment_of(global.n_qubits(), system);
  auto fragments = enumerate_fragments(env, delta);
  const int s[1] = {system};
  const double h_system = qcore::subsystem_entropy(global, s);
  std::vector<FragmentValue> out(fragments.size());
  detail::parallel_for(fragments.size(), [&](std::size_t i) {
    out[i] = {fragments[i], mi_given_system_entropy(global, system, fragments[i], h_system)};
  });
  return out;
}

Fragment random_fragment(std::span<const int> environment, int delta, std::mt19937_64& rng) {
  Fragment f;
  f.reserve(static_cast<std::size_t>(delta));
  std::sample(environment.begin(), environment.end(), std::back_inserter(f), delta, rng);
  return f;
}

template <class State>
MICurve curve_impl(const State& global, int system, const CurveOptions& options) {
  const int n = global.n_qubits();
  if (system < 0 || system >= n) {
    throw ValidationError("system index " + std::to_string(system) + " out of range");
  }
  if (n < 2) {
    throw ValidationError("a curve needs at least one environment qubit");
  }
  const auto env = environment_of(n, system);
  const int n_env = static_cast<int>(env.size());
  const int s[1] = {system};

  MICurve curve;
  curve.n_env = n_env;
  curve.system_entropy = qcore::subsystem_entropy(global, s);

  for (int delta = 1; delta <= n_env; ++delta) {
    const bool sampled = binomial(n_env, delta) > options.exhaustive_limit;
    std::vector<Fragment> fragments;
    if (sampled) {
      std::mt19937_64 rng(options.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(delta)));
      fragments.reserve(options.sample_size);
      for (std::size_t i = 0; i < options.sample_size; ++i) {
        fragments.push_back(random_fragment(env, delta, rng));
      }
    } else {
      fragments = enumerate_fragments(env, delta);
    }

    std::vector<double> values(fragments.size());
    detail::parallel_for(fragments.size(), [&](std::size_t i) {
      values[i] = mi_given_system_entropy(global, system, fragments[i], curve.system_entropy);
    });

    CurvePoint p;
    p.delta = delta;
    p.n_fragments = values.size();
    p.mean_mi = detail::pairwise_sum(values.data(), values.size()) /
                static_cast<double>(values.size());
    if (options.with_minmax) {
      const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
      p.min_mi = *lo;
      p.max_mi = *hi;
    } else {
      p.min_mi = p.max_mi = p.mean_mi;
    }
    if (sampled && values.size() > 1) {
      std::vector<double> sq(values.size());
      for (std::size_t i = 0; i < values.size(); ++i) {
        sq[i] = (values[i] - p.mean_mi) * (values[i] - p.mean_mi);
      }
      const double var = detail::pairwise_sum(sq.data(), sq.size()) /
                         static_cast<double>(values.size() - 1);
      p.std_error = std::sqrt(var / static_cast<double>(values.size()));
    }
    curve.points.push_back(p);
  }
  return curve;
}

}  // namespace

std::vector<Fragment> enumerate_fragments(std::span<const int> environment, int delta) {
  const int n = static_cast<int>(environment.size());
  if (delta < 0 || delta > n) {
    throw ValidationError("fragment size " + std::to_string(delta) + " outside [0, " +
                          std::to_string(n) + "]");
  }
  std::vector<Fragment> out;
  out.reserve(static_cast<std::size_t>(std::min<std::uint64_t>(binomial(n, delta), 1u << 20)));
  std::vector<int> idx(static_cast<std::size_t>(delta));
  for (int i = 0; i < delta; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    Fragment f;
    f.reserve(idx.size());
    for (int i : idx) f.push_back(environment[static_cast<std::size_t>(i)]);
    out.push_back(std::move(f));
    // advance to the next combination in lexicographic order
    int pos = delta - 1;
    while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == n - delta + pos) --pos;
    if (pos < 0) break;
    ++idx[static_cast<std::size_t>(pos)];
    for (int j = pos + 1; j < delta; ++j) {
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

std::vector<Fragment> enumerate_fragments(int n_env, int delta) {
  if (n_env < 0) throw ValidationError("negative environment size");
  std::vector<int> env(static_cast<std::size_t>(n_env));
  for (int i = 0; i < n_env; ++i) env[static_cast<std::size_t>(i)] = i + 1;
  return enumerate_fragments(env, delta);
}

std::vector<int> environment_of(int n_qubits, int system) {
  std::vector<int> env;
  for (int q = 0; q < n_qubits; ++q) {
    if (q != system) env.push_back(q);
  }
  return env;
}

double mutual_information(const StateVector& global, int system, const Fragment& fragment) {
  return mi_impl(global, system, fragment);
}

double mutual_information(const DensityMatrix& global, int system, const Fragment& fragment) {
  return mi_impl(global, system, fragment);
}

std::vector<FragmentValue> fragment_values(const StateVector& global, int system, int delta) {
  return values_impl(global, system, delta);
}

std::vector<FragmentValue> fragment_values(const DensityMatrix& global, int system, int delta) {
  return values_impl(global, system, delta);
}

const CurvePoint& MICurve::at_delta(int delta) const {
  for (const auto& p : points) {
    if (p.delta == delta) return p;
  }
  throw ValidationError("curve has no point at delta " + std::to_string(delta));
}

MICurve mi_curve(const StateVector& global, int system, const CurveOptions& options) {
  return curve_impl(global, system, options);
}

MICurve mi_curve(const DensityMatrix& global, int system, const CurveOptions& options) {
  return curve_impl(global, system, options);
}

std::string_view to_string(CurveShape shape) {
  switch (shape) {
    case CurveShape::kPlateau: return "plateau";
    case CurveShape::kGrowing: return "growing";
    case CurveShape::kOther: return "other";
  }
  return "other";
}

CurveShape classify_curve(const MICurve& curve, double slope_tol) {
  if (curve.points.size() < 3) {
    throw ValidationError("classification needs at least three curve points");
  }
  if (!(slope_tol >= 0.0)) {
    throw ValidationError("slope tolerance must be nonnegative");
  }
  bool plateau = curve.system_entropy > slope_tol;
  for (const auto& p : curve.points) {
    if (p.delta >= 1 && p.delta <= curve.n_env - 1 &&
        std::abs(p.mean_mi - curve.system_entropy) > slope_tol) {
      plateau = false;
    }
  }
  if (plateau) return CurveShape::kPlateau;

  int run = 0;
  for (std::size_t i = 1; i < curve.points.size(); ++i) {
    const auto& prev = curve.points[i - 1];
    const auto& cur = curve.points[i];
    if (prev.delta < 1) continue;
    if (cur.mean_mi - prev.mean_mi > slope_tol) {
      if (++run >= 2) return CurveShape::kGrowing;
    } else {
      run = 0;
    }
  }
  return CurveShape::kOther;
}

}  // namespace qdarwin::darwinism

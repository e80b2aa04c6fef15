#include "qdarwin/serialization.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qdarwin::io {

namespace {

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ValidationError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("field '") + key + "': " + e.what());
  }
}

std::string bits_of(std::uint64_t value, int width) {
  std::string s(static_cast<std::size_t>(width), '0');
  for (int i = 0; i < width; ++i) {
    if ((value >> (width - 1 - i)) & 1U) s[static_cast<std::size_t>(i)] = '1';
  }
  return s;
}

}  // namespace

std::string format_number(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 12);
  if (res.ec != std::errc()) throw std::runtime_error("number formatting failed");
  return std::string(buf, res.ptr);
}

json to_json(const qcore::StateVector& state) {
  json amps = json::array();
  for (const auto& a : state.amplitudes()) amps.push_back({a.real(), a.imag()});
  return {{"n_qubits", state.n_qubits()}, {"amplitudes", std::move(amps)}};
}

qcore::StateVector state_from_json(const json& j) {
  const int n = field<int>(j, "n_qubits");
  const auto raw = field<std::vector<std::vector<double>>>(j, "amplitudes");
  std::vector<Complex> amps;
  amps.reserve(raw.size());
  for (const auto& pair : raw) {
    if (pair.size() != 2) throw ValidationError("amplitudes must be [re, im] pairs");
    amps.emplace_back(pair[0], pair[1]);
  }
  return qcore::StateVector(n, std::move(amps));
}

json to_json(const graphstate::GraphSpec& spec) {
  json edges = json::array();
  for (const auto& e : spec.edges()) edges.push_back({e.a, e.b, e.phase});
  return {{"n_qubits", spec.n_qubits()}, {"system", spec.system()}, {"edges", std::move(edges)}};
}

graphstate::GraphSpec graph_spec_from_json(const json& j) {
  const int n = field<int>(j, "n_qubits");
  const int system = j.contains("system") ? field<int>(j, "system") : 0;
  std::vector<graphstate::Edge> edges;
  for (const auto& e : field<json>(j, "edges")) {
    if (!e.is_array() || e.size() != 3) {
      throw ValidationError("edges must be [j, k, phase] triples");
    }
    edges.push_back({e[0].get<int>(), e[1].get<int>(), e[2].get<double>()});
  }
  return graphstate::GraphSpec(n, system, std::move(edges));
}

json to_json(const estimator::CorrelatorTable& table) {
  json entries = json::array();
  for (const auto& [p, c] : table.entries()) {
    json e = {{"string", p.str()}, {"value", c.value}};
    if (c.sigma) e["sigma"] = *c.sigma;
    entries.push_back(std::move(e));
  }
  return {{"entries", std::move(entries)}};
}

estimator::CorrelatorTable correlator_table_from_json(const json& j) {
  estimator::CorrelatorTable table;
  for (const auto& e : field<json>(j, "entries")) {
    estimator::Correlator c{field<double>(e, "value"), std::nullopt};
    if (e.contains("sigma") && !e["sigma"].is_null()) c.sigma = e["sigma"].get<double>();
    table.set(qcore::PauliString::parse(field<std::string>(e, "string")), c);
  }
  return table;
}

json to_json(const estimator::MeasurementPlan& plan) {
  json correlators = json::array();
  for (const auto& p : plan.correlators) correlators.push_back(p.str());
  json settings = json::array();
  for (const auto& p : plan.settings) settings.push_back(p.str());
  return {{"target", std::string(estimator::to_string(plan.target))},
          {"correlators", std::move(correlators)},
          {"settings", std::move(settings)},
          {"counts",
           {{"n_correlators", plan.n_correlators()},
            {"n_settings", plan.n_settings()},
            {"n_projectors", plan.n_projectors()}}}};
}

json to_json(const measurement::OutcomeCounts& counts) {
  json c = json::object();
  const int n = counts.setting.n_qubits();
  for (std::uint64_t o = 0; o < counts.counts.size(); ++o) {
    c[bits_of(o, n)] = counts.counts[o];
  }
  return {{"setting", counts.setting.str()}, {"shots", counts.shots}, {"counts", std::move(c)}};
}

measurement::OutcomeCounts outcome_counts_from_json(const json& j) {
  measurement::OutcomeCounts out;
  out.setting = qcore::PauliString::parse(field<std::string>(j, "setting"));
  out.shots = field<std::uint64_t>(j, "shots");
  const int n = out.setting.n_qubits();
  out.counts.assign(std::size_t{1} << n, 0);
  const auto counts = field<json>(j, "counts");
  for (const auto& [key, value] : counts.items()) {
    if (static_cast<int>(key.size()) != n ||
        key.find_first_not_of("01") != std::string::npos) {
      throw ValidationError("outcome key '" + key + "' is not a " + std::to_string(n) +
                            "-bit string");
    }
    out.counts[std::stoull(key, nullptr, 2)] = value.get<std::uint64_t>();
  }
  out.validate();
  return out;
}

std::vector<measurement::OutcomeCounts> outcome_counts_list_from_json(const json& j) {
  std::vector<measurement::OutcomeCounts> out;
  if (j.is_array()) {
    for (const auto& e : j) out.push_back(outcome_counts_from_json(e));
  } else {
    out.push_back(outcome_counts_from_json(j));
  }
  return out;
}

json to_json(const darwinism::MICurve& curve) {
  json points = json::array();
  for (const auto& p : curve.points) {
    json e = {{"delta", p.delta},
              {"mean_mi", p.mean_mi},
              {"min_mi", p.min_mi},
              {"max_mi", p.max_mi},
              {"n_fragments", p.n_fragments}};
    e["stderr"] = p.std_error ? json(*p.std_error) : json(nullptr);
    points.push_back(std::move(e));
  }
  return {{"system_entropy", curve.system_entropy},
          {"n_env", curve.n_env},
          {"points", std::move(points)}};
}

std::string to_csv(const darwinism::MICurve& curve) {
  std::string out = "delta,mean_mi,min_mi,max_mi,n_fragments,stderr\n";
  for (const auto& p : curve.points) {
    out += std::to_string(p.delta);
    out += ',' + format_number(p.mean_mi);
    out += ',' + format_number(p.min_mi);
    out += ',' + format_number(p.max_mi);
    out += ',' + std::to_string(p.n_fragments);
    out += ',';
    if (p.std_error) out += format_number(*p.std_error);
    out += '\n';
  }
  return out;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace qdarwin::io

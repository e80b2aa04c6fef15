#include "cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "qdarwin/darwinism.hpp"
#include "qdarwin/estimator.hpp"
#include "qdarwin/graphstate.hpp"
#include "qdarwin/measurement.hpp"
#include "qdarwin/serialization.hpp"

#ifndef QDARWIN_VERSION_STRING
#define QDARWIN_VERSION_STRING "0.0.0"
#endif

namespace qdarwin::cli {

namespace {

using nlohmann::json;
using Parameters = std::map<std::string, std::string>;

// Flags shared by every subcommand that needs a state.
struct StateSource {
  std::string family;
  std::string named;
  std::string graph_file;
  int n_env = 0;
  std::string phi = "pi";
  std::string theta;
};

struct Loaded {
  qcore::StateVector state;
  int system;
  std::optional<graphstate::GraphSpec> graph;
  std::string description;
};

void add_source_flags(CLI::App* cmd, StateSource& src) {
  cmd->add_option("--family", src.family, "Graph family")
      ->check(CLI::IsMember({"star", "diamond"}));
  cmd->add_option("--named", src.named,
                  "Fixed state: hyperentangled_xi, star_experimental, diamond_experimental, "
                  "diamond_canonical, ghzN");
  cmd->add_option("--graph-file", src.graph_file, "GraphSpec JSON file");
  cmd->add_option("--n-env", src.n_env, "Number of environment qubits");
  cmd->add_option("--phi", src.phi, "System-environment phase (radians, 'pi' accepted)");
  cmd->add_option("--theta", src.theta, "Environment chain phase (diamond only)");
}

void record_source(const StateSource& src, Parameters& params) {
  if (!src.family.empty()) {
    params["family"] = src.family;
    params["n_env"] = std::to_string(src.n_env);
    params["phi"] = src.phi;
    if (!src.theta.empty()) params["theta"] = src.theta;
  }
  if (!src.named.empty()) params["named"] = src.named;
  if (!src.graph_file.empty()) params["graph_file"] = src.graph_file;
}

Loaded load_state(const StateSource& src, const CLI::App& cmd) {
  const int chosen = int{!src.family.empty()} + int{!src.named.empty()} +
                     int{!src.graph_file.empty()};
  if (chosen != 1) {
    throw ValidationError("choose exactly one of --family, --named, --graph-file");
  }
  const bool family_flags_used =
      cmd.count("--n-env") > 0 || cmd.count("--phi") > 0 || cmd.count("--theta") > 0;
  if (src.family.empty() && family_flags_used) {
    throw ValidationError("--n-env, --phi and --theta apply only with --family");
  }

  if (!src.graph_file.empty()) {
    auto spec = io::graph_spec_from_json(io::read_json_file(src.graph_file));
    auto state = graphstate::build_graph_state(spec);
    const int system = spec.system();
    return {std::move(state), system, std::move(spec), "graph_file:" + src.graph_file};
  }
  if (!src.named.empty()) {
    const auto id = graphstate::parse_named_state(src.named);
    return {graphstate::named_state(id), 0, std::nullopt, graphstate::to_string(id)};
  }
  if (cmd.count("--n-env") == 0) {
    throw ValidationError("--family requires --n-env");
  }
  const double phi = parse_angle(src.phi);
  if (src.family == "star") {
    if (!src.theta.empty()) {
      throw ValidationError("--theta is not valid with --family star");
    }
    auto spec = graphstate::star_spec(src.n_env, phi);
    auto state = graphstate::build_graph_state(spec);
    return {std::move(state), 0, std::move(spec), "star"};
  }
  const double theta = parse_angle(src.theta.empty() ? "pi" : src.theta);
  auto spec = graphstate::diamond_spec(src.n_env, phi, theta);
  auto state = graphstate::build_graph_state(spec);
  return {std::move(state), 0, std::move(spec), "diamond"};
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_with_manifest(const std::string& path, const std::string& body,
                         const std::string& command, const Parameters& params,
                         std::uint64_t seed, const std::string& timestamp) {
  io::write_text_file(path, body);
  json manifest = {{"command", command},
                   {"parameters", params},
                   {"seed", seed},
                   {"tool_version", QDARWIN_VERSION_STRING},
                   {"timestamp", timestamp.empty() ? utc_now() : timestamp},
                   {"output", path}};
  io::write_text_file(path + ".manifest.json", manifest.dump(2) + "\n");
}

bool wants_json(const std::string& format, const std::string& path) {
  if (format == "json") return true;
  if (format == "csv") return false;
  return path.size() >= 5 && path.compare(path.size() - 5, 5, ".json") == 0;
}

std::string fixed6(double v) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os.setf(std::ios::fixed);
  os.precision(6);
  os << v;
  return os.str();
}

int run_verify(std::ostream& out) {
  using namespace graphstate;
  struct Check {
    std::string label;
    EquivalenceReport report;
  };
  const auto star = build_graph_state(star_spec(3, std::numbers::pi));
  const auto diamond = build_graph_state(diamond_spec(3, std::numbers::pi, std::numbers::pi));
  const auto ghz4 = named_state(named::Ghz{4});
  const auto canonical = named_state(named::DiamondCanonical{});

  const auto star_circuit = star_to_ghz_circuit(3);
  const auto diamond_circuit = diamond_to_canonical_circuit();
  const auto flips = star_experimental_to_ghz_circuit();
  const std::vector<Check> checks = {
      {"star graph (n_env=3) -> GHZ4 [H on qubits 2-4]",
       check_local_equivalence(star, ghz4, star_circuit)},
      {"diamond graph (n_env=3) -> diamond_canonical [Swap_23 . H1 (x) XH2 (x) H3 (x) ZH4]",
       check_local_equivalence(diamond, canonical, diamond_circuit)},
      {"star_experimental -> GHZ4 [X on qubits 2,4]",
       check_local_equivalence(named_state(named::StarExperimental{}), ghz4, flips)},
      {"diamond_experimental -> diamond_canonical [identity]",
       check_local_equivalence(named_state(named::DiamondExperimental{}), canonical, {})},
  };
  bool all = true;
  for (const auto& c : checks) {
    out << (c.report.pass ? "PASS " : "FAIL ") << c.label << ": fidelity "
        << fixed6(c.report.fidelity) << "\n";
    all = all && c.report.pass;
  }
  return all ? 0 : 1;
}

int configure_size_cap(std::ostream& err) {
  const char* env = std::getenv("QDARWIN_MAX_QUBITS");
  if (env == nullptr || *env == '\0') return 0;
  try {
    std::size_t used = 0;
    const int n = std::stoi(env, &used);
    if (used != std::string(env).size()) throw std::invalid_argument("trailing characters");
    qcore::set_max_qubits(n);
  } catch (const std::exception&) {
    err << "error: QDARWIN_MAX_QUBITS must be an integer in [1, 62]\n";
    return 1;
  }
  return 0;
}

}  // namespace

double parse_angle(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ') text.push_back(c);
  }
  auto number = [&](const std::string& s) {
    std::istringstream is(s);
    is.imbue(std::locale::classic());
    double v = 0.0;
    is >> v;
    if (is.fail() || !is.eof()) throw ValidationError("invalid angle '" + raw + "'");
    return v;
  };
  if (text.empty()) throw ValidationError("empty angle");
  const auto pos = text.find("pi");
  if (pos == std::string::npos) return number(text);

  std::string head = text.substr(0, pos);
  std::string tail = text.substr(pos + 2);
  double factor = 1.0;
  if (!head.empty() && head.back() == '*') head.pop_back();
  if (head == "-") {
    factor = -1.0;
  } else if (head == "+" || head.empty()) {
    factor = 1.0;
  } else {
    factor = number(head);
  }
  double divisor = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') throw ValidationError("invalid angle '" + raw + "'");
    divisor = number(tail.substr(1));
    if (divisor == 0.0) throw ValidationError("division by zero in angle '" + raw + "'");
  }
  return factor * std::numbers::pi / divisor;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  if (const int rc = configure_size_cap(err); rc != 0) return rc;

  CLI::App app{"Quantum Darwinism on weighted graph states", "qdarwin"};
  app.require_subcommand(1);
  app.set_version_flag("--version", QDARWIN_VERSION_STRING);

  std::string timestamp;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--timestamp", timestamp, "Pin the manifest timestamp (for reproducible runs)");
  };

  // state
  StateSource state_src;
  std::string state_out;
  auto* state_cmd = app.add_subcommand("state", "Dump a state vector as JSON");
  add_source_flags(state_cmd, state_src);
  state_cmd->add_option("--out", state_out, "Output JSON path")->required();
  add_common(state_cmd);

  // curve
  StateSource curve_src;
  std::string curve_out;
  std::string aggregate = "mean";
  std::string curve_format;
  std::optional<int> curve_system;
  auto* curve_cmd = app.add_subcommand("curve", "Exact mutual-information curve");
  add_source_flags(curve_cmd, curve_src);
  curve_cmd->add_option("--aggregate", aggregate, "Aggregate over fragments")
      ->check(CLI::IsMember({"mean"}));
  curve_cmd->add_option("--system", curve_system, "System qubit (0-based)");
  curve_cmd->add_option("--format", curve_format, "csv or json (default: from extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  curve_cmd->add_option("--out", curve_out, "Output path")->required();
  add_common(curve_cmd);

  // estimate
  StateSource est_src;
  std::string est_out;
  std::string pipeline_name;
  std::string counts_file;
  std::string counts_out;
  std::string table_out;
  std::string est_format;
  measurement::RunConfig cfg;
  bool poisson = false;
  int est_system = 0;
  auto* est_cmd = app.add_subcommand("estimate", "Finite-statistics estimate with error bars");
  add_source_flags(est_cmd, est_src);
  est_cmd->add_option("--counts-file", counts_file, "Re-analyse stored OutcomeCounts JSON");
  est_cmd->add_option("--pipeline", pipeline_name, "closed_form or reconstruction")
      ->required()
      ->check(CLI::IsMember({"closed_form", "reconstruction"}));
  est_cmd->add_option("--shots", cfg.shots_per_setting, "Shots per setting")
      ->check(CLI::PositiveNumber);
  est_cmd->add_option("--seed", cfg.seed, "Random seed");
  est_cmd->add_option("--bootstrap", cfg.bootstrap_resamples, "Bootstrap resamples")
      ->check(CLI::PositiveNumber);
  est_cmd->add_flag("--poisson", poisson, "Poisson-distributed shots per setting");
  est_cmd->add_option("--system", est_system, "System qubit (0-based)");
  est_cmd->add_option("--counts-out", counts_out, "Write sampled OutcomeCounts JSON");
  est_cmd->add_option("--table-out", table_out, "Write estimated CorrelatorTable JSON");
  est_cmd->add_option("--format", est_format, "csv or json (default: from extension)")
      ->check(CLI::IsMember({"csv", "json"}));
  est_cmd->add_option("--out", est_out, "Output path")->required();
  add_common(est_cmd);

  // plan
  std::string plan_target;
  std::string plan_out;
  auto* plan_cmd = app.add_subcommand("plan", "Correlators and settings for an analysis");
  plan_cmd->add_option("--target", plan_target, "star or full_tomography")
      ->required()
      ->check(CLI::IsMember({"star", "full_tomography"}));
  plan_cmd->add_option("--out", plan_out, "Output JSON path")->required();
  add_common(plan_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "Check the local-equivalence identities");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << QDARWIN_VERSION_STRING << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (state_cmd->parsed()) {
      Parameters params;
      record_source(state_src, params);
      const auto loaded = load_state(state_src, *state_cmd);
      json body = io::to_json(loaded.state);
      body["system"] = loaded.system;
      body["source"] = loaded.description;
      if (loaded.graph) body["graph"] = io::to_json(*loaded.graph);
      write_with_manifest(state_out, body.dump(2) + "\n", "state", params, 0, timestamp);
      return 0;
    }

    if (curve_cmd->parsed()) {
      Parameters params;
      record_source(curve_src, params);
      params["aggregate"] = aggregate;
      const auto loaded = load_state(curve_src, *curve_cmd);
      const int system = curve_system.value_or(loaded.system);
      params["system"] = std::to_string(system);
      const auto curve = darwinism::mi_curve(loaded.state, system);
      const std::string body = wants_json(curve_format, curve_out)
                                   ? io::to_json(curve).dump(2) + "\n"
                                   : io::to_csv(curve);
      write_with_manifest(curve_out, body, "curve", params, darwinism::CurveOptions{}.seed,
                          timestamp);
      return 0;
    }

    if (est_cmd->parsed()) {
      Parameters params;
      cfg.shot_model = poisson ? measurement::ShotModel::kPoisson : measurement::ShotModel::kFixed;
      const auto pipeline = measurement::parse_pipeline(pipeline_name);
      params["pipeline"] = pipeline_name;
      params["shots"] = std::to_string(cfg.shots_per_setting);
      params["bootstrap"] = std::to_string(cfg.bootstrap_resamples);
      params["shot_model"] = poisson ? "poisson" : "fixed";
      params["system"] = std::to_string(est_system);

      measurement::EstimateResult result;
      if (!counts_file.empty()) {
        if (!est_src.family.empty() || !est_src.named.empty() || !est_src.graph_file.empty()) {
          throw ValidationError("--counts-file replaces the state source flags");
        }
        params["counts_file"] = counts_file;
        auto data = io::outcome_counts_list_from_json(io::read_json_file(counts_file));
        result = measurement::estimate_from_counts(std::move(data), est_system, cfg, pipeline);
      } else {
        record_source(est_src, params);
        const auto loaded = load_state(est_src, *est_cmd);
        result = measurement::estimate_mi_curve(loaded.state, est_system, cfg, pipeline);
      }

      const std::string body = wants_json(est_format, est_out)
                                   ? io::to_json(result.curve).dump(2) + "\n"
                                   : io::to_csv(result.curve);
      write_with_manifest(est_out, body, "estimate", params, cfg.seed, timestamp);
      if (!counts_out.empty()) {
        json arr = json::array();
        for (const auto& d : result.data) arr.push_back(io::to_json(d));
        write_with_manifest(counts_out, arr.dump(2) + "\n", "estimate", params, cfg.seed,
                            timestamp);
      }
      if (!table_out.empty()) {
        write_with_manifest(table_out, io::to_json(result.table).dump(2) + "\n", "estimate",
                            params, cfg.seed, timestamp);
      }
      return 0;
    }

    if (plan_cmd->parsed()) {
      const auto plan = estimator::plan_measurements(estimator::parse_plan_target(plan_target));
      write_with_manifest(plan_out, io::to_json(plan).dump(2) + "\n", "plan",
                          {{"target", plan_target}}, 0, timestamp);
      return 0;
    }

    if (verify_cmd->parsed()) return run_verify(out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace qdarwin::cli

#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "entmeas/bounds.hpp"
#include "entmeas/closed_form.hpp"
#include "entmeas/gaussian.hpp"
#include "entmeas/locc.hpp"
#include "entmeas/parallel.hpp"
#include "entmeas/state_io.hpp"
#include "entmeas/variational.hpp"

namespace entmeas::cli {

using nlohmann::json;

namespace {

class UnknownMeasure : public ArgumentError {
 public:
  explicit UnknownMeasure(const std::string& name) : ArgumentError("unknown measure '" + name + "'") {}
};

/// 12 significant digits; infinities become the strings "inf" / "-inf".
json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double rounded = std::strtod(buf, nullptr);
  return rounded == 0.0 ? 0.0 : rounded;
}

json numbers(const RVector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(number(v[i]));
  return out;
}

json numbers(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(number(x));
  return out;
}

json rounded_matrix(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json::array({number(m(r, c).real()), number(m(r, c).imag())}));
    rows.push_back(std::move(row));
  }
  return rows;
}

struct Classified {
  int code;
  json error;
};

Classified classify(std::exception_ptr failure) {
  try {
    std::rethrow_exception(failure);
  } catch (const ParseError& e) {
    return {kExitInvalid, {{"kind", "parse"}, {"line", e.line()}, {"column", e.column()}, {"message", e.what()}}};
  } catch (const ValidationError& e) {
    return {kExitInvalid,
            {{"kind", "validation"}, {"invariant", e.invariant()}, {"residual", number(e.residual())}, {"message", e.what()}}};
  } catch (const UnknownMeasure& e) {
    return {kExitInvalid, {{"kind", "unknown_measure"}, {"message", e.what()}, {"valid", measure_names()}}};
  } catch (const ArgumentError& e) {
    return {kExitInvalid, {{"kind", "argument"}, {"message", e.what()}}};
  } catch (const UnsupportedCase& e) {
    return {kExitInvalid, {{"kind", "unsupported"}, {"message", e.what()}}};
  } catch (const nlohmann::json::exception& e) {
    return {kExitInvalid, {{"kind", "argument"}, {"message", std::string("bad input field: ") + e.what()}}};
  } catch (const std::exception& e) {
    return {1, {{"kind", "internal"}, {"message", e.what()}}};
  }
}

std::string describe(const json& error) {
  std::string text = "error: " + error.at("message").get<std::string>();
  if (error.contains("invariant"))
    text += " [invariant " + error["invariant"].get<std::string>() + ", residual " + error["residual"].dump() + "]";
  if (error.contains("valid")) {
    text += "; valid measures:";
    for (const auto& n : error["valid"]) text += " " + n.get<std::string>();
  }
  return text;
}

std::string scalar_text(const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

void render_table(const json& report, std::ostream& out, const std::string& prefix = "") {
  std::size_t width = 0;
  for (const auto& [key, value] : report.items()) width = std::max(width, prefix.size() + key.size());
  for (const auto& [key, value] : report.items()) {
    if (value.is_object()) {
      render_table(value, out, prefix + key + ".");
    } else {
      out << std::left << std::setw(static_cast<int>(width) + 2) << prefix + key << scalar_text(value) << '\n';
    }
  }
}

void emit(const json& report, const std::string& format, std::ostream& out) {
  if (format == "table") {
    if (report.is_array()) {
      for (const auto& entry : report) {
        render_table(entry, out);
        out << '\n';
      }
    } else {
      render_table(report, out);
    }
  } else {
    out << report.dump() << '\n';
  }
}

Cut parse_cut(const std::string& text) {
  if (text.empty()) return default_cut();
  Cut cut;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      cut.side_a.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ArgumentError("--cut expects comma-separated subsystem indices, got '" + text + "'");
    }
  }
  return cut;
}

struct MeasureRequest {
  std::string measure;
  Cut cut = default_cut();
  SolverConfig cfg;
  std::optional<int> size;
};

json describe_result(const std::string& name, const MeasureResult& r, bool with_witness) {
  json out;
  out["measure"] = name;
  out["value"] = number(r.value);
  out["status"] = to_string(r.status);
  out["converged"] = r.solver_converged;
  out["gap"] = number(r.gap);
  out["iterations"] = r.iterations;
  out["notes"] = r.notes;
  if (with_witness && r.witness_state) out["witness"] = rounded_matrix(*r.witness_state);
  return out;
}

MeasureResult exact(double value) {
  MeasureResult r;
  r.value = value;
  r.status = Status::exact;
  return r;
}

const PureState& require_pure(const StateInput& input, const std::string& measure) {
  if (const auto* psi = std::get_if<PureState>(&input)) return *psi;
  throw ArgumentError(measure + " needs a pure state written as {\"dims\", \"vector\"}");
}

MeasureResult compute(const StateInput& input, const MeasureRequest& req) {
  const std::string& m = req.measure;
  if (std::find(measure_names().begin(), measure_names().end(), m) == measure_names().end()) throw UnknownMeasure(m);
  if (m == "tau3") return exact(residual_tangle(require_pure(input, m)));
  if (m == "geometric") return geometric_measure(require_pure(input, m), req.cfg);

  const DensityOperator rho = to_density(input);
  if (m == "concurrence") return exact(concurrence(rho));
  if (m == "eof2") return exact(eof_two_qubit(rho));
  if (m == "negativity") return exact(negativity(rho, req.cut));
  if (m == "logneg") return exact(log_negativity(rho, req.cut));
  if (m == "tangle") return exact(tangle(rho, req.cut));
  if (m == "ree") return relative_entropy_of_entanglement(rho, req.cut, FreeSet::ppt, req.cfg);
  if (m == "robustness") return robustness(rho, req.cut, Noise::separable, req.cfg);
  if (m == "global-robustness") return robustness(rho, req.cut, Noise::global, req.cfg);
  if (m == "bsa") return best_separable_approximation(rho, req.cut, req.cfg).result;
  if (m == "eof-roof") return eof_convex_roof(rho, req.cut, req.size, req.cfg);
  if (m == "rains") return rains_bound(rho, req.cut, req.cfg);
  if (m == "witness") return witness_violation(rho, req.cut);
  if (m == "hashing") return exact(hashing_lower_bound(rho, req.cut));
  throw InternalError("measure dispatch out of sync with measure_names()");
}

// Options shared by measure, bounds and batch entries.
struct SolverFlags {
  std::string cut;
  double gap = SolverConfig{}.gap_tolerance;
  int max_iterations = SolverConfig{}.max_iterations;
  std::optional<int> restarts;
  std::uint64_t seed = 0;
  bool serial = false;

  void attach(CLI::App* app) {
    app->add_option("--cut", cut, "Subsystems on side A, comma separated (default 0)");
    app->add_option("--gap", gap, "Solver gap tolerance")->check(CLI::PositiveNumber);
    app->add_option("--max-iterations", max_iterations, "Solver iteration cap")->check(CLI::PositiveNumber);
    app->add_option("--restarts", restarts, "Random restarts for multi-start solvers")->check(CLI::PositiveNumber);
    app->add_option("--seed", seed, "Random seed (default 0)");
    app->add_flag("--serial", serial, "Evaluate restarts serially");
  }

  SolverConfig config() const {
    SolverConfig cfg;
    cfg.gap_tolerance = gap;
    cfg.max_iterations = max_iterations;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.execution = serial ? Execution::serial : Execution::parallel;
    cfg.validate();
    return cfg;
  }
};

template <class T>
T field_or(const json& entry, const char* key, T fallback) {
  return entry.contains(key) ? entry.at(key).get<T>() : fallback;
}

MeasureRequest request_from_entry(const json& entry, const SolverConfig& defaults) {
  if (!entry.is_object()) throw ArgumentError("manifest entries must be objects");
  MeasureRequest req;
  req.measure = entry.at("measure").get<std::string>();
  if (entry.contains("cut")) req.cut.side_a = entry.at("cut").get<std::vector<int>>();
  req.cfg = defaults;
  req.cfg.gap_tolerance = field_or(entry, "gap", defaults.gap_tolerance);
  req.cfg.max_iterations = field_or(entry, "max_iterations", defaults.max_iterations);
  if (entry.contains("restarts")) req.cfg.restarts = entry.at("restarts").get<int>();
  req.cfg.seed = field_or(entry, "seed", defaults.seed);
  if (entry.contains("size")) req.size = entry.at("size").get<int>();
  req.cfg.validate();
  return req;
}

std::vector<double> schmidt_input(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  if (j.is_object() && j.contains("schmidt")) {
    const auto raw = j.at("schmidt").get<std::vector<double>>();
    return normalize_schmidt_vector(raw);
  }
  const StateInput state = state_from_json(j);
  const auto& psi = require_pure(state, "convert");
  return schmidt(psi, default_cut()).coefficients;
}

int fail(const Classified& c, std::ostream& err) {
  err << describe(c.error) << '\n';
  return c.code;
}

}  // namespace

const std::vector<std::string>& measure_names() {
  static const std::vector<std::string> names = {
      "concurrence", "eof2", "negativity", "logneg", "tangle", "tau3", "ree", "robustness",
      "global-robustness", "bsa", "eof-roof", "geometric", "rains", "witness", "hashing"};
  return names;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  apply_thread_cap_from_environment();

  CLI::App app{"Entanglement measures, bounds and LOCC convertibility"};
  app.name("entmeas");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  std::string format = "json";
  const auto add_format = [&format](CLI::App* sub) {
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "table"}));
  };

  // measure
  auto* measure = app.add_subcommand("measure", "Evaluate one entanglement measure on a state file");
  std::string state_path;
  std::string measure_name;
  SolverFlags measure_flags;
  std::optional<int> roof_size;
  bool strict = false;
  bool emit_witness = false;
  std::string names_list;
  for (const auto& n : measure_names()) names_list += (names_list.empty() ? "" : ", ") + n;
  measure->add_option("--state", state_path, "State file {dims, matrix} or {dims, vector}")->required();
  measure->add_option("--measure", measure_name, "One of: " + names_list)->required();
  measure_flags.attach(measure);
  measure->add_option("--size", roof_size, "Decomposition size for eof-roof (default rank^2)");
  measure->add_flag("--strict", strict, "Exit 3 when the solver did not converge");
  measure->add_flag("--witness", emit_witness, "Include the witness or closest state in the report");
  add_format(measure);

  // bounds
  auto* bounds = app.add_subcommand("bounds", "Lower and upper bounds on distillable entanglement and cost");
  SolverFlags bounds_flags;
  std::vector<std::string> skip;
  bounds->add_option("--state", state_path, "State file")->required();
  bounds_flags.attach(bounds);
  bounds->add_option("--skip", skip, "Bounds to omit")->check(CLI::IsMember({"rains"}));
  add_format(bounds);

  // convert
  auto* convert = app.add_subcommand("convert", "Single-copy LOCC convertibility of bipartite pure states");
  std::string source_path;
  std::string target_path;
  std::optional<int> catalyst_rank;
  int grid = 200;
  convert->add_option("--source", source_path, "Pure state file or {\"schmidt\": [...]}")->required();
  convert->add_option("--target", target_path, "Pure state file or {\"schmidt\": [...]}")->required();
  convert->add_option("--catalyst-rank", catalyst_rank, "Search for a catalyst of this rank when direct conversion fails")
      ->check(CLI::Range(2, 3));
  convert->add_option("--grid", grid, "Catalyst grid resolution")->check(CLI::Range(10, 100000));
  add_format(convert);

  // gaussian
  auto* gaussian = app.add_subcommand("gaussian", "Covariance-matrix calculations for Gaussian states");
  std::string cov_path;
  std::string op;
  std::optional<int> gaussian_cut;
  gaussian->add_option("--cov", cov_path, "Covariance file {modes, ordering, cov, mean?}")->required();
  gaussian->add_option("--op", op, "Operation")
      ->required()
      ->check(CLI::IsMember({"validate", "spectrum", "entropy", "logneg", "ppt"}));
  gaussian->add_option("--cut", gaussian_cut, "Modes 0..k-1 form side A (default 1)");
  add_format(gaussian);

  // batch
  auto* batch = app.add_subcommand("batch", "Run a manifest of (state, measure, overrides) entries");
  std::string manifest_path;
  SolverFlags batch_flags;
  batch->add_option("--manifest", manifest_path, "Manifest file: array of {state, measure, cut?, gap?, restarts?, seed?}")
      ->required();
  batch_flags.attach(batch);
  add_format(batch);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (measure->parsed()) {
      MeasureRequest req;
      req.measure = measure_name;
      if (std::find(measure_names().begin(), measure_names().end(), req.measure) == measure_names().end())
        throw UnknownMeasure(req.measure);
      req.cut = parse_cut(measure_flags.cut);
      req.cfg = measure_flags.config();
      req.size = roof_size;
      const auto result = compute(load_state(state_path), req);
      emit(describe_result(req.measure, result, emit_witness), format, out);
      if (strict && !result.solver_converged) {
        err << "error: solver did not converge (status " << to_string(result.status) << ")\n";
        return kExitNotConverged;
      }
      return kExitOk;
    }

    if (bounds->parsed()) {
      BoundsOptions options;
      options.solver = bounds_flags.config();
      options.skip_rains = std::find(skip.begin(), skip.end(), "rains") != skip.end();
      const auto report = bounds_report(to_density(load_state(state_path)), parse_cut(bounds_flags.cut), options);
      json j;
      for (const auto& [k, v] : report.lower) j["lower"][k] = number(v);
      for (const auto& [k, v] : report.upper) j["upper"][k] = number(v);
      for (const auto& [k, v] : report.certified) j["certified"][k] = v;
      j["ppt"] = report.ppt;
      j["distillable"] = report.distillable ? number(*report.distillable) : json(nullptr);
      for (const auto& [k, v] : report.notes) j["notes"][k] = v;
      emit(j, format, out);
      return kExitOk;
    }

    if (convert->parsed()) {
      const auto source = schmidt_input(source_path);
      const auto target = schmidt_input(target_path);
      const auto verdict = optimal_conversion_probability(source, target);
      json j;
      j["source"] = numbers(source);
      j["target"] = numbers(target);
      j["deterministic"] = verdict.deterministic;
      j["probability"] = number(verdict.probability);
      j["limiting_index"] = verdict.limiting_index;
      if (catalyst_rank && !verdict.deterministic) {
        CatalysisOptions options;
        options.catalyst_rank = *catalyst_rank;
        options.grid_resolution = grid;
        const auto found = catalysis_search(source, target, options);
        j["catalyst"]["coefficients"] = found.catalyst ? numbers(*found.catalyst) : json(nullptr);
        j["catalyst"]["status"] = to_string(found.status);
        j["catalyst"]["candidates_checked"] = found.candidates_checked;
      }
      emit(j, format, out);
      return kExitOk;
    }

    if (gaussian->parsed()) {
      const auto gamma = load_covariance(cov_path);
      const int n = gamma.modes();
      json j;
      j["op"] = op;
      j["modes"] = n;
      if (op == "validate") {
        j["physical"] = true;
        j["uncertainty_residual"] = number(gamma.uncertainty_residual());
      } else if (op == "spectrum") {
        j["symplectic_eigenvalues"] = numbers(symplectic_eigenvalues(gamma).values);
      } else if (op == "entropy") {
        if (gaussian_cut) {
          if (*gaussian_cut < 1 || *gaussian_cut > n) throw ArgumentError("--cut must lie in [1, modes]");
          std::vector<int> keep(static_cast<std::size_t>(*gaussian_cut));
          for (int k = 0; k < *gaussian_cut; ++k) keep[static_cast<std::size_t>(k)] = k;
          j["value"] = number(gaussian_entropy(reduce_modes(gamma, keep)));
        } else {
          j["value"] = number(gaussian_entropy(gamma));
        }
      } else {
        const int k = gaussian_cut.value_or(1);
        if (k < 1 || k >= n) throw ArgumentError("--cut must lie in [1, modes - 1]");
        std::vector<int> modes_b;
        for (int m = k; m < n; ++m) modes_b.push_back(m);
        if (op == "logneg") {
          j["value"] = number(gaussian_log_negativity(gamma, modes_b));
        } else {
          j["separable"] = gaussian_ppt_separable(gamma, modes_b);
        }
        j["status"] = "exact";
      }
      emit(j, format, out);
      return kExitOk;
    }

    if (batch->parsed()) {
      const std::filesystem::path manifest(manifest_path);
      json entries = read_json_file(manifest);
      if (entries.is_object() && entries.contains("entries")) entries = entries["entries"];
      if (!entries.is_array()) throw ArgumentError("manifest must be an array of entries");
      const SolverConfig defaults = batch_flags.config();
      const int count = static_cast<int>(entries.size());
      std::vector<json> results(static_cast<std::size_t>(count));
      for_each_index(Execution::parallel, count, [&](int i) {
        const json& entry = entries[static_cast<std::size_t>(i)];
        json row;
        row["index"] = i;
        try {
          if (entry.is_object()) {
            if (entry.contains("state")) row["state"] = entry["state"];
            if (entry.contains("measure")) row["measure"] = entry["measure"];
          }
          const MeasureRequest req = request_from_entry(entry, defaults);
          std::filesystem::path state = entry.at("state").get<std::string>();
          if (state.is_relative()) state = manifest.parent_path() / state;
          const auto result = compute(load_state(state), req);
          row.update(describe_result(req.measure, result, false));
        } catch (...) {
          row["error"] = classify(std::current_exception()).error;
        }
        results[static_cast<std::size_t>(i)] = std::move(row);
      });
      emit(json(results), format, out);
      return kExitOk;
    }
  } catch (...) {
    return fail(classify(std::current_exception()), err);
  }
  return kExitInvalid;
}

}  // namespace entmeas::cli

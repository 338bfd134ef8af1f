#include "fibspec/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fibspec/fractal.hpp"
#include "fibspec/piece_io.hpp"
#include "fibspec/tracemap.hpp"

namespace fibspec::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

ModelSpec load_model(const RunConfig& cfg) {
  if (cfg.piece_a.empty()) throw ConfigError("--piece-a is required");
  if (cfg.piece_b.empty()) throw ConfigError("--piece-b is required");
  PotentialPiece a = load_piece_file(cfg.piece_a);
  PotentialPiece b = load_piece_file(cfg.piece_b);
  if (a.label() != PieceLabel::a) {
    throw ConfigError(cfg.piece_a.string() + ": field 'label': expected \"a\"");
  }
  if (b.label() != PieceLabel::b) {
    throw ConfigError(cfg.piece_b.string() + ": field 'label': expected \"b\"");
  }
  if (!std::isfinite(cfg.coupling)) throw ConfigError("--lambda must be finite");
  return ModelSpec{std::move(a), std::move(b), cfg.coupling};
}

EnergyWindow window_of(const RunConfig& cfg, std::size_t i = 0) {
  if (cfg.windows.size() <= i) throw ConfigError("--window is required");
  EnergyWindow w{cfg.windows[i].lo, cfg.windows[i].hi, cfg.samples,
                 cfg.log_spacing ? Spacing::logarithmic : Spacing::linear};
  try {
    w.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("--window/--samples: ") + e.what());
  }
  return w;
}

json params_json(const std::string& command, const RunConfig& cfg) {
  json windows = json::array();
  for (const Interval& w : cfg.windows) windows.push_back({w.lo, w.hi});
  json p{{"command", command},
         {"piece_a", cfg.piece_a.string()},
         {"piece_b", cfg.piece_b.string()},
         {"lambda", cfg.coupling},
         {"windows", windows},
         {"samples", cfg.samples},
         {"spacing", cfg.log_spacing ? "log" : "linear"},
         {"max_steps", cfg.max_steps},
         {"radius", cfg.radius},
         {"tol", cfg.tol}};
  if (command == "invariant") {
    p["fit"] = cfg.fit;
    p["fit_bins"] = cfg.fit_bins;
  }
  if (command == "sweep") p["lambdas"] = cfg.lambdas;
  if (command == "dimension") {
    p["points"] = cfg.points;
    p["eps_min"] = cfg.eps_min ? json(*cfg.eps_min) : json("auto");
    p["eps_max"] = cfg.eps_max ? json(*cfg.eps_max) : json("auto");
  }
  if (command == "orbit") p["energy"] = cfg.energy;
  return p;
}

/// Writes a whole file; the first line of CSV outputs carries the params.
void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

fs::path prepare_out(const RunConfig& cfg) {
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec || !fs::is_directory(cfg.out)) {
    throw IoError("cannot create output directory " + cfg.out.string());
  }
  return cfg.out;
}

std::string csv_header(const json& params) { return "# params: " + params.dump() + "\n"; }

class EmptyResult : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

int guarded(const std::function<void()>& body) {
  try {
    body();
    return kOk;
  } catch (const ConfigError& e) {
    std::cerr << "fibspec: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const IoError& e) {
    std::cerr << "fibspec: I/O error: " << e.what() << "\n";
    return kIoError;
  } catch (const EmptyResult& e) {
    std::cerr << "fibspec: " << e.what() << "\n";
    return kEmptyResult;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fibspec: config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::length_error& e) {
    std::cerr << "fibspec: config error: " << e.what() << "\n";
    return kConfigError;
  }
}

std::pair<double, double> split_pair(const std::string& text, const std::string& what) {
  const auto colon = text.find(':', 1);
  if (colon == std::string::npos) throw ConfigError(what + ": expected LO:HI, got '" + text + "'");
  try {
    std::size_t used_lo = 0, used_hi = 0;
    const std::string lo_text = text.substr(0, colon), hi_text = text.substr(colon + 1);
    const double lo = std::stod(lo_text, &used_lo);
    const double hi = std::stod(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected LO:HI, got '" + text + "'");
  }
}

}  // namespace

Interval parse_window(const std::string& text) {
  const auto [lo, hi] = split_pair(text, "--window");
  if (!(std::isfinite(lo) && std::isfinite(hi) && lo < hi)) {
    throw ConfigError("--window: need LO < HI, got '" + text + "'");
  }
  return {lo, hi};
}

void apply_config_json(const std::string& json_text, RunConfig& cfg) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config file is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config file: top level must be an object");
  for (const auto& [key, value] : doc.items()) {
    try {
      if (key == "piece_a") cfg.piece_a = value.get<std::string>();
      else if (key == "piece_b") cfg.piece_b = value.get<std::string>();
      else if (key == "lambda") cfg.coupling = value.get<double>();
      else if (key == "window") cfg.windows = {parse_window(value.get<std::string>())};
      else if (key == "windows") {
        cfg.windows.clear();
        for (const auto& w : value) cfg.windows.push_back(parse_window(w.get<std::string>()));
      }
      else if (key == "samples") cfg.samples = value.get<std::size_t>();
      else if (key == "max_steps") cfg.max_steps = value.get<unsigned>();
      else if (key == "radius") cfg.radius = value.get<double>();
      else if (key == "tol") cfg.tol = value.get<double>();
      else if (key == "log_spacing") cfg.log_spacing = value.get<bool>();
      else if (key == "fit") cfg.fit = value.get<bool>();
      else if (key == "fit_bins") cfg.fit_bins = value.get<std::size_t>();
      else if (key == "lambdas") cfg.lambdas = value.get<std::vector<double>>();
      else if (key == "eps_min") cfg.eps_min = value.get<double>();
      else if (key == "eps_max") cfg.eps_max = value.get<double>();
      else if (key == "points") cfg.points = value.get<std::size_t>();
      else if (key == "energy") cfg.energy = value.get<double>();
      else if (key == "out") cfg.out = value.get<std::string>();
      else throw ConfigError("config file: unknown key '" + key + "'");
    } catch (const json::type_error&) {
      throw ConfigError("config file: key '" + key + "' has the wrong type");
    }
  }
}

int cmd_spectrum(const RunConfig& cfg) {
  return guarded([&] {
    const ModelSpec model = load_model(cfg);
    const EnergyWindow window = window_of(cfg);
    if (cfg.max_steps < 1) throw ConfigError("--max-steps must be >= 1");
    if (!(cfg.radius > 1.0)) throw ConfigError("--radius must exceed 1");
    if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
    const fs::path dir = prepare_out(cfg);

    const SpectrumApproximation approx =
        refine_edges(model, scan(model, window, cfg.max_steps, cfg.radius), cfg.tol);

    const json params = params_json("spectrum", cfg);
    std::string csv = csv_header(params) + "E,escaped_at,invariant\n";
    for (const SampleVerdict& v : approx.verdicts) {
      csv += num(v.energy) + "," + (v.escaped_at ? std::to_string(*v.escaped_at) : "") + "," +
             num(v.invariant) + "\n";
    }
    write_file(dir / "samples.csv", csv);

    json intervals = json::array();
    for (const Interval& iv : approx.intervals) intervals.push_back({iv.lo, iv.hi});
    json doc{{"params", params},
             {"retained_samples", approx.retained_count()},
             {"intervals", intervals}};
    write_file(dir / "intervals.json", doc.dump(2) + "\n");
    std::cout << approx.intervals.size() << " intervals, " << approx.retained_count() << " of "
              << window.samples << " samples retained\n";
  });
}

int cmd_invariant(const RunConfig& cfg) {
  return guarded([&] {
    const ModelSpec model = load_model(cfg);
    const EnergyWindow window = window_of(cfg);
    const fs::path dir = prepare_out(cfg);
    const auto profile = invariant_profile(model, window);

    std::string csv = csv_header(params_json("invariant", cfg)) + "E,invariant\n";
    for (const ProfilePoint& p : profile) csv += num(p.energy) + "," + num(p.invariant) + "\n";
    if (cfg.fit) {
      const LineFit fit = envelope_decay(profile, cfg.fit_bins);
      csv += "# fit: log sup|I| vs log E: slope=" + num(fit.slope) +
             " intercept=" + num(fit.intercept) + " r2=" + num(fit.r_squared) + "\n";
      std::cout << "slope " << num(fit.slope) << " r2 " << num(fit.r_squared) << "\n";
    }
    write_file(dir / "invariant.csv", csv);
  });
}

int cmd_sweep(const RunConfig& cfg) {
  return guarded([&] {
    const ModelSpec model = load_model(cfg);
    const EnergyWindow window = window_of(cfg);
    if (cfg.lambdas.empty()) throw ConfigError("--lambdas: need at least one value");
    const fs::path dir = prepare_out(cfg);
    const auto rows = lambda_sweep(model, cfg.lambdas, window);

    std::string csv = csv_header(params_json("sweep", cfg)) + "lambda,sup_abs_invariant,samples\n";
    for (const SweepRow& r : rows) {
      csv += num(r.lambda) + "," + num(r.sup_abs_invariant) + "," + std::to_string(r.samples) + "\n";
    }
    write_file(dir / "sweep.csv", csv);
  });
}

int cmd_dimension(const RunConfig& cfg) {
  return guarded([&] {
    const ModelSpec model = load_model(cfg);
    if (cfg.windows.empty()) throw ConfigError("--window: at least one window is required");
    if (!(cfg.tol > 0.0)) throw ConfigError("--tol must be positive");
    const fs::path dir = prepare_out(cfg);
    const json params = params_json("dimension", cfg);

    std::vector<ProfilePoint> profile;
    std::vector<WindowEstimate> estimates;
    std::vector<std::string> count_files;
    for (std::size_t i = 0; i < cfg.windows.size(); ++i) {
      const EnergyWindow window = window_of(cfg, i);
      const SpectrumApproximation approx =
          refine_edges(model, scan(model, window, cfg.max_steps, cfg.radius), cfg.tol);
      if (approx.intervals.empty()) {
        throw EmptyResult("empty spectrum window [" + num(window.lo) + ", " + num(window.hi) + "]");
      }
      for (const SampleVerdict& v : approx.verdicts) profile.push_back({v.energy, v.invariant});

      const double width = window.hi - window.lo;
      const double eps_min = cfg.eps_min.value_or(10.0 * window.spacing_width());
      const double eps_max = cfg.eps_max.value_or(width / 10.0);
      DimensionEstimate est;
      try {
        est = box_dimension(approx.intervals, {eps_min, eps_max}, cfg.points);
      } catch (const std::invalid_argument& e) {
        throw ConfigError("window [" + num(window.lo) + ", " + num(window.hi) + "]: " + e.what());
      }
      estimates.push_back({{window.lo, window.hi}, est});

      std::string csv = csv_header(params) + "# window: " + num(window.lo) + ":" + num(window.hi) +
                        "\neps,count\n";
      for (const BoxCount& c : est.counts) csv += num(c.eps) + "," + std::to_string(c.count) + "\n";
      const std::string name = "boxcounts_" + std::to_string(i) + ".csv";
      write_file(dir / name, csv);
      count_files.push_back(name);
    }

    const ConsistencyReport report = dimension_consistency_report(profile, estimates);
    json doc = json::parse(report.to_json());
    doc["params"] = params;
    doc["box_count_files"] = count_files;
    write_file(dir / "dimension_report.json", doc.dump(2) + "\n");
    for (const WindowReport& w : report.windows) {
      std::cout << "[" << num(w.window.lo) << ", " << num(w.window.hi) << "] dimension "
                << num(w.dimension) << " r2 " << num(w.r_squared) << " max|I| "
                << num(w.max_abs_invariant) << (w.flag ? " FLAG" : "") << "\n";
    }
  });
}

int cmd_orbit(const RunConfig& cfg) {
  return guarded([&] {
    const ModelSpec model = load_model(cfg);
    if (cfg.max_steps < 1) throw ConfigError("--max-steps must be >= 1");
    if (!(cfg.radius > 1.0)) throw ConfigError("--radius must exceed 1");
    const fs::path dir = prepare_out(cfg);

    const TraceTriple start = gamma(model, cfg.energy);
    const OrbitResult r = iterate_orbit(start, cfg.max_steps, cfg.radius);
    std::string csv = csv_header(params_json("orbit", cfg)) + "n,x,y,z,invariant\n";
    TraceTriple p = start;
    for (unsigned n = 0; n <= r.iterates_computed; ++n) {
      csv += std::to_string(n) + "," + num(p.x) + "," + num(p.y) + "," + num(p.z) + "," +
             num(invariant(p)) + "\n";
      p = trace_map_step(p);
    }
    csv += "# escaped_at: " + (r.escaped_at ? std::to_string(*r.escaped_at) : std::string()) + "\n";
    write_file(dir / "orbit.csv", csv);
    std::cout << (r.escaped_at ? "escaped at step " + std::to_string(*r.escaped_at)
                               : "bounded for " + std::to_string(r.iterates_computed) + " steps")
              << ", I = " << num(invariant(start)) << "\n";
  });
}

int run(int argc, const char* const* argv) {
  CLI::App app{"Spectra, trace-map invariants and box dimensions of continuum Fibonacci "
               "Schroedinger operators"};
  app.require_subcommand(1);

  RunConfig flags;
  std::string config_path, piece_a, piece_b, eps_range;
  std::vector<std::string> windows;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config file (flags override it)");
    sub->add_option("--piece-a", piece_a, "piece definition for letter a");
    sub->add_option("--piece-b", piece_b, "piece definition for letter b");
    sub->add_option("--lambda", flags.coupling, "coupling constant");
    sub->add_option("--out", flags.out, "output directory");
  };
  auto add_scan = [&](CLI::App* sub, bool multi_window) {
    if (multi_window) {
      sub->add_option("--window", windows, "energy window LO:HI (repeatable)");
    } else {
      sub->add_option("--window", windows, "energy window LO:HI")->expected(1);
    }
    sub->add_option("--samples", flags.samples, "energies per window");
  };
  auto add_orbit = [&](CLI::App* sub) {
    sub->add_option("--max-steps", flags.max_steps, "trace-map iterations before a sample counts as bounded");
    sub->add_option("--radius", flags.radius, "sup-norm escape radius");
  };

  auto* spectrum = app.add_subcommand("spectrum", "escape-time spectrum scan with edge refinement");
  add_common(spectrum);
  add_scan(spectrum, false);
  add_orbit(spectrum);
  spectrum->add_option("--tol", flags.tol, "edge bisection tolerance");

  auto* inv = app.add_subcommand("invariant", "Fricke-Vogt invariant profile I(E)");
  add_common(inv);
  add_scan(inv, false);
  inv->add_flag("--log-spacing", flags.log_spacing, "logarithmically spaced energies");
  inv->add_flag("--fit", flags.fit, "fit log sup|I| against log E");
  inv->add_option("--fit-bins", flags.fit_bins, "logarithmic bins for the envelope fit");

  auto* sweep = app.add_subcommand("sweep", "sup|I(E, lambda)| over a decreasing list of couplings");
  add_common(sweep);
  add_scan(sweep, false);
  sweep->add_option("--lambdas", flags.lambdas, "couplings, comma separated")->delimiter(',');

  auto* dim = app.add_subcommand("dimension", "box-counting dimension of spectrum windows");
  add_common(dim);
  add_scan(dim, true);
  add_orbit(dim);
  dim->add_option("--tol", flags.tol, "edge bisection tolerance");
  dim->add_option("--eps-range", eps_range, "box sizes MIN:MAX (default: 10 grid steps to width/10)");
  dim->add_option("--points", flags.points, "number of box sizes");

  auto* orbit = app.add_subcommand("orbit", "trace-map orbit of gamma(E) at one energy");
  add_common(orbit);
  add_orbit(orbit);
  orbit->add_option("--energy", flags.energy, "energy E");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  CLI::App* sub = app.get_subcommands().front();
  RunConfig cfg;
  const int status = guarded([&] {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw ConfigError("cannot open config file " + config_path);
      std::ostringstream buf;
      buf << in.rdbuf();
      apply_config_json(buf.str(), cfg);
    }
    auto given = [&](const char* name) {
      const CLI::Option* opt = sub->get_option_no_throw(name);
      return opt != nullptr && opt->count() > 0;
    };
    if (given("--piece-a")) cfg.piece_a = piece_a;
    if (given("--piece-b")) cfg.piece_b = piece_b;
    if (given("--lambda")) cfg.coupling = flags.coupling;
    if (given("--out")) cfg.out = flags.out;
    if (given("--window")) {
      cfg.windows.clear();
      for (const std::string& w : windows) cfg.windows.push_back(parse_window(w));
    }
    if (given("--samples")) cfg.samples = flags.samples;
    if (given("--max-steps")) cfg.max_steps = flags.max_steps;
    if (given("--radius")) cfg.radius = flags.radius;
    if (given("--tol")) cfg.tol = flags.tol;
    if (given("--log-spacing")) cfg.log_spacing = flags.log_spacing;
    if (given("--fit")) cfg.fit = flags.fit;
    if (given("--fit-bins")) cfg.fit_bins = flags.fit_bins;
    if (given("--lambdas")) cfg.lambdas = flags.lambdas;
    if (given("--eps-range")) {
      const auto [lo, hi] = split_pair(eps_range, "--eps-range");
      cfg.eps_min = lo;
      cfg.eps_max = hi;
    }
    if (given("--points")) cfg.points = flags.points;
    if (given("--energy")) cfg.energy = flags.energy;
  });
  if (status != kOk) return status;

  const std::string name = sub->get_name();
  if (name == "spectrum") return cmd_spectrum(cfg);
  if (name == "invariant") return cmd_invariant(cfg);
  if (name == "sweep") return cmd_sweep(cfg);
  if (name == "dimension") return cmd_dimension(cfg);
  return cmd_orbit(cfg);
}

}  // namespace fibspec::cli

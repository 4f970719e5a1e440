#include "eqtri/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "artifacts.hpp"
#include "eqtri/eigenfunctions.hpp"
#include "eqtri/length_spectrum.hpp"
#include "eqtri/orbits.hpp"
#include "eqtri/parallel.hpp"
#include "eqtri/spectrum.hpp"
#include "eqtri/transforms.hpp"
#include "eqtri/wavepacket.hpp"

#ifndef EQTRI_VERSION
#define EQTRI_VERSION "0.3.0"
#endif

namespace eqtri::cli {

namespace {

// Paper units: hbar = 2 mass = side = 1, packet width 1/(10 sqrt 2).
const double kWidth = 1.0 / (10.0 * std::numbers::sqrt2);
const double kCentroid = std::numbers::sqrt3 / 3.0;
const double kQuarter = std::numbers::sqrt3 / 4.0;

const json& presets() {
  static const json table = {
      {"custom", json::object()},
      {"paper-fig2", {{"variant", "half"}, {"sym", "minus"}, {"m", 3}, {"n", 1}, {"grid", 200}}},
      {"paper-fig5", {{"variant", "full"}, {"levels", 1000}, {"lmax", 20.0}, {"dl", 0.002}}},
      {"paper-fig7", {{"variant", "half"}, {"levels", 1000}, {"lmax", 20.0}, {"dl", 0.002}}},
      {"paper-fig8",
       {{"variant", "full"}, {"x0", 0.0}, {"y0", kCentroid}, {"p0", 1500.0}, {"theta", 0.0},
        {"b", kWidth}, {"tmax-tau", 12.0}, {"samples", 6001}}},
      {"paper-fig8-isolated",
       {{"variant", "full"}, {"x0", 0.0}, {"y0", kQuarter}, {"p0", 1500.0}, {"theta", 0.0},
        {"b", kWidth}, {"tmax-tau", 12.0}, {"samples", 6001}}},
      {"paper-fig9",
       {{"variant", "full"}, {"x0", 0.0}, {"y0", kCentroid}, {"p0", 0.0}, {"theta", 0.0},
        {"b", kWidth}, {"tmax-trev", 1.0}, {"samples", 3601}, {"fractions", "1,4,9"}}},
      {"paper-fig9-centroid",
       {{"variant", "full"}, {"x0", 0.0}, {"y0", kCentroid}, {"p0", 0.0}, {"theta", 0.0},
        {"b", kWidth}, {"tmax-trev", 1.0}, {"samples", 3601}, {"fractions", "1,9"}}},
      {"paper-fig9-quarter",
       {{"variant", "full"}, {"x0", 0.0}, {"y0", kQuarter}, {"p0", 0.0}, {"theta", 0.0},
        {"b", kWidth}, {"tmax-trev", 1.0}, {"samples", 3601}, {"fractions", "1,4"}}},
  };
  return table;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : presets().items()) names.push_back(k);
  return names;
}

struct Param {
  std::string key;
  CLI::Option* opt;
  std::function<void(const json&)> set;
  std::function<json()> get;
};

// A subcommand whose options can also be filled from a preset or a JSON
// config file. Precedence: defaults < preset < config file < explicit flags.
class Command {
 public:
  Command(CLI::App& root, const std::string& name, const std::string& description)
      : app_(root.add_subcommand(name, description)) {
    preset_opt_ = app_->add_option("--preset", preset_, "Parameter preset")
                      ->check(CLI::IsMember(preset_names()))
                      ->capture_default_str();
    app_->add_option("--config", config_path_, "JSON file of parameter overrides");
  }

  template <class T>
  CLI::Option* add(const std::string& flag, T& var, const std::string& description) {
    CLI::Option* opt = app_->add_option(flag, var, description)->capture_default_str();
    params_.push_back({flag.substr(2), opt, [&var](const json& j) { var = j.get<T>(); },
                       [&var] { return json(var); }});
    return opt;
  }

  CLI::Option* flag(const std::string& flag, bool& var, const std::string& description) {
    CLI::Option* opt = app_->add_flag(flag, var, description);
    params_.push_back({flag.substr(2), opt, [&var](const json& j) { var = j.get<bool>(); },
                       [&var] { return json(var); }});
    return opt;
  }

  CLI::App* app() const { return app_; }
  bool parsed() const { return app_->parsed(); }

  void resolve() {
    json overrides = json::object();
    json file = json::object();
    if (!config_path_.empty()) {
      std::ifstream in(config_path_);
      if (!in) throw IoError("cannot read config '" + config_path_ + "'");
      try {
        file = json::parse(in);
      } catch (const json::parse_error& e) {
        throw ValidationError("config '" + config_path_ + "' is not valid JSON: " + e.what());
      }
      if (!file.is_object()) throw ValidationError("config file must hold a JSON object");
      if (file.contains("preset") && preset_opt_->count() == 0) {
        preset_ = file.at("preset").get<std::string>();
        if (!presets().contains(preset_)) throw ValidationError("unknown preset '" + preset_ + "' in config");
      }
    }
    overrides.update(presets().at(preset_));
    for (const auto& [k, v] : file.items()) {
      if (k != "preset") overrides[k] = v;
    }
    for (auto& p : params_) {
      if (p.opt->count() > 0 || !overrides.contains(p.key)) continue;
      try {
        p.set(overrides.at(p.key));
      } catch (const json::exception& e) {
        throw ValidationError("bad value for '" + p.key + "': " + e.what());
      }
    }
    for (const auto& [k, v] : file.items()) {
      const bool known = k == "preset" || std::any_of(params_.begin(), params_.end(),
                                                       [&](const Param& p) { return p.key == k; });
      if (!known) ignored_.push_back(k);
    }
  }

  json metadata() const {
    json params = json::object();
    for (const auto& p : params_) params[p.key] = p.get();
    json meta = {{"tool", "eqtri"},
                 {"version", EQTRI_VERSION},
                 {"command", app_->get_name()},
                 {"preset", preset_},
                 {"parameters", params},
                 {"generated_at", utc_timestamp()}};
    if (!ignored_.empty()) meta["ignored_config_keys"] = ignored_;
    return meta;
  }

 private:
  CLI::App* app_;
  CLI::Option* preset_opt_ = nullptr;
  std::string preset_ = "custom";
  std::string config_path_;
  std::vector<Param> params_;
  std::vector<std::string> ignored_;
};

struct Physics {
  std::string variant = "full";
  double side = 1.0;
  double mass = 0.5;
  double hbar = 1.0;

  void bind(Command& c) {
    c.add("--variant", variant, "full or half well")->check(CLI::IsMember({"full", "half"}));
    c.add("--side", side, "Side length a");
    c.add("--mass", mass, "Particle mass");
    c.add("--hbar", hbar, "Reduced Planck constant");
  }

  BilliardConfig config() const {
    BilliardConfig cfg{side, mass, hbar, parse_variant(variant)};
    cfg.validate();
    return cfg;
  }
};

struct PacketParams {
  double x0 = 0.0;
  double y0 = kCentroid;
  double p0 = 0.0;
  double theta = 0.0;
  double b = kWidth;
  double kmax = 0.0;

  void bind(Command& c) {
    c.add("--x0", x0, "Packet center x");
    c.add("--y0", y0, "Packet center y");
    c.add("--p0", p0, "Momentum magnitude");
    c.add("--theta", theta, "Launch angle in degrees");
    c.add("--b", b, "Packet width b");
    c.add("--kmax", kmax, "Wavenumber cutoff (0: |p0|/hbar + 10/b)");
  }

  GaussianPacket packet() const { return GaussianPacket::from_polar(x0, y0, p0, theta, b); }

  std::optional<Truncation> truncation() const {
    if (kmax == 0.0) return std::nullopt;
    if (!(kmax > 0.0)) throw ValidationError("--kmax must be positive");
    return Truncation{kmax};
  }
};

json timescales_json(const TimescaleSet& ts) {
  json j = {{"v0", ts.speed}, {"T_rev", ts.revival}, {"central_m", ts.central_m}, {"central_n", ts.central_n}};
  j["t0"] = ts.spreading ? json(*ts.spreading) : json(nullptr);
  j["T_m"] = ts.period_m ? json(*ts.period_m) : json(nullptr);
  j["T_n"] = ts.period_n ? json(*ts.period_n) : json(nullptr);
  if (ts.speed > 0.0) {
    j["T_orbit_1_0"] = ts.closed_orbit_period(1, 0);
    j["T_orbit_1_1"] = ts.closed_orbit_period(1, 1);
  }
  return j;
}

json expansion_json(const ExpansionTable& table, const GaussianPacket& packet, const BilliardConfig& cfg) {
  json j = {{"captured_norm", table.captured_norm},
            {"norm_deficit", table.norm_deficit()},
            {"epsilon_max", table.epsilon_max},
            {"coefficient_count", table.coefficients.size()},
            {"wall_distance", table.placement.wall_distance},
            {"required_distance", table.placement.required},
            {"packet_energy", packet_energy(packet, cfg)},
            {"warnings", table.warnings}};
  j["energy_expectation"] = table.captured_norm >= 0.999 ? json(energy_expectation(table, cfg)) : json(nullptr);
  j["timescales"] = timescales_json(timescales(packet, cfg));
  return j;
}

void report_warnings(const ExpansionTable& table, std::ostream& err) {
  for (const auto& w : table.warnings) err << "warning: " << w << '\n';
}

std::vector<int> parse_fractions(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int v = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ValidationError("--fractions expects comma-separated integers, got '" + text + "'");
    }
  }
  if (out.empty()) throw ValidationError("--fractions is empty");
  return out;
}

struct Handler {
  std::unique_ptr<Command> cmd;
  std::function<void(Command&, std::ostream&, std::ostream&)> body;
};

// ---- spectrum ----

struct SpectrumArgs {
  Physics phys;
  int count = 20;
  std::string format = "csv";
  bool si = false;
  std::string out;
};

void spectrum(const SpectrumArgs& a, Command& c, std::ostream& out) {
  if (a.count < 1) throw ValidationError("--count must be >= 1");
  const auto cfg = a.phys.config();
  const auto levels = enumerate_levels(cfg, static_cast<std::size_t>(a.count));
  Sink sink(a.out, out);
  json meta = c.metadata();
  meta["E0"] = cfg.energy_unit();
  if (a.format == "json") {
    json rows = json::array();
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& lv = levels[i];
      json r = {{"index", i + 1},           {"m", lv.qn.m},
                {"n", lv.qn.n},             {"sym", to_string(lv.qn.sym)},
                {"epsilon", lv.epsilon},    {"k_a", lv.ka(cfg.side)},
                {"E_over_E0", lv.epsilon},  {"degeneracy", lv.degeneracy}};
      if (a.si) {
        r["energy"] = lv.energy;
        r["wavenumber"] = lv.wavenumber;
      }
      rows.push_back(r);
    }
    write_json(sink, {{"metadata", meta}, {"levels", rows}});
  } else {
    std::vector<std::string> cols{"index", "m", "n", "sym", "epsilon", "k_a", "E_over_E0", "degeneracy"};
    if (a.si) cols.insert(cols.end(), {"energy", "wavenumber"});
    CsvWriter csv(sink, meta, cols);
    for (std::size_t i = 0; i < levels.size(); ++i) {
      const auto& lv = levels[i];
      std::vector<std::string> r{std::to_string(i + 1), std::to_string(lv.qn.m), std::to_string(lv.qn.n),
                                 std::string(to_string(lv.qn.sym)), std::to_string(lv.epsilon),
                                 fmt(lv.ka(cfg.side)), std::to_string(lv.epsilon), std::to_string(lv.degeneracy)};
      if (a.si) r.insert(r.end(), {fmt(lv.energy), fmt(lv.wavenumber)});
      csv.row(r);
    }
  }
  sink.finish();
}

// ---- weyl ----

struct WeylArgs {
  Physics phys;
  int count = 1000;
  std::string out;
};

void weyl(const WeylArgs& a, Command& c, std::ostream& out) {
  if (a.count < 1) throw ValidationError("--count must be >= 1");
  const auto cfg = a.phys.config();
  const auto levels = enumerate_levels(cfg, static_cast<std::size_t>(a.count));
  // Staircase from the complete set below the last energy, so a degenerate
  // partner cut off by the count is still counted.
  const auto all = levels_up_to(cfg, levels.back().epsilon);
  double worst = 0.0;
  bool within = true;
  std::vector<std::vector<std::string>> rows;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    const double e = levels[i].energy;
    const auto n = staircase(all, e);
    const double n0 = weyl_count(cfg, e);
    const double dev = static_cast<double>(n) - n0;
    const double bound = 3.0 * std::sqrt(static_cast<double>(n)) + 5.0;
    worst = std::max(worst, std::abs(dev) / bound);
    within = within && std::abs(dev) <= bound;
    rows.push_back({std::to_string(i + 1), std::to_string(levels[i].epsilon), fmt(e), std::to_string(n), fmt(n0),
                    fmt(dev), fmt(bound)});
  }
  json meta = c.metadata();
  meta["within_bound"] = within;
  meta["max_deviation_over_bound"] = worst;
  Sink sink(a.out, out);
  CsvWriter csv(sink, meta, {"index", "epsilon", "energy", "staircase", "weyl", "deviation", "bound"});
  for (const auto& r : rows) csv.row(r);
  sink.finish();
}

// ---- eigfun ----

struct EigfunArgs {
  Physics phys;
  int m = 3;
  int n = 1;
  std::string sym = "minus";
  int grid = 101;
  std::string out;
};

void eigfun(const EigfunArgs& a, Command& c, std::ostream& out) {
  if (a.grid < 2) throw ValidationError("--grid must be >= 2");
  const auto cfg = a.phys.config();
  const EigenfunctionId id{{a.m, a.n, parse_symmetry(a.sym)}, cfg.variant};
  validate(id);
  const double x_lo = cfg.variant == Variant::half ? 0.0 : -cfg.side / 2.0;
  const double x_hi = cfg.side / 2.0;
  const double h = cfg.height();
  const auto lv = energy(id.qn, cfg);
  json meta = c.metadata();
  meta["epsilon"] = lv.epsilon;
  meta["k_a"] = lv.ka(cfg.side);
  Sink sink(a.out, out);
  CsvWriter csv(sink, meta, {"x", "y", "psi"});
  for (int iy = 0; iy < a.grid; ++iy) {
    for (int ix = 0; ix < a.grid; ++ix) {
      const Point2D p{x_lo + (x_hi - x_lo) * ix / (a.grid - 1.0), h * iy / (a.grid - 1.0)};
      if (!inside(p, cfg.variant, cfg.side)) continue;
      csv.row({fmt(p.x), fmt(p.y), fmt(psi(id, p, cfg.side))});
    }
  }
  sink.finish();
}

// ---- orbits ----

struct OrbitsArgs {
  Physics phys;
  double lmax = 20.0;
  std::string out;
};

void orbits(const OrbitsArgs& a, Command& c, std::ostream& out) {
  if (!(a.lmax > 0.0)) throw ValidationError("--lmax must be positive");
  const auto cfg = a.phys.config();
  const auto catalog = enumerate_orbits(a.lmax * cfg.side, cfg.variant, cfg.side);
  json meta = c.metadata();
  meta["families"] = catalog.size();
  meta["isolated"] = std::count_if(catalog.begin(), catalog.end(),
                                   [](const OrbitFamily& f) { return f.primitive.isolated; });
  Sink sink(a.out, out);
  CsvWriter csv(sink, meta,
                {"i_bar", "j_bar", "p", "q", "theta_deg", "primitive_length_over_a", "recurrences", "isolated"});
  for (const auto& fam : catalog) {
    const auto& o = fam.primitive;
    std::string reps;
    for (std::size_t i = 0; i < fam.multiples.size(); ++i) reps += (i ? ";" : "") + std::to_string(fam.multiples[i]);
    csv.row({std::to_string(o.i_bar), std::to_string(o.j_bar), std::to_string(o.p), std::to_string(o.q),
             fmt(o.angle_deg), fmt(o.length / cfg.side), reps, o.isolated ? "1" : "0"});
  }
  sink.finish();
}

// ---- length-spectrum ----

struct LengthArgs {
  Physics phys;
  int levels = 1000;
  double lmax = 20.0;
  double dl = 0.002;
  double prominence = 5.0;
  double exclusion = 0.5;
  double tolerance = 0.05;
  double damping = 0.0;
  std::string out;
  std::string peaks;
};

void length_spectrum(const LengthArgs& a, Command& c, std::ostream& out) {
  if (a.levels < 1) throw ValidationError("--levels must be >= 1");
  if (!(a.lmax > 0.0) || !(a.dl > 0.0)) throw ValidationError("--lmax and --dl must be positive");
  if (a.damping < 0.0) throw ValidationError("--damping must be >= 0");
  const auto cfg = a.phys.config();
  const auto grid = uniform_grid(a.lmax * cfg.side, a.dl * cfg.side);
  RhoOptions ropt;
  if (a.damping > 0.0) ropt.damping_sigma = a.damping * cfg.side;
  const auto spec = compute_rho(cfg, static_cast<std::size_t>(a.levels), grid, ropt);
  const PeakOptions popt{a.prominence, a.exclusion};
  const auto peaks = detect_peaks(spec, cfg.side, popt);
  const auto predicted = predicted_lengths(enumerate_orbits(a.lmax * cfg.side, cfg.variant, cfg.side));
  const auto matches = match_peaks(peaks, predicted, a.tolerance * cfg.side);

  const bool all_matched = std::all_of(matches.begin(), matches.end(), [](const PeakMatch& m) { return m.matched; });
  json meta = c.metadata();
  meta["peak_count"] = peaks.size();
  meta["all_predicted_matched"] = all_matched;

  Sink sink(a.out, out);
  CsvWriter csv(sink, meta, {"L_over_a", "re_rho", "im_rho", "power_norm"});
  const auto power = spec.normalized_power();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    csv.row({fmt(grid[i] / cfg.side), fmt(spec.rho[i].real()), fmt(spec.rho[i].imag()), fmt(power[i])});
  }
  sink.finish();

  std::string peak_path = a.peaks;
  if (peak_path.empty() && sink.path() != "-") peak_path = sink.path() + ".peaks.json";
  if (peak_path.empty()) return;
  json report = {{"metadata", meta}, {"peaks", json::array()}, {"matches", json::array()}};
  for (const auto& p : peaks) report["peaks"].push_back({{"L_over_a", p.length / cfg.side}, {"power", p.power}});
  for (const auto& m : matches) {
    report["matches"].push_back({{"orbit", m.orbit},
                                 {"predicted", m.predicted / cfg.side},
                                 {"detected", m.detected ? json(*m.detected / cfg.side) : json(nullptr)},
                                 {"residual", m.detected ? json(m.residual / cfg.side) : json(nullptr)},
                                 {"matched", m.matched}});
  }
  Sink psink(peak_path, out);
  write_json(psink, report);
  psink.finish();
}

// ---- expand ----

struct ExpandArgs {
  Physics phys;
  PacketParams packet;
  double min_weight = 0.0;
  std::string out;
};

void expand_cmd(const ExpandArgs& a, Command& c, std::ostream& out, std::ostream& err) {
  const auto cfg = a.phys.config();
  const auto pk = a.packet.packet();
  const auto table = expand(pk, cfg, a.packet.truncation());
  report_warnings(table, err);
  json meta = c.metadata();
  meta["expansion"] = expansion_json(table, pk, cfg);
  Sink sink(a.out, out);
  CsvWriter csv(sink, meta, {"index", "m", "n", "sym", "epsilon", "re_a", "im_a", "abs_a2"});
  for (std::size_t i = 0; i < table.coefficients.size(); ++i) {
    const auto& co = table.coefficients[i];
    const double w = std::norm(co.amplitude);
    if (w < a.min_weight) continue;
    csv.row({std::to_string(i + 1), std::to_string(co.qn.m), std::to_string(co.qn.n),
             std::string(to_string(co.qn.sym)), std::to_string(co.epsilon), fmt(co.amplitude.real()),
             fmt(co.amplitude.imag()), fmt(w)});
  }
  sink.finish();
}

// ---- autocorr ----

struct AutocorrArgs {
  Physics phys;
  PacketParams packet;
  double tmax = 0.0;
  double tmax_trev = 0.0;
  double tmax_tau = 0.0;
  int samples = 2001;
  std::string out;
};

void autocorr_cmd(const AutocorrArgs& a, Command& c, std::ostream& out, std::ostream& err) {
  if (a.samples < 2) throw ValidationError("--samples must be >= 2");
  const auto cfg = a.phys.config();
  const auto pk = a.packet.packet();
  const double speed = pk.momentum() / cfg.mass;
  double t_end = cfg.revival_time();
  if (a.tmax > 0.0) {
    t_end = a.tmax;
  } else if (a.tmax_trev > 0.0) {
    t_end = a.tmax_trev * cfg.revival_time();
  } else if (a.tmax_tau > 0.0) {
    if (!(speed > 0.0)) throw ValidationError("--tmax-tau needs p0 > 0; use --tmax or --tmax-trev");
    t_end = a.tmax_tau * cfg.side / speed;
  }
  std::vector<double> times(static_cast<std::size_t>(a.samples));
  for (std::size_t i = 0; i < times.size(); ++i) times[i] = t_end * static_cast<double>(i) / (a.samples - 1.0);

  const auto table = expand(pk, cfg, a.packet.truncation());
  report_warnings(table, err);
  const auto series = autocorrelation(table, cfg, times, pk);

  json meta = c.metadata();
  meta["expansion"] = expansion_json(table, pk, cfg);
  meta["tau"] = series.tau ? json(*series.tau) : json(nullptr);
  json markers = json::array();
  for (const auto& m : series.markers) {
    json mk = {{"orbit", m.orbit}, {"theta_deg", m.angle_deg}, {"period", m.period}};
    if (series.tau) mk["period_over_tau"] = m.period / *series.tau;
    markers.push_back(mk);
  }
  meta["closed_orbit_markers"] = markers;

  Sink sink(a.out, out);
  CsvWriter csv(sink, meta, {"t", "t_over_tau", "abs_A", "re_A", "im_A"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto v = series.values[i];
    csv.row({fmt(times[i]), series.tau ? fmt(times[i] / *series.tau) : "", fmt(std::abs(v)), fmt(v.real()),
             fmt(v.imag())});
  }
  sink.finish();
}

// ---- revivals ----

struct RevivalArgs {
  Physics phys;
  PacketParams packet;
  std::string fractions = "1,4,9";
  double threshold = 0.95;
  std::string out;
};

void revivals_cmd(const RevivalArgs& a, Command& c, std::ostream& out, std::ostream& err) {
  if (!(a.threshold > 0.0 && a.threshold <= 1.0)) throw ValidationError("--threshold must lie in (0, 1]");
  const auto fractions = parse_fractions(a.fractions);
  const auto cfg = a.phys.config();
  const auto pk = a.packet.packet();
  const auto table = expand(pk, cfg, a.packet.truncation());
  report_warnings(table, err);
  const auto rep = revival_scan(table, cfg, fractions, a.threshold);
  json doc = {{"metadata", c.metadata()},
              {"expansion", expansion_json(table, pk, cfg)},
              {"reference_abs_A", rep.reference},
              {"threshold", rep.threshold},
              {"fractions", json::array()}};
  for (const auto& fr : rep.fractions) {
    json f = {{"fraction", fr.fraction}, {"all_revived", fr.all_revived}, {"samples", json::array()}};
    for (const auto& s : fr.samples) {
      f["samples"].push_back({{"multiple", s.multiple},
                              {"t", s.time},
                              {"abs_A", s.magnitude},
                              {"ratio", s.ratio},
                              {"local_max", s.local_max},
                              {"revived", s.revived}});
    }
    doc["fractions"].push_back(f);
  }
  Sink sink(a.out, out);
  write_json(sink, doc);
  sink.finish();
}

// ---- density ----

struct DensityArgs {
  Physics phys;
  PacketParams packet;
  double t = 0.0;
  double t_trev = 0.0;
  int grid = 200;
  std::string out;
};

void density_cmd(const DensityArgs& a, Command& c, std::ostream& out, std::ostream& err) {
  if (a.grid < 2) throw ValidationError("--grid must be >= 2");
  const auto cfg = a.phys.config();
  const auto pk = a.packet.packet();
  const double t = a.t + a.t_trev * cfg.revival_time();
  const auto table = expand(pk, cfg, a.packet.truncation());
  report_warnings(table, err);
  const auto g = static_cast<std::size_t>(a.grid);
  const auto field = density_snapshot(table, cfg, t, {g, g});
  json meta = c.metadata();
  meta["expansion"] = expansion_json(table, pk, cfg);
  meta["time"] = t;
  Sink sink(a.out, out);
  CsvWriter csv(sink, meta, {"x", "y", "density"});
  for (std::size_t iy = 0; iy < g; ++iy) {
    for (std::size_t ix = 0; ix < g; ++ix) {
      if (!field.inside[iy * g + ix]) continue;
      csv.row({fmt(field.xs[ix]), fmt(field.ys[iy]), fmt(field.at(ix, iy))});
    }
  }
  sink.finish();
}

// ---- transform ----

struct TransformArgs {
  std::int64_t p = 2;
  std::int64_t q = 1;
  std::int64_t m = 2;
  std::int64_t n = 1;
  std::string out;
};

json pair_json(const IndexPair& ip) { return json::array({ip.m, ip.n}); }

void transform_cmd(const TransformArgs& a, Command& c, std::ostream& out) {
  const QNTransform t{a.p, a.q};
  const IndexPair qn{a.m, a.n};
  const auto r = apply(t, qn);
  json chain = json::array();
  for (auto rel : r.image.chain) chain.push_back(to_string(rel));
  json doc = {{"metadata", c.metadata()},
              {"transform", pair_json({a.p, a.q})},
              {"input", pair_json(qn)},
              {"raw", pair_json(r.image.raw)},
              {"image", r.image.image ? pair_json(*r.image.image) : json(nullptr)},
              {"chain", chain},
              {"minus_sign", r.image.minus_sign},
              {"plus_sign", r.image.plus_sign},
              {"epsilon_in", r.epsilon_in},
              {"epsilon_out", r.epsilon_out},
              {"factor", r.factor},
              {"multiplicative", r.epsilon_out == r.factor * r.epsilon_in}};
  if (!r.image.note.empty()) doc["note"] = r.image.note;
  Sink sink(a.out, out);
  write_json(sink, doc);
  sink.finish();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum billiard in an equilateral triangle: spectra, orbits, wave packets", "eqtri"};
  app.require_subcommand(1);
  app.set_version_flag("--version", EQTRI_VERSION);

  SpectrumArgs sa;
  WeylArgs wa;
  EigfunArgs ea;
  OrbitsArgs oa;
  LengthArgs la;
  ExpandArgs xa;
  AutocorrArgs aa;
  RevivalArgs ra;
  DensityArgs da;
  TransformArgs ta;
  std::vector<Handler> handlers;

  auto add = [&](const std::string& name, const std::string& desc) -> Command& {
    handlers.push_back({std::make_unique<Command>(app, name, desc), {}});
    return *handlers.back().cmd;
  };

  {
    auto& c = add("spectrum", "Lowest energy levels with quantum numbers");
    sa.phys.bind(c);
    c.add("--count", sa.count, "Number of levels (with multiplicity)");
    c.add("--format", sa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    c.flag("--si", sa.si, "Also report energy and wavenumber in the units of --side/--mass/--hbar");
    c.add("--out", sa.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream&) { spectrum(sa, cmd, o); };
  }
  {
    auto& c = add("weyl", "Staircase versus smooth Weyl count");
    wa.phys.bind(c);
    c.add("--count", wa.count, "Number of levels");
    c.add("--out", wa.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream&) { weyl(wa, cmd, o); };
  }
  {
    auto& c = add("eigfun", "Eigenfunction sampled on a grid inside the well");
    ea.phys.bind(c);
    c.add("--m", ea.m, "Quantum number m");
    c.add("--n", ea.n, "Quantum number n");
    c.add("--sym", ea.sym, "minus, plus or special")->check(CLI::IsMember({"minus", "plus", "special", "-", "+", "o"}));
    c.add("--grid", ea.grid, "Grid points per axis");
    c.add("--out", ea.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream&) { eigfun(ea, cmd, o); };
  }
  {
    auto& c = add("orbits", "Closed-orbit families up to a maximum length");
    oa.phys.bind(c);
    c.add("--lmax", oa.lmax, "Maximum length in units of a");
    c.add("--out", oa.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream&) { orbits(oa, cmd, o); };
  }
  {
    auto& c = add("length-spectrum", "|rho_N(L)|^2 with peak detection and orbit matching");
    la.phys.bind(c);
    c.add("--levels", la.levels, "Number of levels N");
    c.add("--lmax", la.lmax, "Maximum L/a");
    c.add("--dl", la.dl, "Grid step in units of a");
    c.add("--prominence", la.prominence, "Peak threshold as a multiple of the median power");
    c.add("--exclusion", la.exclusion, "Ignore peaks below this L/a");
    c.add("--tolerance", la.tolerance, "Match tolerance in units of a");
    c.add("--damping", la.damping, "Gaussian damping length in units of a (0: off)");
    c.add("--out", la.out, "Output path");
    c.add("--peaks", la.peaks, "Peak report path (default: <out>.peaks.json)");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream&) { length_spectrum(la, cmd, o); };
  }
  {
    auto& c = add("expand", "Expansion coefficients of a Gaussian packet");
    xa.phys.bind(c);
    xa.packet.bind(c);
    c.add("--min-weight", xa.min_weight, "Omit rows with |a|^2 below this");
    c.add("--out", xa.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream& e) { expand_cmd(xa, cmd, o, e); };
  }
  {
    auto& c = add("autocorr", "Autocorrelation A(t) of a Gaussian packet");
    aa.phys.bind(c);
    aa.packet.bind(c);
    c.add("--tmax", aa.tmax, "End time (absolute)");
    c.add("--tmax-trev", aa.tmax_trev, "End time in units of T_rev");
    c.add("--tmax-tau", aa.tmax_tau, "End time in units of tau = a/v0");
    c.add("--samples", aa.samples, "Number of time samples");
    c.add("--out", aa.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream& e) { autocorr_cmd(aa, cmd, o, e); };
  }
  {
    auto& c = add("revivals", "|A| at multiples of T_rev / f");
    ra.phys.bind(c);
    ra.packet.bind(c);
    c.add("--fractions", ra.fractions, "Comma-separated f values");
    c.add("--threshold", ra.threshold, "Revival threshold on |A(t)|/|A(0)|");
    c.add("--out", ra.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream& e) { revivals_cmd(ra, cmd, o, e); };
  }
  {
    auto& c = add("density", "Probability density of the evolved packet on a grid");
    da.phys.bind(c);
    da.packet.bind(c);
    c.add("--t", da.t, "Time (absolute)");
    c.add("--t-trev", da.t_trev, "Time in units of T_rev, added to --t");
    c.add("--grid", da.grid, "Grid points per axis");
    c.add("--out", da.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream& e) { density_cmd(da, cmd, o, e); };
  }
  {
    auto& c = add("transform", "Quantum-number map T_(p,q)[m,n]");
    c.add("--p", ta.p, "Transform label p");
    c.add("--q", ta.q, "Transform label q");
    c.add("--m", ta.m, "Input m");
    c.add("--n", ta.n, "Input n");
    c.add("--out", ta.out, "Output path");
    handlers.back().body = [&](Command& cmd, std::ostream& o, std::ostream&) { transform_cmd(ta, cmd, o); };
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return ok;
    }
    err << "error: " << e.what() << '\n';
    return validation_error;
  }

  try {
    for (auto& h : handlers) {
      if (!h.cmd->parsed()) continue;
      h.cmd->resolve();
      h.body(*h.cmd, out, err);
    }
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return io_error;
  } catch (const std::invalid_argument& e) {
    err << "invalid parameters: " << e.what() << '\n';
    return validation_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return internal_error;
  }
  return ok;
}

}  // namespace eqtri::cli

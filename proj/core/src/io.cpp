#include "fmwave/io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fmwave/energy.hpp"
#include "fmwave/geometry.hpp"

namespace fmwave {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw Error("config: expected a boolean, got '" + v + "'");
}

std::string timestamp_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json constants_json(const AuditedConstants& k) {
  json j;
  j["h0"] = k.h0;
  j["h_minus"] = k.h_minus;
  j["sigma"] = k.sigma;
  j["omega"] = k.omega;
  j["C_minus"] = k.C_minus;
  j["C_plus"] = k.C_plus;
  j["Cmix_minus"] = k.Cmix_minus;
  j["Cmix_plus"] = k.Cmix_plus;
  j["gamma_minus"] = k.gamma_minus;
  j["gamma_plus"] = k.gamma_plus;
  j["eta0_minus"] = k.eta0_minus;
  j["eta0_plus"] = k.eta0_plus;
  j["eps0_minus"] = k.eps0_minus;
  j["eps0_plus"] = k.eps0_plus;
  j["d0"] = k.d0;
  j["d_alpha0"] = k.d_alpha0;
  j["R"] = k.R;
  j["alpha_ss"] = k.alpha_ss;
  j["a_minus_singleton"] = k.a_minus_singleton;
  j["bc_eta"] = k.bc_eta;
  j["bc_gap"] = k.bc_gap;
  j["bc_item2_ok"] = k.bc_item2_ok;
  j["sigma_of_h"] = k.sigma_of_h;
  j["kappa_minus"] = k.kappa_minus;
  j["kappa_plus"] = k.kappa_plus;
  return j;
}

struct Manifest {
  json root;
  std::vector<std::string> files;

  Manifest(const std::string& command, const RunConfig& cfg) {
    root["version"] = kVersion;
    root["command"] = command;
    root["timestamp_start"] = timestamp_now();
    json c;
    for (const auto& [k, v] : cfg.as_map()) c[k] = v;
    root["config"] = c;
    root["errors"] = json::array();
  }

  void add_file(const std::string& path) { files.push_back(path); }

  void record_error(const std::string& what) { root["errors"].push_back(what); }

  void write(const std::string& out_dir) {
    root["timestamp_end"] = timestamp_now();
    json fl = json::array();
    for (const auto& f : files) fl.push_back({{"path", f}, {"fnv1a64", file_checksum(f)}});
    root["files"] = fl;
    std::ofstream os(fs::path(out_dir) / "manifest.json");
    os << root.dump(2) << "\n";
  }
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open for writing: " + path);
  os << text;
}

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

std::map<std::string, std::string> RunConfig::as_map() const {
  std::map<std::string, std::string> m;
  m["potential"] = potential;
  m["beta"] = fmt_double(beta);
  m["plateau_lo"] = fmt_double(plateau_lo);
  m["plateau_hi"] = fmt_double(plateau_hi);
  m["plateau_depth"] = fmt_double(plateau_depth);
  m["well_minus_x"] = fmt_double(well_minus_x);
  m["well_minus_y"] = fmt_double(well_minus_y);
  m["well_plus_x"] = fmt_double(well_plus_x);
  m["well_plus_y"] = fmt_double(well_plus_y);
  m["tilt"] = fmt_double(tilt);
  m["potential_file"] = potential_file;
  m["t_min"] = fmt_double(t_min);
  m["t_max"] = fmt_double(t_max);
  m["n"] = std::to_string(n);
  m["T"] = fmt_double(T);
  m["max_iters"] = std::to_string(max_iters);
  m["grad_tol"] = fmt_double(grad_tol);
  m["step_rule"] = step_rule;
  m["enforce_truncation"] = enforce_truncation ? "1" : "0";
  m["enforce_left"] = enforce_left ? "1" : "0";
  m["enforce_right"] = enforce_right ? "1" : "0";
  m["c"] = c ? fmt_double(*c) : "";
  m["c_tol"] = fmt_double(c_tol);
  m["scan_lo"] = fmt_double(scan_lo);
  m["scan_hi"] = fmt_double(scan_hi);
  m["scan_points"] = std::to_string(scan_points);
  m["oracle_shoot"] = oracle_shoot ? "1" : "0";
  m["oracle_pde"] = oracle_pde ? "1" : "0";
  m["shoot_dt"] = fmt_double(shoot_dt);
  m["shoot_offset"] = fmt_double(shoot_offset);
  m["shoot_ctol"] = fmt_double(shoot_ctol);
  m["pde_dx"] = fmt_double(pde_dx);
  m["pde_dt"] = fmt_double(pde_dt);
  m["pde_X"] = fmt_double(pde_X);
  m["pde_T"] = fmt_double(pde_T);
  m["pde_level"] = fmt_double(pde_level);
  m["pde_scheme"] = pde_scheme;
  m["pde_snap_every"] = std::to_string(pde_snap_every);
  m["out_dir"] = out_dir;
  m["seed"] = std::to_string(seed);
  m["audit_samples"] = std::to_string(audit_samples);
  m["verbose"] = verbose ? "1" : "0";
  return m;
}

void apply_override(RunConfig& cfg, const std::string& key, const std::string& value) {
  auto d = [&] { return std::stod(value); };
  auto i = [&] { return std::stoi(value); };
  if (key == "potential") cfg.potential = value;
  else if (key == "beta") cfg.beta = d();
  else if (key == "plateau_lo") cfg.plateau_lo = d();
  else if (key == "plateau_hi") cfg.plateau_hi = d();
  else if (key == "plateau_depth") cfg.plateau_depth = d();
  else if (key == "well_minus_x") cfg.well_minus_x = d();
  else if (key == "well_minus_y") cfg.well_minus_y = d();
  else if (key == "well_plus_x") cfg.well_plus_x = d();
  else if (key == "well_plus_y") cfg.well_plus_y = d();
  else if (key == "tilt") cfg.tilt = d();
  else if (key == "potential_file") cfg.potential_file = value;
  else if (key == "t_min") cfg.t_min = d();
  else if (key == "t_max") cfg.t_max = d();
  else if (key == "n") cfg.n = i();
  else if (key == "T") cfg.T = d();
  else if (key == "max_iters") cfg.max_iters = i();
  else if (key == "grad_tol") cfg.grad_tol = d();
  else if (key == "step_rule") cfg.step_rule = value;
  else if (key == "enforce_truncation") cfg.enforce_truncation = parse_bool(value);
  else if (key == "enforce_left") cfg.enforce_left = parse_bool(value);
  else if (key == "enforce_right") cfg.enforce_right = parse_bool(value);
  else if (key == "c") cfg.c = value.empty() ? std::optional<double>{} : std::optional<double>{d()};
  else if (key == "c_tol") cfg.c_tol = d();
  else if (key == "scan_lo") cfg.scan_lo = d();
  else if (key == "scan_hi") cfg.scan_hi = d();
  else if (key == "scan_points") cfg.scan_points = i();
  else if (key == "oracle_shoot") cfg.oracle_shoot = parse_bool(value);
  else if (key == "oracle_pde") cfg.oracle_pde = parse_bool(value);
  else if (key == "shoot_dt") cfg.shoot_dt = d();
  else if (key == "shoot_offset") cfg.shoot_offset = d();
  else if (key == "shoot_ctol") cfg.shoot_ctol = d();
  else if (key == "pde_dx") cfg.pde_dx = d();
  else if (key == "pde_dt") cfg.pde_dt = d();
  else if (key == "pde_X") cfg.pde_X = d();
  else if (key == "pde_T") cfg.pde_T = d();
  else if (key == "pde_level") cfg.pde_level = d();
  else if (key == "pde_scheme") cfg.pde_scheme = value;
  else if (key == "pde_snap_every") cfg.pde_snap_every = i();
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "seed") cfg.seed = std::stoull(value);
  else if (key == "audit_samples") cfg.audit_samples = i();
  else if (key == "verbose") cfg.verbose = parse_bool(value);
  else throw Error("config: unknown key '" + key + "'");
}

RunConfig RunConfig::from_map(const std::map<std::string, std::string>& kv) {
  RunConfig cfg;
  for (const auto& [k, v] : kv) apply_override(cfg, k, v);
  return cfg;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw Error("config: line " + std::to_string(lineno) + " is not key=value");
    apply_override(cfg, trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("config file not found: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_config_text(ss.str());
}

PotentialModel build_potential(const RunConfig& cfg) {
  if (cfg.potential == "tilted_cubic") return make_tilted_cubic(cfg.beta);
  if (cfg.potential == "plateau")
    return make_plateau_scalar(cfg.plateau_lo, cfg.plateau_hi, cfg.plateau_depth);
  if (cfg.potential == "planar_tilted") {
    double wm[2] = {cfg.well_minus_x, cfg.well_minus_y};
    double wp[2] = {cfg.well_plus_x, cfg.well_plus_y};
    return make_planar_tilted(std::span<const double>(wm, 2), std::span<const double>(wp, 2),
                              cfg.tilt);
  }
  if (cfg.potential == "tabulated") {
    if (cfg.potential_file.empty()) throw Error("config error: potential_file is required");
    std::ifstream is(cfg.potential_file);
    if (!is) throw Error("config error: potential file not found: " + cfg.potential_file);
    std::vector<double> us, wsv, dws;
    std::string line;
    while (std::getline(is, line)) {
      std::string s = trim(line);
      if (s.empty() || s[0] == '#' || std::isalpha(static_cast<unsigned char>(s[0]))) continue;
      for (auto& ch : s)
        if (ch == ',') ch = ' ';
      std::istringstream ls(s);
      double a, b, c2;
      if (ls >> a >> b >> c2) {
        us.push_back(a);
        wsv.push_back(b);
        dws.push_back(c2);
      }
    }
    return make_tabulated(us, wsv, dws);
  }
  throw Error("config error: unknown potential '" + cfg.potential + "'");
}

// ---------------------------------------------------------------------------
// CSV

void write_profile_csv(const std::string& path, const Profile& profile) {
  std::ostringstream os;
  os << "t";
  for (int d = 1; d <= profile.dim; ++d) os << ",u_" << d;
  os << "\n";
  for (int i = 0; i < profile.grid.n; ++i) {
    os << fmt_double(profile.grid.node(i));
    auto node = profile.node(i);
    for (int d = 0; d < profile.dim; ++d) os << "," << fmt_double(node[d]);
    os << "\n";
  }
  write_text(path, os.str());
}

Profile read_profile_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("profile file not found: " + path);
  std::string line;
  if (!std::getline(is, line)) throw Error("profile file is empty");
  int k = 0;
  for (char ch : line)
    if (ch == ',') ++k;
  std::vector<double> ts;
  std::vector<double> vals;
  while (std::getline(is, line)) {
    std::string s = trim(line);
    if (s.empty()) continue;
    for (auto& ch : s)
      if (ch == ',') ch = ' ';
    std::istringstream ls(s);
    double t;
    ls >> t;
    ts.push_back(t);
    for (int d = 0; d < k; ++d) {
      double v;
      ls >> v;
      vals.push_back(v);
    }
  }
  if (ts.size() < 3) throw Error("profile file has too few rows");
  Grid g(ts.front(), ts.back(), static_cast<int>(ts.size()));
  Profile p(g, k);
  p.values = vals;
  for (int d = 0; d < k; ++d) {
    p.pin_left[d] = vals[d];
    p.pin_right[d] = vals[(ts.size() - 1) * k + d];
  }
  return p;
}

void write_scan_csv(const std::string& path,
                    const std::vector<std::tuple<double, double, bool>>& rows) {
  std::ostringstream os;
  os << "c,m,converged\n";
  for (const auto& [c, m, ok] : rows)
    os << fmt_double(c) << "," << fmt_double(m) << "," << (ok ? 1 : 0) << "\n";
  write_text(path, os.str());
}

void write_front_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& front) {
  std::ostringstream os;
  os << "t,x_front\n";
  for (const auto& [t, x] : front) os << fmt_double(t) << "," << fmt_double(x) << "\n";
  write_text(path, os.str());
}

void write_iteration_csv(const std::string& path, const std::vector<IterationRecord>& log) {
  std::ostringstream os;
  os << "iter,energy,grad_norm,step\n";
  for (const auto& r : log)
    os << r.iter << "," << fmt_double(r.energy) << "," << fmt_double(r.grad_norm) << ","
       << fmt_double(r.step) << "\n";
  write_text(path, os.str());
}

void write_constants_csv(const std::string& path, const AuditedConstants& k) {
  std::ostringstream os;
  os << "name,value\n";
  json j = constants_json(k);
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!it.value().is_number() && !it.value().is_boolean()) continue;
    os << it.key() << "," << it.value().dump() << "\n";
  }
  write_text(path, os.str());
}

std::string audit_report_json(const AuditReport& report) {
  json j;
  j["passed"] = report.passed;
  j["inconclusive"] = report.inconclusive;
  j["samples"] = report.samples;
  j["seed"] = report.seed;
  json checks = json::array();
  for (const auto& c : report.checks) {
    json cj;
    cj["name"] = c.name;
    cj["verdict"] = to_string(c.verdict);
    cj["measured"] = c.measured;
    cj["witness"] = c.witness;
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["constants"] = constants_json(report.constants);
  return j.dump(2) + "\n";
}

std::string speed_result_json(const SpeedResult& result, const WeightedEnergyReport& energy_rep) {
  json j;
  j["c_star"] = result.c_star;
  j["bracket"] = {result.bracket_lo, result.bracket_hi};
  j["formula_speed"] = result.formula_speed;
  if (result.shooting_speed) j["shooting_speed"] = *result.shooting_speed;
  if (result.pde_speed) j["pde_speed"] = *result.pde_speed;
  j["decay_rate"] = result.decay_rate;
  j["decay_rate_predicted"] = result.decay_rate_predicted;
  j["energy_at_c_star"] = result.energy_at_c_star;
  j["m_tol_certificate"] = result.m_tol_certificate;
  j["probes"] = result.probes;
  json e;
  e["c"] = energy_rep.c;
  e["total"] = energy_rep.total;
  e["kinetic"] = energy_rep.kinetic;
  e["potential"] = energy_rep.potential;
  e["left_tail"] = energy_rep.left_tail;
  e["weight_floor_hit"] = energy_rep.weight_floor_hit;
  j["energy"] = e;
  return j.dump(2) + "\n";
}

std::string file_checksum(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("checksum: cannot open " + path);
  std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(is)),
                                   std::istreambuf_iterator<char>());
  return fnv1a64_hex(bytes);
}

bool validate_manifest(const std::string& manifest_path, std::string* problem) {
  std::ifstream is(manifest_path);
  if (!is) throw Error("manifest not found: " + manifest_path);
  json j = json::parse(is);
  for (const auto& f : j.at("files")) {
    std::string path = f.at("path").get<std::string>();
    if (!fs::exists(path)) {
      if (problem) *problem = "missing: " + path;
      return false;
    }
    if (file_checksum(path) != f.at("fnv1a64").get<std::string>()) {
      if (problem) *problem = "checksum mismatch: " + path;
      return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

MinimizeConfig minimize_config_from(const RunConfig& cfg) {
  MinimizeConfig mc;
  mc.T = cfg.T;
  mc.max_iters = cfg.max_iters;
  mc.grad_tol = cfg.grad_tol;
  if (cfg.step_rule == "fixed")
    mc.step_rule = StepRule::Fixed;
  else if (cfg.step_rule == "backtracking")
    mc.step_rule = StepRule::Backtracking;
  else
    throw Error("config error: unknown step rule '" + cfg.step_rule + "'");
  mc.enforce_truncation = cfg.enforce_truncation;
  mc.enforce_left_constraint = cfg.enforce_left;
  mc.enforce_right_constraint = cfg.enforce_right;
  mc.record_iterations = cfg.verbose;
  return mc;
}

json markers_json(const TransitionMarkers& mk) {
  json j;
  j["t1_minus"] = mk.t1_minus ? json(*mk.t1_minus) : json();
  j["t2_minus"] = mk.t2_minus ? json(*mk.t2_minus) : json();
  j["t_plus"] = mk.t_plus ? json(*mk.t_plus) : json();
  j["alpha_minus"] = mk.alpha_minus;
  j["alpha_0"] = mk.alpha_0;
  j["eps0_plus"] = mk.eps0_plus;
  return j;
}

}  // namespace

int cmd_solve(const RunConfig& cfg) {
  PotentialModel pot;
  try {
    pot = build_potential(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  fs::create_directories(cfg.out_dir);
  Manifest man("solve", cfg);
  try {
    AuditReport rep = audit(pot, cfg.audit_samples, cfg.seed);
    Grid grid(cfg.t_min, cfg.t_max, cfg.n);

    SpeedConfig sc;
    sc.c_tol = cfg.c_tol;
    sc.minimize = minimize_config_from(cfg);
    sc.refine = sc.minimize;
    sc.refine.grad_tol = std::min(cfg.grad_tol, 1e-6);

    SpeedResult result;
    if (cfg.c) {
      result.c_star = *cfg.c;
      result.bracket_lo = result.bracket_hi = *cfg.c;
      MinimizeResult mr = minimize(pot, rep.constants, grid, *cfg.c, sc.refine);
      result.profile = mr.profile;
      result.energy_at_c_star = mr.energy;
      result.m_tol_certificate = energy_scale_tolerance(pot, grid, *cfg.c, 1e-6);
      result.formula_speed = speed_formula(result.profile, pot);
      DecayFit fit = fit_decay_rate(result.profile, pot, *cfg.c);
      result.decay_rate = fit.fitted;
      result.decay_rate_predicted = fit.predicted;
    } else {
      result = bisect_speed(pot, rep.constants, grid, sc);
    }

    TransitionMarkers mk = transition_markers(result.profile, pot, rep.constants);
    double resid = ode_residual(result.profile, pot, result.c_star);
    WeightedEnergyReport erep = energy(result.profile, pot, result.c_star);

    // Left-tail distance to the deep set (reported, not asserted).
    double tail_dist = 0.0;
    for (int i = 0; i < grid.n && grid.node(i) <= -std::min(-grid.t_min, grid.t_max) / 4.0; ++i)
      tail_dist = std::max(tail_dist, pot.minima_minus.distance(result.profile.node(i)));

    fs::path base(cfg.out_dir);
    write_profile_csv((base / "profile.csv").string(), result.profile);
    man.add_file((base / "profile.csv").string());
    write_text((base / "speed_result.json").string(), speed_result_json(result, erep));
    man.add_file((base / "speed_result.json").string());
    write_text((base / "audit_report.json").string(), audit_report_json(rep));
    man.add_file((base / "audit_report.json").string());
    write_constants_csv((base / "constants.csv").string(), rep.constants);
    man.add_file((base / "constants.csv").string());
    if (cfg.verbose) {
      MinimizeConfig logged = sc.refine;
      logged.record_iterations = true;
      MinimizeResult lm = minimize(pot, rep.constants, grid, result.c_star, logged);
      write_iteration_csv((base / "iterations.csv").string(), lm.log);
      man.add_file((base / "iterations.csv").string());
    }

    json results;
    results["c_star"] = result.c_star;
    results["formula_speed"] = result.formula_speed;
    results["energy_at_c_star"] = result.energy_at_c_star;
    results["ode_residual"] = resid;
    results["decay_rate"] = result.decay_rate;
    results["decay_rate_predicted"] = result.decay_rate_predicted;
    results["markers"] = markers_json(mk);
    results["left_tail_distance"] = tail_dist;
    results["audit_passed"] = rep.passed;
    results["audit_inconclusive"] = rep.inconclusive;
    man.root["constants"] = constants_json(rep.constants);
    man.root["results"] = results;
    man.write(cfg.out_dir);
    std::printf("c_star = %.6f (formula %.6f, residual %.3e)\n", result.c_star,
                result.formula_speed, resid);
    return 0;
  } catch (const Error& e) {
    man.record_error(e.what());
    man.write(cfg.out_dir);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_scan(const RunConfig& cfg) {
  PotentialModel pot;
  try {
    pot = build_potential(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  fs::create_directories(cfg.out_dir);
  Manifest man("scan", cfg);
  try {
    AuditReport rep = audit(pot, cfg.audit_samples, cfg.seed);
    Grid grid(cfg.t_min, cfg.t_max, cfg.n);
    MinimizeConfig mc = minimize_config_from(cfg);

    double lo = cfg.scan_lo, hi = cfg.scan_hi;
    if (!(lo > 0.0) || !(hi > lo)) {
      SpeedConfig sc;
      sc.c_tol = cfg.c_tol;
      sc.minimize = mc;
      SpeedResult r = bisect_speed(pot, rep.constants, grid, sc);
      lo = 0.5 * r.c_star;
      hi = 1.5 * r.c_star;
      man.root["results"]["c_star"] = r.c_star;
    }

    double T_eff = mc.T > 0.0 ? mc.T : std::min(-grid.t_min, grid.t_max) / 4.0;
    std::vector<std::tuple<double, double, bool>> rows;
    int sign_changes = 0;
    bool prev_neg = false;
    for (int i = 0; i < cfg.scan_points; ++i) {
      double c = lo + (hi - lo) * i / (cfg.scan_points - 1);
      bool converged = true;
      double m = 0.0;
      try {
        MinimizeResult mr = minimize(pot, rep.constants, grid, c, mc);
        m = mr.energy;
        converged = mr.converged;
      } catch (const Error&) {
        converged = false;
        m = std::nan("");
      }
      double thr = 1e-6 * std::abs(pot.depth) * std::exp(-c * T_eff) / c;
      bool neg = m < -thr;
      if (i > 0 && neg != prev_neg) ++sign_changes;
      prev_neg = neg;
      rows.emplace_back(c, m, converged);
    }

    fs::path base(cfg.out_dir);
    write_scan_csv((base / "scan.csv").string(), rows);
    man.add_file((base / "scan.csv").string());
    man.root["results"]["sign_changes"] = sign_changes;
    man.root["results"]["single_sign_change"] = sign_changes == 1;
    man.root["constants"] = constants_json(rep.constants);
    man.write(cfg.out_dir);
    std::printf("scan wrote %d points, %d sign change(s)\n", cfg.scan_points, sign_changes);
    return 0;
  } catch (const Error& e) {
    man.record_error(e.what());
    man.write(cfg.out_dir);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_oracle(const RunConfig& cfg) {
  PotentialModel pot;
  try {
    pot = build_potential(cfg);
    if (cfg.oracle_shoot && pot.dim != 1)
      throw Error("config error: shooting oracle requires a scalar potential");
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  fs::create_directories(cfg.out_dir);
  Manifest man("oracle", cfg);
  int status = 0;
  try {
    AuditReport rep = audit(pot, cfg.audit_samples, cfg.seed);
    json results;
    if (cfg.oracle_shoot) {
      ShootingConfig scfg;
      scfg.dt_ode = cfg.shoot_dt;
      scfg.start_offset = cfg.shoot_offset;
      double hi = 2.0 * bracket_bound(pot, rep.constants);
      double speed = shoot_speed(pot, scfg, cfg.shoot_ctol, 1e-6, hi);
      results["shooting_speed"] = speed;
      std::printf("shooting speed = %.7f\n", speed);
    }
    if (cfg.oracle_pde) {
      PdeConfig pcfg;
      pcfg.dx = cfg.pde_dx;
      pcfg.dt = cfg.pde_dt;
      pcfg.half_length = cfg.pde_X;
      pcfg.t_end = cfg.pde_T;
      pcfg.tracking_level = cfg.pde_level;
      pcfg.snapshot_every = cfg.pde_snap_every;
      pcfg.scheme = cfg.pde_scheme == "explicit" ? PdeScheme::Explicit : PdeScheme::SemiImplicit;
      fs::path base(cfg.out_dir);
      try {
        PdeResult pr = pde_front_speed(pot, pcfg);
        results["pde_speed"] = pr.speed;
        results["pde_invariant_overshoot"] = pr.invariant_overshoot;
        write_front_csv((base / "front.csv").string(), pr.front);
        man.add_file((base / "front.csv").string());
        if (!pr.snapshots.empty()) {
          std::ostringstream os;
          os << "t,i,values\n";
          for (std::size_t s = 0; s < pr.snapshots.size(); ++s) {
            for (std::size_t i = 0; i < pr.snapshots[s].size(); ++i)
              os << fmt_double(pr.snapshot_times[s]) << "," << i << ","
                 << fmt_double(pr.snapshots[s][i]) << "\n";
          }
          write_text((base / "snapshots.csv").string(), os.str());
          man.add_file((base / "snapshots.csv").string());
        }
        std::printf("pde front speed = %.6f\n", pr.speed);
      } catch (const PdeDomainError& e) {
        write_front_csv((base / "front.csv").string(), e.front);
        man.add_file((base / "front.csv").string());
        man.record_error(e.what());
        std::fprintf(stderr, "error: %s\n", e.what());
        status = 1;
      }
    }
    man.root["results"] = results;
    man.root["constants"] = constants_json(rep.constants);
    man.write(cfg.out_dir);
    return status;
  } catch (const Error& e) {
    man.record_error(e.what());
    man.write(cfg.out_dir);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

int cmd_audit(const RunConfig& cfg) {
  PotentialModel pot;
  try {
    pot = build_potential(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  }
  fs::create_directories(cfg.out_dir);
  Manifest man("audit", cfg);
  try {
    AuditReport rep = audit(pot, cfg.audit_samples, cfg.seed);
    fs::path base(cfg.out_dir);
    write_text((base / "audit_report.json").string(), audit_report_json(rep));
    man.add_file((base / "audit_report.json").string());
    write_constants_csv((base / "constants.csv").string(), rep.constants);
    man.add_file((base / "constants.csv").string());
    man.root["results"]["audit_passed"] = rep.passed;
    man.root["results"]["audit_inconclusive"] = rep.inconclusive;
    man.root["constants"] = constants_json(rep.constants);
    man.write(cfg.out_dir);
    std::printf("audit: %s\n", rep.passed ? (rep.inconclusive ? "pass (with inconclusive checks)"
                                                              : "pass")
                                          : "fail");
    return rep.passed ? 0 : 1;
  } catch (const Error& e) {
    man.record_error(e.what());
    man.write(cfg.out_dir);
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}

}  // namespace fmwave

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fmwave/audit.hpp"
#include "fmwave/grid.hpp"
#include "fmwave/pde.hpp"
#include "fmwave/potential.hpp"
#include "fmwave/shooting.hpp"
#include "fmwave/speed.hpp"

namespace fmwave {

/// Flat key=value run configuration (one key per line, '#' comments).
struct RunConfig {
  // Potential selection.
  std::string potential = "tilted_cubic";  // tilted_cubic | plateau | planar_tilted | tabulated
  double beta = 0.25;
  double plateau_lo = -2.0, plateau_hi = -1.0, plateau_depth = -0.05;
  double well_minus_x = 0.0, well_minus_y = 0.0;
  double well_plus_x = 1.0, well_plus_y = 0.0;
  double tilt = 0.1;
  std::string potential_file;

  // Window.
  double t_min = -40.0, t_max = 40.0;
  int n = 4001;

  // Minimizer.
  double T = 0.0;  // 0 = default
  int max_iters = 20000;
  double grad_tol = 1e-4;
  std::string step_rule = "backtracking";
  bool enforce_truncation = true, enforce_left = true, enforce_right = true;

  // Speed solver.
  std::optional<double> c;  // fixed speed; empty = bisect
  double c_tol = 1e-4;
  double scan_lo = 0.0, scan_hi = 0.0;  // 0,0 = auto around c*
  int scan_points = 21;

  // Oracles.
  bool oracle_shoot = true, oracle_pde = true;
  double shoot_dt = 1e-3, shoot_offset = 1e-8, shoot_ctol = 1e-8;
  double pde_dx = 0.05, pde_dt = 0.05, pde_X = 100.0, pde_T = 150.0, pde_level = 0.5;
  std::string pde_scheme = "semi_implicit";
  int pde_snap_every = 0;

  // Run control.
  std::string out_dir = "out";
  std::uint64_t seed = 20240001;
  int audit_samples = 20000;
  bool verbose = false;

  std::map<std::string, std::string> as_map() const;
  static RunConfig from_map(const std::map<std::string, std::string>& kv);
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text);
void apply_override(RunConfig& cfg, const std::string& key, const std::string& value);

/// Builds the configured potential model.
PotentialModel build_potential(const RunConfig& cfg);

// ---------------------------------------------------------------------------
// Serialization.

/// Profile CSV: header "t,u_1,...,u_k", one row per node, %.17g formatting.
void write_profile_csv(const std::string& path, const Profile& profile);
Profile read_profile_csv(const std::string& path);

void write_scan_csv(const std::string& path,
                    const std::vector<std::tuple<double, double, bool>>& rows);
void write_front_csv(const std::string& path,
                     const std::vector<std::pair<double, double>>& front);
void write_iteration_csv(const std::string& path, const std::vector<IterationRecord>& log);
void write_constants_csv(const std::string& path, const AuditedConstants& k);

std::string audit_report_json(const AuditReport& report);
std::string speed_result_json(const SpeedResult& result, const WeightedEnergyReport& energy);

std::string file_checksum(const std::string& path);  // fnv1a64 of the bytes

/// Re-validates a manifest: every listed artifact must exist and match its
/// recorded checksum. On failure, `problem` names the offending file.
bool validate_manifest(const std::string& manifest_path, std::string* problem = nullptr);

// ---------------------------------------------------------------------------
// Commands. Each returns a process exit status and writes its artifacts plus
// a manifest under cfg.out_dir.

int cmd_solve(const RunConfig& cfg);
int cmd_scan(const RunConfig& cfg);
int cmd_oracle(const RunConfig& cfg);
int cmd_audit(const RunConfig& cfg);

}  // namespace fmwave

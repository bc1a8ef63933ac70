#pragma once

#include <set>
#include <string>
#include <vector>

#include "qcbounds/enumerators.hpp"

namespace qcb {

enum class Bound { lp, delsarte, lovasz, gamma, sdp, sdp_relax };
Bound parse_bound(const std::string& s);  // "lp", "delsarte", "lovasz", "gamma", "sdp", "sdp-relax"
const char* to_string(Bound b);

// Exit codes shared by every command.
inline constexpr int kExitFeasible = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitCertified = 2;
inline constexpr int kExitNumeric = 3;

struct RunConfig {
  std::string command;  // check, certify, verify, export
  std::vector<Bound> bounds{Bound::sdp};
  int n = 0;
  long K = 1;
  int delta = 1;
  bool pure = false;
  bool shadow = false;
  bool complement = true;
  StabType stab = StabType::none;
  double tol = 1e-8;
  double feas_tol = 1e-6;
  std::string output;  // empty: stdout
  std::string input;   // certificate path for verify
  int threads = 1;
  bool verbose = false;
};

// Fills the fields named in a flat JSON object ("bound", "n", "K", "d", "pure",
// "shadow", "stab", "complement", "tol", "feas_tol", "output") unless the key is
// in `given` (set from the command line, which takes precedence).
void apply_config_json(const std::string& json_text, RunConfig& cfg, const std::set<std::string>& given);

// Throws std::invalid_argument with a usage hint on inconsistent parameters.
void validate(const RunConfig& cfg);

struct CommandResult {
  int exit_code = kExitError;
  std::string report;    // JSON
  std::string artifact;  // certificate JSON or SDPA text, when the command makes one
};

// Builds and solves each requested bound; several bounds run on a pool of
// cfg.threads workers. Exit code: 2 if any bound is certified infeasible, else
// 3 if any is numerically infeasible, else 1 on a solver error, else 0.
CommandResult cmd_check(const RunConfig& cfg);
// Dual solve, rounding and exact verification for lovasz and sdp-relax.
CommandResult cmd_certify(const RunConfig& cfg);
CommandResult cmd_verify(const RunConfig& cfg);
CommandResult cmd_export(const RunConfig& cfg);

}  // namespace qcb

#pragma once

#include <stdexcept>
#include <string>

namespace actis {

/// Failure categories; the CLI maps these onto process exit codes.
enum class ErrorCode {
  config,                // bad configuration / argument / constraint violation
  invalid_grid,          // grid geometry not representable
  overlap_risk,          // deformation large enough that nodes could cross
  parity,                // odd polynomial term where parity symmetry is required
  domain,                // input outside the mathematical domain of an operation
  invalid_trajectory,    // non-finite or malformed trajectory samples
  caustic_singularity,   // analytic action evaluated at sin(omega T) ~ 0
  bvp_failure,           // boundary-value shooting did not converge
  blow_up,               // integration produced non-finite state
  assembly,              // action-matrix assembly failed for some node pair
  eigensolver,           // dense symmetric eigensolve did not converge
  unfolding_degeneracy,  // fitted integrated density is not monotone
  insufficient_data,     // too few levels / spacings for the requested analysis
  fit_degenerate,        // spacing sample cannot support a distribution fit
  perturbation_domain,   // smallness condition violated
  solver,                // generic numerical solver failure
  stat_test,             // statistical self-test failed
  io,                    // file read/write failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  /// Exit code contract: 0 success, 2 config, 3 solver, 4 statistical test.
  int exit_code() const noexcept {
    switch (code_) {
      case ErrorCode::config:
      case ErrorCode::invalid_grid:
      case ErrorCode::overlap_risk:
      case ErrorCode::parity:
      case ErrorCode::domain:
      case ErrorCode::insufficient_data:
        return 2;
      case ErrorCode::stat_test:
        return 4;
      case ErrorCode::io:
        return 1;
      default:
        return 3;
    }
  }

 private:
  ErrorCode code_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::config: return "config";
    case ErrorCode::invalid_grid: return "invalid-grid";
    case ErrorCode::overlap_risk: return "overlap-risk";
    case ErrorCode::parity: return "parity";
    case ErrorCode::domain: return "domain";
    case ErrorCode::invalid_trajectory: return "invalid-trajectory";
    case ErrorCode::caustic_singularity: return "caustic-singularity";
    case ErrorCode::bvp_failure: return "bvp-failure";
    case ErrorCode::blow_up: return "blow-up";
    case ErrorCode::assembly: return "assembly";
    case ErrorCode::eigensolver: return "eigensolver";
    case ErrorCode::unfolding_degeneracy: return "unfolding-degeneracy";
    case ErrorCode::insufficient_data: return "insufficient-data";
    case ErrorCode::fit_degenerate: return "fit-degenerate";
    case ErrorCode::perturbation_domain: return "perturbation-domain";
    case ErrorCode::solver: return "solver";
    case ErrorCode::stat_test: return "stat-test";
    case ErrorCode::io: return "io";
  }
  return "unknown";
}

}  // namespace actis

#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "airnet/assembly.hpp"
#include "airnet/network.hpp"

namespace airnet {

enum class Strategy { NR, WM, PNR, PWM };
enum class RelaxMode { Fixed, Walton };
enum class PicardAbort { Singular, ReciprocalFlow };

std::string_view to_string(Strategy s);
std::string_view to_string(PicardAbort a);
/// Accepts "nr", "wm", "pnr", "pwm" in any case.
std::optional<Strategy> parse_strategy(std::string_view name);

struct SolverConfig {
  double tolerance = 1e-3;        // kg/s, per-zone mass balance
  int max_newton_iters = 500;
  double fixed_relax = 0.1;       // NR under-relaxation
  int picard_iters = 10;
  double accel = 0.5;             // p_{k+1} = a p_k + (1 - a) p*
  double trunc_pa = 60.0;         // per-update cap on Picard pressure change
  double dp_lin = kDefaultDpLin;
  double relax_min = 0.1;         // Walton clamp
  double relax_max = 1.0;
  /// Picard also gives up when the pivot ratio of A falls below this,
  /// which is looser than the singular threshold used for Newton steps.
  double picard_pivot_floor = 1e-10;

  /// Throws std::invalid_argument listing the first bad field.
  void validate() const;
};

struct SolveOutcome {
  Strategy strategy = Strategy::NR;
  PressureVector pressures;
  std::vector<LinkFlow> link_flows;
  int newton_iters = 0;
  int picard_iters_used = 0;
  bool converged_in_picard = false;
  std::optional<PicardAbort> picard_aborted;
  double max_residual = 0.0;
};

struct PicardResult {
  PressureVector pressures;
  int iters_used = 0;
  bool converged = false;
  std::optional<PicardAbort> aborted;
  double max_residual = 0.0;
};

/// Newton did not reach the tolerance within max_newton_iters. The
/// outcome holds the last iterate.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(SolveOutcome last);
  const SolveOutcome& outcome() const { return outcome_; }

 private:
  SolveOutcome outcome_;
};

class SingularJacobian : public std::runtime_error {
 public:
  explicit SingularJacobian(SolveOutcome last);
  const SolveOutcome& outcome() const { return outcome_; }

 private:
  SolveOutcome outcome_;
};

/// Walton-style per-node relaxation: 1 unless the correction reversed sign
/// since the previous iteration, then c / (c - c_prev) clamped to
/// [lo, hi].
double walton_relaxation(double correction, double previous, double lo, double hi);

SolveOutcome solve_newton(const Network& net, const BoundaryState& bc, const PressureVector& p0,
                          const SolverConfig& cfg, RelaxMode mode);

/// Damped fixed-point iteration on A(p_k) p* = B(p_k). Stops early when the
/// true residual meets the tolerance, and aborts (keeping the last iterate)
/// on a singular or ill-conditioned A or on two-way flow through a large
/// opening.
PicardResult picard_init(const Network& net, const BoundaryState& bc, const PressureVector& p0,
                         const SolverConfig& cfg);

SolveOutcome solve(const Network& net, const BoundaryState& bc, const PressureVector& p0, Strategy strategy,
                   const SolverConfig& cfg);

// Same operations on a prebuilt assembly, for callers that reuse it.
SolveOutcome solve_newton(const Assembly& assembly, const PressureVector& p0, const SolverConfig& cfg,
                          RelaxMode mode);
PicardResult picard_init(const Assembly& assembly, const PressureVector& p0, const SolverConfig& cfg);
SolveOutcome solve(const Assembly& assembly, const PressureVector& p0, Strategy strategy, const SolverConfig& cfg);

}  // namespace airnet

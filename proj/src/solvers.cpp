#include "airnet/solvers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "airnet/dense_linear.hpp"

namespace airnet {

std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::NR: return "NR";
    case Strategy::WM: return "WM";
    case Strategy::PNR: return "PNR";
    case Strategy::PWM: return "PWM";
  }
  return "?";
}

std::string_view to_string(PicardAbort a) {
  return a == PicardAbort::Singular ? "singular" : "reciprocal-flow";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  std::string lower(name);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "nr") return Strategy::NR;
  if (lower == "wm") return Strategy::WM;
  if (lower == "pnr") return Strategy::PNR;
  if (lower == "pwm") return Strategy::PWM;
  return std::nullopt;
}

void SolverConfig::validate() const {
  auto bad = [](const char* what) { throw std::invalid_argument(std::string("invalid solver config: ") + what); };
  if (!(tolerance > 0.0)) bad("tolerance must be > 0");
  if (max_newton_iters < 0) bad("max_newton_iters must be >= 0");
  if (!(fixed_relax > 0.0 && fixed_relax <= 1.0)) bad("fixed_relax must be in (0, 1]");
  if (picard_iters < 0) bad("picard_iters must be >= 0");
  if (!(accel >= 0.0 && accel < 1.0)) bad("accel must be in [0, 1)");
  if (!(trunc_pa > 0.0)) bad("trunc_pa must be > 0");
  if (!(dp_lin > 0.0)) bad("dp_lin must be > 0");
  if (!(relax_min > 0.0 && relax_min <= relax_max && relax_max <= 1.0)) bad("relax clamp must satisfy 0 < min <= max <= 1");
}

NonConvergence::NonConvergence(SolveOutcome last)
    : std::runtime_error("no convergence after " + std::to_string(last.newton_iters) +
                         " Newton iterations (max residual " + std::to_string(last.max_residual) + " kg/s)"),
      outcome_(std::move(last)) {}

SingularJacobian::SingularJacobian(SolveOutcome last)
    : std::runtime_error("singular Jacobian at Newton iteration " + std::to_string(last.newton_iters + 1)),
      outcome_(std::move(last)) {}

double walton_relaxation(double correction, double previous, double lo, double hi) {
  if (correction * previous >= 0.0) return 1.0;
  return std::clamp(correction / (correction - previous), lo, hi);
}

namespace {

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

SolveOutcome newton_loop(const Assembly& as, PressureVector p, const SolverConfig& cfg, RelaxMode mode,
                         SolveOutcome out) {
  const std::size_t n = p.size();
  std::vector<double> f = as.residual(p);
  double r = max_abs(f);
  std::vector<double> previous(n, 0.0);
  out.newton_iters = 0;

  auto finish = [&](SolveOutcome& o) {
    o.max_residual = r;
    o.link_flows = as.link_flows(p);
    o.pressures = p;
  };

  while (!(r <= cfg.tolerance)) {
    if (out.newton_iters >= cfg.max_newton_iters || !all_finite(p)) {
      finish(out);
      throw NonConvergence(std::move(out));
    }
    for (auto& v : f) v = -v;
    SolveReport step = lu_solve(as.jacobian(p), f);
    if (step.singular) {
      finish(out);
      throw SingularJacobian(std::move(out));
    }
    const auto& c = *step.solution;
    ++out.newton_iters;
    for (std::size_t i = 0; i < n; ++i) {
      double w = cfg.fixed_relax;
      if (mode == RelaxMode::Walton)
        w = out.newton_iters > 1 ? walton_relaxation(c[i], previous[i], cfg.relax_min, cfg.relax_max) : 1.0;
      p[i] += w * c[i];
    }
    previous = c;
    f = as.residual(p);
    r = max_abs(f);
  }
  finish(out);
  return out;
}

}  // namespace

SolveOutcome solve_newton(const Assembly& as, const PressureVector& p0, const SolverConfig& cfg, RelaxMode mode) {
  cfg.validate();
  if (p0.size() != as.network().zone_count()) throw std::invalid_argument("initial pressure vector has wrong length");
  SolveOutcome seed;
  seed.strategy = mode == RelaxMode::Fixed ? Strategy::NR : Strategy::WM;
  return newton_loop(as, p0, cfg, mode, std::move(seed));
}

PicardResult picard_init(const Assembly& as, const PressureVector& p0, const SolverConfig& cfg) {
  cfg.validate();
  if (p0.size() != as.network().zone_count()) throw std::invalid_argument("initial pressure vector has wrong length");
  PicardResult res;
  res.pressures = p0;
  auto& p = res.pressures;
  res.max_residual = max_abs(as.residual(p));
  if (res.max_residual <= cfg.tolerance) {
    res.converged = true;
    return res;
  }

  for (int k = 0; k < cfg.picard_iters; ++k) {
    LinearSystem sys;
    try {
      sys = as.picard_system(p);
    } catch (const ReciprocalFlow&) {
      res.aborted = PicardAbort::ReciprocalFlow;
      return res;
    }
    SolveReport target = lu_solve(std::move(sys.matrix), sys.rhs);
    if (target.singular || target.pivot_ratio < cfg.picard_pivot_floor || !all_finite(*target.solution)) {
      res.aborted = PicardAbort::Singular;
      return res;
    }
    const auto& star = *target.solution;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double change = (1.0 - cfg.accel) * (star[i] - p[i]);
      p[i] += std::clamp(change, -cfg.trunc_pa, cfg.trunc_pa);
    }
    res.iters_used = k + 1;
    res.max_residual = max_abs(as.residual(p));
    if (res.max_residual <= cfg.tolerance) {
      res.converged = true;
      return res;
    }
  }
  return res;
}

SolveOutcome solve(const Assembly& as, const PressureVector& p0, Strategy strategy, const SolverConfig& cfg) {
  cfg.validate();
  if (p0.size() != as.network().zone_count()) throw std::invalid_argument("initial pressure vector has wrong length");
  const RelaxMode mode = (strategy == Strategy::NR || strategy == Strategy::PNR) ? RelaxMode::Fixed : RelaxMode::Walton;
  SolveOutcome seed;
  seed.strategy = strategy;
  if (strategy == Strategy::NR || strategy == Strategy::WM) return newton_loop(as, p0, cfg, mode, std::move(seed));

  PicardResult init = picard_init(as, p0, cfg);
  seed.picard_iters_used = init.iters_used;
  seed.picard_aborted = init.aborted;
  if (init.converged) {
    seed.converged_in_picard = true;
    seed.max_residual = init.max_residual;
    seed.link_flows = as.link_flows(init.pressures);
    seed.pressures = std::move(init.pressures);
    return seed;
  }
  return newton_loop(as, init.pressures, cfg, mode, std::move(seed));
}

SolveOutcome solve_newton(const Network& net, const BoundaryState& bc, const PressureVector& p0,
                          const SolverConfig& cfg, RelaxMode mode) {
  return solve_newton(Assembly(net, bc, cfg.dp_lin), p0, cfg, mode);
}

PicardResult picard_init(const Network& net, const BoundaryState& bc, const PressureVector& p0,
                         const SolverConfig& cfg) {
  return picard_init(Assembly(net, bc, cfg.dp_lin), p0, cfg);
}

SolveOutcome solve(const Network& net, const BoundaryState& bc, const PressureVector& p0, Strategy strategy,
                   const SolverConfig& cfg) {
  return solve(Assembly(net, bc, cfg.dp_lin), p0, strategy, cfg);
}

}  // namespace airnet

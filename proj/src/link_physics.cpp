#include "airnet/link_physics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace airnet {

double air_density(double temperature_k) {
  if (!(temperature_k > 0.0)) throw std::domain_error("air temperature must be > 0 K");
  return kDensityConstant / temperature_k;
}

double crack_flow(double k, double n, double dp, double dp_lin) {
  const double mag = std::abs(dp);
  if (mag < dp_lin) return k * std::pow(dp_lin, n - 1.0) * dp;
  return std::copysign(k * std::pow(mag, n), dp);
}

double crack_derivative(double k, double n, double dp, double dp_lin) {
  const double mag = std::abs(dp);
  if (mag < dp_lin) return k * std::pow(dp_lin, n - 1.0);
  return n * k * std::pow(mag, n - 1.0);
}

double crack_conductance(double k, double n, double dp, double dp_lin) {
  return k * std::pow(std::max(std::abs(dp), dp_lin), n - 1.0);
}

namespace {

// Integral over one segment of g(|dP|) and g'(|dP|), where |dP| varies
// linearly from a to b over len without changing sign and
//   g(x) = sqrt(x)            for x >= dp_lin
//   g(x) = x / sqrt(dp_lin)   below (same floor as a crack with n = 0.5).
// The sqrt part uses (b^1.5 - a^1.5)/(b - a) = (a + sqrt(ab) + b)/(sqrt(a) + sqrt(b))
// so a vanishing slope does not cancel.
struct Integral {
  double flow = 0.0;
  double derivative = 0.0;
};

Integral integrate_segment(double a, double b, double len, double dp_lin) {
  if (a > b) std::swap(a, b);
  const double root_lin = std::sqrt(dp_lin);
  Integral out;
  auto linear = [&](double lo, double hi, double l) {
    out.flow += l * 0.5 * (lo + hi) / root_lin;
    out.derivative += l / root_lin;
  };
  auto root = [&](double lo, double hi, double l) {
    const double rl = std::sqrt(lo), rh = std::sqrt(hi);
    out.flow += l * (2.0 / 3.0) * (lo + rl * rh + hi) / (rl + rh);
    out.derivative += l / (rl + rh);
  };
  if (b <= dp_lin) {
    linear(a, b, len);
  } else if (a >= dp_lin) {
    root(a, b, len);
  } else {
    const double t = (dp_lin - a) / (b - a);
    linear(a, dp_lin, t * len);
    root(dp_lin, b, (1.0 - t) * len);
  }
  return out;
}

struct Segment {
  double a;     // |dP| at lower edge
  double b;     // |dP| at upper edge
  double len;
  int sign;     // +1 from->to, -1 to->from, 0 none
};

struct Split {
  Segment seg[2];
  int count = 0;
  std::optional<double> neutral;
};

Split split_opening(const LargeOpening& o, double rho_from, double rho_to, double dp_bottom) {
  const double slope = kGravity * (rho_from - rho_to);
  const double h = o.height_m;
  const double top = dp_bottom - slope * h;
  Split s;
  if (slope != 0.0) {
    const double zn = dp_bottom / slope;
    if (zn >= 0.0 && zn <= h) s.neutral = zn;
    if (zn > 0.0 && zn < h) {
      const int lower = dp_bottom > 0.0 ? 1 : -1;
      s.seg[0] = {std::abs(dp_bottom), 0.0, zn, lower};
      s.seg[1] = {0.0, std::abs(top), h - zn, -lower};
      s.count = 2;
      return s;
    }
  }
  const double mid = dp_bottom + top;
  const int sign = mid > 0.0 ? 1 : (mid < 0.0 ? -1 : 0);
  s.seg[0] = {std::abs(dp_bottom), std::abs(top), h, sign};
  s.count = 1;
  return s;
}

}  // namespace

TwoWayFlow large_opening_flow(const LargeOpening& o, double rho_from, double rho_to, double dp_bottom,
                              double dp_lin) {
  TwoWayFlow out;
  const Split s = split_opening(o, rho_from, rho_to, dp_bottom);
  out.neutral_height = s.neutral;
  for (int i = 0; i < s.count; ++i) {
    const auto& seg = s.seg[i];
    if (seg.sign == 0) continue;
    const double rho = seg.sign > 0 ? rho_from : rho_to;
    const double m = o.cd * o.width_m * std::sqrt(2.0 * rho) *
                     integrate_segment(seg.a, seg.b, seg.len, dp_lin).flow;
    (seg.sign > 0 ? out.forward : out.reverse) += m;
  }
  return out;
}

double large_opening_derivative(const LargeOpening& o, double rho_from, double rho_to, double dp_bottom,
                                double dp_lin) {
  const Split s = split_opening(o, rho_from, rho_to, dp_bottom);
  double d = 0.0;
  for (int i = 0; i < s.count; ++i) {
    const auto& seg = s.seg[i];
    // At dP == 0 everywhere the upwind side is undefined; take the mean.
    const double rho = seg.sign > 0 ? rho_from : (seg.sign < 0 ? rho_to : 0.5 * (rho_from + rho_to));
    d += o.cd * o.width_m * std::sqrt(2.0 * rho) * integrate_segment(seg.a, seg.b, seg.len, dp_lin).derivative;
  }
  return d;
}

}  // namespace airnet

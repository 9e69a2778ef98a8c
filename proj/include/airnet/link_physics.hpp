#pragma once

#include <optional>

#include "airnet/network.hpp"

namespace airnet {

inline constexpr double kGravity = 9.81;            // m/s^2
inline constexpr double kDensityConstant = 353.05;  // rho * T at 101325 Pa, kg K/m^3
inline constexpr double kDefaultDpLin = 0.001;      // Pa

/// Air density from temperature at fixed 101325 Pa. Throws std::domain_error
/// for T <= 0.
double air_density(double temperature_k);

struct AirState {
  double temperature_k;
  double density;

  static AirState at(double temperature_k) { return {temperature_k, air_density(temperature_k)}; }
};

// Power-law crack. Below dp_lin the law is replaced by the straight line
// through the origin and (dp_lin, K dp_lin^n), so the flow stays odd and
// continuous and the derivative stays finite.
double crack_flow(double k, double n, double dp, double dp_lin = kDefaultDpLin);
double crack_derivative(double k, double n, double dp, double dp_lin = kDefaultDpLin);
/// Secant conductance G with G * dp == crack_flow(dp).
double crack_conductance(double k, double n, double dp, double dp_lin = kDefaultDpLin);

/// Directional components through a large opening, both >= 0.
struct TwoWayFlow {
  double forward = 0.0;  // from -> to
  double reverse = 0.0;  // to -> from
  /// Height above the bottom edge where the pressure difference vanishes,
  /// when it lies inside the opening.
  std::optional<double> neutral_height;

  double net() const { return forward - reverse; }
  bool bidirectional() const { return forward > 0.0 && reverse > 0.0; }
};

/// Bernoulli orifice flow integrated over the opening height with a linear
/// hydrostatic pressure difference
///   dP(z) = dp_bottom - g (rho_from - rho_to) z,   0 <= z <= H.
/// Each side of the neutral plane uses the upwind density. Where
/// |dP(z)| < dp_lin the local orifice law is linear in dP, matching the
/// crack floor with n = 0.5, so the flow has a finite derivative at dP = 0.
TwoWayFlow large_opening_flow(const LargeOpening& opening, double rho_from, double rho_to, double dp_bottom,
                              double dp_lin = kDefaultDpLin);

/// d(net flow)/d(dp_bottom), exact for the closed form above.
double large_opening_derivative(const LargeOpening& opening, double rho_from, double rho_to, double dp_bottom,
                                double dp_lin = kDefaultDpLin);

struct FanResponse {
  double flow;
  double derivative;
};

inline FanResponse fan_flow(double flow_kg_s) { return {flow_kg_s, 0.0}; }

}  // namespace airnet

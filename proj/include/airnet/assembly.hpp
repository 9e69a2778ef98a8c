#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "airnet/dense_linear.hpp"
#include "airnet/link_physics.hpp"
#include "airnet/network.hpp"

namespace airnet {

/// Exterior conditions for one instant.
struct BoundaryState {
  double wind_speed_m_s = 0.0;
  double wind_direction_deg = 0.0;  // from north, [0, 360)
  double outdoor_temperature_k = 293.15;

  /// Normalizes the direction; throws std::invalid_argument for negative
  /// wind speed or non-positive temperature.
  static BoundaryState make(double wind_speed_m_s, double wind_direction_deg, double outdoor_temperature_k);
};

/// One Pa value per zone, in Network::zones() order.
using PressureVector = std::vector<double>;

/// Picard system A(p) p = B(p); row i is the mass balance of zone i.
struct LinearSystem {
  Matrix matrix;
  std::vector<double> rhs;
};

/// A large opening carries flow in both directions; the Picard
/// linearization does not apply.
class ReciprocalFlow : public std::runtime_error {
 public:
  ReciprocalFlow(std::size_t link, const std::string& id)
      : std::runtime_error("two-way flow through large opening '" + id + "'"), link_(link) {}
  std::size_t link() const { return link_; }

 private:
  std::size_t link_;
};

/// Cp linearly interpolated between the sector centres 0, 45, ..., 315 deg.
double wind_pressure_coefficient(const std::array<double, 8>& cp, double direction_deg);

/// 0.5 * rho_out * Cp(direction) * v^2.
double boundary_pressure(const ExternalNode& node, const BoundaryState& bc);

/// Signed flow through one link, with both components for large openings.
struct LinkFlow {
  double net = 0.0;
  double forward = 0.0;
  double reverse = 0.0;
};

/// Per-(network, boundary) cache of node densities and exterior pressures.
/// All evaluation methods are const and safe to call concurrently.
class Assembly {
 public:
  Assembly(const Network& net, const BoundaryState& bc, double dp_lin = kDefaultDpLin);

  const Network& network() const { return *net_; }
  double dp_lin() const { return dp_lin_; }
  double external_pressure(std::size_t ext) const { return ext_pressure_[ext]; }

  /// From-minus-to pressure difference at the link elevation (the bottom
  /// edge for large openings), including stack terms.
  double link_dp(std::size_t link, std::span<const double> p) const;

  LinkFlow link_flow(std::size_t link, std::span<const double> p) const;
  std::vector<LinkFlow> link_flows(std::span<const double> p) const;

  /// Net mass inflow per zone including mechanical ventilation.
  std::vector<double> residual(std::span<const double> p) const;
  Matrix jacobian(std::span<const double> p) const;
  /// Throws ReciprocalFlow when any large opening is currently two-way.
  LinearSystem picard_system(std::span<const double> p) const;

 private:
  struct Side {
    bool is_zone;
    std::size_t zone;  // valid when is_zone
    double density;
    double ref_height;
    double fixed_pressure;  // exterior pressure when !is_zone
  };

  Side side(NodeRef ref) const;
  double side_pressure(const Side& s, double z, std::span<const double> p) const;
  /// dp = p_from - p_to + offset at elevation z.
  double offset_at(std::size_t link, double z) const;

  const Network* net_;
  double dp_lin_;
  std::vector<double> zone_density_;
  std::vector<double> ext_pressure_;
  double outdoor_density_;
  std::vector<Side> from_;
  std::vector<Side> to_;
};

double link_dp(const Network& net, std::size_t link, std::span<const double> p, const BoundaryState& bc);
std::vector<double> residual(const Network& net, std::span<const double> p, const BoundaryState& bc);
Matrix jacobian(const Network& net, std::span<const double> p, const BoundaryState& bc);
LinearSystem picard_system(const Network& net, std::span<const double> p, const BoundaryState& bc);

double max_abs(std::span<const double> v);

}  // namespace airnet

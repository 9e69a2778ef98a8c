#include "airnet/assembly.hpp"

#include <algorithm>
#include <cmath>

namespace airnet {

BoundaryState BoundaryState::make(double wind_speed_m_s, double wind_direction_deg, double outdoor_temperature_k) {
  if (!(wind_speed_m_s >= 0.0)) throw std::invalid_argument("wind speed must be >= 0");
  if (!(outdoor_temperature_k > 0.0)) throw std::invalid_argument("outdoor temperature must be > 0 K");
  double dir = std::fmod(wind_direction_deg, 360.0);
  if (dir < 0.0) dir += 360.0;
  if (dir >= 360.0) dir = 0.0;
  return {wind_speed_m_s, dir, outdoor_temperature_k};
}

double wind_pressure_coefficient(const std::array<double, 8>& cp, double direction_deg) {
  double dir = std::fmod(direction_deg, 360.0);
  if (dir < 0.0) dir += 360.0;
  const double pos = dir / 45.0;
  const auto lo = static_cast<std::size_t>(std::floor(pos)) % 8;
  const auto hi = (lo + 1) % 8;
  const double t = pos - std::floor(pos);
  return (1.0 - t) * cp[lo] + t * cp[hi];
}

double boundary_pressure(const ExternalNode& node, const BoundaryState& bc) {
  const double rho = air_density(bc.outdoor_temperature_k);
  const double v = bc.wind_speed_m_s;
  return 0.5 * rho * wind_pressure_coefficient(node.cp, bc.wind_direction_deg) * v * v;
}

double max_abs(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

Assembly::Assembly(const Network& net, const BoundaryState& bc, double dp_lin)
    : net_(&net), dp_lin_(dp_lin), outdoor_density_(air_density(bc.outdoor_temperature_k)) {
  for (const auto& z : net.zones()) zone_density_.push_back(air_density(z.temperature_k));
  for (const auto& e : net.external_nodes()) ext_pressure_.push_back(boundary_pressure(e, bc));
  const auto& links = net.links();
  from_.reserve(links.size());
  to_.reserve(links.size());
  for (std::size_t i = 0; i < links.size(); ++i) {
    auto a = net.from_node(i);
    auto b = net.to_node(i);
    if (!a || !b) throw std::invalid_argument("link '" + links[i].id + "' has an unresolved endpoint");
    from_.push_back(side(*a));
    to_.push_back(side(*b));
  }
}

Assembly::Side Assembly::side(NodeRef ref) const {
  if (ref.kind == NodeKind::Zone)
    return {true, ref.index, zone_density_[ref.index], net_->zones()[ref.index].ref_height_m, 0.0};
  return {false, 0, outdoor_density_, net_->external_nodes()[ref.index].ref_height_m, ext_pressure_[ref.index]};
}

double Assembly::side_pressure(const Side& s, double z, std::span<const double> p) const {
  const double base = s.is_zone ? p[s.zone] : s.fixed_pressure;
  return base - s.density * kGravity * (z - s.ref_height);
}

double Assembly::offset_at(std::size_t link, double z) const {
  const Side& a = from_[link];
  const Side& b = to_[link];
  double c = -a.density * kGravity * (z - a.ref_height) + b.density * kGravity * (z - b.ref_height);
  if (!a.is_zone) c += a.fixed_pressure;
  if (!b.is_zone) c -= b.fixed_pressure;
  return c;
}

double Assembly::link_dp(std::size_t link, std::span<const double> p) const {
  const double z = net_->links()[link].elevation_m;
  return side_pressure(from_[link], z, p) - side_pressure(to_[link], z, p);
}

LinkFlow Assembly::link_flow(std::size_t link, std::span<const double> p) const {
  const Link& l = net_->links()[link];
  const double dp = link_dp(link, p);
  LinkFlow out;
  if (const auto* c = std::get_if<Crack>(&l.model)) {
    out.net = crack_flow(c->k, c->n, dp, dp_lin_);
  } else if (const auto* o = std::get_if<LargeOpening>(&l.model)) {
    const auto two = large_opening_flow(*o, from_[link].density, to_[link].density, dp, dp_lin_);
    out.net = two.net();
    out.forward = two.forward;
    out.reverse = two.reverse;
    return out;
  } else {
    out.net = fan_flow(std::get<Fan>(l.model).flow_kg_s).flow;
  }
  out.forward = std::max(out.net, 0.0);
  out.reverse = std::max(-out.net, 0.0);
  return out;
}

std::vector<LinkFlow> Assembly::link_flows(std::span<const double> p) const {
  std::vector<LinkFlow> out;
  out.reserve(net_->links().size());
  for (std::size_t i = 0; i < net_->links().size(); ++i) out.push_back(link_flow(i, p));
  return out;
}

std::vector<double> Assembly::residual(std::span<const double> p) const {
  std::vector<double> f(net_->zone_count());
  for (std::size_t i = 0; i < f.size(); ++i) f[i] = net_->zones()[i].mech_flow_kg_s;
  for (std::size_t i = 0; i < net_->links().size(); ++i) {
    const double m = link_flow(i, p).net;
    if (from_[i].is_zone) f[from_[i].zone] -= m;
    if (to_[i].is_zone) f[to_[i].zone] += m;
  }
  return f;
}

Matrix Assembly::jacobian(std::span<const double> p) const {
  const std::size_t n = net_->zone_count();
  Matrix j(n, n);
  for (std::size_t i = 0; i < net_->links().size(); ++i) {
    const Link& l = net_->links()[i];
    const double dp = link_dp(i, p);
    double d = 0.0;
    if (const auto* c = std::get_if<Crack>(&l.model))
      d = crack_derivative(c->k, c->n, dp, dp_lin_);
    else if (const auto* o = std::get_if<LargeOpening>(&l.model))
      d = large_opening_derivative(*o, from_[i].density, to_[i].density, dp, dp_lin_);
    else
      d = fan_flow(std::get<Fan>(l.model).flow_kg_s).derivative;
    if (d == 0.0) continue;
    const Side& a = from_[i];
    const Side& b = to_[i];
    // f_from -= m(dp), f_to += m(dp), with d(dp)/dp_from = 1, d(dp)/dp_to = -1.
    if (a.is_zone) {
      j(a.zone, a.zone) -= d;
      if (b.is_zone) j(a.zone, b.zone) += d;
    }
    if (b.is_zone) {
      j(b.zone, b.zone) -= d;
      if (a.is_zone) j(b.zone, a.zone) += d;
    }
  }
  return j;
}

LinearSystem Assembly::picard_system(std::span<const double> p) const {
  const std::size_t n = net_->zone_count();
  LinearSystem sys{Matrix(n, n), std::vector<double>(n, 0.0)};
  for (std::size_t i = 0; i < n; ++i) sys.rhs[i] = -net_->zones()[i].mech_flow_kg_s;

  for (std::size_t i = 0; i < net_->links().size(); ++i) {
    const Link& l = net_->links()[i];
    const Side& a = from_[i];
    const Side& b = to_[i];
    if (const auto* fan = std::get_if<Fan>(&l.model)) {
      if (a.is_zone) sys.rhs[a.zone] += fan->flow_kg_s;
      if (b.is_zone) sys.rhs[b.zone] -= fan->flow_kg_s;
      continue;
    }

    double g = 0.0;
    double offset = 0.0;
    if (const auto* c = std::get_if<Crack>(&l.model)) {
      offset = offset_at(i, l.elevation_m);
      g = crack_conductance(c->k, c->n, link_dp(i, p), dp_lin_);
    } else {
      const auto& o = std::get<LargeOpening>(l.model);
      if (large_opening_flow(o, a.density, b.density, link_dp(i, p), dp_lin_).bidirectional()) throw ReciprocalFlow(i, l.id);
      // Collapsed to one orifice at mid-height.
      const double z_mid = l.elevation_m + 0.5 * o.height_m;
      offset = offset_at(i, z_mid);
      const double dp_mid = side_pressure(a, z_mid, p) - side_pressure(b, z_mid, p);
      const double k_eq = o.cd * o.width_m * o.height_m * std::sqrt(a.density + b.density);
      g = crack_conductance(k_eq, 0.5, dp_mid, dp_lin_);
    }

    // m = g (p_from - p_to + offset); f_from -= m, f_to += m; A p - B = f.
    if (a.is_zone) {
      sys.matrix(a.zone, a.zone) -= g;
      if (b.is_zone) sys.matrix(a.zone, b.zone) += g;
      sys.rhs[a.zone] += g * offset;
    }
    if (b.is_zone) {
      sys.matrix(b.zone, b.zone) -= g;
      if (a.is_zone) sys.matrix(b.zone, a.zone) += g;
      sys.rhs[b.zone] -= g * offset;
    }
  }
  return sys;
}

double link_dp(const Network& net, std::size_t link, std::span<const double> p, const BoundaryState& bc) {
  return Assembly(net, bc).link_dp(link, p);
}

std::vector<double> residual(const Network& net, std::span<const double> p, const BoundaryState& bc) {
  return Assembly(net, bc).residual(p);
}

Matrix jacobian(const Network& net, std::span<const double> p, const BoundaryState& bc) {
  return Assembly(net, bc).jacobian(p);
}

LinearSystem picard_system(const Network& net, std::span<const double> p, const BoundaryState& bc) {
  return Assembly(net, bc).picard_system(p);
}

}  // namespace airnet

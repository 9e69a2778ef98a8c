#include <gtest/gtest.h>

#include <random>

#include "airnet/assembly.hpp"
#include "airnet/solvers.hpp"
#include "oracles.hpp"

using namespace airnet;

namespace {

std::array<double, 8> uniform_cp(double v) {
  std::array<double, 8> cp;
  cp.fill(v);
  return cp;
}

// Two external nodes at fixed pressures via wind, single zone between them.
Network symmetric_two_crack(double k, double n) {
  return Network({{"Z", 293.15, 0.0, 0.0}}, {{"hi", 0.0, uniform_cp(1.0)}, {"lo", 0.0, uniform_cp(0.0)}},
                 {{"in", "hi", "Z", 1.0, Crack{k, n}}, {"out", "Z", "lo", 1.0, Crack{k, n}}});
}

// Wind speed giving 10 Pa on a Cp = 1 facade.
BoundaryState ten_pa() {
  const double rho = air_density(293.15);
  return BoundaryState::make(std::sqrt(20.0 / rho), 0.0, 293.15);
}

}  // namespace

TEST(BoundaryPressure, NoWindNoPressure) {
  const ExternalNode node{"x", 0.0, uniform_cp(0.7)};
  EXPECT_EQ(boundary_pressure(node, BoundaryState::make(0.0, 90.0, 293.15)), 0.0);
}

TEST(BoundaryPressure, UniformCp) {
  const ExternalNode node{"x", 0.0, uniform_cp(0.8)};
  const double rho = oracle::ideal_gas_density(293.15);
  EXPECT_NEAR(boundary_pressure(node, BoundaryState::make(5.0, 0.0, 293.15)), 0.5 * rho * 0.8 * 25.0, 2e-3);
  EXPECT_NEAR(boundary_pressure(node, BoundaryState::make(5.0, 0.0, 293.15)), 12.0434, 1e-4);
}

TEST(BoundaryPressure, InterpolatesBetweenSectorCentres) {
  const ExternalNode node{"x", 0.0, {0.4, 0.8, 0, 0, 0, 0, 0, 0}};
  EXPECT_DOUBLE_EQ(wind_pressure_coefficient(node.cp, 22.5), 0.6);
  EXPECT_DOUBLE_EQ(wind_pressure_coefficient(node.cp, 45.0), 0.8);
  EXPECT_DOUBLE_EQ(wind_pressure_coefficient(node.cp, 0.0), 0.4);
  // Wraps from 315 back to 0.
  const std::array<double, 8> wrap{1.0, 0, 0, 0, 0, 0, 0, 0.0};
  EXPECT_DOUBLE_EQ(wind_pressure_coefficient(wrap, 337.5), 0.5);
  EXPECT_DOUBLE_EQ(wind_pressure_coefficient(wrap, -22.5), 0.5);
}

TEST(BoundaryState, NormalizesDirectionAndRejectsBadInput) {
  EXPECT_DOUBLE_EQ(BoundaryState::make(1.0, 370.0, 290.0).wind_direction_deg, 10.0);
  EXPECT_DOUBLE_EQ(BoundaryState::make(1.0, -90.0, 290.0).wind_direction_deg, 270.0);
  EXPECT_DOUBLE_EQ(BoundaryState::make(1.0, 360.0, 290.0).wind_direction_deg, 0.0);
  EXPECT_THROW(BoundaryState::make(-1.0, 0.0, 290.0), std::invalid_argument);
  EXPECT_THROW(BoundaryState::make(1.0, 0.0, 0.0), std::invalid_argument);
}

TEST(LinkDp, EqualTemperaturesCancelStack) {
  const Network net({{"A", 293.15, 0.0, 0}, {"B", 293.15, 0.0, 0}}, {{"o", 0, {}}},
                    {{"ab", "A", "B", 7.3, Crack{0.01, 0.65}}, {"oa", "o", "A", 1, Crack{0.01, 0.65}}});
  const std::vector<double> p{5.0, 0.0};
  EXPECT_NEAR(link_dp(net, 0, p, BoundaryState{}), 5.0, 1e-12);
}

TEST(LinkDp, StackTermFromDensityDifference) {
  const Network net({{"A", 300.0, 0.0, 0}, {"B", 250.0, 0.0, 0}}, {{"o", 0, {}}},
                    {{"ab", "A", "B", 2.0, Crack{0.01, 0.65}}, {"oa", "o", "A", 1, Crack{0.01, 0.65}}});
  const std::vector<double> p{0.0, 0.0};
  const double expected = -9.81 * 2.0 * (353.05 / 300.0 - 353.05 / 250.0);
  EXPECT_NEAR(expected, 4.6179, 1e-4);
  EXPECT_NEAR(link_dp(net, 0, p, BoundaryState{}), expected, 1e-12);
}

TEST(LinkDp, AtReferenceHeightOnlyPressuresCount) {
  const Network net({{"A", 310.0, 2.0, 0}, {"B", 260.0, 2.0, 0}}, {{"o", 0, {}}},
                    {{"ab", "A", "B", 2.0, Crack{0.01, 0.65}}, {"oa", "o", "A", 1, Crack{0.01, 0.65}}});
  const std::vector<double> p{3.5, -1.25};
  EXPECT_DOUBLE_EQ(link_dp(net, 0, p, BoundaryState{}), 4.75);
}

TEST(Residual, SymmetricTwoCrackBalances) {
  const Network net = symmetric_two_crack(0.01, 0.65);
  const std::vector<double> p{5.0};
  EXPECT_NEAR(residual(net, p, ten_pa())[0], 0.0, 1e-12);
}

TEST(Residual, FanOnlyContributionIsPressureIndependent) {
  const Network net({{"A", 293.15, 0, 0.002}, {"B", 293.15, 0, 0}}, {{"o", 0, {}}},
                    {{"f1", "o", "A", 1, Fan{0.03}}, {"f2", "A", "B", 1, Fan{0.01}}});
  for (double pa : {-50.0, 0.0, 20.0}) {
    const auto f = residual(net, std::vector<double>{pa, -pa}, BoundaryState{});
    EXPECT_DOUBLE_EQ(f[0], 0.002 + 0.03 - 0.01);
    EXPECT_DOUBLE_EQ(f[1], 0.01);
  }
}

TEST(Residual, InternalLinksConserveMass) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    const Network net = oracle::random_crack_network(rng, 2 + trial % 5);
    const auto bc = oracle::random_boundary(rng);
    std::uniform_real_distribution<double> u(-20, 20);
    std::vector<double> p(net.zone_count());
    for (auto& x : p) x = u(rng);
    const Assembly as(net, bc);
    const auto f = as.residual(p);
    // Sum of zone residuals equals the net inflow from outside.
    double boundary = 0.0;
    for (std::size_t i = 0; i < net.links().size(); ++i) {
      const auto a = net.from_node(i), b = net.to_node(i);
      const double m = as.link_flow(i, p).net;
      if (a->kind == NodeKind::External && b->kind == NodeKind::Zone) boundary += m;
      if (a->kind == NodeKind::Zone && b->kind == NodeKind::External) boundary -= m;
    }
    double total = 0.0;
    for (double x : f) total += x;
    EXPECT_NEAR(total, boundary, 1e-12);
    // And matches a from-scratch recomputation.
    const auto g = oracle::independent_residual(net, bc, p);
    for (std::size_t i = 0; i < f.size(); ++i) EXPECT_NEAR(f[i], g[i], 1e-12);
  }
}

TEST(Jacobian, LinearSingleZone) {
  const Network net({{"Z", 293.15, 0, 0}}, {{"a", 0, {}}, {"b", 0, {}}},
                    {{"1", "a", "Z", 1, Crack{0.01, 1.0}}, {"2", "Z", "b", 1, Crack{0.03, 1.0}}});
  const auto j = jacobian(net, std::vector<double>{3.0}, BoundaryState{});
  EXPECT_DOUBLE_EQ(j(0, 0), -0.04);
}

TEST(Jacobian, ClosedPairRowsSumToZero) {
  const Network net({{"A", 293.15, 0, 0}, {"B", 300.0, 1, 0}}, {}, {{"ab", "A", "B", 1.5, Crack{0.02, 0.6}}});
  const auto j = jacobian(net, std::vector<double>{4.0, -1.0}, BoundaryState{});
  EXPECT_NEAR(j(0, 0) + j(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(j(1, 0) + j(1, 1), 0.0, 1e-15);
  EXPECT_LT(j(0, 0), 0.0);
}

TEST(Jacobian, FanContributesNothing) {
  const Network net({{"A", 293.15, 0, 0}, {"B", 293.15, 0, 0}}, {{"o", 0, {}}},
                    {{"oa", "o", "A", 1, Crack{0.01, 0.65}}, {"ob", "o", "B", 1, Crack{0.01, 0.65}},
                     {"f", "A", "B", 1, Fan{0.5}}});
  const auto j = jacobian(net, std::vector<double>{1.0, 2.0}, BoundaryState{});
  EXPECT_EQ(j(0, 1), 0.0);
  EXPECT_EQ(j(1, 0), 0.0);
}

TEST(PicardSystem, LinearNetworkSolvesInOneStep) {
  const Network net = load_network(oracle::data_path("linear.json"));
  const auto bc = BoundaryState::make(4.0, 10.0, 290.0);
  const std::vector<double> p0{0.0, 0.0};
  const auto sys = picard_system(net, p0, bc);
  const auto j = jacobian(net, p0, bc);
  EXPECT_EQ(sys.matrix, j);
  const auto x = *lu_solve(sys.matrix, sys.rhs).solution;
  EXPECT_LT(max_abs(residual(net, x, bc)), 1e-15);
}

TEST(PicardSystem, SymmetricFixedPoint) {
  const double k = 0.01;
  const Network net = symmetric_two_crack(k, 0.5);
  const std::vector<double> p{5.0};
  const auto sys = picard_system(net, p, ten_pa());
  const double g = k * std::pow(5.0, -0.5);
  EXPECT_NEAR(sys.matrix(0, 0), -2.0 * g, 1e-15);
  EXPECT_NEAR(sys.rhs[0] / sys.matrix(0, 0), 5.0, 1e-9);
}

TEST(PicardSystem, IsolatedZoneGivesZeroRow) {
  const Network net({{"A", 293.15, 0, 0}, {"B", 293.15, 0, 0}}, {{"o", 0, {}}}, {{"oa", "o", "A", 1, Crack{0.01, 0.65}}});
  const auto sys = picard_system(net, std::vector<double>{0, 0}, BoundaryState{});
  EXPECT_EQ(sys.matrix(1, 0), 0.0);
  EXPECT_EQ(sys.matrix(1, 1), 0.0);
  EXPECT_TRUE(lu_solve(sys.matrix, sys.rhs).singular);
}

TEST(PicardSystem, RefusesTwoWayLargeOpening) {
  const Network net = load_network(oracle::data_path("iea_large_opening.json"));
  // Neutral plane at mid-height: two-way flow.
  const double slope = 9.81 * (air_density(350.0) - air_density(250.0));
  const std::vector<double> p{0.0, -slope * 0.5};
  try {
    picard_system(net, p, BoundaryState::make(0, 0, 300));
    FAIL() << "expected ReciprocalFlow";
  } catch (const ReciprocalFlow& e) {
    EXPECT_EQ(e.link(), 1u);
  }
}

TEST(PicardSystem, ExactAtItsOwnPressures) {
  // A(p) p - B(p) == f(p) for networks of cracks, fans and one-way openings.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    Network base = oracle::random_crack_network(rng, 2 + trial % 4);
    auto zones = base.zones();
    zones[1].temperature_k = zones[0].temperature_k;
    zones[1].ref_height_m = zones[0].ref_height_m;
    zones[0].mech_flow_kg_s = 0.004;
    auto links = base.links();
    links.push_back({"door", zones[0].id, zones[1].id, zones[0].ref_height_m, LargeOpening{0.9, 2.0, 0.6}});
    links.push_back({"fan", zones[1].id, base.external_nodes()[0].id, 1.0, Fan{0.02}});
    const Network net(zones, base.external_nodes(), links);
    const auto bc = oracle::random_boundary(rng);
    std::uniform_real_distribution<double> u(-15, 15);
    std::vector<double> p(net.zone_count());
    for (auto& x : p) x = u(rng);
    const auto sys = picard_system(net, p, bc);
    auto ap = sys.matrix.multiply(p);
    const auto f = residual(net, p, bc);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(ap[i] - sys.rhs[i], f[i], 1e-10);
  }
}

TEST(JacobianProperty, MatchesFiniteDifferences) {
  std::mt19937_64 rng(2024);
  int checked = 0;
  while (checked < 200) {
    Network base = oracle::random_crack_network(rng, 2 + checked % 5);
    auto links = base.links();
    if (checked % 2) {
      const auto& zs = base.zones();
      links.push_back({"door", zs[0].id, zs[1].id, 0.5, LargeOpening{1.0, 2.0, 0.6}});
    }
    const Network net(base.zones(), base.external_nodes(), links);
    const auto bc = oracle::random_boundary(rng);
    std::uniform_real_distribution<double> u(-20, 20);
    std::vector<double> p(net.zone_count());
    for (auto& x : p) x = u(rng);
    const Assembly as(net, bc);
    // Skip states near the dp_lin breakpoints.
    bool near_kink = false;
    for (std::size_t i = 0; i < links.size(); ++i) {
      const double dp = as.link_dp(i, p);
      if (std::abs(dp) < 0.05) near_kink = true;
      if (const auto* o = std::get_if<LargeOpening>(&links[i].model)) {
        const auto a = net.from_node(i), b = net.to_node(i);
        const double slope = 9.81 * (air_density(net.zones()[a->index].temperature_k) -
                                     air_density(net.zones()[b->index].temperature_k));
        if (std::abs(dp - slope * o->height_m) < 0.05) near_kink = true;
      }
    }
    if (near_kink) continue;
    const auto j = as.jacobian(p);
    const double h = 1e-5;
    for (std::size_t c = 0; c < p.size(); ++c) {
      auto up = p, dn = p;
      up[c] += h;
      dn[c] -= h;
      const auto fu = as.residual(up), fd = as.residual(dn);
      for (std::size_t r = 0; r < p.size(); ++r) {
        const double num = (fu[r] - fd[r]) / (2 * h);
        EXPECT_NEAR(j(r, c), num, 1e-5 * std::abs(j(r, r)) + 1e-12) << "r=" << r << " c=" << c;
      }
    }
    ++checked;
  }
}

TEST(FixedPointProperty, CrackRootIsPicardFixedPoint) {
  std::mt19937_64 rng(555);
  SolverConfig tight;
  tight.tolerance = 1e-13;
  for (int trial = 0; trial < 30; ++trial) {
    const Network net = oracle::random_crack_network(rng, 2 + trial % 3);
    const auto bc = oracle::random_boundary(rng);
    const auto sol = solve(net, bc, PressureVector(net.zone_count(), 0.0), Strategy::WM, tight);
    const auto sys = picard_system(net, sol.pressures, bc);
    const auto next = *lu_solve(sys.matrix, sys.rhs).solution;
    for (std::size_t i = 0; i < next.size(); ++i) EXPECT_NEAR(next[i], sol.pressures[i], 1e-6);
  }
}

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "ccsc/channel.hpp"
#include "ccsc/netlist.hpp"
#include "ccsc/transient.hpp"
#include "ccsc/victim.hpp"
#include "doctest.h"

using ccsc::Netlist;
using ccsc::Trace;

namespace {

// Current step I0 into n1 with R1 to ground, then C in series with R2 to
// ground. The load current is I0 * R1/(R1+R2) * exp(-t / (C*(R1+R2))).
Netlist rc_highpass(double r1, double r2, double c) {
  Netlist n;
  n.add_current_source("0", "n1", "step");
  n.add_resistor("n1", "0", r1);
  n.add_capacitor("n1", "n2", c);
  n.add_resistor("n2", "0", r2);
  n.add_port("receiver_load", "n2", "0");
  return n;
}

Trace constant_excitation(double amps, double sp, std::size_t len) {
  Trace t;
  t.samples.assign(len, amps);
  t.sample_period = sp;
  t.unit = ccsc::Unit::amperes;
  return t;
}

}  // namespace

TEST_SUITE("transient") {

TEST_CASE("rc high-pass matches the analytic response") {
  const double r1 = 1e3, r2 = 1e3, c = 1e-9;
  const double tau = c * (r1 + r2);  // 2 us
  const double sp = tau / 200.0;
  const double i0 = 1e-3;
  const auto exc = constant_excitation(i0, sp, 1024);

  const auto out = ccsc::transient_solve(rc_highpass(r1, r2, c), exc, sp);
  const auto& i = out.i_leak.samples;
  REQUIRE(i.size() == exc.samples.size());

  const double peak_expected = i0 * r1 / (r1 + r2) * std::exp(-sp / tau);
  CHECK(i[1] == doctest::Approx(peak_expected).epsilon(0.01));

  // Decay constant from the log-slope between 0.25 tau and 1.75 tau.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (std::size_t n = 50; n <= 350; ++n) {
    const double x = static_cast<double>(n) * sp;
    const double y = std::log(i[n]);
    sx += x; sy += y; sxx += x * x; sxy += x * y;
    ++m;
  }
  const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  CHECK(-1.0 / slope == doctest::Approx(tau).epsilon(0.01));

  CHECK(out.stats.max_residual_ratio < 1e-9);
}

TEST_CASE("solution is linear in the excitation") {
  const auto net = ccsc::build_capacitive_channel(ccsc::ProbeGeometry{}, 50.0);
  ccsc::VictimParams p;
  p.trace_length = 512;
  p.transition_time = 1.2e-9;
  auto x1 = ccsc::synthesize_trace(0x0F, 0, p, 1);
  p.transition_time = 3.1e-9;
  auto x2 = ccsc::synthesize_trace(0xF0, 0, p, 1);

  Trace sum = x1;
  for (std::size_t n = 0; n < sum.size(); ++n) sum.samples[n] += x2.samples[n];

  const double dt = p.sample_period / 8.0;
  const auto y1 = ccsc::transient_solve(net, x1, dt);
  const auto y2 = ccsc::transient_solve(net, x2, dt);
  const auto ys = ccsc::transient_solve(net, sum, dt);

  double scale = 0.0;
  for (double v : ys.i_leak.samples) scale = std::max(scale, std::abs(v));
  REQUIRE(scale > 0.0);
  for (std::size_t n = 0; n < ys.i_leak.size(); ++n) {
    const double lhs = ys.i_leak.samples[n];
    const double rhs = y1.i_leak.samples[n] + y2.i_leak.samples[n];
    CHECK(std::abs(lhs - rhs) <= 1e-9 * scale);
  }
}

TEST_CASE("output grid matches the excitation grid") {
  const auto net = ccsc::build_capacitive_channel(ccsc::ProbeGeometry{}, 50.0);
  ccsc::VictimParams p;
  p.trace_length = 200;
  const auto exc = ccsc::synthesize_trace(0x55, 0, p, 1);

  // dt snaps down to an integer submultiple of the sample period.
  const auto out = ccsc::transient_solve(net, exc, exc.sample_period / 3.7);
  CHECK(out.i_leak.size() == exc.size());
  CHECK(out.i_leak.sample_period == exc.sample_period);
  CHECK(out.stats.dt == doctest::Approx(exc.sample_period / 4.0));
  CHECK(out.stats.steps == static_cast<long>((exc.size() - 1) * 4));
  CHECK(out.i_leak.plaintext == exc.plaintext);
  CHECK(out.i_leak.unit == ccsc::Unit::amperes);
}

TEST_CASE("every node voltage is reported") {
  const auto net = ccsc::build_capacitive_channel(ccsc::ProbeGeometry{}, 50.0);
  ccsc::VictimParams p;
  p.trace_length = 64;
  const auto exc = ccsc::synthesize_trace(0x55, 0, p, 1);
  const auto out = ccsc::transient_solve(net, exc, exc.sample_period);
  for (const auto& name : net.node_names) {
    if (name == "0") continue;
    REQUIRE(out.v_nodes.count(name) == 1);
    CHECK(out.v_nodes.at(name).unit == ccsc::Unit::volts);
    CHECK(out.v_nodes.at(name).size() == exc.size());
  }
}

TEST_CASE("singular systems are reported, not solved") {
  Netlist n;
  // Two ideal voltage sources directly in parallel.
  n.add_dc_voltage_source("a", "0", 1.0);
  n.add_dc_voltage_source("a", "0", 2.0);
  n.add_resistor("a", "0", 1.0);
  n.add_port("receiver_load", "a", "0");
  const auto exc = constant_excitation(0.0, 1e-9, 8);
  CHECK_THROWS_AS(ccsc::transient_solve(n, exc, 1e-9), ccsc::SolverError);
}

TEST_CASE("a measurable receiver load is required") {
  Netlist n;
  n.add_current_source("0", "a", "src");
  n.add_resistor("a", "0", 1.0);
  const auto exc = constant_excitation(1e-3, 1e-9, 8);
  CHECK_THROWS_AS(ccsc::transient_solve(n, exc, 1e-9), ccsc::SolverError);

  n.add_port("receiver_load", "a", "0");
  CHECK_NOTHROW(ccsc::transient_solve(n, exc, 1e-9));
}

TEST_CASE("at most one excitation source is supported") {
  Netlist n;
  n.add_current_source("0", "a", "s1");
  n.add_current_source("0", "a", "s2");
  n.add_resistor("a", "0", 1.0);
  n.add_port("receiver_load", "a", "0");
  const auto exc = constant_excitation(1e-3, 1e-9, 8);
  CHECK_THROWS_AS(ccsc::transient_solve(n, exc, 1e-9), ccsc::SolverError);
}

TEST_CASE("mutual coupling transfers energy between loops") {
  Netlist n;
  n.add_current_source("0", "a", "drive");
  n.add_resistor("a", "0", 10.0);
  n.add_inductor("L1", "a", "0", 1e-9);
  n.add_inductor("L2", "b", "0", 1e-9);
  n.add_resistor("b", "0", 50.0);
  n.add_port("receiver_load", "b", "0");

  ccsc::VictimParams p;
  p.trace_length = 512;
  p.transition_time = 1e-9;
  const auto exc = ccsc::synthesize_trace(0xFF, 0, p, 1);

  const auto uncoupled = ccsc::transient_solve(n, exc, exc.sample_period / 8);
  double umax = 0.0;
  for (double v : uncoupled.i_leak.samples) umax = std::max(umax, std::abs(v));
  CHECK(umax == 0.0);

  n.add_mutual("L1", "L2", 0.5);
  const auto coupled = ccsc::transient_solve(n, exc, exc.sample_period / 8);
  double cmax = 0.0;
  for (double v : coupled.i_leak.samples) cmax = std::max(cmax, std::abs(v));
  CHECK(cmax > 0.0);
}

}  // TEST_SUITE

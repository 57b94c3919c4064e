#include "ccsc/channel.hpp"

#include <cmath>
#include <stdexcept>

namespace ccsc {

namespace {

constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
constexpr double kLineInductancePerMeter = 1e-6;          // H/m (1 nH/mm)

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("probe geometry: " + what);
}

}  // namespace

void ProbeGeometry::validate() const {
  auto check_positive = [](double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0) {
      fail(std::string(name) + " must be positive and finite, got " +
           std::to_string(v));
    }
  };
  check_positive(plate_side, "plate_side");
  check_positive(line_length, "line_length");
  check_positive(line_width, "line_width");
  check_positive(gap, "gap");
  check_positive(gap_permittivity, "gap_permittivity");
}

double parallel_plate_capacitance(double side, double gap, double eps_r) {
  return kVacuumPermittivity * eps_r * side * side / gap;
}

double line_inductance(double length) {
  return kLineInductancePerMeter * length;
}

namespace {

// Shared supply path: ideal DC pad "p" (AC short to ground), series supply
// line resistance to "m", series supply line inductance to the victim Vdd
// terminal "a", which the excitation current source pulls on.
void add_supply_path(Netlist& n, const ProbeGeometry& g,
                     double supply_line_resistance) {
  if (!std::isfinite(supply_line_resistance) || supply_line_resistance <= 0.0) {
    throw std::invalid_argument(
        "channel: supply_line_resistance must be positive and finite");
  }
  n.add_dc_voltage_source("p", "0", 0.0);
  n.add_resistor("p", "m", supply_line_resistance);
  n.add_inductor("Lsupply", "m", "a", line_inductance(g.line_length));
  n.add_current_source("a", "0", "victim");
}

void check_load(double receiver_load) {
  if (!std::isfinite(receiver_load) || receiver_load <= 0.0) {
    throw std::invalid_argument(
        "channel: receiver_load must be positive and finite");
  }
}

}  // namespace

Netlist build_capacitive_channel(const ProbeGeometry& g, double receiver_load,
                                 double supply_line_resistance) {
  g.validate();
  check_load(receiver_load);

  Netlist n;
  add_supply_path(n, g, supply_line_resistance);
  n.add_capacitor(
      "a", "b",
      parallel_plate_capacitance(g.plate_side, g.gap, g.gap_permittivity));
  n.add_resistor("b", "0", receiver_load);
  n.add_port("receiver_load", "b", "0");
  n.validate();
  return n;
}

Netlist build_inductive_capacitive_channel(const ProbeGeometry& g,
                                           double receiver_load,
                                           double k_mutual,
                                           double supply_line_resistance) {
  g.validate();
  check_load(receiver_load);
  if (!std::isfinite(k_mutual) || k_mutual < 0.0 || k_mutual >= 1.0) {
    throw std::invalid_argument(
        "channel: k_mutual must lie in [0, 1), got " + std::to_string(k_mutual));
  }

  Netlist n;
  add_supply_path(n, g, supply_line_resistance);

  // Facing-line distributed capacitance lumped into one element.
  const double overlap_area = g.line_length * g.line_width;
  const double coupling_c =
      kVacuumPermittivity * g.gap_permittivity * overlap_area / g.gap;
  n.add_capacitor("a", "b", coupling_c);

  n.add_inductor("Lprobe", "b", "q", line_inductance(g.line_length));
  if (k_mutual > 0.0) n.add_mutual("Lsupply", "Lprobe", k_mutual);
  n.add_resistor("q", "0", receiver_load);
  n.add_port("receiver_load", "q", "0");
  n.validate();
  return n;
}

}  // namespace ccsc

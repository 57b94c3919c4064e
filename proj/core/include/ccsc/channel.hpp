#pragma once

#include <map>
#include <string>

#include "ccsc/netlist.hpp"
#include "ccsc/trace.hpp"

namespace ccsc {

enum class ProbeKind {
  capacitive_plate,
  inductive_line,
};

/// Geometry of the spying probe and of the victim supply line it couples
/// to. line_length doubles as the victim supply-line length for both probe
/// kinds.
struct ProbeGeometry {
  ProbeKind probe_kind = ProbeKind::capacitive_plate;
  double plate_side = 50e-6;      // m, capacitive probe plate
  double line_length = 1e-3;      // m, probe line and victim supply line
  double line_width = 20e-6;      // m
  double gap = 20e-6;             // m, inter-chiplet spacing
  double gap_permittivity = 1.0;  // relative

  void validate() const;
};

/// eps0 * eps_r * side^2 / gap.
double parallel_plate_capacitance(double side, double gap, double eps_r);

/// Rule-of-thumb partial self-inductance of an on-chip line, 1.0 nH/mm.
/// An engineering estimate standing in for field extraction.
double line_inductance(double length);

/// Statistics of one transient solve.
struct SolverStats {
  double max_residual_ratio = 0.0;  // max over steps of |Ax-b| / |b|
  long steps = 0;
  double dt = 0.0;  // effective solver step actually used
};

/// What the observer sees: the current through the receiver load, plus
/// per-node voltage diagnostics keyed by node name.
struct ChannelOutput {
  Trace i_leak;
  std::map<std::string, Trace> v_nodes;
  SolverStats stats;
};

constexpr double kDefaultSupplyLineResistance = 0.5;  // ohms

/// Coupling path of the plate probe: the victim Vdd terminal (node "a") is
/// driven by the excitation current source, reaches the DC pad (node "p",
/// held by an ideal supply modeled as an AC short) through the supply
/// line's series R and L, and couples through the plate capacitance to the
/// probe node "b", terminated by the receiver load. Port "receiver_load"
/// spans the load resistor.
Netlist build_capacitive_channel(
    const ProbeGeometry& g, double receiver_load,
    double supply_line_resistance = kDefaultSupplyLineResistance);

/// Coupling path of the broadside line probe: as above, plus the probe
/// line's self-inductance in series with the receiver load and a mutual
/// coupling k between supply-line and probe-line inductances. The
/// distributed capacitance of the facing lines is lumped into a single
/// coupling capacitor. k_mutual = 0 omits the mutual element entirely.
Netlist build_inductive_capacitive_channel(
    const ProbeGeometry& g, double receiver_load, double k_mutual,
    double supply_line_resistance = kDefaultSupplyLineResistance);

}  // namespace ccsc

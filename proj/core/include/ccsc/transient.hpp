#pragma once

#include <stdexcept>
#include <string>

#include "ccsc/channel.hpp"
#include "ccsc/netlist.hpp"
#include "ccsc/trace.hpp"

namespace ccsc {

/// Singular system matrix, numerical instability, or a topology the solver
/// cannot measure (no receiver_load port).
class SolverError : public std::runtime_error {
 public:
  explicit SolverError(const std::string& what) : std::runtime_error(what) {}
};

/// Solves the linear network by modified nodal analysis with trapezoidal
/// companion models, from zero initial conditions.
///
/// The excitation waveform is bound to the netlist's current source (at
/// most one; a netlist without one treats the excitation as a time base
/// only). dt must be positive and at most excitation.sample_period; the
/// solver snaps it down to the nearest exact submultiple of the sample
/// period so the output grid aligns with the excitation grid, interpolates
/// the excitation linearly onto the solver grid, and returns waveforms
/// resampled back onto the excitation timeline.
///
/// Returns the current through the resistor spanning the "receiver_load"
/// port, plus every node voltage as a diagnostic.
ChannelOutput transient_solve(const Netlist& n, const Trace& excitation, double dt);

}  // namespace ccsc

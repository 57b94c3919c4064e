#pragma once

#include <cstddef>

#include "ccsc/trace.hpp"

namespace ccsc {

/// Half-open sample range [start_index, end_index).
struct Window {
  std::size_t start_index = 0;
  std::size_t end_index = 0;
};

enum class OffsetMode {
  none,           // the default: no compensation
  subtract_mean,
  subtract_first,
};

/// Running-sum reconstruction of a derivative-shaped signal:
/// x[0] = y[0], x[n] = x[n-1] + y[n]. Not scaled by the sample period.
/// The result is tagged dimensionless (integrated units are no longer the
/// input's).
Trace cumulative_integrate(const Trace& y);

/// y[0] = x[0], y[n] = x[n] - x[n-1]. Exact inverse of
/// cumulative_integrate. Requires at least 2 samples.
Trace finite_difference(const Trace& x);

/// Sub-trace over w; plaintext, unit and sample period preserved.
Trace apply_window(const Trace& t, const Window& w);

/// Offset compensation for integrated traces; OffsetMode::none is the
/// identity.
Trace remove_offset(const Trace& t, OffsetMode mode);

}  // namespace ccsc

#include "ccsc/reconstruct.hpp"

#include <numeric>
#include <stdexcept>
#include <string>

namespace ccsc {

Trace cumulative_integrate(const Trace& y) {
  y.validate();
  Trace x = y;
  x.unit = Unit::dimensionless;
  for (std::size_t n = 1; n < x.samples.size(); ++n)
    x.samples[n] = x.samples[n - 1] + y.samples[n];
  return x;
}

Trace finite_difference(const Trace& x) {
  x.validate();
  if (x.samples.size() < 2) {
    throw std::invalid_argument(
        "finite_difference: need at least 2 samples, got " +
        std::to_string(x.samples.size()));
  }
  Trace y = x;
  for (std::size_t n = y.samples.size(); n-- > 1;)
    y.samples[n] = x.samples[n] - x.samples[n - 1];
  return y;
}

Trace apply_window(const Trace& t, const Window& w) {
  t.validate();
  if (w.start_index >= w.end_index || w.end_index > t.samples.size()) {
    throw std::invalid_argument(
        "apply_window: window [" + std::to_string(w.start_index) + ", " +
        std::to_string(w.end_index) + ") does not fit a trace of " +
        std::to_string(t.samples.size()) + " samples");
  }
  Trace out;
  out.sample_period = t.sample_period;
  out.plaintext = t.plaintext;
  out.unit = t.unit;
  out.samples.assign(t.samples.begin() + static_cast<std::ptrdiff_t>(w.start_index),
                     t.samples.begin() + static_cast<std::ptrdiff_t>(w.end_index));
  return out;
}

Trace remove_offset(const Trace& t, OffsetMode mode) {
  if (mode == OffsetMode::none) return t;
  t.validate();
  Trace out = t;
  const double offset =
      mode == OffsetMode::subtract_first
          ? t.samples.front()
          : std::accumulate(t.samples.begin(), t.samples.end(), 0.0) /
                static_cast<double>(t.samples.size());
  for (auto& s : out.samples) s -= offset;
  return out;
}

}  // namespace ccsc

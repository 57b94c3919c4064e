#pragma once

#include <string>
#include <vector>

#include "ccsc/channel.hpp"
#include "ccsc/trace.hpp"

namespace ccsc {

/// An externally computed port-1 -> port-2 impulse response, e.g. exported
/// from a field solver. Samples are the continuous-time impulse response
/// evaluated on a uniform grid (units 1/s for a current-to-current path).
struct ImpulseResponse {
  std::vector<double> samples;
  double sample_period = 0.0;  // s
};

/// Validates and wraps an impulse response. Throws std::invalid_argument
/// if samples are empty or non-finite, or the period is not positive.
ImpulseResponse import_impulse_response(std::vector<double> samples,
                                        double sample_period);

/// y[n] = dt * sum_k ir[k] * x[n-k], truncated to the excitation length.
/// If the sample periods differ, the impulse response is first resampled
/// onto the excitation grid by linear interpolation.
ChannelOutput apply_impulse_response(const ImpulseResponse& ir, const Trace& excitation);

/// Loads a two-column CSV (time_s, amplitude). A non-numeric first line is
/// treated as a header. The time column must be uniform and increasing.
ImpulseResponse load_impulse_response_csv(const std::string& path);

}  // namespace ccsc

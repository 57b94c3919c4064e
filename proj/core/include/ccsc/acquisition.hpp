#pragma once

#include <cstdint>

#include "ccsc/trace.hpp"

namespace ccsc {

/// Observer-side acquisition chain: analog front-end gain, input noise,
/// anti-alias averaging with decimation, symmetric clipping, and a uniform
/// quantizer with 2^resolution_bits codes spanning +/- full_scale.
struct AdcConfig {
  int resolution_bits = 10;        // in [1, 24]
  double full_scale = 1.0;         // symmetric +/- range, post-gain units
  double sample_period = 0.0;      // s; must be >= the input rate
  double gain = 1.0;
  double input_noise_sigma = 0.0;  // same unit as the gained input

  void validate() const;
};

/// Digitizes a trace. Output samples are the reconstructed code-center
/// amplitudes (-FS + (k + 0.5) * LSB, LSB = 2*FS / 2^bits), so the
/// zero-noise quantization error is at most half an LSB everywhere.
/// Deterministic for a fixed seed.
Trace digitize(const Trace& t, const AdcConfig& a, std::uint64_t rng_seed);

}  // namespace ccsc

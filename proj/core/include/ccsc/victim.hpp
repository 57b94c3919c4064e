#pragma once

#include <cstdint>

#include "ccsc/trace.hpp"

namespace ccsc {

/// Behavioral model of the victim datapath's supply current: an 8-bit input
/// is XORed with the key byte, substituted through the AES S-box, and the
/// output drives one load capacitor per bit. Each execution precharges from
/// zero, so the drawn charge is proportional to the Hamming weight of the
/// S-box output.
struct VictimParams {
  double supply_voltage = 1.2;              // V
  double load_capacitance_per_bit = 5e-15;  // F, per S-box output bit
  double pulse_rise_tau = 50e-12;           // s
  double pulse_fall_tau = 500e-12;          // s
  double transition_time = 6.5e-9;          // s, S-box output settle instant
  double baseline_current = 0.0;            // A
  double noise_sigma = 0.0;                 // A, additive white Gaussian
  double sample_period = 10e-12;            // s
  std::size_t trace_length = 1024;          // samples

  /// Throws std::invalid_argument on the first violated invariant.
  void validate() const;
};

/// Supply-current trace for one execution with input x under key k.
///
/// Each sample holds the mean current over its sample interval
/// [n*T, (n+1)*T), computed from the closed-form integral of the
/// double-exponential pulse, so the summed charge matches the analytic
/// pulse charge HW * C * V up to tail truncation. Deterministic in
/// (x, k, p, rng_seed); the noise stream is derived from (rng_seed, x).
Trace synthesize_trace(std::uint8_t x, std::uint8_t k, const VictimParams& p,
                       std::uint64_t rng_seed);

/// The canonical acquisition campaign: one trace per plaintext, in
/// ascending order 0x00..0xFF, with the true key recorded for fixtures.
TraceSet generate_trace_set(std::uint8_t k, const VictimParams& p,
                            std::uint64_t rng_seed);

}  // namespace ccsc

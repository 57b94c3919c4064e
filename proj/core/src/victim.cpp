#include "ccsc/victim.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

#include "ccsc/aes_sbox.hpp"
#include "ccsc/rng.hpp"

namespace ccsc {

void VictimParams::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("victim parameters: " + what);
  };
  if (!(supply_voltage > 0.0)) fail("supply_voltage must be positive");
  if (!(load_capacitance_per_bit > 0.0))
    fail("load_capacitance_per_bit must be positive");
  if (!(pulse_rise_tau > 0.0)) fail("pulse_rise_tau must be positive");
  if (!(pulse_fall_tau > 0.0)) fail("pulse_fall_tau must be positive");
  if (!(pulse_fall_tau > pulse_rise_tau))
    fail("pulse_fall_tau must exceed pulse_rise_tau");
  if (!(transition_time >= 0.0)) fail("transition_time must be non-negative");
  if (!(sample_period > 0.0)) fail("sample_period must be positive");
  if (trace_length == 0) fail("trace_length must be positive");
  if (!(noise_sigma >= 0.0)) fail("noise_sigma must be non-negative");
  if (!std::isfinite(baseline_current)) fail("baseline_current must be finite");
}

namespace {

// Running integral of the unit double-exponential shape
// f(t) = e^(-t/tf) - e^(-t/tr), t >= 0:
//   F(t) = tf (1 - e^(-t/tf)) - tr (1 - e^(-t/tr)),  F(inf) = tf - tr.
double pulse_shape_integral(double t, double rise_tau, double fall_tau) {
  if (t <= 0.0) return 0.0;
  return fall_tau * (1.0 - std::exp(-t / fall_tau)) -
         rise_tau * (1.0 - std::exp(-t / rise_tau));
}

}  // namespace

Trace synthesize_trace(std::uint8_t plaintext, std::uint8_t key,
                       const VictimParams& p, std::uint64_t rng_seed) {
  p.validate();

  const int weight = hamming_weight(intermediate_value(plaintext, key));
  const double charge =
      static_cast<double>(weight) * p.load_capacitance_per_bit *
      p.supply_voltage;
  const double norm = p.pulse_fall_tau - p.pulse_rise_tau;

  Trace t;
  t.plaintext = plaintext;
  t.unit = Unit::amperes;
  t.sample_period = p.sample_period;
  t.samples.resize(p.trace_length, p.baseline_current);

  // Each sample stores the interval average of the current over
  // [n sp, (n+1) sp); summing samples times sp then recovers the drawn
  // charge exactly (the per-interval integrals telescope).
  const double sp = p.sample_period;
  const double t0 = p.transition_time;
  if (charge > 0.0) {
    for (std::size_t n = 0; n < p.trace_length; ++n) {
      const double lo =
          pulse_shape_integral(static_cast<double>(n) * sp - t0,
                               p.pulse_rise_tau, p.pulse_fall_tau);
      const double hi =
          pulse_shape_integral(static_cast<double>(n + 1) * sp - t0,
                               p.pulse_rise_tau, p.pulse_fall_tau);
      t.samples[n] += charge * (hi - lo) / (sp * norm);
    }
  }

  if (p.noise_sigma > 0.0) {
    auto rng = make_rng(rng_seed, plaintext);
    std::normal_distribution<double> noise(0.0, p.noise_sigma);
    for (auto& s : t.samples) s += noise(rng);
  }
  return t;
}

TraceSet generate_trace_set(std::uint8_t key, const VictimParams& p,
                            std::uint64_t rng_seed) {
  TraceSet set;
  set.true_key = key;
  set.traces.reserve(256);
  for (int x = 0; x < 256; ++x) {
    set.traces.push_back(
        synthesize_trace(static_cast<std::uint8_t>(x), key, p, rng_seed));
  }
  return set;
}

}  // namespace ccsc

#include "ccsc/acquisition.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <stdexcept>
#include <string>

#include "ccsc/rng.hpp"

namespace ccsc {

void AdcConfig::validate() const {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("adc: " + what);
  };
  if (resolution_bits < 1 || resolution_bits > 24)
    fail("resolution_bits must lie in [1, 24], got " +
         std::to_string(resolution_bits));
  if (!std::isfinite(full_scale) || full_scale <= 0.0)
    fail("full_scale must be positive and finite");
  if (!std::isfinite(sample_period) || sample_period <= 0.0)
    fail("sample_period must be positive and finite");
  if (!std::isfinite(gain) || gain == 0.0) fail("gain must be finite and non-zero");
  if (!std::isfinite(input_noise_sigma) || input_noise_sigma < 0.0)
    fail("input_noise_sigma must be non-negative and finite");
}

Trace digitize(const Trace& t, const AdcConfig& a, std::uint64_t rng_seed) {
  t.validate();
  a.validate();
  if (a.sample_period < t.sample_period * (1.0 - 1e-12)) {
    throw std::invalid_argument(
        "adc: sample_period must be at least the input sample period");
  }

  std::vector<double> y(t.samples.begin(), t.samples.end());
  for (auto& s : y) s *= a.gain;

  if (a.input_noise_sigma > 0.0) {
    auto rng = make_rng(rng_seed, t.plaintext);
    std::normal_distribution<double> noise(0.0, a.input_noise_sigma);
    for (auto& s : y) s += noise(rng);
  }

  // Anti-alias filter: centered moving average over one output period.
  const long ratio = std::max<long>(
      1, static_cast<long>(std::llround(a.sample_period / t.sample_period)));
  if (ratio > 1) {
    const long half = ratio / 2;
    const auto len = static_cast<long>(y.size());
    std::vector<double> filtered(y.size());
    for (long n = 0; n < len; ++n) {
      double acc = 0.0;
      long count = 0;
      for (long k = n - half; k <= n + half; ++k) {
        if (k < 0 || k >= len) continue;
        acc += y[static_cast<std::size_t>(k)];
        ++count;
      }
      filtered[static_cast<std::size_t>(n)] = acc / static_cast<double>(count);
    }
    y = std::move(filtered);
  }

  Trace out;
  out.plaintext = t.plaintext;
  out.unit = t.unit;
  out.sample_period = static_cast<double>(ratio) * t.sample_period;

  const std::size_t out_len = (y.size() + static_cast<std::size_t>(ratio) - 1) /
                              static_cast<std::size_t>(ratio);
  out.samples.resize(out_len);

  const double fs = a.full_scale;
  const auto codes = static_cast<long>(1) << a.resolution_bits;
  const double lsb = 2.0 * fs / static_cast<double>(codes);
  for (std::size_t n = 0; n < out_len; ++n) {
    double v = y[n * static_cast<std::size_t>(ratio)];
    v = std::clamp(v, -fs, fs);
    long code = static_cast<long>(std::floor((v + fs) / lsb));
    code = std::clamp<long>(code, 0, codes - 1);
    out.samples[n] = -fs + (static_cast<double>(code) + 0.5) * lsb;
  }
  return out;
}

}  // namespace ccsc

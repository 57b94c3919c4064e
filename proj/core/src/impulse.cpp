#include "ccsc/impulse.hpp"

#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace ccsc {

ImpulseResponse import_impulse_response(std::vector<double> samples,
                                        double sample_period) {
  if (samples.empty()) {
    throw std::invalid_argument("impulse response: no samples");
  }
  if (!std::isfinite(sample_period) || sample_period <= 0.0) {
    throw std::invalid_argument(
        "impulse response: sample period must be positive, got " +
        std::to_string(sample_period));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw std::invalid_argument("impulse response: sample " +
                                  std::to_string(i) + " is not finite");
    }
  }
  return ImpulseResponse{std::move(samples), sample_period};
}

namespace {

// Linear interpolation onto a new uniform grid covering the same support.
std::vector<double> resample(const std::vector<double>& in, double in_sp,
                             double out_sp) {
  const double duration = static_cast<double>(in.size() - 1) * in_sp;
  const std::size_t out_len =
      static_cast<std::size_t>(std::floor(duration / out_sp + 1e-9)) + 1;
  std::vector<double> out(out_len);
  for (std::size_t n = 0; n < out_len; ++n) {
    const double t = static_cast<double>(n) * out_sp;
    const double pos = t / in_sp;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= in.size()) {
      out[n] = in.back();
      continue;
    }
    const double frac = pos - static_cast<double>(lo);
    out[n] = in[lo] + frac * (in[lo + 1] - in[lo]);
  }
  return out;
}

}  // namespace

ChannelOutput apply_impulse_response(const ImpulseResponse& ir,
                                     const Trace& excitation) {
  excitation.validate();
  if (ir.samples.empty()) {
    throw std::invalid_argument("impulse response: no samples");
  }

  const double sp = excitation.sample_period;
  std::vector<double> h = ir.samples;
  if (std::abs(ir.sample_period - sp) > 1e-15 * sp) {
    h = resample(h, ir.sample_period, sp);
  }

  const std::size_t out_len = excitation.size();
  Trace y;
  y.samples.assign(out_len, 0.0);
  y.sample_period = sp;
  y.plaintext = excitation.plaintext;
  y.unit = excitation.unit;
  for (std::size_t n = 0; n < out_len; ++n) {
    const std::size_t kmax = std::min(n + 1, h.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < kmax; ++k)
      acc += h[k] * excitation.samples[n - k];
    y.samples[n] = sp * acc;
  }

  ChannelOutput out;
  out.stats.dt = sp;
  out.stats.steps = static_cast<long>(out_len);
  out.stats.max_residual_ratio = 0.0;
  out.i_leak = std::move(y);
  return out;
}

ImpulseResponse load_impulse_response_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::invalid_argument("impulse response: cannot open '" + path + "'");
  }

  std::vector<double> times;
  std::vector<double> values;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string t_tok, v_tok;
    if (!std::getline(fields, t_tok, ',') || !std::getline(fields, v_tok)) {
      throw std::invalid_argument("impulse response: '" + path + "' line " +
                                  std::to_string(line_no) +
                                  " is not two comma-separated columns");
    }
    double t = 0.0, v = 0.0;
    try {
      std::size_t tp = 0, vp = 0;
      t = std::stod(t_tok, &tp);
      v = std::stod(v_tok, &vp);
    } catch (const std::exception&) {
      if (line_no == 1 && times.empty()) continue;  // header line
      throw std::invalid_argument("impulse response: '" + path + "' line " +
                                  std::to_string(line_no) +
                                  " is not numeric");
    }
    times.push_back(t);
    values.push_back(v);
  }

  if (times.size() < 2) {
    throw std::invalid_argument("impulse response: '" + path +
                                "' needs at least two samples");
  }
  const double sp = times[1] - times[0];
  if (!(sp > 0.0)) {
    throw std::invalid_argument("impulse response: '" + path +
                                "' time column must be increasing");
  }
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - sp) > 1e-6 * sp) {
      throw std::invalid_argument(
          "impulse response: '" + path + "' time column is not uniform near row " +
          std::to_string(i + 1));
    }
  }
  return import_impulse_response(std::move(values), sp);
}

}  // namespace ccsc

#include "ccsc/trace.hpp"

#include <cmath>

namespace ccsc {

const char* unit_name(Unit u) {
  switch (u) {
    case Unit::amperes:
      return "amperes";
    case Unit::volts:
      return "volts";
    case Unit::dimensionless:
      return "dimensionless";
  }
  return "unknown";
}

void Trace::validate() const {
  if (samples.empty()) {
    throw std::invalid_argument("trace: samples must be non-empty");
  }
  if (!(sample_period > 0.0)) {
    throw std::invalid_argument("trace: sample_period must be > 0, got " +
                                std::to_string(sample_period));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i])) {
      throw std::invalid_argument("trace: non-finite sample at index " +
                                  std::to_string(i));
    }
  }
}

void TraceSet::validate() const {
  if (traces.empty()) {
    throw std::invalid_argument("trace set: no traces");
  }
  const std::size_t len = traces.front().samples.size();
  const double sp = traces.front().sample_period;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    traces[i].validate();
    if (traces[i].samples.size() != len) {
      throw std::invalid_argument(
          "trace set: trace " + std::to_string(i) + " has " +
          std::to_string(traces[i].samples.size()) + " samples, expected " +
          std::to_string(len));
    }
    if (traces[i].sample_period != sp) {
      throw std::invalid_argument("trace set: trace " + std::to_string(i) +
                                  " sample period differs from the first trace");
    }
  }
}

void narrow_to_file_precision(Trace& t) {
  for (double& s : t.samples) {
    s = static_cast<double>(static_cast<float>(s));
  }
}

void narrow_to_file_precision(TraceSet& ts) {
  for (Trace& t : ts.traces) {
    narrow_to_file_precision(t);
  }
}

}  // namespace ccsc

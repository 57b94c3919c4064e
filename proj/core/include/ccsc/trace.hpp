#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ccsc {

/// Physical unit of a trace's samples. Values match the on-disk unit tag.
enum class Unit : std::uint8_t {
  amperes = 0,
  volts = 1,
  dimensionless = 2,
};

const char* unit_name(Unit u);

/// A uniformly sampled real-valued waveform together with the plaintext
/// byte of the execution that produced it.
struct Trace {
  std::vector<double> samples;
  double sample_period = 0.0;  // seconds
  std::uint8_t plaintext = 0;
  Unit unit = Unit::amperes;

  [[nodiscard]] std::size_t size() const { return samples.size(); }
  [[nodiscard]] double duration() const {
    return static_cast<double>(samples.size()) * sample_period;
  }

  /// Throws std::invalid_argument unless the trace is non-empty, has a
  /// positive sample period, and contains only finite samples.
  void validate() const;
};

/// An ordered collection of traces sharing sample period and length.
/// true_key is a test-fixture convenience and is never persisted.
struct TraceSet {
  std::vector<Trace> traces;
  std::optional<std::uint8_t> true_key;

  [[nodiscard]] std::size_t size() const { return traces.size(); }
  [[nodiscard]] std::size_t trace_length() const {
    return traces.empty() ? 0 : traces.front().samples.size();
  }
  [[nodiscard]] double sample_period() const {
    return traces.empty() ? 0.0 : traces.front().sample_period;
  }

  /// Validates every member trace and the rectangularity invariant
  /// (shared sample period and sample count).
  void validate() const;
};

/// Rounds every sample to the nearest f32, the precision the trace file
/// format stores. Pipelines that persist intermediate stages apply this at
/// each stage boundary so a stage re-run from disk reproduces downstream
/// outputs bit-exactly.
void narrow_to_file_precision(Trace& t);
void narrow_to_file_precision(TraceSet& ts);

}  // namespace ccsc

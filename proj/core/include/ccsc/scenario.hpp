#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ccsc/acquisition.hpp"
#include "ccsc/channel.hpp"
#include "ccsc/dpa.hpp"
#include "ccsc/reconstruct.hpp"
#include "ccsc/victim.hpp"

namespace ccsc {

enum class ChannelKind {
  none,  // baseline: attack the victim current directly
  capacitive,
  inductive_capacitive,
  imported_ir,
};

enum class ReconstructionKind {
  raw,
  integrate,
};

/// One end-to-end experiment: generate -> couple -> digitize ->
/// reconstruct -> attack, repeated per seed.
struct Scenario {
  VictimParams victim;
  std::uint8_t key = 0x2A;
  ChannelKind channel = ChannelKind::none;
  ProbeGeometry geometry;
  double receiver_load = 50.0;       // ohms
  double k_mutual = 0.3;             // inductive_capacitive only
  double supply_line_resistance = kDefaultSupplyLineResistance;
  int solver_dt_divisor = 32;        // solver dt = sample_period / divisor
  std::string ir_file;               // imported_ir only
  bool adc_enabled = false;
  AdcConfig adc;                     // adc.full_scale <= 0 requests auto-calibration
  ReconstructionKind reconstruction = ReconstructionKind::raw;
  OffsetMode offset_mode = OffsetMode::none;
  std::optional<double> window_start_frac;  // trailing window, [0, 1)
  DistinguisherKind distinguisher = DistinguisherKind::difference_of_means;
  std::vector<std::uint64_t> seeds{1};

  void validate() const;
};

/// Parses the flat key = value scenario format ('#' comments). Unknown
/// keys are errors, as are geometry-dependent keys when channel = none.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario_file(const std::string& path);
/// Canonical echo of a scenario; parse_scenario round-trips it.
std::string format_scenario(const Scenario& s);

/// Per-seed outcome of a scenario run.
struct SeedResult {
  std::uint64_t seed = 0;
  int rank = 0;                       // 1-based rank of the true key
  double margin = 1.0;
  int full_trace_rank = 0;            // rank before windowing (== rank if no window)
  double auto_full_scale = 0.0;       // 0 when the ADC was off or explicitly scaled
  double runtime_seconds = 0.0;
};

struct RunSummary {
  Scenario scenario;
  std::vector<SeedResult> seeds;
};

/// Executes the scenario for every seed, writing all stage artifacts,
/// ranking and distinguisher CSVs, and summary.csv under out_dir. Files
/// are byte-reproducible: timings live only in the returned summary.
/// A stage failure is rethrown with the stage name and parameters.
RunSummary run_scenario(const Scenario& s, const std::string& out_dir);

const char* channel_kind_name(ChannelKind k);
const char* distinguisher_kind_name(DistinguisherKind k);

}  // namespace ccsc

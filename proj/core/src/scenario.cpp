#include "ccsc/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "ccsc/impulse.hpp"
#include "ccsc/rng.hpp"
#include "ccsc/trace_io.hpp"
#include "ccsc/transient.hpp"

namespace ccsc {

const char* channel_kind_name(ChannelKind k) {
  switch (k) {
    case ChannelKind::none:
      return "none";
    case ChannelKind::capacitive:
      return "capacitive";
    case ChannelKind::inductive_capacitive:
      return "inductive_capacitive";
    case ChannelKind::imported_ir:
      return "imported_ir";
  }
  return "unknown";
}

const char* distinguisher_kind_name(DistinguisherKind k) {
  switch (k) {
    case DistinguisherKind::difference_of_means:
      return "difference_of_means";
    case DistinguisherKind::pearson_correlation:
      return "pearson_correlation";
  }
  return "unknown";
}

namespace {

const char* reconstruction_kind_name(ReconstructionKind k) {
  return k == ReconstructionKind::integrate ? "integrate" : "raw";
}

const char* offset_mode_name(OffsetMode m) {
  switch (m) {
    case OffsetMode::none:
      return "none";
    case OffsetMode::subtract_mean:
      return "subtract_mean";
    case OffsetMode::subtract_first:
      return "subtract_first";
  }
  return "unknown";
}

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("scenario: " + what);
}

bool uses_mna_channel(ChannelKind k) {
  return k == ChannelKind::capacitive || k == ChannelKind::inductive_capacitive;
}

}  // namespace

void Scenario::validate() const {
  victim.validate();
  if (uses_mna_channel(channel)) {
    geometry.validate();
    if (!std::isfinite(receiver_load) || receiver_load <= 0.0)
      fail("receiver_load must be positive and finite");
    if (!std::isfinite(supply_line_resistance) || supply_line_resistance <= 0.0)
      fail("supply_line_resistance must be positive and finite");
    if (solver_dt_divisor < 1)
      fail("solver_dt_divisor must be at least 1, got " +
           std::to_string(solver_dt_divisor));
  }
  if (channel == ChannelKind::inductive_capacitive) {
    if (!std::isfinite(k_mutual) || k_mutual < 0.0 || k_mutual >= 1.0)
      fail("k_mutual must lie in [0, 1), got " + std::to_string(k_mutual));
  }
  if (channel == ChannelKind::imported_ir && ir_file.empty())
    fail("channel imported_ir needs an ir_file");
  if (adc_enabled) {
    if (adc.resolution_bits < 1 || adc.resolution_bits > 24)
      fail("adc.resolution_bits must lie in [1, 24], got " +
           std::to_string(adc.resolution_bits));
    if (!std::isfinite(adc.gain) || adc.gain == 0.0)
      fail("adc.gain must be finite and non-zero");
    if (!std::isfinite(adc.input_noise_sigma) || adc.input_noise_sigma < 0.0)
      fail("adc.input_noise_sigma must be non-negative and finite");
    if (!std::isfinite(adc.sample_period) || adc.sample_period < 0.0)
      fail("adc.sample_period must be non-negative (0 keeps the input rate)");
    if (!std::isfinite(adc.full_scale))
      fail("adc.full_scale must be finite (non-positive requests auto scale)");
  }
  if (window_start_frac) {
    const double f = *window_start_frac;
    if (!std::isfinite(f) || f < 0.0 || f >= 1.0)
      fail("window_start_frac must lie in [0, 1), got " + std::to_string(f));
  }
  if (seeds.empty()) fail("at least one seed is required");
}

namespace {

std::string trim(std::string_view sv) {
  const auto begin = sv.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  const auto end = sv.find_last_not_of(" \t\r");
  return std::string(sv.substr(begin, end - begin + 1));
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size())
    fail("key '" + key + "': expected a number, got '" + value + "'");
  return v;
}

long parse_long(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(value, &pos, 10);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size())
    fail("key '" + key + "': expected an integer, got '" + value + "'");
  return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(value, &pos, 10);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || value.front() == '-')
    fail("key '" + key + "': expected a non-negative integer, got '" + value +
         "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  fail("key '" + key + "': expected true or false, got '" + value + "'");
}

std::uint8_t parse_key_byte(const std::string& key, const std::string& value) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(value, &pos, 0);  // accepts 0x.. and decimal
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || v > 0xFF)
    fail("key '" + key + "': expected a byte (0..255 or 0x00..0xff), got '" +
         value + "'");
  return static_cast<std::uint8_t>(v);
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  Scenario s;
  std::set<std::string> seen;

  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    if (trim(line).empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key.empty())
      fail("line " + std::to_string(line_no) + ": empty key");
    if (!seen.insert(key).second)
      fail("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");

    if (key == "channel") {
      if (value == "none")
        s.channel = ChannelKind::none;
      else if (value == "capacitive")
        s.channel = ChannelKind::capacitive;
      else if (value == "inductive_capacitive")
        s.channel = ChannelKind::inductive_capacitive;
      else if (value == "imported_ir")
        s.channel = ChannelKind::imported_ir;
      else
        fail("key 'channel': unknown kind '" + value + "'");
    } else if (key == "key") {
      s.key = parse_key_byte(key, value);
    } else if (key == "distinguisher") {
      if (value == "difference_of_means")
        s.distinguisher = DistinguisherKind::difference_of_means;
      else if (value == "pearson_correlation")
        s.distinguisher = DistinguisherKind::pearson_correlation;
      else
        fail("key 'distinguisher': unknown kind '" + value + "'");
    } else if (key == "reconstruction") {
      if (value == "raw")
        s.reconstruction = ReconstructionKind::raw;
      else if (value == "integrate")
        s.reconstruction = ReconstructionKind::integrate;
      else
        fail("key 'reconstruction': unknown kind '" + value + "'");
    } else if (key == "offset") {
      if (value == "none")
        s.offset_mode = OffsetMode::none;
      else if (value == "subtract_mean")
        s.offset_mode = OffsetMode::subtract_mean;
      else if (value == "subtract_first")
        s.offset_mode = OffsetMode::subtract_first;
      else
        fail("key 'offset': unknown mode '" + value + "'");
    } else if (key == "window_start_frac") {
      if (value == "none")
        s.window_start_frac.reset();
      else
        s.window_start_frac = parse_double(key, value);
    } else if (key == "seeds") {
      s.seeds.clear();
      std::istringstream list(value);
      std::string item;
      while (std::getline(list, item, ',')) {
        const std::string tok = trim(item);
        if (tok.empty()) fail("key 'seeds': empty entry in '" + value + "'");
        s.seeds.push_back(parse_u64(key, tok));
      }
      if (s.seeds.empty()) fail("key 'seeds': no entries");
    } else if (key == "victim.supply_voltage") {
      s.victim.supply_voltage = parse_double(key, value);
    } else if (key == "victim.load_capacitance_per_bit") {
      s.victim.load_capacitance_per_bit = parse_double(key, value);
    } else if (key == "victim.pulse_rise_tau") {
      s.victim.pulse_rise_tau = parse_double(key, value);
    } else if (key == "victim.pulse_fall_tau") {
      s.victim.pulse_fall_tau = parse_double(key, value);
    } else if (key == "victim.transition_time") {
      s.victim.transition_time = parse_double(key, value);
    } else if (key == "victim.baseline_current") {
      s.victim.baseline_current = parse_double(key, value);
    } else if (key == "victim.noise_sigma") {
      s.victim.noise_sigma = parse_double(key, value);
    } else if (key == "victim.sample_period") {
      s.victim.sample_period = parse_double(key, value);
    } else if (key == "victim.trace_length") {
      const long n = parse_long(key, value);
      if (n <= 0) fail("key 'victim.trace_length': must be positive");
      s.victim.trace_length = static_cast<std::size_t>(n);
    } else if (key == "geometry.plate_side") {
      s.geometry.plate_side = parse_double(key, value);
    } else if (key == "geometry.line_length") {
      s.geometry.line_length = parse_double(key, value);
    } else if (key == "geometry.line_width") {
      s.geometry.line_width = parse_double(key, value);
    } else if (key == "geometry.gap") {
      s.geometry.gap = parse_double(key, value);
    } else if (key == "geometry.gap_permittivity") {
      s.geometry.gap_permittivity = parse_double(key, value);
    } else if (key == "receiver_load") {
      s.receiver_load = parse_double(key, value);
    } else if (key == "k_mutual") {
      s.k_mutual = parse_double(key, value);
    } else if (key == "supply_line_resistance") {
      s.supply_line_resistance = parse_double(key, value);
    } else if (key == "solver_dt_divisor") {
      const long n = parse_long(key, value);
      if (n < 1) fail("key 'solver_dt_divisor': must be at least 1");
      s.solver_dt_divisor = static_cast<int>(n);
    } else if (key == "ir_file") {
      s.ir_file = value;
    } else if (key == "adc.enabled") {
      s.adc_enabled = parse_bool(key, value);
    } else if (key == "adc.resolution_bits") {
      s.adc.resolution_bits = static_cast<int>(parse_long(key, value));
    } else if (key == "adc.full_scale") {
      s.adc.full_scale = value == "auto" ? -1.0 : parse_double(key, value);
    } else if (key == "adc.sample_period") {
      s.adc.sample_period = parse_double(key, value);
    } else if (key == "adc.gain") {
      s.adc.gain = parse_double(key, value);
    } else if (key == "adc.input_noise_sigma") {
      s.adc.input_noise_sigma = parse_double(key, value);
    } else {
      fail("line " + std::to_string(line_no) + ": unknown key '" + key + "'");
    }
  }

  // Keys that only make sense for particular channel kinds.
  const bool mna = uses_mna_channel(s.channel);
  for (const auto& key : seen) {
    const bool geometry_key = key.rfind("geometry.", 0) == 0 ||
                              key == "receiver_load" ||
                              key == "supply_line_resistance" ||
                              key == "solver_dt_divisor";
    if (geometry_key && !mna) {
      fail("key '" + key + "' needs a lumped coupling channel, but channel = " +
           std::string(channel_kind_name(s.channel)));
    }
    if (key == "k_mutual" && s.channel != ChannelKind::inductive_capacitive) {
      fail("key 'k_mutual' only applies to channel = inductive_capacitive");
    }
    if (key == "ir_file" && s.channel != ChannelKind::imported_ir) {
      fail("key 'ir_file' only applies to channel = imported_ir");
    }
  }

  s.validate();
  return s;
}

Scenario load_scenario_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

std::string format_scenario(const Scenario& s) {
  std::ostringstream out;
  out << "channel = " << channel_kind_name(s.channel) << '\n';
  out << "key = 0x";
  out << "0123456789abcdef"[s.key >> 4] << "0123456789abcdef"[s.key & 0xF]
      << '\n';
  out << "distinguisher = " << distinguisher_kind_name(s.distinguisher) << '\n';
  out << "reconstruction = " << reconstruction_kind_name(s.reconstruction)
      << '\n';
  out << "offset = " << offset_mode_name(s.offset_mode) << '\n';
  if (s.window_start_frac)
    out << "window_start_frac = " << format_double(*s.window_start_frac)
        << '\n';
  out << "seeds = ";
  for (std::size_t i = 0; i < s.seeds.size(); ++i) {
    if (i) out << ',';
    out << s.seeds[i];
  }
  out << '\n';

  out << "victim.supply_voltage = " << format_double(s.victim.supply_voltage)
      << '\n';
  out << "victim.load_capacitance_per_bit = "
      << format_double(s.victim.load_capacitance_per_bit) << '\n';
  out << "victim.pulse_rise_tau = " << format_double(s.victim.pulse_rise_tau)
      << '\n';
  out << "victim.pulse_fall_tau = " << format_double(s.victim.pulse_fall_tau)
      << '\n';
  out << "victim.transition_time = " << format_double(s.victim.transition_time)
      << '\n';
  out << "victim.baseline_current = "
      << format_double(s.victim.baseline_current) << '\n';
  out << "victim.noise_sigma = " << format_double(s.victim.noise_sigma) << '\n';
  out << "victim.sample_period = " << format_double(s.victim.sample_period)
      << '\n';
  out << "victim.trace_length = " << s.victim.trace_length << '\n';

  if (uses_mna_channel(s.channel)) {
    out << "geometry.plate_side = " << format_double(s.geometry.plate_side)
        << '\n';
    out << "geometry.line_length = " << format_double(s.geometry.line_length)
        << '\n';
    out << "geometry.line_width = " << format_double(s.geometry.line_width)
        << '\n';
    out << "geometry.gap = " << format_double(s.geometry.gap) << '\n';
    out << "geometry.gap_permittivity = "
        << format_double(s.geometry.gap_permittivity) << '\n';
    out << "receiver_load = " << format_double(s.receiver_load) << '\n';
    if (s.channel == ChannelKind::inductive_capacitive)
      out << "k_mutual = " << format_double(s.k_mutual) << '\n';
    out << "supply_line_resistance = "
        << format_double(s.supply_line_resistance) << '\n';
    out << "solver_dt_divisor = " << s.solver_dt_divisor << '\n';
  }
  if (s.channel == ChannelKind::imported_ir)
    out << "ir_file = " << s.ir_file << '\n';

  out << "adc.enabled = " << (s.adc_enabled ? "true" : "false") << '\n';
  if (s.adc_enabled) {
    out << "adc.resolution_bits = " << s.adc.resolution_bits << '\n';
    out << "adc.full_scale = "
        << (s.adc.full_scale <= 0.0 ? std::string("auto")
                                    : format_double(s.adc.full_scale))
        << '\n';
    out << "adc.sample_period = " << format_double(s.adc.sample_period) << '\n';
    out << "adc.gain = " << format_double(s.adc.gain) << '\n';
    out << "adc.input_noise_sigma = "
        << format_double(s.adc.input_noise_sigma) << '\n';
  }
  return out.str();
}

namespace {

template <typename F>
auto run_stage(const char* name, std::uint64_t seed, F&& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    throw std::runtime_error("stage " + std::string(name) + " (seed " +
                             std::to_string(seed) + "): " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open '" + path.string() +
                             "' for writing");
  out << content;
  if (!out)
    throw std::runtime_error("write to '" + path.string() + "' failed");
}

std::string format_key_hex(std::uint8_t key) {
  std::string out = "0x";
  out += "0123456789abcdef"[key >> 4];
  out += "0123456789abcdef"[key & 0xF];
  return out;
}

std::string ranking_csv(const KeyRanking& r) {
  std::ostringstream out;
  out << "rank,key,peak\n";
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    out << (i + 1) << ',' << format_key_hex(r.entries[i].key) << ','
        << format_double(r.entries[i].peak) << '\n';
  }
  return out.str();
}

// One column per hypothesis plus the time column; a degenerate hypothesis
// shows as all zeros.
std::string distinguisher_csv(const std::vector<DistinguisherTrace>& traces,
                              std::size_t len, double sample_period) {
  std::ostringstream out;
  out << "time_s";
  for (int k = 0; k < 256; ++k)
    out << ',' << format_key_hex(static_cast<std::uint8_t>(k));
  out << '\n';
  for (std::size_t i = 0; i < len; ++i) {
    out << format_double(static_cast<double>(i) * sample_period);
    for (const auto& d : traces) {
      out << ',';
      out << (i < d.values.size() ? format_double(d.values[i]) : "0");
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace

RunSummary run_scenario(const Scenario& s, const std::string& out_dir) {
  s.validate();
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  write_text_file(fs::path(out_dir) / "scenario.txt", format_scenario(s));

  Netlist net;
  ImpulseResponse ir;
  if (s.channel == ChannelKind::capacitive) {
    ProbeGeometry g = s.geometry;
    g.probe_kind = ProbeKind::capacitive_plate;
    net = build_capacitive_channel(g, s.receiver_load,
                                   s.supply_line_resistance);
  } else if (s.channel == ChannelKind::inductive_capacitive) {
    ProbeGeometry g = s.geometry;
    g.probe_kind = ProbeKind::inductive_line;
    net = build_inductive_capacitive_channel(g, s.receiver_load, s.k_mutual,
                                             s.supply_line_resistance);
  } else if (s.channel == ChannelKind::imported_ir) {
    ir = load_impulse_response_csv(s.ir_file);
  }

  const LeakageModel model;
  RunSummary summary;
  summary.scenario = s;

  for (const std::uint64_t seed : s.seeds) {
    const auto t_start = std::chrono::steady_clock::now();
    const fs::path seed_dir =
        fs::path(out_dir) / ("seed_" + std::to_string(seed));
    fs::create_directories(seed_dir);

    TraceSet ts = run_stage("generate", seed, [&] {
      TraceSet out = generate_trace_set(s.key, s.victim, seed);
      narrow_to_file_precision(out);
      return out;
    });
    write_trace_file(ts, (seed_dir / "victim.ccsc").string());

    if (s.channel != ChannelKind::none) {
      double max_residual = 0.0;
      SolverStats last_stats;
      ts = run_stage("couple", seed, [&] {
        TraceSet out;
        out.true_key = ts.true_key;
        out.traces.reserve(ts.traces.size());
        const double dt =
            s.victim.sample_period / static_cast<double>(s.solver_dt_divisor);
        for (const auto& t : ts.traces) {
          ChannelOutput co = s.channel == ChannelKind::imported_ir
                                 ? apply_impulse_response(ir, t)
                                 : transient_solve(net, t, dt);
          max_residual =
              std::max(max_residual, co.stats.max_residual_ratio);
          last_stats = co.stats;
          out.traces.push_back(std::move(co.i_leak));
        }
        narrow_to_file_precision(out);
        return out;
      });
      write_trace_file(ts, (seed_dir / "coupled.ccsc").string());
      if (uses_mna_channel(s.channel)) {
        std::ostringstream solver;
        solver << "max_residual_ratio,steps,dt\n"
               << format_double(max_residual) << ',' << last_stats.steps << ','
               << format_double(last_stats.dt) << '\n';
        write_text_file(seed_dir / "solver.csv", solver.str());
      }
    }

    double auto_full_scale = 0.0;
    if (s.adc_enabled) {
      ts = run_stage("digitize", seed, [&] {
        AdcConfig a = s.adc;
        if (a.sample_period <= 0.0) a.sample_period = ts.sample_period();
        if (a.full_scale <= 0.0) {
          // Range the converter for the clean signal plus 4 sigma of the
          // configured input noise, so noise rarely clips.
          double max_abs = 0.0;
          for (const auto& t : ts.traces)
            for (double v : t.samples)
              max_abs = std::max(max_abs, std::abs(v * a.gain));
          max_abs += 4.0 * a.input_noise_sigma;
          a.full_scale = max_abs > 0.0 ? max_abs : 1.0;
          auto_full_scale = a.full_scale;
        }
        // The victim stage already consumes per-plaintext noise streams of
        // the campaign seed, so the converter draws from a seed one
        // derivation step away.
        const std::uint64_t adc_seed = stream_seed(seed, 0x414443ull);
        TraceSet out;
        out.true_key = ts.true_key;
        out.traces.reserve(ts.traces.size());
        for (const auto& t : ts.traces)
          out.traces.push_back(digitize(t, a, adc_seed));
        narrow_to_file_precision(out);
        return out;
      });
      write_trace_file(ts, (seed_dir / "digitized.ccsc").string());
    }

    if (s.reconstruction == ReconstructionKind::integrate ||
        s.offset_mode != OffsetMode::none) {
      ts = run_stage("reconstruct", seed, [&] {
        TraceSet out;
        out.true_key = ts.true_key;
        out.traces.reserve(ts.traces.size());
        for (const auto& t : ts.traces) {
          Trace r = s.reconstruction == ReconstructionKind::integrate
                        ? cumulative_integrate(t)
                        : t;
          out.traces.push_back(remove_offset(r, s.offset_mode));
        }
        narrow_to_file_precision(out);
        return out;
      });
      write_trace_file(ts, (seed_dir / "reconstructed.ccsc").string());
    }

    SeedResult result;
    result.seed = seed;
    result.auto_full_scale = auto_full_scale;
    run_stage("attack", seed, [&] {
      TraceSet wts;
      const TraceSet* attacked = &ts;
      if (s.window_start_frac) {
        result.full_trace_rank =
            key_rank(attack(ts, s.distinguisher, model), s.key);
        const std::size_t len = ts.trace_length();
        const Window w{
            static_cast<std::size_t>(std::floor(*s.window_start_frac *
                                                static_cast<double>(len))),
            len};
        wts.true_key = ts.true_key;
        wts.traces.reserve(ts.traces.size());
        for (const auto& t : ts.traces) wts.traces.push_back(apply_window(t, w));
        attacked = &wts;
      }

      const AttackOutput reported =
          attack_with_traces(*attacked, s.distinguisher, model);
      result.rank = key_rank(reported.ranking, s.key);
      result.margin = reported.ranking.nearest_rival_margin;
      if (!s.window_start_frac) result.full_trace_rank = result.rank;

      write_text_file(seed_dir / "ranking.csv", ranking_csv(reported.ranking));
      write_text_file(
          seed_dir / "distinguisher.csv",
          distinguisher_csv(reported.traces, attacked->trace_length(),
                            attacked->sample_period()));
      return 0;
    });

    result.runtime_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                      t_start)
            .count();
    summary.seeds.push_back(result);
  }

  std::ostringstream sum;
  sum << "seed,rank,margin,full_trace_rank,auto_full_scale\n";
  for (const auto& r : summary.seeds) {
    sum << r.seed << ',' << r.rank << ',' << format_double(r.margin) << ','
        << r.full_trace_rank << ',' << format_double(r.auto_full_scale)
        << '\n';
  }
  write_text_file(fs::path(out_dir) / "summary.csv", sum.str());
  return summary;
}

}  // namespace ccsc

// Command line front end for the cross-chiplet side-channel toolkit.
// Each subcommand runs one pipeline stage on trace files; `run` executes a
// whole scenario into a run directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ccsc/acquisition.hpp"
#include "ccsc/aes_sbox.hpp"
#include "ccsc/channel.hpp"
#include "ccsc/dpa.hpp"
#include "ccsc/impulse.hpp"
#include "ccsc/netlist.hpp"
#include "ccsc/reconstruct.hpp"
#include "ccsc/scenario.hpp"
#include "ccsc/trace_io.hpp"
#include "ccsc/transient.hpp"
#include "ccsc/victim.hpp"

namespace {

std::string hex_byte(std::uint8_t b) {
  char buf[5];
  std::snprintf(buf, sizeof buf, "0x%02x", b);
  return buf;
}

std::uint8_t parse_byte_flag(const std::string& value, const char* flag) {
  std::size_t pos = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(value, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != value.size() || v > 0xFF) {
    throw CLI::ValidationError(std::string(flag) +
                               ": expected a byte (0..255 or 0x..), got '" +
                               value + "'");
  }
  return static_cast<std::uint8_t>(v);
}

void add_victim_flags(CLI::App* cmd, ccsc::VictimParams& p) {
  cmd->add_option("--supply-voltage", p.supply_voltage, "Supply voltage [V]")
      ->capture_default_str();
  cmd->add_option("--load-cap", p.load_capacitance_per_bit,
                  "Load capacitance per S-box output bit [F]")
      ->capture_default_str();
  cmd->add_option("--rise-tau", p.pulse_rise_tau, "Pulse rise tau [s]")
      ->capture_default_str();
  cmd->add_option("--fall-tau", p.pulse_fall_tau, "Pulse fall tau [s]")
      ->capture_default_str();
  cmd->add_option("--transition-time", p.transition_time,
                  "S-box output settle instant [s]")
      ->capture_default_str();
  cmd->add_option("--baseline", p.baseline_current, "Baseline current [A]")
      ->capture_default_str();
  cmd->add_option("--noise", p.noise_sigma, "Additive noise sigma [A]")
      ->capture_default_str();
  cmd->add_option("--sample-period", p.sample_period, "Sample period [s]")
      ->capture_default_str();
  cmd->add_option("--length", p.trace_length, "Samples per trace")
      ->capture_default_str();
}

void add_geometry_flags(CLI::App* cmd, ccsc::ProbeGeometry& g) {
  cmd->add_option("--plate-side", g.plate_side, "Probe plate side [m]")
      ->capture_default_str();
  cmd->add_option("--line-length", g.line_length,
                  "Probe and supply line length [m]")
      ->capture_default_str();
  cmd->add_option("--line-width", g.line_width, "Line width [m]")
      ->capture_default_str();
  cmd->add_option("--gap", g.gap, "Inter-chiplet gap [m]")
      ->capture_default_str();
  cmd->add_option("--permittivity", g.gap_permittivity,
                  "Relative permittivity of the gap")
      ->capture_default_str();
}

int run_gen(const ccsc::VictimParams& victim, const std::string& key_text,
            std::uint64_t seed, const std::string& out) {
  const std::uint8_t key = parse_byte_flag(key_text, "--key");
  ccsc::TraceSet ts = ccsc::generate_trace_set(key, victim, seed);
  ccsc::write_trace_file(ts, out);
  std::cout << "wrote " << ts.size() << " traces x " << ts.trace_length()
            << " samples to " << out << "\n";
  return 0;
}

struct CoupleOptions {
  std::string in, out;
  std::string channel;  // capacitive | inductive_capacitive
  std::string netlist_file;
  std::string ir_file;
  ccsc::ProbeGeometry geometry;
  double receiver_load = 50.0;
  double k_mutual = 0.3;
  double supply_line_resistance = ccsc::kDefaultSupplyLineResistance;
  int dt_divisor = 32;
};

int run_couple(const CoupleOptions& o) {
  const int picked = (!o.channel.empty() ? 1 : 0) +
                     (!o.netlist_file.empty() ? 1 : 0) +
                     (!o.ir_file.empty() ? 1 : 0);
  if (picked != 1) {
    throw CLI::ValidationError(
        "couple: pick exactly one of --channel, --netlist, --ir");
  }

  const ccsc::TraceSet in = ccsc::read_trace_file(o.in);
  in.validate();

  ccsc::TraceSet out;
  double max_residual = 0.0;
  if (!o.ir_file.empty()) {
    const ccsc::ImpulseResponse ir =
        ccsc::load_impulse_response_csv(o.ir_file);
    for (const auto& t : in.traces)
      out.traces.push_back(ccsc::apply_impulse_response(ir, t).i_leak);
  } else {
    ccsc::Netlist net;
    if (!o.netlist_file.empty()) {
      std::ifstream f(o.netlist_file);
      if (!f) {
        throw std::runtime_error("couple: cannot open netlist '" +
                                 o.netlist_file + "'");
      }
      std::stringstream buf;
      buf << f.rdbuf();
      net = ccsc::parse_netlist(buf.str());
    } else if (o.channel == "capacitive") {
      net = ccsc::build_capacitive_channel(o.geometry, o.receiver_load,
                                           o.supply_line_resistance);
    } else if (o.channel == "inductive_capacitive") {
      net = ccsc::build_inductive_capacitive_channel(
          o.geometry, o.receiver_load, o.k_mutual, o.supply_line_resistance);
    } else {
      throw CLI::ValidationError("couple: unknown --channel '" + o.channel +
                                 "'");
    }
    const double dt =
        in.sample_period() / static_cast<double>(o.dt_divisor);
    for (const auto& t : in.traces) {
      ccsc::ChannelOutput co = ccsc::transient_solve(net, t, dt);
      max_residual = std::max(max_residual, co.stats.max_residual_ratio);
      out.traces.push_back(std::move(co.i_leak));
    }
  }
  ccsc::write_trace_file(out, o.out);
  std::cout << "coupled " << out.size() << " traces to " << o.out
            << " (max KCL residual ratio " << max_residual << ")\n";
  return 0;
}

struct DigitizeOptions {
  std::string in, out;
  int bits = 10;
  std::string full_scale = "auto";
  double adc_period = 0.0;
  double gain = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 1;
};

int run_digitize(const DigitizeOptions& o) {
  const ccsc::TraceSet in = ccsc::read_trace_file(o.in);
  in.validate();

  ccsc::AdcConfig a;
  a.resolution_bits = o.bits;
  a.gain = o.gain;
  a.input_noise_sigma = o.noise;
  a.sample_period = o.adc_period > 0.0 ? o.adc_period : in.sample_period();
  if (o.full_scale == "auto") {
    double max_abs = 0.0;
    for (const auto& t : in.traces)
      for (double v : t.samples)
        max_abs = std::max(max_abs, std::abs(v * a.gain));
    max_abs += 4.0 * a.input_noise_sigma;
    a.full_scale = max_abs > 0.0 ? max_abs : 1.0;
    std::cout << "auto full scale: " << a.full_scale << "\n";
  } else {
    a.full_scale = std::stod(o.full_scale);
  }

  ccsc::TraceSet out;
  for (const auto& t : in.traces)
    out.traces.push_back(ccsc::digitize(t, a, o.seed));
  ccsc::write_trace_file(out, o.out);
  std::cout << "digitized " << out.size() << " traces ("
            << out.trace_length() << " samples each) to " << o.out << "\n";
  return 0;
}

struct ReconstructOptions {
  std::string in, out;
  std::string mode = "integrate";
  std::string offset = "none";
};

int run_reconstruct(const ReconstructOptions& o) {
  const ccsc::TraceSet in = ccsc::read_trace_file(o.in);
  in.validate();

  ccsc::OffsetMode offset;
  if (o.offset == "none")
    offset = ccsc::OffsetMode::none;
  else if (o.offset == "subtract_mean")
    offset = ccsc::OffsetMode::subtract_mean;
  else if (o.offset == "subtract_first")
    offset = ccsc::OffsetMode::subtract_first;
  else
    throw CLI::ValidationError("reconstruct: unknown --offset '" + o.offset +
                               "'");
  if (o.mode != "raw" && o.mode != "integrate")
    throw CLI::ValidationError("reconstruct: unknown --mode '" + o.mode + "'");

  ccsc::TraceSet out;
  for (const auto& t : in.traces) {
    ccsc::Trace r = o.mode == "integrate" ? ccsc::cumulative_integrate(t) : t;
    out.traces.push_back(ccsc::remove_offset(r, offset));
  }
  ccsc::write_trace_file(out, o.out);
  std::cout << "reconstructed " << out.size() << " traces to " << o.out
            << "\n";
  return 0;
}

struct AttackOptions {
  std::string in;
  std::string distinguisher = "difference_of_means";
  std::string true_key;
  double window_start_frac = -1.0;
  std::string out_dir;
  int top = 5;
};

int run_attack(const AttackOptions& o) {
  ccsc::TraceSet ts = ccsc::read_trace_file(o.in);
  ts.validate();

  ccsc::DistinguisherKind kind;
  if (o.distinguisher == "difference_of_means")
    kind = ccsc::DistinguisherKind::difference_of_means;
  else if (o.distinguisher == "pearson_correlation")
    kind = ccsc::DistinguisherKind::pearson_correlation;
  else
    throw CLI::ValidationError("attack: unknown --distinguisher '" +
                               o.distinguisher + "'");

  if (o.window_start_frac >= 0.0) {
    if (o.window_start_frac >= 1.0)
      throw CLI::ValidationError("attack: --window-start-frac must be < 1");
    const std::size_t len = ts.trace_length();
    const ccsc::Window w{
        static_cast<std::size_t>(o.window_start_frac *
                                 static_cast<double>(len)),
        len};
    ccsc::TraceSet windowed;
    for (const auto& t : ts.traces)
      windowed.traces.push_back(ccsc::apply_window(t, w));
    ts = std::move(windowed);
  }

  const ccsc::LeakageModel model;
  const ccsc::AttackOutput result = ccsc::attack_with_traces(ts, kind, model);
  const auto& ranking = result.ranking;

  for (int i = 0; i < o.top && i < 256; ++i) {
    const auto& e = ranking.entries[static_cast<std::size_t>(i)];
    std::cout << "rank " << (i + 1) << ": key " << hex_byte(e.key)
              << " peak " << e.peak << "\n";
  }
  std::cout << "nearest rival margin: " << ranking.nearest_rival_margin
            << "\n";
  for (const auto& w : ranking.warnings) std::cout << "warning: " << w << "\n";

  if (!o.true_key.empty()) {
    const std::uint8_t key = parse_byte_flag(o.true_key, "--true-key");
    std::cout << "true key " << hex_byte(key) << " rank: "
              << ccsc::key_rank(ranking, key) << "\n";
  }

  if (!o.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(o.out_dir);
    std::ostringstream rank_csv;
    rank_csv << "rank,key,peak\n";
    rank_csv.precision(17);
    for (std::size_t i = 0; i < ranking.entries.size(); ++i) {
      rank_csv << (i + 1) << ',' << hex_byte(ranking.entries[i].key) << ','
               << ranking.entries[i].peak << '\n';
    }
    std::ofstream rank_out(fs::path(o.out_dir) / "ranking.csv");
    rank_out << rank_csv.str();

    std::ofstream dist_out(fs::path(o.out_dir) / "distinguisher.csv");
    dist_out.precision(17);
    dist_out << "time_s";
    for (int k = 0; k < 256; ++k)
      dist_out << ',' << hex_byte(static_cast<std::uint8_t>(k));
    dist_out << '\n';
    const double sp = ts.sample_period();
    for (std::size_t i = 0; i < ts.trace_length(); ++i) {
      dist_out << static_cast<double>(i) * sp;
      for (const auto& d : result.traces) {
        dist_out << ',';
        if (i < d.values.size())
          dist_out << d.values[i];
        else
          dist_out << 0;
      }
      dist_out << '\n';
    }
    std::cout << "wrote ranking.csv and distinguisher.csv to " << o.out_dir
              << "\n";
  }
  return 0;
}

int run_run(const std::string& scenario_file, const std::string& out_dir) {
  const ccsc::Scenario s = ccsc::load_scenario_file(scenario_file);
  const ccsc::RunSummary summary = ccsc::run_scenario(s, out_dir);
  for (const auto& r : summary.seeds) {
    std::cout << "seed " << r.seed << ": rank " << r.rank << ", margin "
              << r.margin;
    if (s.window_start_frac)
      std::cout << ", full-trace rank " << r.full_trace_rank;
    if (r.auto_full_scale > 0.0)
      std::cout << ", auto full scale " << r.auto_full_scale;
    std::cout << ", " << r.runtime_seconds << " s\n";
  }
  std::cout << "artifacts in " << out_dir << "\n";
  return 0;
}

int run_report(const std::string& dir) {
  namespace fs = std::filesystem;
  const fs::path summary_path = fs::path(dir) / "summary.csv";
  std::ifstream summary(summary_path);
  if (!summary) {
    throw std::runtime_error("report: cannot open '" + summary_path.string() +
                             "'; is this a run directory?");
  }

  const fs::path scenario_path = fs::path(dir) / "scenario.txt";
  if (std::ifstream scenario{scenario_path}) {
    std::cout << "scenario (" << scenario_path.string() << "):\n";
    for (std::string line; std::getline(scenario, line);)
      std::cout << "  " << line << "\n";
  }

  std::string line;
  std::getline(summary, line);  // header
  int total = 0, rank_one = 0;
  std::cout << "results:\n";
  while (std::getline(summary, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string seed, rank, margin, full_rank, auto_fs;
    std::getline(fields, seed, ',');
    std::getline(fields, rank, ',');
    std::getline(fields, margin, ',');
    std::getline(fields, full_rank, ',');
    std::getline(fields, auto_fs, ',');
    ++total;
    if (rank == "1") ++rank_one;
    std::cout << "  seed " << seed << ": rank " << rank << ", margin "
              << margin << ", full-trace rank " << full_rank << "\n";
  }
  std::cout << "rank-1 seeds: " << rank_one << "/" << total << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Cross-chiplet supply-current side channel: synthesis, coupling, "
      "acquisition, reconstruction, key recovery"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Synthesize victim current traces");
  ccsc::VictimParams victim;
  std::string gen_key = "0x2a";
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  gen->add_option("--key", gen_key, "Key byte")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Noise seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output trace file")->required();
  add_victim_flags(gen, victim);

  // couple
  auto* couple =
      app.add_subcommand("couple", "Propagate traces through a channel");
  CoupleOptions co;
  couple->add_option("--in", co.in, "Input trace file")->required();
  couple->add_option("--out", co.out, "Output trace file")->required();
  couple->add_option("--channel", co.channel,
                     "capacitive or inductive_capacitive");
  couple->add_option("--netlist", co.netlist_file,
                     "Custom netlist file (needs a receiver_load port)");
  couple->add_option("--ir", co.ir_file, "Impulse response CSV (time_s,amplitude)");
  couple->add_option("--receiver-load", co.receiver_load, "Receiver load [ohm]")
      ->capture_default_str();
  couple->add_option("--k-mutual", co.k_mutual, "Line coupling coefficient")
      ->capture_default_str();
  couple
      ->add_option("--supply-resistance", co.supply_line_resistance,
                   "Supply line resistance [ohm]")
      ->capture_default_str();
  couple
      ->add_option("--dt-divisor", co.dt_divisor,
                   "Solver step = sample period / divisor")
      ->capture_default_str();
  add_geometry_flags(couple, co.geometry);

  // digitize
  auto* digitize = app.add_subcommand("digitize", "Run traces through the ADC");
  DigitizeOptions digopt;
  digitize->add_option("--in", digopt.in, "Input trace file")->required();
  digitize->add_option("--out", digopt.out, "Output trace file")->required();
  digitize->add_option("--bits", digopt.bits, "Resolution bits")
      ->capture_default_str();
  digitize
      ->add_option("--full-scale", digopt.full_scale,
                   "Full scale amplitude, or 'auto'")
      ->capture_default_str();
  digitize
      ->add_option("--adc-period", digopt.adc_period,
                   "ADC sample period [s] (0 keeps the input rate)")
      ->capture_default_str();
  digitize->add_option("--gain", digopt.gain, "Front-end gain")
      ->capture_default_str();
  digitize->add_option("--noise", digopt.noise, "Input noise sigma")
      ->capture_default_str();
  digitize->add_option("--seed", digopt.seed, "Noise seed")
      ->capture_default_str();

  // reconstruct
  auto* reconstruct =
      app.add_subcommand("reconstruct", "Undo the channel's derivative shape");
  ReconstructOptions ro;
  reconstruct->add_option("--in", ro.in, "Input trace file")->required();
  reconstruct->add_option("--out", ro.out, "Output trace file")->required();
  reconstruct->add_option("--mode", ro.mode, "raw or integrate")
      ->capture_default_str();
  reconstruct
      ->add_option("--offset", ro.offset,
                   "none, subtract_mean or subtract_first")
      ->capture_default_str();

  // attack
  auto* attack = app.add_subcommand("attack", "Rank key hypotheses");
  AttackOptions ao;
  attack->add_option("--in", ao.in, "Input trace file")->required();
  attack
      ->add_option("--distinguisher", ao.distinguisher,
                   "difference_of_means or pearson_correlation")
      ->capture_default_str();
  attack->add_option("--true-key", ao.true_key,
                     "Report the rank of this key byte");
  attack->add_option("--window-start-frac", ao.window_start_frac,
                     "Attack only the trailing window starting here");
  attack->add_option("--out-dir", ao.out_dir,
                     "Write ranking.csv and distinguisher.csv here");
  attack->add_option("--top", ao.top, "Hypotheses to print")
      ->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "Execute a scenario file end to end");
  std::string run_scenario_file, run_out_dir;
  run->add_option("--scenario", run_scenario_file, "Scenario file")->required();
  run->add_option("--out", run_out_dir, "Run directory")->required();

  // report
  auto* report = app.add_subcommand("report", "Summarize a run directory");
  std::string report_dir;
  report->add_option("--dir", report_dir, "Run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return run_gen(victim, gen_key, gen_seed, gen_out);
    if (couple->parsed()) return run_couple(co);
    if (digitize->parsed()) return run_digitize(digopt);
    if (reconstruct->parsed()) return run_reconstruct(ro);
    if (attack->parsed()) return run_attack(ao);
    if (run->parsed()) return run_run(run_scenario_file, run_out_dir);
    if (report->parsed()) return run_report(report_dir);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "ccsc: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ccsc: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

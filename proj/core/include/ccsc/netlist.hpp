#pragma once

#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ccsc {

/// Linear lumped-element circuit description consumed by the transient
/// solver. Node 0 is always ground (named "0"; "gnd" is accepted as an
/// alias when adding or parsing).
///
/// Sign conventions:
///  - current_source(a, b): positive waveform values drive conventional
///    current from node a through the source to node b.
///  - dc_voltage_source(a, b, v): holds v(a) - v(b) = v.
///  - mutual(l1, l2, k): k > 0 couples the two inductors with their dotted
///    terminals at the first-listed node of each.
struct Netlist {
  struct Resistor {
    int a, b;
    double ohms;
  };
  struct Capacitor {
    int a, b;
    double farads;
  };
  struct Inductor {
    std::string id;
    int a, b;
    double henries;
  };
  struct Mutual {
    std::string l1, l2;
    double k;
  };
  struct CurrentSource {
    int a, b;
    std::string waveform;  // reference resolved at solve time
  };
  struct DcVoltageSource {
    int a, b;
    double volts;
  };

  std::vector<std::string> node_names{"0"};  // index == node id
  std::vector<Resistor> resistors;
  std::vector<Capacitor> capacitors;
  std::vector<Inductor> inductors;
  std::vector<Mutual> mutuals;
  std::vector<CurrentSource> current_sources;
  std::vector<DcVoltageSource> voltage_sources;
  std::map<std::string, std::pair<int, int>> ports;

  /// Returns the id of the named node, creating it if needed.
  int add_node(std::string_view name);
  /// Returns the id of an existing node; throws if unknown.
  [[nodiscard]] int node_id(std::string_view name) const;
  [[nodiscard]] std::size_t node_count() const { return node_names.size(); }

  void add_resistor(std::string_view a, std::string_view b, double ohms);
  void add_capacitor(std::string_view a, std::string_view b, double farads);
  void add_inductor(std::string_view id, std::string_view a, std::string_view b,
                    double henries);
  void add_mutual(std::string_view l1, std::string_view l2, double k);
  void add_current_source(std::string_view a, std::string_view b,
                          std::string_view waveform);
  void add_dc_voltage_source(std::string_view a, std::string_view b, double volts);
  void add_port(std::string_view name, std::string_view a, std::string_view b);

  [[nodiscard]] const Inductor* find_inductor(std::string_view id) const;

  /// Checks element references, element values, |k| < 1 for mutuals, and
  /// that every node reaches ground through element edges.
  /// Throws std::invalid_argument describing the first violation.
  void validate() const;
};

/// Plain-text element-per-line form (element kind, node names, value in SI
/// units; '#' starts a comment). parse_netlist accepts what format_netlist
/// emits.
std::string format_netlist(const Netlist& n);
Netlist parse_netlist(const std::string& text);

}  // namespace ccsc

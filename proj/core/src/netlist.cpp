#include "ccsc/netlist.hpp"

#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace ccsc {

namespace {

[[noreturn]] void fail(const std::string& what) {
  throw std::invalid_argument("netlist: " + what);
}

std::string canonical_node_name(std::string_view name) {
  if (name == "gnd") return "0";
  return std::string(name);
}

}  // namespace

int Netlist::add_node(std::string_view name) {
  const std::string canon = canonical_node_name(name);
  if (canon.empty()) fail("empty node name");
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    if (node_names[i] == canon) return static_cast<int>(i);
  }
  node_names.push_back(canon);
  return static_cast<int>(node_names.size() - 1);
}

int Netlist::node_id(std::string_view name) const {
  const std::string canon = canonical_node_name(name);
  for (std::size_t i = 0; i < node_names.size(); ++i) {
    if (node_names[i] == canon) return static_cast<int>(i);
  }
  fail("unknown node '" + std::string(name) + "'");
}

void Netlist::add_resistor(std::string_view a, std::string_view b,
                           double ohms) {
  resistors.push_back({add_node(a), add_node(b), ohms});
}

void Netlist::add_capacitor(std::string_view a, std::string_view b,
                            double farads) {
  capacitors.push_back({add_node(a), add_node(b), farads});
}

void Netlist::add_inductor(std::string_view id, std::string_view a,
                           std::string_view b, double henries) {
  if (id.empty()) fail("inductor id must not be empty");
  if (find_inductor(id) != nullptr)
    fail("duplicate inductor id '" + std::string(id) + "'");
  inductors.push_back({std::string(id), add_node(a), add_node(b), henries});
}

void Netlist::add_mutual(std::string_view l1, std::string_view l2, double k) {
  mutuals.push_back({std::string(l1), std::string(l2), k});
}

void Netlist::add_current_source(std::string_view a, std::string_view b,
                                 std::string_view waveform) {
  current_sources.push_back({add_node(a), add_node(b), std::string(waveform)});
}

void Netlist::add_dc_voltage_source(std::string_view a, std::string_view b,
                                    double volts) {
  voltage_sources.push_back({add_node(a), add_node(b), volts});
}

void Netlist::add_port(std::string_view name, std::string_view a,
                       std::string_view b) {
  if (name.empty()) fail("port name must not be empty");
  const auto [it, inserted] =
      ports.emplace(std::string(name), std::make_pair(add_node(a), add_node(b)));
  (void)it;
  if (!inserted) fail("duplicate port '" + std::string(name) + "'");
}

const Netlist::Inductor* Netlist::find_inductor(std::string_view id) const {
  for (const auto& l : inductors) {
    if (l.id == id) return &l;
  }
  return nullptr;
}

void Netlist::validate() const {
  const int n = static_cast<int>(node_names.size());
  auto check_node = [&](int id, const char* where) {
    if (id < 0 || id >= n) {
      fail(std::string(where) + " references node id " + std::to_string(id) +
           " outside [0, " + std::to_string(n) + ")");
    }
  };
  auto check_positive = [&](double v, const std::string& where) {
    if (!std::isfinite(v) || v <= 0.0) {
      fail(where + " value must be positive and finite, got " +
           std::to_string(v));
    }
  };

  if (node_names.empty() || node_names[0] != "0") fail("node 0 must be ground");

  for (const auto& r : resistors) {
    check_node(r.a, "resistor");
    check_node(r.b, "resistor");
    check_positive(r.ohms, "resistor");
  }
  for (const auto& c : capacitors) {
    check_node(c.a, "capacitor");
    check_node(c.b, "capacitor");
    check_positive(c.farads, "capacitor");
  }
  for (const auto& l : inductors) {
    check_node(l.a, "inductor");
    check_node(l.b, "inductor");
    check_positive(l.henries, "inductor '" + l.id + "'");
  }
  for (const auto& m : mutuals) {
    const auto* l1 = find_inductor(m.l1);
    const auto* l2 = find_inductor(m.l2);
    if (l1 == nullptr) fail("mutual references unknown inductor '" + m.l1 + "'");
    if (l2 == nullptr) fail("mutual references unknown inductor '" + m.l2 + "'");
    if (l1 == l2) fail("mutual must couple two distinct inductors");
    if (!std::isfinite(m.k) || std::abs(m.k) >= 1.0) {
      fail("mutual coupling coefficient must satisfy |k| < 1, got " +
           std::to_string(m.k));
    }
  }
  for (const auto& s : current_sources) {
    check_node(s.a, "current source");
    check_node(s.b, "current source");
    if (s.waveform.empty()) fail("current source waveform name must not be empty");
  }
  for (const auto& s : voltage_sources) {
    check_node(s.a, "voltage source");
    check_node(s.b, "voltage source");
    if (!std::isfinite(s.volts)) fail("voltage source value must be finite");
  }
  for (const auto& [name, nodes] : ports) {
    check_node(nodes.first, ("port '" + name + "'").c_str());
    check_node(nodes.second, ("port '" + name + "'").c_str());
  }

  // Every node must reach ground through element edges, else the nodal
  // matrix is singular.
  std::vector<std::vector<int>> adj(node_names.size());
  auto link = [&](int a, int b) {
    adj[static_cast<std::size_t>(a)].push_back(b);
    adj[static_cast<std::size_t>(b)].push_back(a);
  };
  for (const auto& r : resistors) link(r.a, r.b);
  for (const auto& c : capacitors) link(c.a, c.b);
  for (const auto& l : inductors) link(l.a, l.b);
  for (const auto& s : current_sources) link(s.a, s.b);
  for (const auto& s : voltage_sources) link(s.a, s.b);

  std::vector<char> seen(node_names.size(), 0);
  std::queue<int> frontier;
  frontier.push(0);
  seen[0] = 1;
  while (!frontier.empty()) {
    const int v = frontier.front();
    frontier.pop();
    for (int w : adj[static_cast<std::size_t>(v)]) {
      if (!seen[static_cast<std::size_t>(w)]) {
        seen[static_cast<std::size_t>(w)] = 1;
        frontier.push(w);
      }
    }
  }
  for (std::size_t i = 0; i < seen.size(); ++i) {
    if (!seen[i]) {
      fail("node '" + node_names[i] + "' has no element path to ground");
    }
  }
}

std::string format_netlist(const Netlist& n) {
  std::ostringstream out;
  out.precision(17);
  const auto name = [&](int id) -> const std::string& {
    return n.node_names[static_cast<std::size_t>(id)];
  };
  for (const auto& r : n.resistors)
    out << "resistor " << name(r.a) << ' ' << name(r.b) << ' ' << r.ohms << '\n';
  for (const auto& c : n.capacitors)
    out << "capacitor " << name(c.a) << ' ' << name(c.b) << ' ' << c.farads
        << '\n';
  for (const auto& l : n.inductors)
    out << "inductor " << l.id << ' ' << name(l.a) << ' ' << name(l.b) << ' '
        << l.henries << '\n';
  for (const auto& m : n.mutuals)
    out << "mutual " << m.l1 << ' ' << m.l2 << ' ' << m.k << '\n';
  for (const auto& s : n.current_sources)
    out << "isource " << name(s.a) << ' ' << name(s.b) << ' ' << s.waveform
        << '\n';
  for (const auto& s : n.voltage_sources)
    out << "vsource " << name(s.a) << ' ' << name(s.b) << ' ' << s.volts << '\n';
  for (const auto& [pname, nodes] : n.ports)
    out << "port " << pname << ' ' << name(nodes.first) << ' '
        << name(nodes.second) << '\n';
  return out.str();
}

namespace {

double parse_value(const std::string& token, int line_no) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(token, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != token.size()) {
    fail("line " + std::to_string(line_no) + ": expected a number, got '" +
         token + "'");
  }
  return v;
}

}  // namespace

Netlist parse_netlist(const std::string& text) {
  Netlist n;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    std::istringstream fields(line);
    std::string kind;
    if (!(fields >> kind)) continue;

    std::vector<std::string> args;
    for (std::string tok; fields >> tok;) args.push_back(tok);
    auto expect_args = [&](std::size_t count) {
      if (args.size() != count) {
        fail("line " + std::to_string(line_no) + ": '" + kind + "' takes " +
             std::to_string(count) + " fields, got " +
             std::to_string(args.size()));
      }
    };

    if (kind == "resistor") {
      expect_args(3);
      n.add_resistor(args[0], args[1], parse_value(args[2], line_no));
    } else if (kind == "capacitor") {
      expect_args(3);
      n.add_capacitor(args[0], args[1], parse_value(args[2], line_no));
    } else if (kind == "inductor") {
      expect_args(4);
      n.add_inductor(args[0], args[1], args[2], parse_value(args[3], line_no));
    } else if (kind == "mutual") {
      expect_args(3);
      n.add_mutual(args[0], args[1], parse_value(args[2], line_no));
    } else if (kind == "isource") {
      expect_args(3);
      n.add_current_source(args[0], args[1], args[2]);
    } else if (kind == "vsource") {
      expect_args(3);
      n.add_dc_voltage_source(args[0], args[1], parse_value(args[2], line_no));
    } else if (kind == "port") {
      expect_args(3);
      n.add_port(args[0], args[1], args[2]);
    } else {
      fail("line " + std::to_string(line_no) + ": unknown element kind '" +
           kind + "'");
    }
  }
  return n;
}

}  // namespace ccsc

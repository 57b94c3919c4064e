#include "ccsc/transient.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace ccsc {

ChannelOutput transient_solve(const Netlist& n, const Trace& excitation,
                              double dt) {
  n.validate();
  excitation.validate();

  const double sp = excitation.sample_period;
  if (!std::isfinite(dt) || dt <= 0.0)
    throw std::invalid_argument("transient: dt must be positive and finite");
  if (dt > sp * (1.0 + 1e-12)) {
    throw std::invalid_argument(
        "transient: dt must not exceed the excitation sample period");
  }
  if (n.current_sources.size() > 1) {
    throw SolverError(
        "transient: netlist binds one excitation waveform but declares " +
        std::to_string(n.current_sources.size()) + " current sources");
  }

  // Snap dt down to an exact submultiple of the sample period so solver
  // steps land on the excitation grid and resampling is a pure pick.
  const long substeps = std::max<long>(
      1, static_cast<long>(std::ceil(sp / dt * (1.0 - 1e-12))));
  const double dt_eff = sp / static_cast<double>(substeps);

  const std::size_t node_count = n.node_count();
  const std::size_t nn = node_count - 1;  // ground eliminated
  const std::size_t nl = n.inductors.size();
  const std::size_t nv = n.voltage_sources.size();
  const std::size_t dim = nn + nl + nv;
  if (dim == 0) throw SolverError("transient: netlist has no unknowns");

  // Unknown vector layout: node voltages 1..N-1, then inductor branch
  // currents, then voltage source branch currents.
  const auto node_idx = [](int node) { return static_cast<std::size_t>(node - 1); };
  const auto ind_idx = [nn](std::size_t j) { return nn + j; };
  const auto vs_idx = [nn, nl](std::size_t j) { return nn + nl + j; };

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim),
                                            static_cast<Eigen::Index>(dim));
  const auto at = [&A](std::size_t r, std::size_t c) -> double& {
    return A(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  };

  const auto stamp_conductance = [&](int a, int b, double g) {
    if (a != 0) at(node_idx(a), node_idx(a)) += g;
    if (b != 0) at(node_idx(b), node_idx(b)) += g;
    if (a != 0 && b != 0) {
      at(node_idx(a), node_idx(b)) -= g;
      at(node_idx(b), node_idx(a)) -= g;
    }
  };
  // Branch current flowing a -> b shows up in the KCL rows of both nodes.
  const auto stamp_branch_kcl = [&](int a, int b, std::size_t col) {
    if (a != 0) at(node_idx(a), col) += 1.0;
    if (b != 0) at(node_idx(b), col) -= 1.0;
  };

  for (const auto& r : n.resistors) stamp_conductance(r.a, r.b, 1.0 / r.ohms);

  std::vector<double> cap_geq(n.capacitors.size());
  for (std::size_t c = 0; c < n.capacitors.size(); ++c) {
    cap_geq[c] = 2.0 * n.capacitors[c].farads / dt_eff;
    stamp_conductance(n.capacitors[c].a, n.capacitors[c].b, cap_geq[c]);
  }

  // Mutual inductances in pairwise index form. M = k sqrt(L1 L2).
  struct MutualTerm {
    std::size_t other;
    double henries;
  };
  std::vector<std::vector<MutualTerm>> mutual_terms(nl);
  const auto inductor_pos = [&](const std::string& id) {
    for (std::size_t j = 0; j < nl; ++j) {
      if (n.inductors[j].id == id) return j;
    }
    throw SolverError("transient: mutual references unknown inductor '" + id +
                      "'");
  };
  for (const auto& m : n.mutuals) {
    const std::size_t j1 = inductor_pos(m.l1);
    const std::size_t j2 = inductor_pos(m.l2);
    const double henries =
        m.k * std::sqrt(n.inductors[j1].henries * n.inductors[j2].henries);
    mutual_terms[j1].push_back({j2, henries});
    mutual_terms[j2].push_back({j1, henries});
  }

  // Inductor branch row for the trapezoidal rule:
  //   (va - vb) - (2L/dt) i - sum (2M/dt) i_m = -(va - vb)' - (2L/dt) i'
  //                                             - sum (2M/dt) i_m'
  // with primes marking the previous step.
  for (std::size_t j = 0; j < nl; ++j) {
    const auto& l = n.inductors[j];
    const std::size_t row = ind_idx(j);
    stamp_branch_kcl(l.a, l.b, row);
    if (l.a != 0) at(row, node_idx(l.a)) += 1.0;
    if (l.b != 0) at(row, node_idx(l.b)) -= 1.0;
    at(row, row) -= 2.0 * l.henries / dt_eff;
    for (const auto& mt : mutual_terms[j]) {
      at(row, ind_idx(mt.other)) -= 2.0 * mt.henries / dt_eff;
    }
  }

  for (std::size_t j = 0; j < nv; ++j) {
    const auto& s = n.voltage_sources[j];
    const std::size_t row = vs_idx(j);
    stamp_branch_kcl(s.a, s.b, row);
    if (s.a != 0) at(row, node_idx(s.a)) += 1.0;
    if (s.b != 0) at(row, node_idx(s.b)) -= 1.0;
  }

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
  if (!lu.isInvertible()) {
    throw SolverError(
        "transient: system matrix is singular, the netlist does not determine "
        "a unique solution");
  }

  const std::size_t out_len = excitation.size();
  const long total_steps = static_cast<long>(out_len - 1) * substeps;

  // Zero initial conditions everywhere.
  Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  std::vector<double> cap_current(n.capacitors.size(), 0.0);
  std::vector<double> cap_history(n.capacitors.size(), 0.0);

  const auto node_v = [&](const Eigen::VectorXd& vec, int node) {
    return node == 0 ? 0.0 : vec(static_cast<Eigen::Index>(node_idx(node)));
  };

  // Excitation on the solver grid: exact sample at aligned steps,
  // Catmull-Rom cubic between them. Linear interpolation would zero the
  // within-interval curvature, and with a series supply inductor that
  // curvature is exactly what the coupled side differentiates.
  const auto& xs = excitation.samples;
  const auto sample_clamped = [&](long i) {
    if (i < 0) i = 0;
    const long last = static_cast<long>(xs.size()) - 1;
    if (i > last) i = last;
    return xs[static_cast<std::size_t>(i)];
  };
  const auto excitation_at = [&](long step) {
    const long n0 = step / substeps;
    const long rem = step % substeps;
    if (rem == 0) return xs[static_cast<std::size_t>(n0)];
    const double u = static_cast<double>(rem) / static_cast<double>(substeps);
    const double p0 = sample_clamped(n0 - 1);
    const double p1 = sample_clamped(n0);
    const double p2 = sample_clamped(n0 + 1);
    const double p3 = sample_clamped(n0 + 2);
    return p1 + u * (0.5 * (p2 - p0) +
                     u * ((p0 - 2.5 * p1 + 2.0 * p2 - 0.5 * p3) +
                          u * (0.5 * (p3 - p0) + 1.5 * (p1 - p2))));
  };

  std::vector<std::vector<double>> node_out(node_count);
  for (auto& v : node_out) v.assign(out_len, 0.0);

  double max_residual_ratio = 0.0;

  for (long step = 1; step <= total_steps; ++step) {
    b.setZero();

    for (std::size_t c = 0; c < n.capacitors.size(); ++c) {
      const auto& cap = n.capacitors[c];
      const double vd = node_v(x, cap.a) - node_v(x, cap.b);
      const double ieq = cap_geq[c] * vd + cap_current[c];
      cap_history[c] = ieq;
      if (cap.a != 0) b(static_cast<Eigen::Index>(node_idx(cap.a))) += ieq;
      if (cap.b != 0) b(static_cast<Eigen::Index>(node_idx(cap.b))) -= ieq;
    }

    if (!n.current_sources.empty()) {
      const auto& src = n.current_sources.front();
      const double i = excitation_at(step);
      if (src.a != 0) b(static_cast<Eigen::Index>(node_idx(src.a))) -= i;
      if (src.b != 0) b(static_cast<Eigen::Index>(node_idx(src.b))) += i;
    }

    for (std::size_t j = 0; j < nl; ++j) {
      const auto& l = n.inductors[j];
      const double vd = node_v(x, l.a) - node_v(x, l.b);
      double rhs = -vd - 2.0 * l.henries / dt_eff *
                             x(static_cast<Eigen::Index>(ind_idx(j)));
      for (const auto& mt : mutual_terms[j]) {
        rhs -= 2.0 * mt.henries / dt_eff *
               x(static_cast<Eigen::Index>(ind_idx(mt.other)));
      }
      b(static_cast<Eigen::Index>(ind_idx(j))) = rhs;
    }

    for (std::size_t j = 0; j < nv; ++j)
      b(static_cast<Eigen::Index>(vs_idx(j))) = n.voltage_sources[j].volts;

    const Eigen::VectorXd x_next = lu.solve(b);
    if (!x_next.allFinite()) {
      throw SolverError("transient: solution diverged at step " +
                        std::to_string(step));
    }

    const double b_norm = b.norm();
    const double r_norm = (A * x_next - b).norm();
    if (b_norm > 0.0) {
      max_residual_ratio = std::max(max_residual_ratio, r_norm / b_norm);
    } else if (r_norm > 0.0) {
      max_residual_ratio = std::numeric_limits<double>::infinity();
    }

    for (std::size_t c = 0; c < n.capacitors.size(); ++c) {
      const auto& cap = n.capacitors[c];
      const double vd = node_v(x_next, cap.a) - node_v(x_next, cap.b);
      cap_current[c] = cap_geq[c] * vd - cap_history[c];
    }
    x = x_next;

    if (step % substeps == 0) {
      const std::size_t out_n = static_cast<std::size_t>(step / substeps);
      for (std::size_t node = 1; node < node_count; ++node)
        node_out[node][out_n] = node_v(x, static_cast<int>(node));
    }
  }

  ChannelOutput out;
  out.stats.dt = dt_eff;
  out.stats.steps = total_steps;
  out.stats.max_residual_ratio = max_residual_ratio;

  for (std::size_t node = 0; node < node_count; ++node) {
    Trace t;
    t.samples = std::move(node_out[node]);
    t.sample_period = sp;
    t.plaintext = excitation.plaintext;
    t.unit = Unit::volts;
    out.v_nodes.emplace(n.node_names[node], std::move(t));
  }

  const auto port = n.ports.find("receiver_load");
  if (port == n.ports.end()) {
    throw SolverError(
        "transient: netlist declares no 'receiver_load' port to measure");
  }
  const auto [pa, pb] = port->second;
  const Netlist::Resistor* load = nullptr;
  for (const auto& r : n.resistors) {
    if ((r.a == pa && r.b == pb) || (r.a == pb && r.b == pa)) {
      load = &r;
      break;
    }
  }
  if (load == nullptr) {
    throw SolverError(
        "transient: no resistor spans the 'receiver_load' port");
  }

  const auto& va = out.v_nodes.at(n.node_names[static_cast<std::size_t>(pa)]);
  const auto& vb = out.v_nodes.at(n.node_names[static_cast<std::size_t>(pb)]);
  Trace i_leak;
  i_leak.samples.resize(out_len);
  for (std::size_t k = 0; k < out_len; ++k)
    i_leak.samples[k] = (va.samples[k] - vb.samples[k]) / load->ohms;
  i_leak.sample_period = sp;
  i_leak.plaintext = excitation.plaintext;
  i_leak.unit = Unit::amperes;
  out.i_leak = std::move(i_leak);
  return out;
}

}  // namespace ccsc

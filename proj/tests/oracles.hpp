// Independent reference implementations used by the tests. Nothing here
// calls into the library code under test except for plain data access.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "fomlab/calibration.hpp"
#include "fomlab/circuit.hpp"
#include "fomlab/random.hpp"

namespace oracle {

using cplx = std::complex<double>;
using Matrix = std::vector<std::vector<cplx>>;

inline Matrix identity(std::size_t dim) {
  Matrix m(dim, std::vector<cplx>(dim, 0.0));
  for (std::size_t i = 0; i < dim; ++i) m[i][i] = 1.0;
  return m;
}

inline Matrix multiply(const Matrix& a, const Matrix& b) {
  const std::size_t n = a.size();
  Matrix out(n, std::vector<cplx>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      if (a[i][k] != cplx(0.0))
        for (std::size_t j = 0; j < n; ++j) out[i][j] += a[i][k] * b[k][j];
  return out;
}

// Textbook 2x2 matrix of a one-qubit gate.
inline Matrix gate_matrix(fomlab::GateKind kind, double theta) {
  using fomlab::GateKind;
  const cplx i(0.0, 1.0);
  const double r = 1.0 / std::sqrt(2.0);
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  switch (kind) {
    case GateKind::X: return {{0, 1}, {1, 0}};
    case GateKind::Y: return {{0, -i}, {i, 0}};
    case GateKind::Z: return {{1, 0}, {0, -1}};
    case GateKind::H: return {{r, r}, {r, -r}};
    case GateKind::S: return {{1, 0}, {0, i}};
    case GateKind::Sdg: return {{1, 0}, {0, -i}};
    case GateKind::T: return {{1, 0}, {0, std::exp(i * (std::numbers::pi / 4))}};
    case GateKind::Tdg: return {{1, 0}, {0, std::exp(-i * (std::numbers::pi / 4))}};
    case GateKind::RX: return {{c, -i * s}, {-i * s, c}};
    case GateKind::RY: return {{c, -s}, {s, c}};
    case GateKind::RZ: return {{std::exp(-i * (theta / 2)), 0}, {0, std::exp(i * (theta / 2))}};
    default: return identity(2);
  }
}

// Full 2^n x 2^n unitary of one op, entry by entry.
inline Matrix embed(const fomlab::GateOp& op, std::size_t n) {
  using fomlab::GateKind;
  const std::size_t dim = std::size_t{1} << n;
  Matrix u(dim, std::vector<cplx>(dim, 0.0));
  if (op.is_measure()) return identity(dim);
  if (!op.is_two_qubit()) {
    const auto g = gate_matrix(op.kind, op.param.value_or(0.0));
    const std::size_t q = op.targets[0];
    for (std::size_t row = 0; row < dim; ++row)
      for (std::size_t col = 0; col < dim; ++col) {
        if ((row & ~(std::size_t{1} << q)) != (col & ~(std::size_t{1} << q))) continue;
        u[row][col] = g[(row >> q) & 1][(col >> q) & 1];
      }
    return u;
  }
  const std::size_t a = op.targets[0], b = op.targets[1];
  for (std::size_t col = 0; col < dim; ++col) {
    const bool bit_a = (col >> a) & 1, bit_b = (col >> b) & 1;
    std::size_t row = col;
    cplx amp = 1.0;
    if (op.kind == GateKind::CX && bit_a) row = col ^ (std::size_t{1} << b);
    if (op.kind == GateKind::CZ && bit_a && bit_b) amp = -1.0;
    if (op.kind == GateKind::Swap && bit_a != bit_b) row = col ^ (std::size_t{1} << a) ^ (std::size_t{1} << b);
    u[row][col] = amp;
  }
  return u;
}

inline std::vector<cplx> dense_state(const fomlab::Circuit& c) {
  const std::size_t n = c.num_qubits();
  Matrix u = identity(std::size_t{1} << n);
  for (const auto& op : c.ops()) u = multiply(embed(op, n), u);
  std::vector<cplx> psi(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) psi[i] = u[i][0];
  return psi;
}

// Hellinger distance straight from the definition over a dense outcome space.
inline double hellinger(const std::map<std::string, double>& p, const std::map<std::string, double>& q) {
  std::set<std::string> keys;
  for (const auto& [k, v] : p) keys.insert(k);
  for (const auto& [k, v] : q) keys.insert(k);
  double sum = 0.0;
  for (const auto& k : keys) {
    const double a = p.contains(k) ? p.at(k) : 0.0;
    const double b = q.contains(k) ? q.at(k) : 0.0;
    const double d = std::sqrt(a) - std::sqrt(b);
    sum += d * d;
  }
  return std::sqrt(sum) / std::sqrt(2.0);
}

// Two-pass textbook Pearson in long double.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  long double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= x.size();
  my /= y.size();
  long double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return static_cast<double>(sxy / std::sqrt(sxx * syy));
}

// Layer-by-layer ASAP with per-qubit frontiers; returns idle time per qubit.
inline std::vector<double> idle_times(const fomlab::Circuit& c, const fomlab::Durations& dur) {
  std::vector<std::size_t> frontier(c.num_qubits(), 0);
  std::vector<std::size_t> level(c.size());
  std::size_t layers = 0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::size_t l = 0;
    for (auto q : c.ops()[i].qubits()) l = std::max(l, frontier[q]);
    level[i] = l;
    for (auto q : c.ops()[i].qubits()) frontier[q] = l + 1;
    layers = std::max(layers, l + 1);
  }
  std::vector<double> layer_len(layers, 0.0);
  for (std::size_t i = 0; i < c.size(); ++i) {
    layer_len[level[i]] = std::max(layer_len[level[i]], dur.at(c.ops()[i].kind));
  }
  double total = 0.0;
  for (double t : layer_len) total += t;
  std::vector<double> idle(c.num_qubits(), total);
  for (const auto& op : c.ops())
    for (auto q : op.qubits()) idle[q] -= dur.at(op.kind);
  return idle;
}

inline double expected_fidelity(const fomlab::Circuit& c, const fomlab::CalibrationData& cal) {
  double f = 1.0;
  for (const auto& op : c.ops()) {
    if (op.is_measure()) f *= cal.readout_fidelity.at(op.targets[0]);
    else if (op.is_two_qubit()) f *= cal.two_qubit_fidelity.at(fomlab::QubitPair(op.targets[0], op.targets[1]));
    else f *= cal.single_qubit_fidelity.at(op.targets[0]);
  }
  return f;
}

inline double esp(const fomlab::Circuit& c, const fomlab::CalibrationData& cal) {
  const auto idle = idle_times(c, cal.gate_durations);
  double f = oracle::expected_fidelity(c, cal);
  for (std::size_t q = 0; q < idle.size(); ++q) {
    const double t = std::min(cal.t1_ns.at(q), cal.t2_ns.at(q));
    f *= std::exp(-idle[q] / t);
  }
  return f;
}

// Random circuit over the whole vocabulary on a line of n qubits.
inline fomlab::Circuit random_circuit(std::size_t n, std::size_t ops, fomlab::Rng& rng, bool measure = false,
                                      bool line_only = true) {
  using fomlab::GateKind;
  fomlab::Circuit c(n);
  for (std::size_t k = 0; k < ops; ++k) {
    const auto kind = fomlab::kAllGateKinds[rng.below(fomlab::kGateKindCount - 1)];
    if (fomlab::arity(kind) == 2) {
      if (n < 2) continue;
      fomlab::Qubit a = static_cast<fomlab::Qubit>(rng.below(n));
      fomlab::Qubit b;
      if (line_only) {
        b = a + 1 < n && (a == 0 || rng.below(2)) ? a + 1 : a - 1;
      } else {
        do b = static_cast<fomlab::Qubit>(rng.below(n)); while (b == a);
      }
      c.append(fomlab::GateOp::two(kind, a, b));
    } else {
      const auto q = static_cast<fomlab::Qubit>(rng.below(n));
      std::optional<double> theta;
      if (fomlab::is_rotation(kind)) theta = (rng.uniform() * 4.0 - 2.0) * std::numbers::pi;
      c.append(fomlab::GateOp::one(kind, q, theta));
    }
  }
  if (measure) c.measure_all();
  return c;
}

}  // namespace oracle

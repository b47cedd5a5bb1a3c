// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace dcool {

Vector pack_local(const LocalDecision& d) {
  const int n_t = static_cast<int>(d.zone_temps.rows());
  const int n_z = static_cast<int>(d.zone_temps.cols());
  const int n_state = static_cast<int>(d.wall_state.size());
  Vector u(n_t * n_z + n_state);
  for (int b = 0; b < n_t; ++b) {
    u.segment(b * n_z, n_z) = d.zone_temps.row(b);
  }
  u.tail(n_state) = d.wall_state;
  return u;
}

LocalDecision unpack_local(const Vector& u, int n_t, int n_zones, int n_state) {
  if (u.size() != n_t * n_zones + n_state) {
    throw ModelError("local decision dimension mismatch");
  }
  LocalDecision d;
  d.zone_temps = Matrix(n_t, n_zones);
  for (int b = 0; b < n_t; ++b) {
    d.zone_temps.row(b) = u.segment(b * n_zones, n_zones);
  }
  d.wall_state = u.tail(n_state);
  return d;
}

Vector pack_global(const GlobalDecision& d) {
  const int m = static_cast<int>(d.buildings.size());
  if (m == 0) throw ModelError("global decision has no buildings");
  const int n_t = static_cast<int>(d.buildings[0].exchanges.size());
  Vector x(m * (n_t + 1));
  for (int i = 0; i < m; ++i) {
    if (d.buildings[i].exchanges.size() != n_t) {
      throw ModelError("global decision exchange length mismatch");
    }
    x.segment(i * (n_t + 1), n_t) = d.buildings[i].exchanges;
    x(i * (n_t + 1) + n_t) = d.buildings[i].storage_init;
  }
  return x;
}

GlobalDecision unpack_global(const Vector& x, int m, int n_t) {
  if (x.size() != m * (n_t + 1)) {
    throw ModelError("global decision dimension mismatch");
  }
  GlobalDecision d;
  d.buildings.resize(m);
  for (int i = 0; i < m; ++i) {
    d.buildings[i].exchanges = x.segment(i * (n_t + 1), n_t);
    d.buildings[i].storage_init = x(i * (n_t + 1) + n_t);
  }
  return d;
}

double ResidualSet::max_residual() const {
  double r = -kInf;
  for (const auto& g : groups) {
    if (g.values.size() > 0) r = std::max(r, g.values.maxCoeff());
  }
  return r;
}

const Vector& ResidualSet::operator[](const std::string& name) const {
  for (const auto& g : groups) {
    if (g.name == name) return g.values;
  }
  throw std::out_of_range("no residual group named " + name);
}

namespace {

/// Coefficients of the storage level E(t) over the global vector, placed at
/// x_offset inside a larger variable.  The init coefficient lands on
/// building 0's copy of E_storage(1); the other copies are tied by equality.
LinearTerm storage_level_term(const GlobalLayout& lay,
                              const StorageTrajectory& traj, int t,
                              int x_offset, double scale) {
  LinearTerm lt;
  lt.offset = x_offset;
  lt.seg = Vector::Zero(lay.dim());
  for (int j = 0; j < lay.m; ++j) {
    for (int tau = 1; tau < t; ++tau) {
      lt.seg(lay.exchange_index(j, tau)) =
          scale * traj.exch_coeff(t - 1, tau - 1);
    }
  }
  lt.seg(lay.storage_index(0)) = scale * traj.init_coeff(t - 1);
  return lt;
}

/// Shared x-only constraints: boxes on exchanges and storage copies, level
/// caps for t = 2..n_t and the terminal charge condition.
void add_x_side(const AgentProblem& ap, ConvexProgram& prog, int x_offset) {
  const GlobalLayout& lay = ap.layout;
  for (int j = 0; j < lay.m; ++j) {
    const double emax = ap.storage.exchange_max[j];
    for (int t = 2; t <= lay.n_t; ++t) {
      prog.lo(x_offset + lay.exchange_index(j, t)) = -emax;
      prog.hi(x_offset + lay.exchange_index(j, t)) = emax;
    }
    prog.lo(x_offset + lay.storage_index(j)) = 0.0;
    prog.hi(x_offset + lay.storage_index(j)) = ap.storage.capacity;
  }
  for (int t = 2; t <= lay.n_t + 1; ++t) {
    LinearTerm lo = storage_level_term(lay, ap.traj, t, x_offset, -1.0);
    prog.affine_ineq.push_back(lo);  // -E(t) <= 0
    LinearTerm hi = storage_level_term(lay, ap.traj, t, x_offset, 1.0);
    hi.b = -ap.storage.capacity;
    prog.affine_ineq.push_back(hi);  // E(t) - cap <= 0
  }
  LinearTerm term =
      storage_level_term(lay, ap.traj, lay.n_t + 1, x_offset, -1.0);
  term.seg(lay.storage_index(0)) += 1.0;
  prog.affine_ineq.push_back(term);  // E(1) - E(n_t+1) <= 0
}

/// Equality rows pinning every building's copy of E_storage(1) to copy 0.
void add_storage_copy_rows(const GlobalLayout& lay, int x_offset, Matrix& Aeq,
                           Vector& beq, int& row) {
  for (int j = 1; j < lay.m; ++j) {
    Aeq(row, x_offset + lay.storage_index(j)) = 1.0;
    Aeq(row, x_offset + lay.storage_index(0)) = -1.0;
    beq(row) = 0.0;
    ++row;
  }
}

/// Equality rows pinning every building's slot-1 exchange to zero.  Slot 1
/// has no modeled cooling, so a free slot-1 exchange would inject unpriced
/// energy into the storage.
void add_slot1_pin_rows(const GlobalLayout& lay, int x_offset, Matrix& Aeq,
                        Vector& beq, int& row) {
  for (int j = 0; j < lay.m; ++j) {
    Aeq(row, x_offset + lay.exchange_index(j, 1)) = 1.0;
    beq(row) = 0.0;
    ++row;
  }
}

/// One agent's u-side content: chiller channels (objective + cap), request
/// nonnegativity, comfort boxes and periodicity equalities.
void add_agent_side(const AgentProblem& ap, ConvexProgram& prog, int x_offset,
                    int u_offset, Matrix& Aeq, Vector& beq, int& row) {
  const EnergyRequestMap& em = ap.emap;
  const GlobalLayout& lay = ap.layout;
  for (int t = 2; t <= lay.n_t; ++t) {
    ConvexProgram::Channel ch;
    ch.a.offset = u_offset;
    ch.a.seg = em.Gtot.row(t - 2);
    ch.a.extra_index = x_offset + lay.exchange_index(ap.index, t);
    ch.a.extra_value = -1.0;
    ch.a.b = em.gtot(t - 2);
    ch.q = ap.fits[t - 2];
    ch.weight = ap.prices(t - 2);
    ch.cap = ap.chiller_cap;
    prog.channels.push_back(std::move(ch));

    LinearTerm nn;  // -E_B(t) <= 0
    nn.offset = u_offset;
    nn.seg = -em.Gtot.row(t - 2);
    nn.b = -em.gtot(t - 2);
    prog.affine_ineq.push_back(std::move(nn));
  }
  for (int b = 1; b <= lay.n_t; ++b) {
    for (int z = 0; z < em.n_zones; ++z) {
      prog.lo(u_offset + em.temp_index(b, z)) = ap.comfort.lo(b - 1, z);
      prog.hi(u_offset + em.temp_index(b, z)) = ap.comfort.hi(b - 1, z);
    }
  }
  for (int z = 0; z < em.n_zones; ++z) {
    Aeq(row, u_offset + em.temp_index(lay.n_t, z)) = 1.0;
    Aeq(row, u_offset + em.temp_index(1, z)) = -1.0;
    beq(row) = 0.0;
    ++row;
  }
  // wall periodicity: Send u + send = wall-state part of u
  for (int s = 0; s < em.n_state; ++s) {
    Aeq.row(row).segment(u_offset, em.n_u()) = em.Send.row(s);
    Aeq(row, u_offset + em.state_offset() + s) -= 1.0;
    beq(row) = -em.send(s);
    ++row;
  }
}

}  // namespace

double AgentProblem::net_cooling(const Vector& x, const Vector& u,
                                 int slot) const {
  return emap.total_energy(u, slot) - x(layout.exchange_index(index, slot));
}

double AgentProblem::evaluate_objective(const Vector& x,
                                        const Vector& u) const {
  if (!x.allFinite() || !u.allFinite()) {
    throw ModelError("non-finite decision vector");
  }
  double f = 0.0;
  for (int t = 2; t <= layout.n_t; ++t) {
    f += prices(t - 2) * chiller_electric(net_cooling(x, u, t), fits[t - 2]);
  }
  return f;
}

Vector AgentProblem::storage_levels(const Vector& x) const {
  Vector etot = Vector::Zero(layout.n_t);
  for (int j = 0; j < layout.m; ++j) {
    for (int t = 1; t <= layout.n_t; ++t) {
      etot(t - 1) += x(layout.exchange_index(j, t));
    }
  }
  return traj.levels(x(layout.storage_index(0)), etot);
}

ResidualSet AgentProblem::constraint_residuals(const Vector& x,
                                               const Vector& u) const {
  const int n_t = layout.n_t;
  const int n_z = emap.n_zones;
  ResidualSet rs;

  Vector cap(n_t - 1), nonneg(n_t - 1);
  for (int t = 2; t <= n_t; ++t) {
    const double eb = emap.total_energy(u, t);
    cap(t - 2) = chiller_electric(eb - x(layout.exchange_index(index, t)),
                                  fits[t - 2]) -
                 chiller_cap;
    nonneg(t - 2) = -eb;
  }
  rs.groups.push_back({"chiller_cap", cap});
  rs.groups.push_back({"cooling_nonneg", nonneg});

  Vector clo(n_t * n_z), chi(n_t * n_z);
  for (int b = 1; b <= n_t; ++b) {
    for (int z = 0; z < n_z; ++z) {
      const double T = u(emap.temp_index(b, z));
      clo((b - 1) * n_z + z) = comfort.lo(b - 1, z) - T;
      chi((b - 1) * n_z + z) = T - comfort.hi(b - 1, z);
    }
  }
  rs.groups.push_back({"comfort_lo", clo});
  rs.groups.push_back({"comfort_hi", chi});

  const Vector lev = storage_levels(x);
  Vector sc(2 * (n_t + 1));
  sc.head(n_t + 1) = -lev;
  sc.tail(n_t + 1) = lev.array() - storage.capacity;
  rs.groups.push_back({"storage_cap", sc});

  Vector eb(2 * layout.m * n_t);
  for (int j = 0; j < layout.m; ++j) {
    for (int t = 1; t <= n_t; ++t) {
      const double e = x(layout.exchange_index(j, t));
      const double emax = t == 1 ? 0.0 : storage.exchange_max[j];
      eb(j * n_t + t - 1) = -e - emax;
      eb(layout.m * n_t + j * n_t + t - 1) = e - emax;
    }
  }
  rs.groups.push_back({"exchange_box", eb});

  Vector pt(2 * n_z);
  for (int z = 0; z < n_z; ++z) {
    const double d = u(emap.temp_index(n_t, z)) - u(emap.temp_index(1, z));
    pt(z) = d;
    pt(n_z + z) = -d;
  }
  rs.groups.push_back({"periodic_T", pt});

  const Vector wall_end = emap.Send * u + emap.send;
  Vector pw(2 * emap.n_state);
  for (int s = 0; s < emap.n_state; ++s) {
    const double d = wall_end(s) - u(emap.state_offset() + s);
    pw(s) = d;
    pw(emap.n_state + s) = -d;
  }
  rs.groups.push_back({"periodic_wall", pw});

  Vector st(1);
  st(0) = x(layout.storage_index(0)) - lev(n_t);
  rs.groups.push_back({"storage_terminal", st});

  // equal storage-init copies across the stacked blocks
  Vector eq(2 * (layout.m - 1));
  for (int j = 1; j < layout.m; ++j) {
    const double d = x(layout.storage_index(j)) - x(layout.storage_index(0));
    eq(j - 1) = d;
    eq(layout.m - 1 + j - 1) = -d;
  }
  rs.groups.push_back({"storage_init_copies", eq});
  return rs;
}

ConvexProgram AgentProblem::proximal_program(const Vector& x_avg,
                                             double c) const {
  if (!(c > 0.0)) throw SolverError("proximal step size must be positive");
  if (x_avg.size() != n_x()) throw ModelError("averaged estimate dimension mismatch");
  const int nx = n_x();
  ConvexProgram prog = ConvexProgram::make(nx + n_u());

  prog.quad_diag.head(nx).array() += 1.0 / c;
  prog.lin.head(nx) = -x_avg / c;
  prog.constant += 0.5 * x_avg.squaredNorm() / c;
  prog.quad_diag.tail(n_u()).array() += 2.0 * tie_break;

  add_x_side(*this, prog, 0);
  const int n_eq =
      (layout.m - 1) + layout.m + emap.n_zones + emap.n_state;
  prog.Aeq = Matrix::Zero(n_eq, prog.n);
  prog.beq = Vector::Zero(n_eq);
  int row = 0;
  add_storage_copy_rows(layout, 0, prog.Aeq, prog.beq, row);
  add_slot1_pin_rows(layout, 0, prog.Aeq, prog.beq, row);
  add_agent_side(*this, prog, 0, nx, prog.Aeq, prog.beq, row);
  return prog;
}

ConvexProgram AgentProblem::inner_program(const Vector& x) const {
  if (x.size() != n_x()) throw ModelError("global vector dimension mismatch");
  ConvexProgram prog = ConvexProgram::make(n_u());
  const EnergyRequestMap& em = emap;
  for (int t = 2; t <= layout.n_t; ++t) {
    ConvexProgram::Channel ch;
    ch.a.offset = 0;
    ch.a.seg = em.Gtot.row(t - 2);
    ch.a.b = em.gtot(t - 2) - x(layout.exchange_index(index, t));
    ch.q = fits[t - 2];
    ch.weight = prices(t - 2);
    ch.cap = chiller_cap;
    prog.channels.push_back(std::move(ch));

    LinearTerm nn;
    nn.offset = 0;
    nn.seg = -em.Gtot.row(t - 2);
    nn.b = -em.gtot(t - 2);
    prog.affine_ineq.push_back(std::move(nn));
  }
  for (int b = 1; b <= layout.n_t; ++b) {
    for (int z = 0; z < em.n_zones; ++z) {
      prog.lo(em.temp_index(b, z)) = comfort.lo(b - 1, z);
      prog.hi(em.temp_index(b, z)) = comfort.hi(b - 1, z);
    }
  }
  const int n_eq = em.n_zones + em.n_state;
  prog.Aeq = Matrix::Zero(n_eq, prog.n);
  prog.beq = Vector::Zero(n_eq);
  int row = 0;
  for (int z = 0; z < em.n_zones; ++z) {
    prog.Aeq(row, em.temp_index(layout.n_t, z)) = 1.0;
    prog.Aeq(row, em.temp_index(1, z)) = -1.0;
    ++row;
  }
  for (int s = 0; s < em.n_state; ++s) {
    prog.Aeq.row(row).head(em.n_u()) = em.Send.row(s);
    prog.Aeq(row, em.state_offset() + s) -= 1.0;
    prog.beq(row) = -em.send(s);
    ++row;
  }
  return prog;
}

double AgentProblem::x_only_violation(const Vector& x) const {
  double v = 0.0;
  for (int j = 0; j < layout.m; ++j) {
    const double emax = storage.exchange_max[j];
    v = std::max(v, std::abs(x(layout.exchange_index(j, 1))));
    for (int t = 2; t <= layout.n_t; ++t) {
      v = std::max(v, std::abs(x(layout.exchange_index(j, t))) - emax);
    }
    v = std::max(v, -x(layout.storage_index(j)));
    v = std::max(v, x(layout.storage_index(j)) - storage.capacity);
    v = std::max(v, std::abs(x(layout.storage_index(j)) -
                             x(layout.storage_index(0))));
  }
  const Vector lev = storage_levels(x);
  v = std::max(v, (-lev).maxCoeff());
  v = std::max(v, (lev.array() - storage.capacity).maxCoeff());
  v = std::max(v, x(layout.storage_index(0)) - lev(layout.n_t));
  return v;
}

ConvexProgram centralized_program(const std::vector<AgentProblem>& agents) {
  if (agents.empty()) throw ModelError("no agents");
  const GlobalLayout& lay = agents[0].layout;
  const int nx = lay.dim();
  int n = nx;
  std::vector<int> u_offset(agents.size());
  for (size_t i = 0; i < agents.size(); ++i) {
    u_offset[i] = n;
    n += agents[i].n_u();
  }
  ConvexProgram prog = ConvexProgram::make(n);
  for (size_t i = 0; i < agents.size(); ++i) {
    prog.quad_diag.segment(u_offset[i], agents[i].n_u()).array() +=
        2.0 * agents[i].tie_break;
  }
  add_x_side(agents[0], prog, 0);

  int n_eq = (lay.m - 1) + lay.m;
  for (const auto& a : agents) n_eq += a.emap.n_zones + a.emap.n_state;
  prog.Aeq = Matrix::Zero(n_eq, n);
  prog.beq = Vector::Zero(n_eq);
  int row = 0;
  add_storage_copy_rows(lay, 0, prog.Aeq, prog.beq, row);
  add_slot1_pin_rows(lay, 0, prog.Aeq, prog.beq, row);
  for (size_t i = 0; i < agents.size(); ++i) {
    add_agent_side(agents[i], prog, 0, u_offset[i], prog.Aeq, prog.beq, row);
  }
  return prog;
}

}  // namespace dcool

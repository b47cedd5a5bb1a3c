// Copyright 2026 districtcool contributors
// SPDX-License-Identifier: Apache-2.0

#include "districtcool/solver.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace dcool {
namespace {

double quartic(const BiquadFit& q, double v) {
  const double v2 = v * v;
  return q.c2 * v2 * v2 + q.c1 * v2 + q.c0;
}
double quartic_d1(const BiquadFit& q, double v) {
  return 4.0 * q.c2 * v * v * v + 2.0 * q.c1 * v;
}
double quartic_d2(const BiquadFit& q, double v) {
  return 12.0 * q.c2 * v * v + 2.0 * q.c1;
}

}  // namespace

ConvexProgram ConvexProgram::make(int n) {
  ConvexProgram p;
  p.n = n;
  p.quad_diag = Vector::Zero(n);
  p.lin = Vector::Zero(n);
  p.lo = Vector::Constant(n, -kInf);
  p.hi = Vector::Constant(n, kInf);
  p.Aeq = Matrix(0, n);
  p.beq = Vector(0);
  return p;
}

double ConvexProgram::objective(const Vector& z) const {
  double f = constant + lin.dot(z) + 0.5 * quad_diag.dot(z.cwiseProduct(z));
  for (const auto& ch : channels) {
    if (ch.weight != 0.0) f += ch.weight * quartic(ch.q, ch.a.value(z));
  }
  return f;
}

Vector ConvexProgram::gradient(const Vector& z) const {
  Vector g = lin + quad_diag.cwiseProduct(z);
  for (const auto& ch : channels) {
    if (ch.weight != 0.0) {
      ch.a.add_scaled(g, ch.weight * quartic_d1(ch.q, ch.a.value(z)));
    }
  }
  return g;
}

double ConvexProgram::max_violation(const Vector& z) const {
  double v = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::isfinite(lo(i))) v = std::max(v, lo(i) - z(i));
    if (std::isfinite(hi(i))) v = std::max(v, z(i) - hi(i));
  }
  for (const auto& t : affine_ineq) v = std::max(v, t.value(z));
  for (const auto& ch : channels) {
    if (std::isfinite(ch.cap)) {
      v = std::max(v, quartic(ch.q, ch.a.value(z)) - ch.cap);
    }
  }
  if (Aeq.rows() > 0) {
    v = std::max(v, (Aeq * z - beq).cwiseAbs().maxCoeff());
  }
  return v;
}

namespace {

// Rows sharing a contiguous support segment are stacked so the Newton matrix
// can be accumulated blockwise with one symmetric rank update per group.
struct RowGroup {
  int offset = 0;
  int len = 0;
  std::vector<int> rows;  // indices into the unified curvature-row list
  Matrix M;               // rows x len, segment coefficients
};

struct CurvRow {
  const LinearTerm* term = nullptr;
  int channel = -1;  // >= 0 for channel rows, -1 for affine rows
  int affine = -1;
};

class Workspace {
 public:
  Workspace(const ConvexProgram& p) : prog(p) {
    for (int i = 0; i < p.n; ++i) {
      if (std::isfinite(p.lo(i))) box_lo.push_back(i);
      if (std::isfinite(p.hi(i))) box_hi.push_back(i);
    }
    for (int c = 0; c < static_cast<int>(p.channels.size()); ++c) {
      if (std::isfinite(p.channels[c].cap)) caps.push_back(c);
      rows.push_back({&p.channels[c].a, c, -1});
    }
    for (int j = 0; j < static_cast<int>(p.affine_ineq.size()); ++j) {
      rows.push_back({&p.affine_ineq[j], -1, j});
    }
    n_ineq = static_cast<int>(box_lo.size() + box_hi.size() +
                              p.affine_ineq.size() + caps.size());
    build_groups();
  }

  const ConvexProgram& prog;
  std::vector<int> box_lo, box_hi, caps;
  std::vector<CurvRow> rows;
  std::vector<RowGroup> groups;
  int n_ineq = 0;

  // Stacked inequality order: box_lo, box_hi, affine, caps.
  int idx_hi0() const { return static_cast<int>(box_lo.size()); }
  int idx_aff0() const { return idx_hi0() + static_cast<int>(box_hi.size()); }
  int idx_cap0() const {
    return idx_aff0() + static_cast<int>(prog.affine_ineq.size());
  }

  Vector constraint_values(const Vector& z, const Vector& chan_v) const {
    Vector g(n_ineq);
    int k = 0;
    for (int i : box_lo) g(k++) = prog.lo(i) - z(i);
    for (int i : box_hi) g(k++) = z(i) - prog.hi(i);
    for (const auto& t : prog.affine_ineq) g(k++) = t.value(z);
    for (int c : caps) {
      g(k++) = quartic(prog.channels[c].q, chan_v(c)) - prog.channels[c].cap;
    }
    return g;
  }

  // out += sum_j w(j) * grad g_j, with w indexed in stacked order.
  void add_weighted_gradients(const Vector& z, const Vector& chan_v,
                              const Vector& w, Vector& out) const {
    int k = 0;
    for (int i : box_lo) out(i) -= w(k++);
    for (int i : box_hi) out(i) += w(k++);
    for (const auto& t : prog.affine_ineq) t.add_scaled(out, w(k++));
    for (int c : caps) {
      prog.channels[c].a.add_scaled(
          out, w(k++) * quartic_d1(prog.channels[c].q, chan_v(c)));
    }
  }

 private:
  void build_groups() {
    std::map<std::pair<int, int>, int> index;
    for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
      const LinearTerm& t = *rows[r].term;
      auto key = std::make_pair(t.offset, static_cast<int>(t.seg.size()));
      auto it = index.find(key);
      if (it == index.end()) {
        it = index.emplace(key, static_cast<int>(groups.size())).first;
        groups.push_back({key.first, key.second, {}, Matrix()});
      }
      groups[it->second].rows.push_back(r);
    }
    for (auto& g : groups) {
      g.M = Matrix(static_cast<int>(g.rows.size()), g.len);
      for (int i = 0; i < static_cast<int>(g.rows.size()); ++i) {
        g.M.row(i) = rows[g.rows[i]].term->seg;
      }
    }
  }
};

double step_to_boundary(const Vector& v, const Vector& dv, double tau) {
  double a = 1.0;
  for (int i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) a = std::min(a, -tau * v(i) / dv(i));
  }
  return a;
}

}  // namespace

SolverReport IpmSolver::solve(const ConvexProgram& prog, Vector& z,
                              WarmStart* warm) const {
  Workspace ws(prog);
  const int n = prog.n;
  const int ni = ws.n_ineq;
  const int ne = static_cast<int>(prog.Aeq.rows());
  SolverReport rep;

  if (warm && warm->valid && warm->z.size() == n &&
      warm->lambda.size() == ni) {
    z = warm->z;
  }
  // keep the start inside the box so slack initialization is benign
  for (int i = 0; i < n; ++i) z(i) = std::min(std::max(z(i), prog.lo(i)), prog.hi(i));

  Vector chan_v(prog.channels.size());
  const auto eval_channels = [&](const Vector& zz) {
    for (int c = 0; c < static_cast<int>(prog.channels.size()); ++c) {
      chan_v(c) = prog.channels[c].a.value(zz);
    }
  };
  eval_channels(z);

  Vector g = ws.constraint_values(z, chan_v);
  Vector s(ni), lam(ni), nu = Vector::Zero(ne);
  if (warm && warm->valid && warm->lambda.size() == ni) {
    for (int j = 0; j < ni; ++j) {
      s(j) = std::max(-g(j), 1e-4);
      lam(j) = std::max(warm->lambda(j), 1e-4);
    }
  } else {
    for (int j = 0; j < ni; ++j) {
      s(j) = std::max(-g(j), 1.0);
      lam(j) = 1.0;
    }
  }

  Matrix H(n, n);
  Vector coeff(ws.rows.size());
  Matrix Mw;
  Eigen::LLT<Matrix> llt;
  Matrix AHiAt(ne, ne), AHi(ne, n);
  Vector w_grad(ni), rhs_extra(ni);

  const double tau = opts_.fraction_to_boundary;
  for (int iter = 0; iter < opts_.max_iter; ++iter) {
    eval_channels(z);
    g = ws.constraint_values(z, chan_v);

    // residuals
    Vector r_dual = prog.gradient(z);
    ws.add_weighted_gradients(z, chan_v, lam, r_dual);
    if (ne > 0) r_dual += prog.Aeq.transpose() * nu;
    Vector r_prim = g + s;
    Vector r_eq = ne > 0 ? Vector(prog.Aeq * z - prog.beq) : Vector(0);
    const double mu = ni > 0 ? s.dot(lam) / ni : 0.0;

    double viol = 0.0;
    for (int j = 0; j < ni; ++j) viol = std::max(viol, g(j));
    if (ne > 0) viol = std::max(viol, r_eq.cwiseAbs().maxCoeff());
    const double comp = ni > 0 ? (s.cwiseProduct(lam)).maxCoeff() : 0.0;
    const double stat = r_dual.cwiseAbs().maxCoeff();
    rep.kkt = std::max({stat, viol, comp,
                        ni > 0 ? r_prim.cwiseAbs().maxCoeff() : 0.0});
    rep.primal_violation = viol;
    rep.iterations = iter;
    if (rep.kkt <= opts_.kkt_tol) {
      rep.status = SolveStatus::kOptimal;
      if (warm) {
        warm->z = z;
        warm->lambda = lam;
        warm->valid = true;
      }
      return rep;
    }
    if (ni > 0 && iter >= 10 &&
        (lam.cwiseAbs().maxCoeff() > 1e10 ||
         (mu < 1e-2 * opts_.kkt_tol && viol > 1e4 * opts_.kkt_tol))) {
      rep.status = SolveStatus::kInfeasible;
      return rep;
    }

    // Newton matrix: objective curvature plus eliminated barrier terms
    for (int r = 0; r < static_cast<int>(ws.rows.size()); ++r) {
      const CurvRow& cr = ws.rows[r];
      double c = 0.0;
      if (cr.channel >= 0) {
        const auto& ch = prog.channels[cr.channel];
        const double v = chan_v(cr.channel);
        double lam_cap = 0.0, bar = 0.0;
        if (std::isfinite(ch.cap)) {
          const auto it = std::lower_bound(ws.caps.begin(), ws.caps.end(),
                                           cr.channel);
          const int k = ws.idx_cap0() + static_cast<int>(it - ws.caps.begin());
          lam_cap = lam(k);
          const double d1 = quartic_d1(ch.q, v);
          bar = lam_cap / s(k) * d1 * d1;
        }
        c = (ch.weight + lam_cap) * quartic_d2(ch.q, v) + bar;
      } else {
        const int k = ws.idx_aff0() + cr.affine;
        c = lam(k) / s(k);
      }
      coeff(r) = c;
    }

    double reg = 1e-12;
    for (int attempt = 0; attempt < 4; ++attempt) {
      H.setZero();
      for (int i = 0; i < n; ++i) H(i, i) = prog.quad_diag(i) + reg;
      {
        int k = 0;
        for (int i : ws.box_lo) H(i, i) += lam(k) / s(k), ++k;
        for (int i : ws.box_hi) H(i, i) += lam(k) / s(k), ++k;
      }
      for (const auto& grp : ws.groups) {
        Mw.resize(static_cast<int>(grp.rows.size()), grp.len);
        for (int i = 0; i < static_cast<int>(grp.rows.size()); ++i) {
          Mw.row(i) = std::sqrt(std::max(coeff(grp.rows[i]), 0.0)) * grp.M.row(i);
        }
        H.block(grp.offset, grp.offset, grp.len, grp.len)
            .selfadjointView<Eigen::Lower>()
            .rankUpdate(Mw.transpose(), 1.0);
        for (int i = 0; i < static_cast<int>(grp.rows.size()); ++i) {
          const LinearTerm& t = *ws.rows[grp.rows[i]].term;
          if (t.extra_index < 0) continue;
          const double c = std::max(coeff(grp.rows[i]), 0.0);
          const int e = t.extra_index;
          H(e, e) += c * t.extra_value * t.extra_value;
          const double cv = c * t.extra_value;
          if (e < grp.offset) {
            for (int kk = 0; kk < grp.len; ++kk) {
              H(grp.offset + kk, e) += cv * t.seg(kk);
            }
          } else {
            for (int kk = 0; kk < grp.len; ++kk) {
              H(e, grp.offset + kk) += cv * t.seg(kk);
            }
          }
        }
      }
      llt.compute(H.selfadjointView<Eigen::Lower>());
      if (llt.info() == Eigen::Success) break;
      reg *= 1e4;
      if (attempt == 3) {
        rep.status = SolveStatus::kNumerical;
        return rep;
      }
    }

    if (ne > 0) {
      AHi = llt.solve(prog.Aeq.transpose()).transpose();
      AHiAt = AHi * prog.Aeq.transpose();
    }

    const auto newton = [&](const Vector& r_cent, Vector& dz, Vector& ds,
                            Vector& dlam, Vector& dnu) {
      // d = -r_dual - sum_j grad g_j (lam_j r_prim_j - r_cent_j) / s_j
      for (int j = 0; j < ni; ++j) {
        w_grad(j) = (lam(j) * r_prim(j) - r_cent(j)) / s(j);
      }
      Vector d = -r_dual;
      Vector tmp = Vector::Zero(n);
      ws.add_weighted_gradients(z, chan_v, w_grad, tmp);
      d -= tmp;
      if (ne > 0) {
        dnu = Eigen::LDLT<Matrix>(AHiAt.selfadjointView<Eigen::Lower>())
                  .solve(AHi * d + r_eq);
        dz = llt.solve(d - prog.Aeq.transpose() * dnu);
      } else {
        dnu = Vector(0);
        dz = llt.solve(d);
      }
      // ds = -r_prim - grad g' dz;  dlam = (lam (r_prim + grad g' dz) - r_cent)/s
      int k = 0;
      ds.resize(ni);
      dlam.resize(ni);
      const auto finish = [&](int j, double gdz) {
        ds(j) = -r_prim(j) - gdz;
        dlam(j) = (lam(j) * (r_prim(j) + gdz) - r_cent(j)) / s(j);
      };
      for (int i : ws.box_lo) finish(k++, -dz(i));
      for (int i : ws.box_hi) finish(k++, dz(i));
      for (const auto& t : prog.affine_ineq) finish(k++, t.value(dz) - t.b);
      for (int c : ws.caps) {
        const auto& ch = prog.channels[c];
        finish(k++, quartic_d1(ch.q, chan_v(c)) * (ch.a.value(dz) - ch.a.b));
      }
    };

    Vector dz, ds, dlam, dnu;
    // predictor
    Vector r_cent = s.cwiseProduct(lam);
    newton(r_cent, dz, ds, dlam, dnu);
    double sigma = 0.0;
    if (ni > 0) {
      const double ap = step_to_boundary(s, ds, 1.0);
      const double ad = step_to_boundary(lam, dlam, 1.0);
      const double mu_aff =
          (s + ap * ds).dot(lam + ad * dlam) / ni;
      sigma = std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3.0);
      sigma = std::min(sigma, 0.99);
      // corrector
      r_cent = s.cwiseProduct(lam) + ds.cwiseProduct(dlam) -
               Vector::Constant(ni, sigma * mu);
      newton(r_cent, dz, ds, dlam, dnu);
    }

    const double ap = ni > 0 ? step_to_boundary(s, ds, tau) : 1.0;
    const double ad = ni > 0 ? step_to_boundary(lam, dlam, tau) : 1.0;
    z += ap * dz;
    s += ap * ds;
    lam += ad * dlam;
    if (ne > 0) nu += ad * dnu;
    if (!z.allFinite() || !s.allFinite() || !lam.allFinite()) {
      rep.status = SolveStatus::kNumerical;
      return rep;
    }
  }
  rep.status = SolveStatus::kMaxIter;
  rep.iterations = opts_.max_iter;
  return rep;
}

GradientCheckReport check_gradients(const ConvexProgram& prog,
                                    const Vector& interior_point,
                                    int n_points, unsigned seed) {
  GradientCheckReport rep;
  std::mt19937 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int n = prog.n;

  const auto record = [&](double fd, double an, const std::string& what) {
    const double err = std::abs(fd - an) / std::max(1.0, std::abs(an));
    if (err > rep.max_rel_error) {
      rep.max_rel_error = err;
      rep.worst = what;
    }
  };

  for (int p = 0; p < n_points; ++p) {
    Vector z = interior_point;
    for (int i = 0; i < n; ++i) z(i) += 1e-2 * nd(rng);
    Vector dir(n);
    for (int i = 0; i < n; ++i) dir(i) = nd(rng);
    dir /= dir.norm();
    const double h = 1e-6 * std::max(1.0, z.cwiseAbs().maxCoeff());
    const Vector zp = z + h * dir, zm = z - h * dir;

    record((prog.objective(zp) - prog.objective(zm)) / (2 * h),
           prog.gradient(z).dot(dir), "objective");
    for (size_t j = 0; j < prog.affine_ineq.size(); ++j) {
      const auto& t = prog.affine_ineq[j];
      record((t.value(zp) - t.value(zm)) / (2 * h), t.value(dir) - t.b,
             "affine row " + std::to_string(j));
    }
    for (size_t c = 0; c < prog.channels.size(); ++c) {
      const auto& ch = prog.channels[c];
      const double fd =
          (quartic(ch.q, ch.a.value(zp)) - quartic(ch.q, ch.a.value(zm))) /
          (2 * h);
      const double an =
          quartic_d1(ch.q, ch.a.value(z)) * (ch.a.value(dir) - ch.a.b);
      record(fd, an, "channel " + std::to_string(c));
    }
  }
  return rep;
}

}  // namespace dcool

#include "qos/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

#include "qos/linalg.hpp"

namespace qos::sdp {

const char* to_string(Status s) {
  switch (s) {
    case Status::Feasible: return "Feasible";
    case Status::Infeasible: return "Infeasible";
    case Status::Indeterminate: return "Indeterminate";
    case Status::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

using Blocks = std::vector<RMat>;

double inner(const Blocks& a, const Blocks& b) {
  double s = 0.0;
  for (size_t k = 0; k < a.size(); ++k)
    if (a[k].size() && b[k].size()) s += (a[k].array() * b[k].array()).sum();
  return s;
}

double fro(const Blocks& a) { return std::sqrt(inner(a, a)); }

// tr(A_i Z) for possibly non-symmetric Z.
RVec apply_a(const RealSdp& p, const Blocks& z) {
  RVec out(p.b.size());
  for (Eigen::Index i = 0; i < p.b.size(); ++i) {
    double s = 0.0;
    for (size_t k = 0; k < z.size(); ++k)
      if (p.a[i][k].size()) s += (p.a[i][k].array() * z[k].transpose().array()).sum();
    out(i) = s;
  }
  return out;
}

Blocks apply_at(const RealSdp& p, const RVec& y) {
  Blocks out;
  for (const auto& c : p.c) out.push_back(RMat::Zero(c.rows(), c.cols()));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    for (size_t k = 0; k < out.size(); ++k)
      if (p.a[i][k].size() && y(i) != 0.0) out[k].noalias() += y(i) * p.a[i][k];
  return out;
}

double max_step(const Blocks& x, const Blocks& dx) {
  double step = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < x.size(); ++k) {
    if (x[k].rows() == 0) continue;
    Eigen::LLT<RMat> llt(x[k]);
    if (llt.info() != Eigen::Success) return 0.0;
    RMat l = llt.matrixL();
    RMat t = l.triangularView<Eigen::Lower>().solve(dx[k]);
    t = l.triangularView<Eigen::Lower>().solve(t.transpose()).transpose();
    t = 0.5 * (t + t.transpose());
    Eigen::SelfAdjointEigenSolver<RMat> es(t, Eigen::EigenvaluesOnly);
    double lmin = es.eigenvalues()(0);
    if (lmin < 0) step = std::min(step, -1.0 / lmin);
  }
  return step;
}

Blocks sym(const Blocks& z) {
  Blocks out(z.size());
  for (size_t k = 0; k < z.size(); ++k) out[k] = 0.5 * (z[k] + z[k].transpose());
  return out;
}

}  // namespace

IpmResult solve_real(const RealSdp& p, const IpmOptions& options) {
  const size_t nb = p.c.size();
  const Eigen::Index m = p.b.size();
  Eigen::Index total = 0;
  for (const auto& c : p.c) total += c.rows();

  IpmResult res;
  double norm_c = fro(p.c);
  double norm_b = p.b.norm();
  double max_a = 0.0, xi = 1.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    double na = fro(p.a[i]);
    max_a = std::max(max_a, na);
    xi = std::max(xi, (1.0 + std::abs(p.b(i))) / (1.0 + na));
  }
  xi *= 10.0;
  double eta = 10.0 * (1.0 + std::max(max_a, norm_c)) / std::sqrt(static_cast<double>(std::max<Eigen::Index>(total, 1)));
  eta = std::max(eta, 1.0);

  Blocks x(nb), s(nb);
  for (size_t k = 0; k < nb; ++k) {
    x[k] = xi * RMat::Identity(p.c[k].rows(), p.c[k].cols());
    s[k] = eta * RMat::Identity(p.c[k].rows(), p.c[k].cols());
  }
  RVec y = RVec::Zero(m);

  auto record = [&](IpmStatus st, int it, double pinf, double dinf, double gap) {
    res.status = st;
    res.x = x;
    res.s = s;
    res.y = y;
    res.primal_objective = inner(p.c, x);
    res.dual_objective = p.b.dot(y);
    res.primal_infeasibility = pinf;
    res.dual_infeasibility = dinf;
    res.gap = gap;
    res.iterations = it;
  };

  // Gram matrix of the constraints, for projecting steps back onto A(X) = b.
  RMat agram(m, m);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index j = i; j < m; ++j) agram(i, j) = agram(j, i) = inner(p.a[i], p.a[j]);
  if (m > 0) agram.diagonal().array() += 1e-13 * std::max(1.0, agram.diagonal().maxCoeff());
  Eigen::LDLT<RMat> a_gram(agram);

  double best_merit = std::numeric_limits<double>::infinity();
  int stall = 0;
  for (int it = 0; it <= options.max_iters; ++it) {
    RVec rp = p.b - apply_a(p, x);
    Blocks aty = apply_at(p, y);
    Blocks rd(nb);
    for (size_t k = 0; k < nb; ++k) rd[k] = p.c[k] - s[k] - aty[k];
    double pobj = inner(p.c, x);
    double dobj = p.b.dot(y);
    double pinf = rp.norm() / (1.0 + norm_b);
    double dinf = fro(rd) / (1.0 + norm_c);
    double xs = inner(x, s);
    double gap = std::max(std::abs(pobj - dobj), std::abs(xs)) / (1.0 + std::abs(pobj) + std::abs(dobj));
    double merit = std::max({pinf, dinf, gap});
    if (std::getenv("QOS_IPM_TRACE"))
      std::fprintf(stderr, "it %d pinf %.3e dinf %.3e gap %.3e pobj %.6e dobj %.6e\n", it, pinf, dinf, gap, pobj, dobj);
    if (merit <= options.tol) {
      record(IpmStatus::Optimal, it, pinf, dinf, gap);
      return res;
    }
    if (merit < 0.9 * best_merit) {
      best_merit = merit;
      stall = 0;
    } else if (++stall > 12) {
      record(merit <= 1e-7 ? IpmStatus::Optimal : IpmStatus::Inaccurate, it, pinf, dinf, gap);
      return res;
    }
    double xnorm = fro(x), ynorm = y.norm();
    if (!std::isfinite(xnorm + ynorm + merit) || xnorm > 1e14 || ynorm > 1e14) {
      record(IpmStatus::Diverged, it, pinf, dinf, gap);
      return res;
    }
    if (it == options.max_iters) {
      record(IpmStatus::IterationLimit, it, pinf, dinf, gap);
      return res;
    }

    Blocks sinv(nb);
    bool ok = true;
    for (size_t k = 0; k < nb; ++k) {
      Eigen::LLT<RMat> llt(s[k]);
      if (llt.info() != Eigen::Success) ok = false;
      sinv[k] = llt.solve(RMat::Identity(s[k].rows(), s[k].cols()));
      sinv[k] = 0.5 * (sinv[k] + sinv[k].transpose());
    }
    if (!ok) {
      record(IpmStatus::Inaccurate, it, pinf, dinf, gap);
      return res;
    }

    // Schur complement M_ij = tr(A_i X A_j S^{-1})
    RMat schur = RMat::Zero(m, m);
    std::vector<Blocks> g(m, Blocks(nb));
    for (Eigen::Index j = 0; j < m; ++j)
      for (size_t k = 0; k < nb; ++k)
        if (p.a[j][k].size()) g[j][k] = x[k] * p.a[j][k] * sinv[k];
    for (Eigen::Index i = 0; i < m; ++i)
      for (Eigen::Index j = i; j < m; ++j) {
        double v = 0.0;
        for (size_t k = 0; k < nb; ++k)
          if (p.a[i][k].size() && g[j][k].size()) v += (p.a[i][k].array() * g[j][k].transpose().array()).sum();
        schur(i, j) = schur(j, i) = v;
      }
    double ridge = 1e-14 * std::max(1.0, schur.diagonal().cwiseAbs().maxCoeff());
    schur.diagonal().array() += ridge;
    Eigen::LDLT<RMat> ldlt(schur);

    Blocks x_rd_sinv(nb);
    for (size_t k = 0; k < nb; ++k) x_rd_sinv[k] = x[k] * rd[k] * sinv[k];
    RVec a_xrds = apply_a(p, x_rd_sinv);

    auto direction = [&](const Blocks& rc, Blocks& dx, RVec& dy, Blocks& ds) {
      RVec rhs = rp - apply_a(p, rc) + a_xrds;
      dy = ldlt.solve(rhs);
      for (int refine = 0; refine < 2; ++refine) dy += ldlt.solve(rhs - schur * dy);
      Blocks atdy = apply_at(p, dy);
      ds.resize(nb);
      dx.resize(nb);
      for (size_t k = 0; k < nb; ++k) {
        ds[k] = rd[k] - atdy[k];
        RMat t = x[k] * ds[k] * sinv[k];
        dx[k] = rc[k] - 0.5 * (t + t.transpose());
      }
      // Restore A(dx) = rp lost to cancellation in the Schur right-hand side.
      RVec drift = rp - apply_a(p, dx);
      if (m > 0 && drift.norm() > 0.0) {
        Blocks fix = apply_at(p, a_gram.solve(drift));
        for (size_t k = 0; k < nb; ++k) dx[k] += fix[k];
      }
    };

    const double mu = xs / static_cast<double>(total);
    Blocks rc(nb), dxp, dsp, dxc, dsc;
    RVec dyp, dyc;
    for (size_t k = 0; k < nb; ++k) rc[k] = -x[k];
    direction(rc, dxp, dyp, dsp);
    double ap = std::min(1.0, max_step(x, dxp));
    double ad = std::min(1.0, max_step(s, dsp));
    Blocks xa(nb), sa(nb);
    for (size_t k = 0; k < nb; ++k) {
      xa[k] = x[k] + ap * dxp[k];
      sa[k] = s[k] + ad * dsp[k];
    }
    double mu_aff = inner(xa, sa) / static_cast<double>(total);
    double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3.0), 0.0, 1.0);

    for (size_t k = 0; k < nb; ++k) {
      RMat corr = dxp[k] * dsp[k] * sinv[k];
      rc[k] = sigma * mu * sinv[k] - x[k] - 0.5 * (corr + corr.transpose());
    }
    direction(rc, dxc, dyc, dsc);
    const double gamma = 0.98;
    ap = std::min(1.0, gamma * max_step(x, dxc));
    ad = std::min(1.0, gamma * max_step(s, dsc));
    if (ap <= 0.0 && ad <= 0.0) {
      record(merit <= 1e-7 ? IpmStatus::Optimal : IpmStatus::Inaccurate, it, pinf, dinf, gap);
      return res;
    }
    for (size_t k = 0; k < nb; ++k) {
      x[k] += ap * dxc[k];
      x[k] = 0.5 * (x[k] + x[k].transpose());
      s[k] += ad * dsc[k];
      s[k] = 0.5 * (s[k] + s[k].transpose());
    }
    y += ad * dyc;
  }
  return res;
}

// ---------------------------------------------------------------------------

LmiProblem::LmiProblem(Eigen::Index vars) : num_vars(vars), coeff(vars), objective(RVec::Zero(vars)) {
  eq_matrix = RMat::Zero(0, vars);
  eq_rhs = RVec::Zero(0);
}

int LmiProblem::add_block(const CMat& f0) {
  constant.push_back(f0);
  for (auto& c : coeff) c.emplace_back();
  return static_cast<int>(constant.size()) - 1;
}

void LmiProblem::set(Eigen::Index var, int block, const CMat& f) { coeff[var][block] = f; }

void LmiProblem::add_equality(const RVec& row, double rhs) {
  eq_matrix.conservativeResize(eq_matrix.rows() + 1, num_vars);
  eq_matrix.row(eq_matrix.rows() - 1) = row.transpose();
  eq_rhs.conservativeResize(eq_rhs.size() + 1);
  eq_rhs(eq_rhs.size() - 1) = rhs;
}

namespace {

// Real vectorization of the coefficient of one variable across all blocks.
RVec vec_var(const std::vector<std::vector<CMat>>& coeff, Eigen::Index var, const std::vector<Eigen::Index>& offsets,
             Eigen::Index total) {
  RVec v = RVec::Zero(total);
  for (size_t b = 0; b < offsets.size(); ++b) {
    const CMat& f = coeff[var][b];
    if (f.size() == 0) continue;
    const Eigen::Index n = f.rows();
    Eigen::Index o = offsets[b];
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) {
        v(o++) = f(i, j).real();
        v(o++) = f(i, j).imag();
      }
  }
  return v;
}

CMat zero_like(const CMat& c) { return CMat::Zero(c.rows(), c.cols()); }

}  // namespace

LmiResult solve_lmi(const LmiProblem& p, const Tolerances& tol) {
  const size_t nb = p.constant.size();
  const Eigen::Index nv = p.num_vars;

  // Eliminate equality constraints: y = y0 + Z w.
  RVec y0 = RVec::Zero(nv);
  RMat z = RMat::Identity(nv, nv);
  if (p.eq_matrix.rows() > 0) {
    auto cod = p.eq_matrix.completeOrthogonalDecomposition();
    y0 = cod.solve(p.eq_rhs);
    if ((p.eq_matrix * y0 - p.eq_rhs).norm() > 1e-9 * (1.0 + p.eq_rhs.norm())) {
      LmiResult r;
      r.status = Status::Infeasible;
      return r;
    }
    z = null_space(p.eq_matrix);
  }

  std::vector<CMat> f0(nb);
  for (size_t b = 0; b < nb; ++b) {
    f0[b] = p.constant[b];
    for (Eigen::Index i = 0; i < nv; ++i)
      if (y0(i) != 0.0 && p.coeff[i][b].size()) f0[b] += y0(i) * p.coeff[i][b];
  }

  // Normalize each block; positive scaling leaves the feasible set unchanged.
  std::vector<double> block_scale(nb, 1.0);
  std::vector<std::vector<CMat>> coeff = p.coeff;
  for (size_t b = 0; b < nb; ++b) {
    double big = f0[b].norm();
    for (Eigen::Index i = 0; i < nv; ++i)
      if (coeff[i][b].size()) big = std::max(big, coeff[i][b].norm());
    if (big > 0.0) block_scale[b] = 1.0 / big;
    f0[b] *= block_scale[b];
    for (Eigen::Index i = 0; i < nv; ++i)
      if (coeff[i][b].size()) coeff[i][b] *= block_scale[b];
  }

  // Remove directions that do not move any block.
  std::vector<Eigen::Index> offsets(nb);
  Eigen::Index total = 0;
  for (size_t b = 0; b < nb; ++b) {
    offsets[b] = total;
    total += 2 * p.constant[b].size();
  }
  RMat k(total, nv);
  for (Eigen::Index i = 0; i < nv; ++i) k.col(i) = vec_var(coeff, i, offsets, total);
  RMat kz = k * z;
  RVec cz = z.transpose() * p.objective;
  RMat range;
  if (kz.cols() > 0) {
    Eigen::JacobiSVD<RMat> svd(kz, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Eigen::Index rank = 0;
    if (sv.size() > 0 && sv(0) > 0)
      while (rank < sv.size() && sv(rank) > 1e-12 * sv(0)) ++rank;
    RMat v = svd.matrixV();
    RMat null_dirs = v.rightCols(kz.cols() - rank);
    if (null_dirs.cols() > 0 && (null_dirs.transpose() * cz).norm() > 1e-12 * (1.0 + cz.norm())) {
      LmiResult r;
      r.status = Status::Unbounded;
      return r;
    }
    range = z * v.leftCols(rank);
  } else {
    range = RMat::Zero(nv, 0);
  }
  const Eigen::Index nw = range.cols();

  auto coeff_of = [&](Eigen::Index w, size_t b) {
    CMat f = zero_like(p.constant[b]);
    for (Eigen::Index i = 0; i < nv; ++i)
      if (range(i, w) != 0.0 && coeff[i][b].size()) f += range(i, w) * coeff[i][b];
    return f;
  };

  LmiResult out;
  RVec wsol = RVec::Zero(nw);
  std::vector<CMat> mult(nb);
  if (nw > 0) {
    RealSdp rs;
    rs.b = range.transpose() * p.objective;
    for (size_t b = 0; b < nb; ++b) rs.c.push_back(realify(hermitian_part(f0[b])));
    rs.a.resize(nw);
    for (Eigen::Index w = 0; w < nw; ++w)
      for (size_t b = 0; b < nb; ++b) {
        CMat f = coeff_of(w, b);
        if (f.norm() == 0.0)
          rs.a[w].emplace_back();
        else
          rs.a[w].push_back(-realify(hermitian_part(f)));
      }
    IpmOptions opt;
    opt.max_iters = tol.max_iters;
    IpmResult ipm = solve_real(rs, opt);
    wsol = ipm.y;
    for (size_t b = 0; b < nb; ++b)
      mult[b] = ipm.x.empty() ? zero_like(f0[b]) : CMat(block_scale[b] * unrealify(ipm.x[b]));
    out.iterations = ipm.iterations;
    out.gap = ipm.gap;
    switch (ipm.status) {
      case IpmStatus::Optimal: out.status = Status::Feasible; break;
      case IpmStatus::Inaccurate: out.status = Status::Feasible; break;
      case IpmStatus::IterationLimit: out.status = Status::Indeterminate; break;
      case IpmStatus::Diverged: out.status = Status::Indeterminate; break;
    }
    if (ipm.status == IpmStatus::Inaccurate && ipm.primal_infeasibility > 1e-5) out.status = Status::Indeterminate;
  } else {
    out.status = Status::Feasible;
    for (size_t b = 0; b < nb; ++b) mult[b] = zero_like(f0[b]);
  }

  out.y = y0 + range * wsol;
  out.value = p.objective.dot(out.y);
  out.multipliers = std::move(mult);
  out.slack.resize(nb);
  out.min_eig = std::numeric_limits<double>::infinity();
  for (size_t b = 0; b < nb; ++b) {
    CMat sl = p.constant[b];
    for (Eigen::Index i = 0; i < nv; ++i)
      if (out.y(i) != 0.0 && p.coeff[i][b].size()) sl += out.y(i) * p.coeff[i][b];
    out.slack[b] = hermitian_part(sl);
    out.min_eig = std::min(out.min_eig, min_eigenvalue(out.slack[b]));
  }
  if (nb == 0) out.min_eig = 0.0;
  if (out.status == Status::Feasible && out.min_eig < -std::max(tol.eps_psd, 1e-6)) out.status = Status::Indeterminate;
  if (nw == 0 && out.min_eig < -tol.eps_psd) out.status = Status::Infeasible;
  return out;
}

// ---------------------------------------------------------------------------

namespace {

RealSdp to_real(const FeasibilityProblem& p, bool trace_objective) {
  RealSdp rs;
  const size_t nvar = p.variable_sizes.size();
  for (size_t v = 0; v < nvar; ++v) {
    const Eigen::Index n = p.variable_sizes[v];
    CMat c = CMat::Zero(n, n);
    if (!p.objective.empty() && p.objective[v].size()) c = hermitian_part(p.objective[v]);
    else if (trace_objective) c = CMat::Identity(n, n);
    rs.c.push_back(realify(c));
  }
  rs.b.resize(static_cast<Eigen::Index>(p.constraints.size()));
  rs.a.resize(p.constraints.size());
  for (size_t i = 0; i < p.constraints.size(); ++i) {
    rs.b(static_cast<Eigen::Index>(i)) = p.constraints[i].target;
    for (size_t v = 0; v < nvar; ++v) {
      const auto& co = p.constraints[i].coeff;
      if (v < co.size() && co[v].size()) rs.a[i].push_back(realify(hermitian_part(co[v])));
      else rs.a[i].emplace_back();
    }
  }
  return rs;
}

void evaluate_witness(const FeasibilityProblem& p, OracleResult& r) {
  r.affine_residual = 0.0;
  for (const auto& c : p.constraints) {
    double v = 0.0;
    for (size_t k = 0; k < c.coeff.size() && k < r.witness.size(); ++k)
      if (c.coeff[k].size()) v += (c.coeff[k] * r.witness[k]).trace().real();
    r.affine_residual = std::max(r.affine_residual, std::abs(v - c.target));
  }
  r.min_eig = std::numeric_limits<double>::infinity();
  for (const auto& w : r.witness) r.min_eig = std::min(r.min_eig, min_eigenvalue(hermitian_part(w)));
  if (r.witness.empty()) r.min_eig = 0.0;
  r.objective = 0.0;
  if (!p.objective.empty())
    for (size_t k = 0; k < p.objective.size(); ++k)
      if (p.objective[k].size()) r.objective += (p.objective[k] * r.witness[k]).trace().real();
}

}  // namespace

OracleResult minimize(const FeasibilityProblem& p, const Tolerances& tol) {
  OracleResult r;
  RealSdp rs = to_real(p, p.objective.empty());
  IpmOptions opt;
  opt.max_iters = tol.max_iters;
  IpmResult ipm = solve_real(rs, opt);
  for (const auto& x : ipm.x) r.witness.push_back(unrealify(x));
  evaluate_witness(p, r);
  const bool ok = ipm.status == IpmStatus::Optimal || ipm.status == IpmStatus::Inaccurate;
  r.status = (ok && r.affine_residual <= tol.eps_affine && r.min_eig >= -tol.eps_psd) ? Status::Feasible
                                                                                     : Status::Indeterminate;
  return r;
}

OracleResult solve(const FeasibilityProblem& p, const Tolerances& tol) {
  // Farkas alternative: w with sum_i w_i A_i psd and b.w < 0, |w_i| <= 1.
  const auto m = static_cast<Eigen::Index>(p.constraints.size());
  OracleResult r;
  if (m > 0) {
    LmiProblem lmi(m);
    for (size_t v = 0; v < p.variable_sizes.size(); ++v) {
      const Eigen::Index n = p.variable_sizes[v];
      int blk = lmi.add_block(CMat::Zero(n, n));
      for (Eigen::Index i = 0; i < m; ++i) {
        const auto& co = p.constraints[i].coeff;
        if (v < co.size() && co[v].size()) lmi.set(i, blk, hermitian_part(co[v]));
      }
    }
    for (Eigen::Index i = 0; i < m; ++i) {
      int up = lmi.add_block(CMat::Ones(1, 1));
      lmi.set(i, up, -CMat::Ones(1, 1));
      int lo = lmi.add_block(CMat::Ones(1, 1));
      lmi.set(i, lo, CMat::Ones(1, 1));
      lmi.objective(i) = -p.constraints[i].target;
    }
    LmiResult cert = solve_lmi(lmi, tol);
    if (cert.status == Status::Feasible && cert.value > tol.eps_margin) {
      // Certificate must hold on its own: PSD combination and strict separation.
      double min_eig = std::numeric_limits<double>::infinity();
      for (size_t v = 0; v < p.variable_sizes.size(); ++v) min_eig = std::min(min_eig, min_eigenvalue(cert.slack[v]));
      if (min_eig >= -tol.eps_psd) {
        r.status = Status::Infeasible;
        r.dual_certificate = cert.y;
        r.margin = cert.value;
        return r;
      }
    }
  }
  r = minimize(p, tol);
  return r;
}

MaxMinEig max_min_eig(const AffineFamily& family, const Tolerances& tol, double cap) {
  const auto np = static_cast<Eigen::Index>(family.directions.size());
  const Eigen::Index n = family.base.rows();
  LmiProblem lmi(np + 1);
  int blk = lmi.add_block(family.base);
  for (Eigen::Index i = 0; i < np; ++i) lmi.set(i, blk, family.directions[i]);
  lmi.set(np, blk, -CMat::Identity(n, n));
  int capb = lmi.add_block(cap * CMat::Ones(1, 1));
  lmi.set(np, capb, -CMat::Ones(1, 1));
  lmi.objective(np) = 1.0;
  for (Eigen::Index r = 0; r < family.eq_matrix.rows(); ++r) {
    RVec row = RVec::Zero(np + 1);
    row.head(np) = family.eq_matrix.row(r).transpose();
    lmi.add_equality(row, family.eq_rhs(r));
  }
  LmiResult res = solve_lmi(lmi, tol);
  MaxMinEig out;
  out.status = res.status;
  if (res.y.size() == np + 1) {
    out.point = res.y.head(np);
    out.t_star = res.y(np);
  }
  const bool runaway = res.status == Status::Indeterminate && res.y.size() && res.y.norm() > 1e3 * cap;
  if (res.status == Status::Unbounded || runaway || (res.status == Status::Feasible && out.t_star > 0.99 * cap)) {
    out.status = Status::Unbounded;
    throw QosError(ErrorKind::Unbounded, "normalization does not cap the family");
  }
  return out;
}

HermitianEig hermitian_eig(const CMat& m) {
  if (!is_hermitian(m, 1e-10)) throw QosError(ErrorKind::NotHermitian, "input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(m));
  return {es.eigenvalues(), es.eigenvectors()};
}

}  // namespace qos::sdp

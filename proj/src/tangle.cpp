#include "qholo/tangle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>

namespace qholo {

// ---------------------------------------------------------------------------
// parsing and combinatorics

Diagram parse_diagram(const std::string& text) {
  Diagram d;
  std::istringstream in(text);
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    any = true;
    Slice s;
    if (tok == "xp") s.kind = Slice::Kind::Xp;
    else if (tok == "xm") s.kind = Slice::Kind::Xm;
    else if (tok == "cup") s.kind = Slice::Kind::Cup;
    else if (tok == "cap") s.kind = Slice::Kind::Cap;
    else if (tok == "id") {
      d.slices.push_back({Slice::Kind::Id, 1});
      continue;
    } else {
      throw tangle_error("parse: unknown token '" + tok + "'");
    }
    if (!(ls >> s.pos) || s.pos < 1) throw tangle_error("parse: bad position after '" + tok + "'");
    std::string extra;
    if (ls >> extra) throw tangle_error("parse: trailing input '" + extra + "'");
    d.slices.push_back(s);
  }
  if (!any) throw tangle_error("parse: empty input");

  // least legal bottom width from the running deficit
  long delta = 0, need0 = 0;
  for (const auto& s : d.slices) {
    long need = 0;
    switch (s.kind) {
      case Slice::Kind::Xp:
      case Slice::Kind::Xm:
      case Slice::Kind::Cap: need = s.pos + 1; break;
      case Slice::Kind::Cup: need = s.pos - 1; break;
      case Slice::Kind::Id: need = 0; break;
    }
    need0 = std::max(need0, need - delta);
    if (s.kind == Slice::Kind::Cup) delta += 2;
    if (s.kind == Slice::Kind::Cap) delta -= 2;
  }
  d.bottom_width = need0;
  long w = d.bottom_width;
  for (const auto& s : d.slices) {
    d.width_before.push_back(w);
    switch (s.kind) {
      case Slice::Kind::Xp:
      case Slice::Kind::Xm:
        if (s.pos + 1 > w) throw tangle_error("parse: crossing position out of range");
        break;
      case Slice::Kind::Cup:
        if (s.pos > w + 1) throw tangle_error("parse: cup position out of range");
        w += 2;
        break;
      case Slice::Kind::Cap:
        if (s.pos + 1 > w) throw tangle_error("parse: cap position out of range");
        w -= 2;
        break;
      case Slice::Kind::Id: break;
    }
  }
  d.top_width = w;

  // connectivity through union-find over segment ids
  std::vector<long> parent;
  auto fresh = [&]() {
    parent.push_back(static_cast<long>(parent.size()));
    return static_cast<long>(parent.size()) - 1;
  };
  std::function<long(long)> find = [&](long a) {
    while (parent[static_cast<size_t>(a)] != a) {
      parent[static_cast<size_t>(a)] = parent[static_cast<size_t>(parent[static_cast<size_t>(a)])];
      a = parent[static_cast<size_t>(a)];
    }
    return a;
  };
  auto unite = [&](long a, long b) { parent[static_cast<size_t>(find(a))] = find(b); };
  std::vector<long> cur, bottom_ids;
  for (long i = 0; i < d.bottom_width; ++i) {
    long id = fresh();
    cur.push_back(id);
    bottom_ids.push_back(id);
  }
  for (const auto& s : d.slices) {
    long i = s.pos - 1;
    switch (s.kind) {
      case Slice::Kind::Xp:
      case Slice::Kind::Xm:
        std::swap(cur[static_cast<size_t>(i)], cur[static_cast<size_t>(i + 1)]);
        break;
      case Slice::Kind::Cup: {
        long id = fresh(), id2 = fresh();
        unite(id, id2);
        cur.insert(cur.begin() + i, {id, id2});
        break;
      }
      case Slice::Kind::Cap:
        unite(cur[static_cast<size_t>(i)], cur[static_cast<size_t>(i + 1)]);
        cur.erase(cur.begin() + i, cur.begin() + i + 2);
        break;
      case Slice::Kind::Id: break;
    }
  }
  std::vector<long> open_roots;
  auto note = [&](std::vector<long>& roots, long id) {
    long r = find(id);
    for (long q : roots)
      if (q == r) return;
    roots.push_back(r);
  };
  for (long id : bottom_ids) note(open_roots, id);
  for (long id : cur) note(open_roots, id);
  std::vector<long> all_roots;
  for (long id = 0; id < static_cast<long>(parent.size()); ++id) note(all_roots, id);
  d.components = static_cast<long>(all_roots.size());
  d.closed_components = d.components - static_cast<long>(open_roots.size());
  d.string_knot = (d.components == 1 && d.bottom_width == 1 && d.top_width == 1);
  return d;
}

// ---------------------------------------------------------------------------
// coloring

Mat2 cup_partner(const Mat2& c, int branch) {
  GStarPoint p = gauss(c, branch);
  GStarPoint ip{Cx(1) / p.k, -p.e, -p.f, p.branch};
  return to_group(ip);
}

namespace {

int partner_branch(const Mat2& c, int branch) {
  GStarPoint p = gauss(c, branch);
  Cx kp = Cx(1) / p.k;
  GStarPoint principal = gauss(cup_partner(c, branch), +1);
  return (std::abs(kp - principal.k) <= std::abs(kp + principal.k)) ? +1 : -1;
}

struct ColorPass {
  std::vector<std::vector<SegmentColor>> levels;
  double cap_residual = 0;
  std::vector<Cx> cap_residual_vec;
};

ColorPass color_pass(const Diagram& d, const std::vector<SegmentColor>& bottom,
                     const std::vector<Mat2>& cups) {
  ColorPass out;
  std::vector<SegmentColor> cur = bottom;
  out.levels.push_back(cur);
  size_t cup_idx = 0;
  const long ell = 3;  // the branch rule needs only the k-sign; level-free
  for (const auto& s : d.slices) {
    long i = s.pos - 1;
    switch (s.kind) {
      case Slice::Kind::Xp:
      case Slice::Kind::Xm: {
        const SegmentColor a = cur[static_cast<size_t>(i)];
        const SegmentColor b = cur[static_cast<size_t>(i + 1)];
        Mat2 o1, o2;
        if (s.kind == Slice::Kind::Xp) {
          auto [l, r] = braiding_map(a.color, b.color);
          o1 = l;
          o2 = r;
        } else {
          auto [u, v] = inverse_braiding_map(a.color, b.color);
          o1 = u;
          o2 = v;
        }
        CentralChar c1 = char_of(gauss(a.color, a.branch), ell);
        CentralChar c2 = char_of(gauss(b.color, b.branch), ell);
        CentralChar d1 = char_of(gauss(o1), ell), d2 = char_of(gauss(o2), ell);
        Cx sgn = (c1.k * c2.k) / (d1.k * d2.k);
        int br = (std::abs(sgn - Cx(1)) <= std::abs(sgn + Cx(1))) ? +1 : -1;
        cur[static_cast<size_t>(i)] = {o1, +1};
        cur[static_cast<size_t>(i + 1)] = {o2, br};
        break;
      }
      case Slice::Kind::Cup: {
        Mat2 c = cups[cup_idx++];
        SegmentColor left{c, +1};
        SegmentColor right{cup_partner(c, +1), partner_branch(c, +1)};
        cur.insert(cur.begin() + i, {left, right});
        break;
      }
      case Slice::Kind::Cap: {
        Mat2 u = cur[static_cast<size_t>(i)].color;
        Mat2 v = cur[static_cast<size_t>(i + 1)].color;
        Mat2 diff = u - cup_partner(v, cur[static_cast<size_t>(i + 1)].branch);
        out.cap_residual = std::max(out.cap_residual, diff.cwiseAbs().maxCoeff());
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2) out.cap_residual_vec.push_back(diff(a2, b2));
        cur.erase(cur.begin() + i, cur.begin() + i + 2);
        break;
      }
      case Slice::Kind::Id: break;
    }
    out.levels.push_back(cur);
  }
  return out;
}

Mat2 sl2_exp(const VecX& p) {
  Mat2 xi;
  xi << p(0), p(1), p(2), -p(0);
  return xi.exp();
}

}  // namespace

ColorState propagate(const Diagram& d, const std::vector<SegmentColor>& bottom,
                     const std::map<long, SegmentColor>& cup_seeds) {
  if (static_cast<long>(bottom.size()) != d.bottom_width)
    throw tangle_error("propagate: bottom width mismatch (diagram wants " +
                       std::to_string(d.bottom_width) + ")");
  std::vector<long> cup_slices;
  for (long i = 0; i < static_cast<long>(d.slices.size()); ++i)
    if (d.slices[static_cast<size_t>(i)].kind == Slice::Kind::Cup) cup_slices.push_back(i);
  long ncup = static_cast<long>(cup_slices.size());
  std::vector<bool> fixed(static_cast<size_t>(ncup), false);
  std::vector<Mat2> cups(static_cast<size_t>(ncup), Mat2::Identity());
  std::vector<VecX> params(static_cast<size_t>(ncup));
  long nfree = 0;
  for (long c = 0; c < ncup; ++c) {
    auto it = cup_seeds.find(cup_slices[static_cast<size_t>(c)]);
    VecX p(3);
    if (it != cup_seeds.end()) {
      Mat2 lg = it->second.color.log();
      p << lg(0, 0), lg(0, 1), lg(1, 0);
      fixed[static_cast<size_t>(c)] = (d.bottom_width == 0);
      cups[static_cast<size_t>(c)] = it->second.color;
    } else {
      p << Cx(0.05, 0.02), Cx(0.11, -0.04), Cx(-0.07, 0.06);
      cups[static_cast<size_t>(c)] = sl2_exp(p);
    }
    params[static_cast<size_t>(c)] = p;
    if (!fixed[static_cast<size_t>(c)]) ++nfree;
  }

  auto assemble = [&](const Eigen::VectorXd& v) {
    long idx = 0;
    for (long c = 0; c < ncup; ++c) {
      if (fixed[static_cast<size_t>(c)]) continue;
      VecX p(3);
      for (int j = 0; j < 3; ++j) {
        p(j) = Cx(v(idx), v(idx + 1));
        idx += 2;
      }
      params[static_cast<size_t>(c)] = p;
      cups[static_cast<size_t>(c)] = sl2_exp(p);
    }
  };
  auto residual = [&](const Eigen::VectorXd& v) {
    assemble(v);
    ColorPass cp = color_pass(d, bottom, cups);
    Eigen::VectorXd r(2 * static_cast<long>(cp.cap_residual_vec.size()));
    for (size_t i = 0; i < cp.cap_residual_vec.size(); ++i) {
      r(2 * static_cast<long>(i)) = cp.cap_residual_vec[i].real();
      r(2 * static_cast<long>(i) + 1) = cp.cap_residual_vec[i].imag();
    }
    return r;
  };
  long nvar = 6 * nfree;
  Eigen::VectorXd v(std::max<long>(nvar, 1));
  {
    long idx = 0;
    for (long c = 0; c < ncup; ++c) {
      if (fixed[static_cast<size_t>(c)]) continue;
      for (int j = 0; j < 3; ++j) {
        v(idx++) = params[static_cast<size_t>(c)](j).real();
        v(idx++) = params[static_cast<size_t>(c)](j).imag();
      }
    }
  }
  if (nvar > 0) {
    Eigen::VectorXd r = residual(v.head(nvar));
    if (r.size() > 0) {
      double cur = r.squaredNorm();
      double lm = 1e-6;
      for (int it = 0; it < 200 && cur > 1e-26; ++it) {
        Eigen::MatrixXd jac(r.size(), nvar);
        double h = 1e-7;
        for (long k = 0; k < nvar; ++k) {
          Eigen::VectorXd vp = v.head(nvar);
          vp(k) += h;
          jac.col(k) = (residual(vp) - r) / h;
        }
        Eigen::MatrixXd jtj = jac.transpose() * jac;
        Eigen::VectorXd g = jac.transpose() * r;
        bool moved = false;
        for (int tries = 0; tries < 16; ++tries) {
          Eigen::VectorXd dv = (jtj + lm * Eigen::MatrixXd::Identity(nvar, nvar)).ldlt().solve(g);
          Eigen::VectorXd vn = v.head(nvar) - dv;
          Eigen::VectorXd rn = residual(vn);
          if (rn.squaredNorm() < cur) {
            v.head(nvar) = vn;
            r = rn;
            cur = rn.squaredNorm();
            lm = std::max(lm * 0.25, 1e-14);
            moved = true;
            break;
          }
          lm *= 8;
        }
        if (!moved) break;
      }
    }
    assemble(v.head(nvar));
  }
  ColorPass cp = color_pass(d, bottom, cups);
  if (cp.cap_residual > 1e-8)
    throw tangle_error("propagate: inconsistent coloring (cap residual " +
                       std::to_string(cp.cap_residual) + ")");
  ColorState out;
  out.levels = cp.levels;
  out.cap_residual = cp.cap_residual;
  out.cup_colors = cups;
  return out;
}

// ---------------------------------------------------------------------------
// evaluation

namespace {

double pair_equivariance(const VecX& vec, const CyclicRep& a, const CyclicRep& b, bool is_cup) {
  double worst = 0;
  for (int g = 0; g < 3; ++g) {
    MatX act = coproduct_image(a, b, g);
    VecX moved = is_cup ? VecX(act * vec) : VecX(act.transpose() * vec);
    VecX expect = (g == 0 ? Cx(1) : Cx(0)) * vec;
    worst = std::max(worst, (moved - expect).norm() / std::max(1e-300, vec.norm() * act.norm()));
  }
  return worst;
}

// S <- (I_before (x) op (x) I_after) S where op maps din -> dout factors
MatX apply_block(const MatX& state, const MatX& op, long before, long after, long l) {
  long da = 1, db = 1;
  for (long i = 0; i < before; ++i) da *= l;
  for (long i = 0; i < after; ++i) db *= l;
  long din = op.cols(), dout = op.rows();
  MatX out = MatX::Zero(da * dout * db, state.cols());
  for (long col = 0; col < state.cols(); ++col)
    for (long x = 0; x < da; ++x)
      for (long o = 0; o < dout; ++o)
        for (long z = 0; z < db; ++z) {
          Cx acc = 0;
          for (long i2 = 0; i2 < din; ++i2)
            acc += op(o, i2) * state((x * din + i2) * db + z, col);
          out((x * dout + o) * db + z, col) = acc;
        }
  return out;
}

}  // namespace

InvariantResult evaluate(const Diagram& d, const ColorState& colors, long ell,
                         const BuildOptions& opts) {
  if (colors.levels.size() != d.slices.size() + 1)
    throw tangle_error("evaluate: color state does not match the diagram");
  InvariantResult res;
  res.ell = ell;
  res.closed = (d.bottom_width == 0 && d.top_width == 0);

  std::vector<CyclicRep> reps;
  for (long i = 0; i < d.bottom_width; ++i) {
    const SegmentColor& sc = colors.levels[0][static_cast<size_t>(i)];
    reps.push_back(rep_at(sc.color, ell, sc.branch));
  }
  long dim0 = 1;
  for (long i = 0; i < d.bottom_width; ++i) dim0 *= ell;
  MatX state = MatX::Identity(dim0, dim0);

  for (size_t si = 0; si < d.slices.size(); ++si) {
    const Slice& s = d.slices[si];
    long i = s.pos - 1;
    long w = d.width_before[si];
    const auto& level_after = colors.levels[si + 1];
    switch (s.kind) {
      case Slice::Kind::Xp:
      case Slice::Kind::Xm: {
        CrossingOp op;
        const Mat2& ca = colors.levels[si][static_cast<size_t>(i)].color;
        const Mat2& cb = colors.levels[si][static_cast<size_t>(i + 1)].color;
        if (s.kind == Slice::Kind::Xp)
          op = build_crossing(reps[static_cast<size_t>(i)], reps[static_cast<size_t>(i + 1)], ca,
                              cb, opts);
        else
          op = build_inverse_crossing(reps[static_cast<size_t>(i)],
                                      reps[static_cast<size_t>(i + 1)], ca, cb, opts);
        // compose the unnormalized operator; the recorded gauge is kept in
        // the ledger
        MatX r = op.gauge * op.rhat;
        state = apply_block(state, r, i, w - i - 2, ell);
        res.gauge_log.push_back(op.gauge);
        reps[static_cast<size_t>(i)] = op.out1;
        reps[static_cast<size_t>(i + 1)] = op.out2;
        break;
      }
      case Slice::Kind::Cup: {
        const SegmentColor& left = level_after[static_cast<size_t>(i)];
        CyclicRep ra = rep_at(left.color, ell, left.branch);
        CyclicRep rb = dual_rep(ra);
        // coevaluation sum_n v_n (x) (W v^n) with the equivariant weight
        // selected among small powers of L
        std::vector<MatX> cands = {MatX(MatX::Identity(ell, ell)), ra.L, MatX(ra.L.inverse()),
                                   MatX(ra.L * ra.L), MatX((ra.L * ra.L).inverse())};
        double best = 1e18;
        VecX col;
        for (const MatX& wgt : cands) {
          VecX cand = VecX::Zero(ell * ell);
          for (long n = 0; n < ell; ++n)
            for (long m = 0; m < ell; ++m) cand(n * ell + m) = wgt(m, n);
          double eq = pair_equivariance(cand, ra, rb, true);
          if (eq < best) {
            best = eq;
            col = cand;
          }
        }
        if (best > 1e-8)
          throw tangle_error("cup map is not equivariant (" + std::to_string(best) + ")");
        MatX cupmat(ell * ell, 1);
        for (long k = 0; k < ell * ell; ++k) cupmat(k, 0) = col(k);
        state = apply_block(state, cupmat, i, w - i, ell);
        // convert the dual-form leg to the canonical representation in its
        // class so every crossing sees canonical inputs
        CyclicRep rb_can = build_rep_with_casimir(rb.chi, rb.lift.mu, casimir_check(rb).scalar);
        IntertwinerResult conv = intertwiner(rb_can, rb, 1e-6);
        if (conv.nullity < 1) throw tangle_error("cup: canonical conversion missing");
        MatX cg = fix_gauge(conv.t, ell);
        state = apply_block(state, cg, i + 1, w - i, ell);
        res.gauge_log.push_back(conv.t.determinant());
        reps.insert(reps.begin() + i, {ra, rb_can});
        break;
      }
      case Slice::Kind::Cap: {
        CyclicRep ra = reps[static_cast<size_t>(i)];
        CyclicRep rb = reps[static_cast<size_t>(i + 1)];
        // glue the right leg onto the dual of the left, then evaluate with
        // the antipode-square weight on the clockwise turn
        IntertwinerResult glue = intertwiner(dual_rep(ra), rb, 1e-6);
        if (glue.nullity < 1) throw tangle_error("cap: legs are not dual to each other");
        MatX g = fix_gauge(glue.t, ell);
        std::vector<MatX> cands = {MatX(MatX::Identity(ell, ell)), ra.L, MatX(ra.L.inverse()),
                                   MatX(ra.L * ra.L), MatX((ra.L * ra.L).inverse())};
        double best = 1e18;
        VecX row;
        for (const MatX& wgt : cands) {
          VecX cand = VecX::Zero(ell * ell);
          for (long n = 0; n < ell; ++n)
            for (long m = 0; m < ell; ++m) {
              Cx acc = 0;
              for (long p = 0; p < ell; ++p) acc += g(p, m) * wgt(p, n);
              cand(n * ell + m) = acc;
            }
          double eq = pair_equivariance(cand, ra, rb, false);
          if (eq < best) {
            best = eq;
            row = cand;
          }
        }
        if (best > 1e-8)
          throw tangle_error("cap map is not equivariant (" + std::to_string(best) + ")");
        MatX caprow(1, ell * ell);
        for (long k = 0; k < ell * ell; ++k) caprow(0, k) = row(k);
        state = apply_block(state, caprow, i, w - i - 2, ell);
        res.gauge_log.push_back(glue.t.determinant());
        reps.erase(reps.begin() + i, reps.begin() + i + 2);
        break;
      }
      case Slice::Kind::Id: break;
    }
  }

  if (res.closed) {
    res.op = state;
    res.scalar = state(0, 0);
    return res;
  }
  if (!d.string_knot) {
    res.op = state;
    return res;
  }
  const SegmentColor& bot = colors.levels[0][0];
  CyclicRep bottom_rep = rep_at(bot.color, ell, bot.branch);
  const CyclicRep& top_rep = reps[0];
  double topdiff = (colors.levels.back()[0].color - bot.color).cwiseAbs().maxCoeff();
  if (topdiff > 1e-7)
    throw tangle_error("evaluate: top and bottom boundary colors differ (" +
                       std::to_string(topdiff) + ")");
  MatX op = state;
  if ((top_rep.E - bottom_rep.E).norm() + (top_rep.L - bottom_rep.L).norm() > 1e-9) {
    IntertwinerResult glue = intertwiner(bottom_rep, top_rep, 1e-6);
    if (glue.nullity < 1) throw tangle_error("evaluate: boundary representations inequivalent");
    MatX g = fix_gauge(glue.t, ell);
    op = g * op;
    res.gauge_log.push_back(glue.t.determinant());
  }
  res.op = op;
  res.scalar = op.trace() / static_cast<double>(ell);
  res.schur_residual =
      (op - res.scalar * MatX::Identity(ell, ell)).norm() / std::max(1e-300, std::abs(res.scalar));
  double cen = 0;
  MatX gens[3] = {bottom_rep.E, bottom_rep.F, bottom_rep.L};
  for (const MatX& gmat : gens)
    cen = std::max(cen, (op * gmat - gmat * op).norm() / std::max(1.0, op.norm() * gmat.norm()));
  res.centrality_residual = cen;
  return res;
}

GaugeTestResult gauge_test(const Diagram& d, const ColorState& colors, const Mat2& g, long ell,
                           const BuildOptions& opts) {
  GaugeTestResult out;
  try {
    InvariantResult base = evaluate(d, colors, ell, opts);
    std::vector<SegmentColor> bottom2;
    for (const auto& sc : colors.levels[0])
      bottom2.push_back({Mat2(g * sc.color * g.inverse()), sc.branch});
    std::map<long, SegmentColor> seeds;
    long cup_idx = 0;
    for (long i = 0; i < static_cast<long>(d.slices.size()); ++i)
      if (d.slices[static_cast<size_t>(i)].kind == Slice::Kind::Cup) {
        Mat2 c = colors.cup_colors[static_cast<size_t>(cup_idx++)];
        seeds[i] = {Mat2(g * c * g.inverse()), +1};
      }
    ColorState dressed = propagate(d, bottom2, seeds);
    InvariantResult moved = evaluate(d, dressed, ell, opts);
    out.scalar_base = base.scalar;
    out.scalar_dressed = moved.scalar;
    out.relative_difference =
        std::abs(moved.scalar - base.scalar) / std::max(1e-300, std::abs(base.scalar));
  } catch (const std::exception& e) {
    out.rejected = true;
    out.reason = e.what();
  }
  return out;
}

Cx kashaev_oracle(const std::string& knot, long n) {
  if (n < 1) throw tangle_error("oracle: N must be positive");
  Cx q = std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(n));
  if (knot == "3_1") {
    Cx acc = 0, poch = 1;
    for (long k = 0; k < n; ++k) {
      if (k > 0) poch *= (Cx(1) - std::pow(std::conj(q), static_cast<double>(k)));
      acc += poch;
    }
    return acc;
  }
  if (knot == "4_1") {
    Cx acc = 0, poch = 1;
    for (long k = 0; k < n; ++k) {
      if (k > 0) poch *= (Cx(1) - std::pow(q, static_cast<double>(k)));
      acc += std::norm(poch);
    }
    return acc;
  }
  throw tangle_error("oracle: unsupported knot '" + knot + "'");
}

}  // namespace qholo

#include "qholo/rootdata.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>

namespace qholo {

namespace {

long braid_exponent(long prod) {
  switch (prod) {
    case 0: return 2;
    case 1: return 3;
    case 2: return 4;
    case 3: return 6;
    default: throw std::domain_error("Cartan matrix: a_ij * a_ji out of range");
  }
}

void validate(CartanData& cd) {
  long r = cd.rank;
  if (r < 1) throw std::domain_error("Cartan data: rank must be positive");
  for (long i = 0; i < r; ++i) {
    if (cd.a[i][i] != 2) throw std::domain_error("Cartan matrix: diagonal must be 2");
    for (long j = 0; j < r; ++j) {
      if (i != j && cd.a[i][j] > 0) throw std::domain_error("Cartan matrix: off-diagonal must be <= 0");
      if ((cd.a[i][j] == 0) != (cd.a[j][i] == 0))
        throw std::domain_error("Cartan matrix: zero pattern must be symmetric");
    }
  }
  // minimal positive symmetrizers with a_ij d_j = a_ji d_i, found by
  // propagating ratios along the Dynkin graph
  cd.d.assign(r, 0);
  for (long start = 0; start < r; ++start) {
    if (cd.d[start] != 0) continue;
    cd.d[start] = 1;
    std::vector<long> stack = {start};
    while (!stack.empty()) {
      long i = stack.back();
      stack.pop_back();
      for (long j = 0; j < r; ++j) {
        if (i == j || cd.a[i][j] == 0) continue;
        // d_j = d_i a_ji / a_ij
        long num = cd.d[i] * cd.a[j][i];
        if (cd.d[j] == 0 && num % cd.a[i][j] != 0) {
          long g = std::gcd(num, cd.a[i][j]);
          long scale = std::abs(cd.a[i][j] / g);
          for (long k = 0; k < r; ++k) cd.d[k] *= scale;
          num = cd.d[i] * cd.a[j][i];
        }
        long val = num / cd.a[i][j];
        if (val <= 0) throw std::domain_error("Cartan matrix: not symmetrizable");
        if (cd.d[j] == 0) {
          cd.d[j] = val;
          stack.push_back(j);
        } else if (cd.d[j] != val) {
          throw std::domain_error("Cartan matrix: not symmetrizable");
        }
      }
    }
  }
  long g = 0;
  for (long i = 0; i < r; ++i) g = std::gcd(g, cd.d[i]);
  for (long i = 0; i < r; ++i) cd.d[i] /= g;
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j)
      if (cd.a[i][j] * cd.d[j] != cd.a[j][i] * cd.d[i])
        throw std::domain_error("Cartan matrix: not symmetrizable");
  cd.m.assign(r, std::vector<long>(r, 2));
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < r; ++j)
      cd.m[i][j] = (i == j) ? 1 : braid_exponent(cd.a[i][j] * cd.a[j][i]);
}

}  // namespace

IntVec CartanData::root_to_weight(const IntVec& root) const {
  // alpha_j = sum_i <alpha_j, alpha_i^vee> omega_i = sum_i a_ji omega_i
  IntVec w(static_cast<size_t>(rank), 0);
  for (long i = 0; i < rank; ++i)
    for (long j = 0; j < rank; ++j)
      w[static_cast<size_t>(i)] +=
          a[static_cast<size_t>(j)][static_cast<size_t>(i)] * root[static_cast<size_t>(j)];
  return w;
}

long CartanData::root_form(const IntVec& x, const IntVec& y) const {
  // (alpha_i, alpha_j) = a_ij d_j (the symmetrized matrix)
  long s = 0;
  for (long i = 0; i < rank; ++i)
    for (long j = 0; j < rank; ++j)
      s += x[static_cast<size_t>(i)] * y[static_cast<size_t>(j)] * d[static_cast<size_t>(j)] *
           a[static_cast<size_t>(i)][static_cast<size_t>(j)];
  return s;
}

bool CartanData::in_root_lattice(const IntVec& weight_coords) const {
  // mu = sum_j c_j alpha_j iff the system (A^T) c = mu has an integer solution
  long r = rank;
  std::vector<std::vector<double>> m(static_cast<size_t>(r), std::vector<double>(static_cast<size_t>(r + 1)));
  for (long i = 0; i < r; ++i) {
    for (long j = 0; j < r; ++j) m[i][j] = static_cast<double>(a[static_cast<size_t>(j)][static_cast<size_t>(i)]);
    m[i][static_cast<size_t>(r)] = static_cast<double>(weight_coords[static_cast<size_t>(i)]);
  }
  for (long c = 0; c < r; ++c) {
    long piv = -1;
    for (long i = c; i < r; ++i)
      if (std::abs(m[static_cast<size_t>(i)][static_cast<size_t>(c)]) > 1e-12) {
        piv = i;
        break;
      }
    if (piv < 0) return false;
    std::swap(m[static_cast<size_t>(c)], m[static_cast<size_t>(piv)]);
    for (long i = 0; i < r; ++i) {
      if (i == c) continue;
      double f = m[static_cast<size_t>(i)][static_cast<size_t>(c)] / m[static_cast<size_t>(c)][static_cast<size_t>(c)];
      if (f == 0.0) continue;
      for (long j = c; j <= r; ++j)
        m[static_cast<size_t>(i)][static_cast<size_t>(j)] -= f * m[static_cast<size_t>(c)][static_cast<size_t>(j)];
    }
  }
  for (long i = 0; i < r; ++i) {
    double x = m[static_cast<size_t>(i)][static_cast<size_t>(r)] / m[static_cast<size_t>(i)][static_cast<size_t>(i)];
    if (std::abs(x - std::round(x)) > 1e-9) return false;
  }
  return true;
}

CartanData build_cartan(const std::string& series, long rank, Lattice lattice) {
  if (rank < 1 || rank > 4) throw std::domain_error("build_cartan: rank must be in 1..4");
  std::vector<std::vector<long>> a(static_cast<size_t>(rank), std::vector<long>(static_cast<size_t>(rank), 0));
  for (long i = 0; i < rank; ++i) a[static_cast<size_t>(i)][static_cast<size_t>(i)] = 2;
  auto chain = [&] {
    for (long i = 0; i + 1 < rank; ++i)
      a[static_cast<size_t>(i)][static_cast<size_t>(i + 1)] = a[static_cast<size_t>(i + 1)][static_cast<size_t>(i)] = -1;
  };
  if (series == "A") {
    chain();
  } else if (series == "B") {
    if (rank < 2) throw std::domain_error("build_cartan: B needs rank >= 2");
    chain();
    a[static_cast<size_t>(rank - 2)][static_cast<size_t>(rank - 1)] = -2;
  } else if (series == "C") {
    if (rank < 2) throw std::domain_error("build_cartan: C needs rank >= 2");
    chain();
    a[static_cast<size_t>(rank - 1)][static_cast<size_t>(rank - 2)] = -2;
  } else if (series == "D") {
    if (rank != 4) throw std::domain_error("build_cartan: D needs rank 4");
    for (long i = 0; i + 2 < rank; ++i)
      a[static_cast<size_t>(i)][static_cast<size_t>(i + 1)] = a[static_cast<size_t>(i + 1)][static_cast<size_t>(i)] = -1;
    a[static_cast<size_t>(rank - 3)][static_cast<size_t>(rank - 1)] =
        a[static_cast<size_t>(rank - 1)][static_cast<size_t>(rank - 3)] = -1;
  } else if (series == "G") {
    if (rank != 2) throw std::domain_error("build_cartan: G needs rank 2");
    a[0][1] = -3;
    a[1][0] = -1;
  } else {
    throw std::domain_error("build_cartan: unknown series " + series);
  }
  return build_cartan(a, lattice);
}

CartanData build_cartan(const std::vector<std::vector<long>>& matrix, Lattice lattice) {
  CartanData cd;
  cd.rank = static_cast<long>(matrix.size());
  for (const auto& row : matrix)
    if (static_cast<long>(row.size()) != cd.rank)
      throw std::domain_error("build_cartan: matrix must be square");
  cd.a = matrix;
  cd.lattice = lattice;
  validate(cd);
  return cd;
}

IntVec simple_reflect(const CartanData& cd, const IntVec& mu, long i) {
  if (i < 0 || i >= cd.rank) throw std::domain_error("simple_reflect: index out of range");
  if (static_cast<long>(mu.size()) != cd.rank) throw std::domain_error("simple_reflect: bad weight");
  // s_i(mu) = mu - <mu, alpha_i^vee> alpha_i; the coroot pairing is the
  // i-th coordinate in the fundamental-weight basis
  IntVec e(static_cast<size_t>(cd.rank), 0);
  e[static_cast<size_t>(i)] = 1;
  IntVec alpha_w = cd.root_to_weight(e);
  IntVec out = mu;
  long c = mu[static_cast<size_t>(i)];
  for (long j = 0; j < cd.rank; ++j) out[static_cast<size_t>(j)] -= c * alpha_w[static_cast<size_t>(j)];
  return out;
}

namespace {

// s_i acting in simple-root coordinates: s_i(alpha_j) = alpha_j - a_ji alpha_i
IntVec reflect_root(const CartanData& cd, const IntVec& root, long i) {
  long c = 0;
  for (long j = 0; j < cd.rank; ++j)
    c += root[static_cast<size_t>(j)] * cd.a[static_cast<size_t>(j)][static_cast<size_t>(i)];
  IntVec out = root;
  out[static_cast<size_t>(i)] -= c;
  return out;
}

using WeylElem = std::vector<IntVec>;  // images of the simple roots, root coords

WeylElem identity_action(const CartanData& cd) {
  WeylElem m;
  for (long i = 0; i < cd.rank; ++i) {
    IntVec e(static_cast<size_t>(cd.rank), 0);
    e[static_cast<size_t>(i)] = 1;
    m.push_back(e);
  }
  return m;
}

// (w s_i)(alpha_j) = w(s_i(alpha_j))
WeylElem apply_right(const CartanData& cd, const WeylElem& w, long i) {
  WeylElem out(w.size());
  for (size_t j = 0; j < w.size(); ++j) {
    IntVec e(static_cast<size_t>(cd.rank), 0);
    e[j] = 1;
    IntVec si = reflect_root(cd, e, i);
    IntVec img(static_cast<size_t>(cd.rank), 0);
    for (long t = 0; t < cd.rank; ++t) {
      long coef = si[static_cast<size_t>(t)];
      if (coef == 0) continue;
      for (long u = 0; u < cd.rank; ++u)
        img[static_cast<size_t>(u)] += coef * w[static_cast<size_t>(t)][static_cast<size_t>(u)];
    }
    out[j] = img;
  }
  return out;
}

}  // namespace

std::vector<IntVec> positive_roots(const CartanData& cd) {
  std::set<IntVec> all;
  std::vector<IntVec> frontier;
  for (long i = 0; i < cd.rank; ++i) {
    IntVec e(static_cast<size_t>(cd.rank), 0);
    e[static_cast<size_t>(i)] = 1;
    all.insert(e);
    frontier.push_back(e);
  }
  while (!frontier.empty()) {
    std::vector<IntVec> next;
    for (const auto& r : frontier)
      for (long i = 0; i < cd.rank; ++i) {
        IntVec s = reflect_root(cd, r, i);
        if (all.insert(s).second) next.push_back(s);
      }
    frontier = std::move(next);
  }
  std::vector<IntVec> pos;
  for (const auto& r : all)
    if (std::all_of(r.begin(), r.end(), [](long c) { return c >= 0; })) pos.push_back(r);
  return pos;
}

ReducedWord longest_word(const CartanData& cd) {
  if (cd.rank > 4) throw std::domain_error("longest_word: rank > 4 unsupported");
  size_t n_pos = positive_roots(cd).size();
  // BFS over the Weyl group keeping, per element, the lexicographically
  // least word among the shortest ones
  std::map<WeylElem, std::vector<long>> best;
  WeylElem id = identity_action(cd);
  best[id] = {};
  std::vector<WeylElem> level = {id};
  ReducedWord result;
  while (true) {
    std::map<WeylElem, std::vector<long>> next;
    std::vector<std::pair<std::vector<long>, WeylElem>> ordered;
    for (const auto& w : level) ordered.push_back({best[w], w});
    std::sort(ordered.begin(), ordered.end());
    for (const auto& [word, w] : ordered)
      for (long i = 0; i < cd.rank; ++i) {
        WeylElem w2 = apply_right(cd, w, i);
        if (best.count(w2)) continue;
        std::vector<long> cand = word;
        cand.push_back(i);
        auto it = next.find(w2);
        if (it == next.end() || cand < it->second) next[w2] = cand;
      }
    if (next.empty()) {
      if (level.size() != 1) throw std::logic_error("longest_word: ambiguous longest element");
      result.letters = best[level[0]];
      break;
    }
    level.clear();
    for (auto& [w, word] : next) {
      best[w] = word;
      level.push_back(w);
    }
  }
  if (result.letters.size() != n_pos) throw std::logic_error("longest_word: wrong length");
  return result;
}

bool is_longest_word(const CartanData& cd, const ReducedWord& w) {
  WeylElem m = identity_action(cd);
  for (long i : w.letters) m = apply_right(cd, m, i);
  for (const auto& img : m)
    if (!std::all_of(img.begin(), img.end(), [](long c) { return c <= 0; })) return false;
  return w.letters.size() == positive_roots(cd).size();
}

std::vector<IntVec> convex_order(const CartanData& cd, const ReducedWord& w) {
  std::vector<IntVec> betas;
  std::set<IntVec> seen;
  for (size_t a = 0; a < w.letters.size(); ++a) {
    IntVec beta(static_cast<size_t>(cd.rank), 0);
    beta[static_cast<size_t>(w.letters[a])] = 1;
    for (size_t t = a; t-- > 0;) beta = reflect_root(cd, beta, w.letters[t]);
    bool positive = std::all_of(beta.begin(), beta.end(), [](long c) { return c >= 0; });
    if (!positive || !seen.insert(beta).second)
      throw std::domain_error("convex_order: word is not reduced");
    betas.push_back(beta);
  }
  return betas;
}

}  // namespace qholo

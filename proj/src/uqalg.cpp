#include "qholo/uqalg.hpp"

#include <sstream>
#include <stdexcept>

namespace qholo {

// ---------------------------------------------------------------------------
// AlgElem basics

AlgElem AlgElem::monomial(PbwTerm t, RatFuncQ c) {
  AlgElem r;
  r.add_term(t, c);
  return r;
}

void AlgElem::add_term(const PbwTerm& t, const RatFuncQ& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(t, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

AlgElem AlgElem::operator-() const {
  AlgElem r;
  for (const auto& [t, c] : terms_) r.terms_.emplace(t, -c);
  return r;
}

AlgElem AlgElem::operator+(const AlgElem& o) const {
  AlgElem r = *this;
  for (const auto& [t, c] : o.terms_) r.add_term(t, c);
  return r;
}

AlgElem AlgElem::operator-(const AlgElem& o) const { return *this + (-o); }

AlgElem AlgElem::operator*(const RatFuncQ& c) const {
  AlgElem r;
  if (c.is_zero()) return r;
  for (const auto& [t, k] : terms_) r.terms_.emplace(t, k * c);
  return r;
}

std::string AlgElem::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [t, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ")";
    if (t.e) os << " E^" << t.e;
    if (t.mu) os << " L" << t.mu;
    if (t.f) os << " F^" << t.f;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// straightening

namespace {

RatFuncQ qp(long k) { return RatFuncQ::q_power(k); }

// left multiplication by a single Ebar
AlgElem lmul_E(const AlgElem& a) {
  AlgElem r;
  for (const auto& [t, c] : a.terms()) {
    PbwTerm t2 = t;
    t2.e += 1;
    r += AlgElem::monomial(t2, c);
  }
  return r;
}

// L_n Ebar^k = q^{kn} Ebar^k L_n
AlgElem lmul_L(long n, const AlgElem& a) {
  AlgElem r;
  for (const auto& [t, c] : a.terms()) {
    PbwTerm t2 = t;
    t2.mu += n;
    r += AlgElem::monomial(t2, c * qp(t.e * n));
  }
  return r;
}

// Fbar Ebar^k in normal form:
// S(0) = Fbar,
// S(k) = Ebar S(k-1) - (q - q^-1)(q^{2(k-1)} Ebar^{k-1} L_alpha
//                                 - q^{-2(k-1)} Ebar^{k-1} L_alpha^-1)
const AlgElem& straighten_FE(long k) {
  static std::vector<AlgElem> cache;
  if (cache.empty()) cache.push_back(AlgElem::Fb());
  while (static_cast<long>(cache.size()) <= k) {
    long kk = static_cast<long>(cache.size());
    RatFuncQ qq = qp(1) - qp(-1);
    AlgElem s = lmul_E(cache.back());
    s += AlgElem::monomial({kk - 1, 2, 0}, -(qq * qp(2 * (kk - 1))));
    s += AlgElem::monomial({kk - 1, -2, 0}, qq * qp(-2 * (kk - 1)));
    cache.push_back(s);
  }
  return cache[static_cast<size_t>(k)];
}

// left multiplication by a single Fbar
AlgElem lmul_F(const AlgElem& a) {
  AlgElem r;
  for (const auto& [t, c] : a.terms()) {
    // Fbar (Ebar^e L_mu Fbar^f) = straighten_FE(e) L_mu Fbar^f
    for (const auto& [s, cs] : straighten_FE(t.e).terms()) {
      // Ebar^a L_p Fbar^b L_mu Fbar^f = q^{b mu} Ebar^a L_{p+mu} Fbar^{b+f}
      PbwTerm t2{s.e, s.mu + t.mu, s.f + t.f};
      r += AlgElem::monomial(t2, c * cs * qp(s.f * t.mu));
    }
  }
  return r;
}

}  // namespace

AlgElem multiply(const AlgElem& a, const AlgElem& b) {
  AlgElem out;
  for (const auto& [t, c] : a.terms()) {
    AlgElem acc = b;
    for (long i = 0; i < t.f; ++i) acc = lmul_F(acc);
    if (t.mu != 0) acc = lmul_L(t.mu, acc);
    for (long i = 0; i < t.e; ++i) acc = lmul_E(acc);
    out += acc * c;
  }
  return out;
}

AlgElem power(const AlgElem& a, long n) {
  AlgElem r = AlgElem::one();
  for (long i = 0; i < n; ++i) r = multiply(r, a);
  return r;
}

AlgElem commutator(const AlgElem& a, const AlgElem& b) {
  return multiply(a, b) - multiply(b, a);
}

// ---------------------------------------------------------------------------
// TensorElem

TensorElem TensorElem::tensor(const AlgElem& a, const AlgElem& b) {
  TensorElem r;
  for (const auto& [ta, ca] : a.terms())
    for (const auto& [tb, cb] : b.terms()) r.add_term({ta, tb}, ca * cb);
  return r;
}

void TensorElem::add_term(const Key& t, const RatFuncQ& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(t, c);
  if (!fresh) {
    it->second = it->second + c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

TensorElem TensorElem::operator-() const {
  TensorElem r;
  for (const auto& [t, c] : terms_) r.terms_.emplace(t, -c);
  return r;
}

TensorElem TensorElem::operator+(const TensorElem& o) const {
  TensorElem r = *this;
  for (const auto& [t, c] : o.terms_) r.add_term(t, c);
  return r;
}

TensorElem TensorElem::operator-(const TensorElem& o) const { return *this + (-o); }

std::string TensorElem::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  auto mono = [](const PbwTerm& p) {
    std::ostringstream m;
    if (p.e) m << "E^" << p.e << " ";
    if (p.mu) m << "L" << p.mu << " ";
    if (p.f) m << "F^" << p.f << " ";
    std::string s = m.str();
    return s.empty() ? std::string("1 ") : s;
  };
  for (const auto& [t, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << "(" << c.str() << ") " << mono(t.first) << "(x) " << mono(t.second);
  }
  return os.str();
}

TensorElem multiply(const TensorElem& a, const TensorElem& b) {
  TensorElem out;
  for (const auto& [ta, ca] : a.terms())
    for (const auto& [tb, cb] : b.terms()) {
      AlgElem left = multiply(AlgElem::monomial(ta.first, RatFuncQ(1)),
                              AlgElem::monomial(tb.first, RatFuncQ(1)));
      AlgElem right = multiply(AlgElem::monomial(ta.second, RatFuncQ(1)),
                               AlgElem::monomial(tb.second, RatFuncQ(1)));
      RatFuncQ c = ca * cb;
      for (const auto& [tl, cl] : left.terms())
        for (const auto& [tr, cr] : right.terms()) out.add_term({tl, tr}, c * cl * cr);
    }
  return out;
}

TensorElem power(const TensorElem& a, long n) {
  TensorElem r = TensorElem::tensor(AlgElem::one(), AlgElem::one());
  for (long i = 0; i < n; ++i) r = multiply(r, a);
  return r;
}

// ---------------------------------------------------------------------------
// Hopf structure

TensorElem coproduct(const AlgElem& a) {
  TensorElem dE = TensorElem::tensor(AlgElem::Eb(), AlgElem::one()) +
                  TensorElem::tensor(AlgElem::L(2), AlgElem::Eb());
  TensorElem dF = TensorElem::tensor(AlgElem::Fb(), AlgElem::L(-2)) +
                  TensorElem::tensor(AlgElem::one(), AlgElem::Fb());
  TensorElem out;
  for (const auto& [t, c] : a.terms()) {
    TensorElem acc = TensorElem::tensor(AlgElem::L(t.mu), AlgElem::L(t.mu));
    for (long i = 0; i < t.e; ++i) acc = multiply(dE, acc);
    for (long i = 0; i < t.f; ++i) acc = multiply(acc, dF);
    for (const auto& [k, v] : acc.terms()) out.add_term(k, v * c);
  }
  return out;
}

RatFuncQ counit(const AlgElem& a) {
  RatFuncQ r(0);
  for (const auto& [t, c] : a.terms())
    if (t.e == 0 && t.f == 0) r += c;
  return r;
}

AlgElem antipode(const AlgElem& a) {
  // anti-homomorphism: S(E^k L F^m) = S(F)^m S(L) S(E)^k
  AlgElem sE = multiply(AlgElem::L(-2), AlgElem::Eb()) * RatFuncQ(-1);
  AlgElem sF = multiply(AlgElem::Fb(), AlgElem::L(2)) * RatFuncQ(-1);
  AlgElem out;
  for (const auto& [t, c] : a.terms()) {
    AlgElem acc = AlgElem::one();
    for (long i = 0; i < t.f; ++i) acc = multiply(acc, sF);
    acc = multiply(acc, AlgElem::L(-t.mu));
    for (long i = 0; i < t.e; ++i) acc = multiply(acc, sE);
    out += acc * c;
  }
  return out;
}

AlgElem contract_product(const TensorElem& t) {
  AlgElem out;
  for (const auto& [k, c] : t.terms())
    out += multiply(AlgElem::monomial(k.first, RatFuncQ(1)),
                    AlgElem::monomial(k.second, RatFuncQ(1))) *
           c;
  return out;
}

TensorElem map_first(const TensorElem& t, AlgElem (*f)(const AlgElem&)) {
  TensorElem out;
  for (const auto& [k, c] : t.terms()) {
    AlgElem img = f(AlgElem::monomial(k.first, RatFuncQ(1)));
    out = out + TensorElem::tensor(img, AlgElem::monomial(k.second, c));
  }
  return out;
}

AlgElem braid_T(const AlgElem& a, BraidDir dir) {
  AlgElem tE, tF;
  if (dir == BraidDir::fwd) {
    tE = multiply(AlgElem::Fb(), AlgElem::L(2)) * RatFuncQ(-1);
    tF = multiply(AlgElem::L(-2), AlgElem::Eb()) * RatFuncQ(-1);
  } else {
    tE = multiply(AlgElem::Fb(), AlgElem::L(-2)) * (-RatFuncQ::q_power(2));
    tF = multiply(AlgElem::Eb(), AlgElem::L(2)) * RatFuncQ(-1);
  }
  AlgElem out;
  for (const auto& [t, c] : a.terms()) {
    AlgElem acc = AlgElem::one();
    for (long i = 0; i < t.e; ++i) acc = multiply(acc, tE);
    acc = multiply(acc, AlgElem::L(-t.mu));
    for (long i = 0; i < t.f; ++i) acc = multiply(acc, tF);
    out += acc * c;
  }
  return out;
}

AlgElem casimir() {
  return multiply(AlgElem::Fb(), AlgElem::Eb()) + AlgElem::L(2) * RatFuncQ::q_power(1) +
         AlgElem::L(-2) * RatFuncQ::q_power(-1);
}

bool vanishes_at_root(const AlgElem& a, long ell) {
  for (const auto& [t, c] : a.terms())
    if (!specialize(c, ell).is_zero()) return false;
  return true;
}

bool vanishes_at_root(const TensorElem& a, long ell) {
  for (const auto& [t, c] : a.terms())
    if (!specialize(c, ell).is_zero()) return false;
  return true;
}

bool CentralityReport::all_pass() const {
  for (const auto& item : items)
    if (!item.exact_zero) return false;
  return true;
}

CentralityReport central_power_check(long ell) {
  if (ell < 3 || ell % 2 == 0)
    throw std::domain_error("central_power_check: ell must be odd and >= 3");
  CentralityReport rep;
  rep.ell = ell;
  AlgElem El = power(AlgElem::Eb(), ell);
  AlgElem Fl = power(AlgElem::Fb(), ell);
  AlgElem Ll = AlgElem::L(ell);  // L_omega^ell
  struct Gen {
    const char* name;
    AlgElem value;
  };
  std::vector<Gen> gens = {{"Eb", AlgElem::Eb()}, {"Fb", AlgElem::Fb()}, {"Lw", AlgElem::L(1)}};
  auto push = [&](const std::string& name, bool ok) { rep.items.push_back({name, ok}); };
  for (const auto& g : gens) {
    push("[Eb^l, " + std::string(g.name) + "]", vanishes_at_root(commutator(El, g.value), ell));
    push("[Fb^l, " + std::string(g.name) + "]", vanishes_at_root(commutator(Fl, g.value), ell));
    push("[Lw^l, " + std::string(g.name) + "]", vanishes_at_root(commutator(Ll, g.value), ell));
  }
  TensorElem dEl = power(coproduct(AlgElem::Eb()), ell);
  TensorElem target = TensorElem::tensor(El, AlgElem::one()) +
                      TensorElem::tensor(AlgElem::L(2 * ell), El);
  push("Delta(Eb^l) primitive", vanishes_at_root(dEl - target, ell));
  TensorElem dFl = power(coproduct(AlgElem::Fb()), ell);
  TensorElem targetF = TensorElem::tensor(Fl, AlgElem::L(-2 * ell)) +
                       TensorElem::tensor(AlgElem::one(), Fl);
  push("Delta(Fb^l) primitive", vanishes_at_root(dFl - targetF, ell));
  return rep;
}

}  // namespace qholo

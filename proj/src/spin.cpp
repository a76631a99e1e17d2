#include "spinlab/spin.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include "spinlab/lattice.hpp"

namespace spinlab {
namespace {

uint64_t mulmod_u(uint64_t a, uint64_t b, uint64_t p) {
  return (uint64_t)((unsigned __int128)a * b % p);
}

uint64_t powmod_u(uint64_t a, uint64_t e, uint64_t p) {
  uint64_t r = 1 % p;
  a %= p;
  while (e) {
    if (e & 1) r = mulmod_u(r, a, p);
    a = mulmod_u(a, a, p);
    e >>= 1;
  }
  return r;
}

uint64_t invmod_u(uint64_t a, uint64_t p) { return powmod_u(a, p - 2, p); }

// dense polynomials over F_p, little-endian, no leading zeros
using PolyP = std::vector<uint64_t>;

void ptrim(PolyP& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP pmul(const PolyP& a, const PolyP& b, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  PolyP c(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      c[i + j] = (c[i + j] + (unsigned __int128)a[i] * b[j]) % p;
  ptrim(c);
  return c;
}

// divisor monic
std::pair<PolyP, PolyP> pdivmod(PolyP a, const PolyP& b, uint64_t p) {
  assert(!b.empty() && b.back() == 1);
  if (a.size() < b.size()) return {{}, std::move(a)};
  PolyP q(a.size() - b.size() + 1, 0);
  for (size_t qi = q.size(); qi-- > 0;) {
    uint64_t c = a[qi + b.size() - 1];
    if (!c) continue;
    q[qi] = c;
    for (size_t j = 0; j < b.size(); ++j)
      a[qi + j] = (a[qi + j] + p - mulmod_u(c, b[j], p)) % p;
  }
  ptrim(a);
  ptrim(q);
  return {std::move(q), std::move(a)};
}

PolyP pmonic(PolyP a, uint64_t p) {
  ptrim(a);
  if (a.empty() || a.back() == 1) return a;
  uint64_t inv = invmod_u(a.back(), p);
  for (auto& c : a) c = mulmod_u(c, inv, p);
  return a;
}

PolyP pgcd(PolyP a, PolyP b, uint64_t p) {
  a = pmonic(std::move(a), p);
  b = pmonic(std::move(b), p);
  while (!b.empty()) {
    PolyP r = pdivmod(std::move(a), b, p).second;
    a = std::move(b);
    b = pmonic(std::move(r), p);
  }
  return a;
}

PolyP ppowmod(PolyP base, uint64_t e, const PolyP& mod, uint64_t p) {
  base = pdivmod(std::move(base), mod, p).second;
  PolyP r{1};
  while (e) {
    if (e & 1) r = pdivmod(pmul(r, base, p), mod, p).second;
    base = pdivmod(pmul(base, base, p), mod, p).second;
    e >>= 1;
  }
  return r;
}

// f monic, squarefree, product of linear factors; Cantor-Zassenhaus
std::vector<uint64_t> split_roots(const PolyP& f, uint64_t p,
                                  std::mt19937_64& rng) {
  std::vector<uint64_t> out;
  std::vector<PolyP> stack{f};
  while (!stack.empty()) {
    PolyP g = std::move(stack.back());
    stack.pop_back();
    if (g.size() <= 1) continue;
    if (g.size() == 2) {
      out.push_back((p - g[0] % p) % p);
      continue;
    }
    for (;;) {
      uint64_t a = rng() % p;
      PolyP h = ppowmod(PolyP{a, 1}, (p - 1) / 2, g, p);
      if (h.empty())
        h = {p - 1};
      else {
        h[0] = (h[0] + p - 1) % p;
        ptrim(h);
      }
      PolyP d = pgcd(std::move(h), g, p);
      if (d.size() > 1 && d.size() < g.size()) {
        auto qr = pdivmod(std::move(g), d, p);
        assert(qr.second.empty());
        stack.push_back(std::move(d));
        stack.push_back(std::move(qr.first));
        break;
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

ZMat trace_form(const CyclicField& f) {
  int n = f.params.n;
  long off = (f.params.ell - 1) / n;
  ZMat G(n, std::vector<mpz_class>(n, mpz_class(-off)));
  for (int i = 0; i < n; ++i) G[i][i] = f.params.ell - off;
  return G;
}

FieldElement basis_el(int n, int i) {
  FieldElement e{std::vector<mpz_class>(n, 0)};
  e.c[i] = 1;
  return e;
}

mpz_class abs_norm(const CyclicField& f, const FieldElement& x) {
  mpz_class v = norm(f, x);
  return v < 0 ? mpz_class(-v) : v;
}

}  // namespace

int frobenius_degree(const FieldParams& params, long p) {
  if (p < 3 || p % 2 == 0 || p % params.ell == 0)
    throw BadPrime("p divides 2*ell or is not an odd prime");
  uint64_t t = powmod_u((uint64_t)(p % params.ell),
                        (uint64_t)((params.ell - 1) / params.n),
                        (uint64_t)params.ell);
  return t == 1 ? 1 : params.n;
}

std::vector<long> minpoly_roots_mod_p(const CyclicField& f, long p) {
  if (frobenius_degree(f.params, p) != 1)
    throw BadPrime("period polynomial does not split mod p");
  int n = f.params.n;
  uint64_t up = (uint64_t)p;
  PolyP fp(f.period_minpoly.size());
  for (size_t i = 0; i < fp.size(); ++i)
    fp[i] = mpz_fdiv_ui(f.period_minpoly[i].get_mpz_t(), up);
  assert(fp.back() == 1);
  PolyP der(fp.size() - 1);
  for (size_t i = 1; i < fp.size(); ++i)
    der[i - 1] = mulmod_u(fp[i], i % up, up);
  ptrim(der);
  if (pgcd(fp, std::move(der), up).size() != 1)
    throw BadPrime("period polynomial is not squarefree mod p");
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull ^ (uint64_t)p);
  auto roots = split_roots(fp, up, rng);
  if ((int)roots.size() != n)
    throw BadPrime("period polynomial does not split into linear factors");
  std::vector<long> out(roots.begin(), roots.end());
  return out;
}

std::vector<IdealDescriptor> primes_above(const CyclicField& f, long p) {
  int n = f.params.n;
  uint64_t up = (uint64_t)p;
  for (const auto& row : f.interp)
    for (const auto& q : row)
      if (mpz_divisible_ui_p(q.get_den().get_mpz_t(), (unsigned long)p))
        throw DenominatorClash("p divides an interpolation denominator");
  auto roots = minpoly_roots_mod_p(f, p);

  // Vieta: sum of roots = -a_{n-1}, product = -a_0 for odd n
  uint64_t s = 0, pr = 1;
  for (long r : roots) {
    s = (s + (uint64_t)r) % up;
    pr = mulmod_u(pr, (uint64_t)r, up);
  }
  uint64_t an1 = mpz_fdiv_ui(f.period_minpoly[n - 1].get_mpz_t(), up);
  uint64_t a0 = mpz_fdiv_ui(f.period_minpoly[0].get_mpz_t(), up);
  assert(s == (up - an1) % up);
  assert(pr == (up - a0) % up);

  std::vector<IdealDescriptor> out;
  for (long r : roots) {
    IdealDescriptor d;
    d.p = p;
    d.root = r;
    d.vals.resize(n);
    for (int i = 0; i < n; ++i) {
      // Horner over F_p with rational coefficients
      uint64_t acc = 0;
      const auto& poly = f.interp[i];
      for (size_t k = poly.size(); k-- > 0;) {
        uint64_t num = mpz_fdiv_ui(poly[k].get_num().get_mpz_t(), up);
        uint64_t den = mpz_fdiv_ui(poly[k].get_den().get_mpz_t(), up);
        uint64_t c = mulmod_u(num, invmod_u(den, up), up);
        acc = (mulmod_u(acc, (uint64_t)r, up) + c) % up;
      }
      d.vals[i] = (long)acc;
    }
    assert(d.vals[0] == r);
    // reduction respects the period products
    for (int j = 0; j < std::min(n, 2); ++j) {
      uint64_t lhs = mulmod_u((uint64_t)d.vals[0], (uint64_t)d.vals[j], up);
      uint64_t rhs = 0;
      for (int k = 0; k < n; ++k) {
        long t = f.mult_table[0][j][k] % p;
        if (t < 0) t += p;
        rhs = (rhs + mulmod_u((uint64_t)t, (uint64_t)d.vals[k], up)) % up;
      }
      assert(lhs == rhs);
    }
    uint64_t vs = 0;
    for (long v : d.vals) vs = (vs + (uint64_t)v) % up;
    assert(vs == up - 1);  // sum of periods is -1
    out.push_back(std::move(d));
  }
  return out;
}

FieldElement ideal_generator(const CyclicField& f, const IdealDescriptor& d,
                             int h) {
  int n = f.params.n;
  assert(h >= 1);
  mpz_class p(d.p);

  // Z-module generators of (p, eta_0 - r)^h
  FieldElement tmr{std::vector<mpz_class>(n, mpz_class(d.root))};
  tmr.c[0] += 1;  // eta_0 - r = eta_0 + r*(sum eta_i)
  ZMat rows;
  FieldElement pw_a = f.unity;
  for (int a = 0; a <= h; ++a) {
    mpz_class pw;
    mpz_pow_ui(pw.get_mpz_t(), p.get_mpz_t(), (unsigned long)(h - a));
    for (int i = 0; i < n; ++i) {
      FieldElement prod = mul(f, pw_a, basis_el(n, i));
      std::vector<mpz_class> row(n);
      for (int k = 0; k < n; ++k) row[k] = pw * prod.c[k];
      rows.push_back(std::move(row));
    }
    if (a < h) pw_a = mul(f, pw_a, tmr);
  }
  ZMat B = hnf_rows(std::move(rows));
  mpz_class idx = 1, ph;
  for (int i = 0; i < n; ++i) idx *= B[i][i];
  mpz_pow_ui(ph.get_mpz_t(), p.get_mpz_t(), (unsigned long)h);
  assert(idx == ph);

  ZMat G0 = trace_form(f);
  lll_reduce(B, G0);
  ZMat gram(n, std::vector<mpz_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      mpz_class s = 0;
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += B[i][k] * G0[k][l] * B[j][l];
      gram[i][j] = s;
    }

  // AM-GM: Trace(x^2) >= n * p^(2h/n) for any generator; search by growing
  // radius, giving up only past the 64*n*p^(2h/n) cap doubled six times
  mpz_class p2h, base;
  mpz_pow_ui(p2h.get_mpz_t(), p.get_mpz_t(), (unsigned long)(2 * h));
  mpz_root(base.get_mpz_t(), p2h.get_mpz_t(), (unsigned long)n);
  mpz_class chk;
  mpz_pow_ui(chk.get_mpz_t(), base.get_mpz_t(), (unsigned long)n);
  if (chk < p2h) base += 1;
  mpz_class cap = 64 * n * base;
  for (int c = 0; c < 6; ++c) cap *= 2;
  for (mpz_class bound = 4 * n * base; bound <= cap; bound *= 2) {
    auto cands = enumerate_short(gram, bound);
    for (const auto& [q, x] : cands) {
      FieldElement alpha{std::vector<mpz_class>(n, 0)};
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) alpha.c[k] += x[i] * B[i][k];
      if (abs_norm(f, alpha) == ph) return alpha;
    }
  }
  throw EnumerationExhausted("no generator of norm p^h within the radius cap");
}

uint32_t signature_bits(const CyclicField& f, const FieldElement& x) {
  std::vector<int> sig = signature(f, x);
  uint32_t bits = 0;
  for (size_t t = 0; t < sig.size(); ++t)
    if (sig[t] < 0) bits |= 1u << t;
  return bits;
}

UnitBasis unit_basis(const CyclicField& f, long search_radius) {
  int n = f.params.n;
  ZMat G0 = trace_form(f);
  UnitBasis ub;
  // leading-bit echelon of the collected signature columns
  std::vector<uint32_t> lead(n, 0);
  int rank = 0;
  auto try_add = [&](uint32_t v) {
    while (v) {
      int b = 31 - __builtin_clz(v);
      if (!lead[b]) {
        lead[b] = v;
        ++rank;
        return true;
      }
      v ^= lead[b];
    }
    return false;
  };
  ub.units.push_back(neg(f.unity));  // -1, all-negative signature
  ub.sig_cols.push_back((1u << n) - 1);
  try_add((1u << n) - 1);

  mpz_class radius = search_radius > 0 ? search_radius : 2L * n;
  for (int attempt = 0; attempt < 11; ++attempt) {
    auto cands = enumerate_short(G0, radius);
    for (const auto& [q, x] : cands) {
      FieldElement u{std::vector<mpz_class>(n)};
      for (int i = 0; i < n; ++i) u.c[i] = x[i];
      if (abs_norm(f, u) != 1) continue;
      uint32_t col = signature_bits(f, u);
      if (try_add(col)) {
        ub.units.push_back(u);
        ub.sig_cols.push_back(col);
      }
      if (rank == n) return ub;
    }
    if (rank == n) return ub;
    radius *= 2;
  }
  throw SignatureSpanFailure("unit signatures do not span within the radius cap");
}

FieldElement make_totally_positive(const CyclicField& f, const FieldElement& x,
                                   const UnitBasis& ub) {
  if (is_zero(x)) throw ZeroElement();
  uint32_t target = signature_bits(f, x);
  if (target == 0) {
    assert(is_totally_positive(f, x));
    return x;
  }
  size_t m = ub.units.size();
  int n = f.params.n;
  assert(m <= 32);
  // leading-bit echelon of the columns, tracking which units built each row
  std::vector<uint32_t> lead_v(n, 0), lead_m(n, 0);
  for (size_t j = 0; j < m; ++j) {
    uint32_t v = ub.sig_cols[j], sel = 1u << j;
    while (v) {
      int b = 31 - __builtin_clz(v);
      if (!lead_v[b]) {
        lead_v[b] = v;
        lead_m[b] = sel;
        break;
      }
      v ^= lead_v[b];
      sel ^= lead_m[b];
    }
  }
  uint32_t sel = 0;
  while (target) {
    int b = 31 - __builtin_clz(target);
    if (!lead_v[b])
      throw UnreachableSignature("unit signatures cannot fix this sign pattern");
    target ^= lead_v[b];
    sel ^= lead_m[b];
  }
  FieldElement y = x;
  for (size_t j = 0; j < m; ++j)
    if ((sel >> j) & 1) y = mul(f, y, ub.units[j]);
  assert(signature_bits(f, y) == 0);
  assert(is_totally_positive(f, y));
  return y;
}

int spin_at(const CyclicField& f, const FieldElement& alpha,
            const IdealDescriptor& d, int j) {
  int n = f.params.n;
  assert(1 <= j && j < n);
  uint64_t p = (uint64_t)d.p;
  uint64_t acc = 0;
  for (int i = 0; i < n; ++i) {
    uint64_t ai = mpz_fdiv_ui(alpha.c[i].get_mpz_t(), p);
    int idx = ((i - j) % n + n) % n;
    acc = (acc + mulmod_u(ai, (uint64_t)d.vals[idx], p)) % p;
  }
  if (acc == 0) throw NonUnitResidue("generator vanishes at a conjugate prime");
  return powmod_u(acc, (p - 1) / 2, p) == 1 ? 1 : -1;
}

std::vector<long> primes_up_to(long bound) {
  std::vector<long> out;
  if (bound < 2) return out;
  std::vector<uint8_t> sieve(bound + 1, 1);
  sieve[0] = sieve[1] = 0;
  for (long i = 2; i * i <= bound; ++i)
    if (sieve[i])
      for (long k = i * i; k <= bound; k += i) sieve[k] = 0;
  for (long i = 2; i <= bound; ++i)
    if (sieve[i]) out.push_back(i);
  return out;
}

namespace {

PrimeRecord inert_record(const CyclicField& f, const Ring8& r,
                         const GramMatrix& g, long p, int h) {
  int n = f.params.n;
  PrimeRecord rec;
  rec.p = p;
  rec.f = n;
  mpz_class ph;
  mpz_pow_ui(ph.get_mpz_t(), mpz_class(p).get_mpz_t(), (unsigned long)h);
  rec.generator = from_int(f, ph);
  SquareClassM4 cls = class_of(r, reduce(r, rec.generator));
  rec.class_bits = cls.bits;
  uint32_t allones = (1u << n) - 1;
  assert(cls.bits == 0 || cls.bits == allones);
  rec.star = star_of_class(r, cls, g);
  // star on a rational class only sees the sign of p^h mod 4
  assert(rec.star == (mpz_fdiv_ui(ph.get_mpz_t(), 4) == 1 ? 1 : -1));
  return rec;
}

PrimeRecord split_record(const CyclicField& f, const Ring8& r,
                         const GramMatrix& g, const UnitBasis& ub, long p,
                         int h) {
  int n = f.params.n;
  PrimeRecord rec;
  rec.p = p;
  rec.f = 1;
  auto descs = primes_above(f, p);
  const IdealDescriptor& d = descs[0];
  FieldElement alpha = make_totally_positive(f, ideal_generator(f, d, h), ub);
  rec.generator = alpha;
  Ring8Element am = reduce(r, alpha);
  SquareClassM4 cls = class_of(r, am);
  rec.class_bits = cls.bits;
  rec.star = star_of_class(r, cls, g);
  rec.spins.resize(n - 1);
  for (int j = 1; j < n; ++j) rec.spins[j - 1] = spin_at(f, alpha, d, j);

  UnitSquareClass8 ca = coords8(r, am);
  bool all_products_pos = true;
  for (int j = 1; j < n; ++j) {
    UnitSquareClass8 cj = coords8(r, reduce(r, galois_apply(f, alpha, j)));
    int sym = symbol_classes(g, ca, cj);
    if (rec.spins[j - 1] * rec.spins[n - 1 - j] != sym) rec.flagship_ok = false;
    if (sym == -1) all_products_pos = false;
  }
  rec.star_matches_spins = (rec.star == 1) == all_products_pos;
  return rec;
}

}  // namespace

SampleStats sample(const CyclicField& f, const Ring8& r, const GramMatrix& g,
                   const UnitBasis& ub, const SampleConfig& cfg,
                   const std::function<void(const PrimeRecord&)>& sink) {
  int n = f.params.n;
  std::vector<long> ps;
  for (long p : primes_up_to(cfg.bound))
    if (p != 2 && p != f.params.ell) ps.push_back(p);

  struct Slot {
    bool ok = false;
    PrimeRecord rec;
    SkippedPrime skip;
  };
  std::vector<Slot> slots(ps.size());
  int jobs = std::max(1, cfg.jobs);
  std::atomic<size_t> next{0};
  std::exception_ptr fail;
  std::mutex fail_mu;
  const size_t chunk = 64;

  auto work = [&]() {
    for (;;) {
      size_t lo = next.fetch_add(chunk);
      if (lo >= ps.size()) return;
      size_t hi = std::min(ps.size(), lo + chunk);
      for (size_t i = lo; i < hi; ++i) {
        long p = ps[i];
        try {
          try {
            slots[i].rec = frobenius_degree(f.params, p) == 1
                               ? split_record(f, r, g, ub, p, cfg.h)
                               : inert_record(f, r, g, p, cfg.h);
            slots[i].ok = true;
          } catch (const DenominatorClash& e) {
            slots[i].skip = {p, e.what()};
          } catch (const EnumerationExhausted& e) {
            slots[i].skip = {p, e.what()};
          } catch (const NonUnitResidue& e) {
            slots[i].skip = {p, e.what()};
          } catch (const BadPrime& e) {
            slots[i].skip = {p, e.what()};
          }
        } catch (...) {
          std::lock_guard<std::mutex> lk(fail_mu);
          if (!fail) fail = std::current_exception();
          return;
        }
      }
    }
  };

  if (jobs == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (fail) std::rethrow_exception(fail);

  SampleStats st;
  st.class_counts.assign(size_t(1) << n, 0);
  for (size_t i = 0; i < ps.size(); ++i) {
    ++st.total;
    if (!slots[i].ok) {
      st.skipped.push_back(slots[i].skip);
      continue;
    }
    const PrimeRecord& rec = slots[i].rec;
    if (rec.f == 1) {
      ++st.split;
      ++st.class_counts[rec.class_bits];
      if (rec.star == 1) ++st.star_pos_split;
      bool all_pos = true;
      for (int s : rec.spins)
        if (s != 1) all_pos = false;
      if (all_pos) ++st.all_spins_pos_split;
      if (!rec.flagship_ok) ++st.flagship_violations;
      if (!rec.star_matches_spins) ++st.star_spin_mismatches;
    } else {
      ++st.inert;
      if (rec.star == 1) ++st.star_pos_inert;
    }
    if (rec.star == 1) ++st.star_pos_all;
    sink(rec);
  }
  if (1000 * st.skipped.size() > (size_t)st.total)
    throw ValidationFailed("more than 0.1% of sampled primes were skipped");
  return st;
}

}  // namespace spinlab

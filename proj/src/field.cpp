#include "spinlab/field.hpp"

#include <mpfr.h>

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <string>

#include "spinlab/lattice.hpp"

namespace spinlab {
namespace {

bool is_prime(long m) {
  if (m < 2) return false;
  mpz_class z(m);
  return mpz_probab_prime_p(z.get_mpz_t(), 32) != 0;
}

long powmod(long b, long e, long m) {
  mpz_class r;
  mpz_class bb(b), mm(m);
  mpz_powm_ui(r.get_mpz_t(), bb.get_mpz_t(), (unsigned long)e, mm.get_mpz_t());
  return r.get_si();
}

std::vector<long> prime_factors(long m) {
  std::vector<long> out;
  for (long q = 2; q * q <= m; ++q) {
    if (m % q == 0) {
      out.push_back(q);
      while (m % q == 0) m /= q;
    }
  }
  if (m > 1) out.push_back(m);
  return out;
}

long smallest_primitive_root(long ell) {
  auto qs = prime_factors(ell - 1);
  for (long g = 2; g < ell; ++g) {
    bool ok = true;
    for (long q : qs)
      if (powmod(g, (ell - 1) / q, ell) == 1) {
        ok = false;
        break;
      }
    if (ok) return g;
  }
  assert(false && "no primitive root mod a prime");
  return 0;
}

using Poly = std::vector<mpq_class>;  // index = power

Poly to_q(const std::vector<mpz_class>& p) {
  Poly out(p.size());
  for (size_t i = 0; i < p.size(); ++i) out[i] = p[i];
  return out;
}

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly out;
  for (size_t i = 1; i < p.size(); ++i) out.push_back(mpq_class(long(i)) * p[i]);
  trim(out);
  return out;
}

// remainder of a by b, b nonzero
Poly poly_rem(Poly a, const Poly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    mpq_class q = a.back() / b.back();
    size_t off = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[off + i] -= q * b[i];
    trim(a);
  }
  return a;
}

int sign_at_plus_inf(const Poly& p) { return sgn(p.back()); }
int sign_at_minus_inf(const Poly& p) {
  int s = sgn(p.back());
  return ((p.size() - 1) % 2) ? -s : s;
}

// number of distinct real roots of a squarefree polynomial
int sturm_real_root_count(const Poly& f) {
  std::vector<Poly> chain{f, derivative(f)};
  while (chain.back().size() > 1) {
    Poly r = poly_rem(chain[chain.size() - 2], chain.back());
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    chain.push_back(r);
  }
  auto variations = [&chain](bool at_plus) {
    int v = 0, prev = 0;
    for (const auto& p : chain) {
      if (p.empty()) continue;
      int s = at_plus ? sign_at_plus_inf(p) : sign_at_minus_inf(p);
      if (s != 0 && prev != 0 && s != prev) ++v;
      if (s != 0) prev = s;
    }
    return v;
  };
  return variations(false) - variations(true);
}

bool squarefree(const Poly& f) {
  // gcd(f, f') constant via Euclid
  Poly a = f, b = derivative(f);
  while (!b.empty() && b.size() > 1) {
    Poly r = poly_rem(a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return b.size() == 1 || (b.empty() && a.size() == 1);
}

ZMat mult_matrix(const CyclicField& f, const FieldElement& x) {
  int n = f.params.n;
  ZMat m(n, std::vector<mpz_class>(n));
  for (int j = 0; j < n; ++j) {
    FieldElement ej{std::vector<mpz_class>(n)};
    ej.c[j] = 1;
    FieldElement col = mul(f, x, ej);
    for (int i = 0; i < n; ++i) m[i][j] = col.c[i];
  }
  return m;
}

struct Real {
  mpfr_t v;
  explicit Real(int prec) { mpfr_init2(v, prec); }
  Real(const Real&) = delete;
  ~Real() { mpfr_clear(v); }
};

// One embedding row at the given precision: values[t] approximates the numeric
// value of eta_t, |error| <= err for every t.
void period_values(const CyclicField& f, int prec, std::vector<Real*>& values,
                   mpfr_t err) {
  long ell = f.params.ell;
  int n = f.params.n;
  Real two_pi(prec), theta(prec), c(prec);
  mpfr_const_pi(two_pi.v, MPFR_RNDN);
  mpfr_mul_ui(two_pi.v, two_pi.v, 2, MPFR_RNDN);
  for (int t = 0; t < n; ++t) mpfr_set_zero(values[t]->v, 1);
  // eta_t = sum over h in H of cos pairs; -1 in H since (ell-1)/n is even,
  // so each h < ell/2 contributes 2 cos(2 pi g^t h / ell)
  for (int t = 0; t < n; ++t) {
    long gt = powmod(f.g, t, ell);
    for (long h : f.H) {
      long k = (long)((__int128)gt * h % ell);
      if (2 * k > ell) continue;
      mpfr_mul_ui(theta.v, two_pi.v, (unsigned long)k, MPFR_RNDN);
      mpfr_div_ui(theta.v, theta.v, (unsigned long)ell, MPFR_RNDN);
      mpfr_cos(c.v, theta.v, MPFR_RNDN);
      mpfr_mul_ui(c.v, c.v, 2, MPFR_RNDN);
      mpfr_add(values[t]->v, values[t]->v, c.v, MPFR_RNDN);
    }
  }
  // crude rigorous envelope: each of the <= (ell-1)/(2n) doubled cosines
  // carries rounding error below 2^(7-prec), accumulation included
  mpfr_set_ui_2exp(err, (unsigned long)((ell - 1) / (2 * f.params.n) + 1), 8 - prec,
                   MPFR_RNDU);
}

}  // namespace

int max_precision() {
  if (const char* s = std::getenv("SPINLAB_MAX_PRECISION")) {
    int v = std::atoi(s);
    if (v >= 64) return v;
  }
  return 4096;
}

CyclicField build_field(const FieldParams& params) {
  long n = params.n, ell = params.ell;
  if (n < 3 || !is_prime(n)) throw ParamError("n must be an odd prime >= 3");
  if (ell < 3 || !is_prime(ell)) throw ParamError("ell must be an odd prime");
  if ((ell - 1) % n != 0) throw ParamError("n does not divide ell-1");
  if (powmod(2, (ell - 1) / n, ell) == 1)
    throw ParamError("2 is not inert: 2^((ell-1)/n) = 1 mod ell");
  if (params.h <= 0 || params.h % 2 == 0)
    throw ParamError("h must be a positive odd integer");

  CyclicField f;
  f.params = params;
  f.g = smallest_primitive_root(ell);

  long m = (ell - 1) / n;
  for (long k = 0, v = 1; k < m; ++k, v = (long)((__int128)v * powmod(f.g, n, ell) % ell))
    f.H.push_back(v);
  std::sort(f.H.begin(), f.H.end());

  f.coset_table.assign(ell, -1);
  std::vector<long> gpow(n);
  for (int i = 0; i < n; ++i) gpow[i] = powmod(f.g, i, ell);
  for (int i = 0; i < n; ++i)
    for (long h : f.H) f.coset_table[(long)((__int128)gpow[i] * h % ell)] = i;

  f.mult_table.assign(n, std::vector<std::vector<long>>(n, std::vector<long>(n, 0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto& row = f.mult_table[i][j];
      long zeros = 0;
      for (long h : f.H) {
        long s = (gpow[i] + (long)((__int128)gpow[j] * h % ell)) % ell;
        if (s == 0)
          ++zeros;
        else
          ++row[f.coset_table[s]];
      }
      // constant term zeros*|H| re-expressed via 1 = -sum eta_k
      for (int k = 0; k < n; ++k) row[k] -= zeros * (long)f.H.size();
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        assert(f.mult_table[i][j][k] == f.mult_table[j][i][k]);
        assert(f.mult_table[(i + 1) % n][(j + 1) % n][(k + 1) % n] ==
               f.mult_table[i][j][k]);
      }

  f.unity.c.assign(n, mpz_class(-1));

  FieldElement eta0{std::vector<mpz_class>(n)};
  eta0.c[0] = 1;
  f.period_minpoly = char_poly(f, eta0);
  Poly fq = to_q(f.period_minpoly);
  if (!squarefree(fq) || sturm_real_root_count(fq) != n)
    throw ParamError("period polynomial is not separable totally real");

  // interp[i] solves (powers of eta_0) * coeffs = eta_i, exact rationals
  std::vector<std::vector<mpq_class>> pw(n, std::vector<mpq_class>(n));
  FieldElement p = f.unity;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) pw[i][k] = p.c[i];
    p = mul(f, p, eta0);
  }
  f.interp.assign(n, std::vector<mpq_class>(n));
  {
    // one Gaussian elimination, n right-hand sides
    std::vector<std::vector<mpq_class>> a(n, std::vector<mpq_class>(2 * n));
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < n; ++k) a[i][k] = pw[i][k];
      a[i][n + i] = 1;
    }
    for (int col = 0; col < n; ++col) {
      int piv = col;
      while (piv < n && a[piv][col] == 0) ++piv;
      assert(piv < n);
      std::swap(a[piv], a[col]);
      mpq_class inv = 1 / a[col][col];
      for (int k = col; k < 2 * n; ++k) a[col][k] *= inv;
      for (int r = 0; r < n; ++r) {
        if (r == col || a[r][col] == 0) continue;
        mpq_class q = a[r][col];
        for (int k = col; k < 2 * n; ++k) a[r][k] -= q * a[col][k];
      }
    }
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) f.interp[i][k] = a[k][n + i];
  }
  assert(f.interp[0][1] == 1 && f.interp[0][0] == 0);

  f.frob2_shift = f.coset_table[2 % ell];
  return f;
}

FieldElement element(const CyclicField& f, std::vector<long> coords) {
  assert((int)coords.size() == f.params.n);
  FieldElement x;
  for (long v : coords) x.c.emplace_back(v);
  return x;
}

FieldElement from_int(const CyclicField& f, const mpz_class& k) {
  FieldElement x;
  x.c.assign(f.params.n, -k);
  return x;
}

bool is_zero(const FieldElement& x) {
  for (const auto& v : x.c)
    if (v != 0) return false;
  return true;
}

FieldElement add(const FieldElement& x, const FieldElement& y) {
  FieldElement z = x;
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] += y.c[i];
  return z;
}

FieldElement sub(const FieldElement& x, const FieldElement& y) {
  FieldElement z = x;
  for (size_t i = 0; i < z.c.size(); ++i) z.c[i] -= y.c[i];
  return z;
}

FieldElement neg(const FieldElement& x) {
  FieldElement z = x;
  for (auto& v : z.c) v = -v;
  return z;
}

FieldElement scalar_mul(const mpz_class& k, const FieldElement& x) {
  FieldElement z = x;
  for (auto& v : z.c) v *= k;
  return z;
}

FieldElement mul(const CyclicField& f, const FieldElement& x, const FieldElement& y) {
  int n = f.params.n;
  FieldElement z{std::vector<mpz_class>(n)};
  mpz_class prod;
  for (int i = 0; i < n; ++i) {
    if (x.c[i] == 0) continue;
    for (int j = 0; j < n; ++j) {
      if (y.c[j] == 0) continue;
      prod = x.c[i] * y.c[j];
      const auto& row = f.mult_table[i][j];
      for (int k = 0; k < n; ++k)
        if (row[k]) z.c[k] += prod * row[k];
    }
  }
  return z;
}

FieldElement pow_u(const CyclicField& f, const FieldElement& x, unsigned long e) {
  FieldElement acc = neg(f.unity);  // 1
  FieldElement base = x;
  while (e) {
    if (e & 1) acc = mul(f, acc, base);
    e >>= 1;
    if (e) base = mul(f, base, base);
  }
  return acc;
}

FieldElement galois_apply(const CyclicField& f, const FieldElement& x, int j) {
  int n = f.params.n;
  j = ((j % n) + n) % n;
  FieldElement z{std::vector<mpz_class>(n)};
  for (int i = 0; i < n; ++i) z.c[(i + j) % n] = x.c[i];
  return z;
}

std::vector<mpz_class> char_poly(const CyclicField& f, const FieldElement& x) {
  int n = f.params.n;
  ZMat m = mult_matrix(f, x);
  // Faddeev-LeVerrier; every division is exact
  std::vector<mpz_class> coeff(n + 1);
  coeff[n] = 1;
  ZMat mk = m;
  for (int k = 1; k <= n; ++k) {
    mpz_class tr = 0;
    for (int i = 0; i < n; ++i) tr += mk[i][i];
    mpz_class c = -tr / k;
    assert(c * k == -tr);
    coeff[n - k] = c;
    if (k == n) break;
    for (int i = 0; i < n; ++i) mk[i][i] += c;
    ZMat next(n, std::vector<mpz_class>(n, 0));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (m[i][l] == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += m[i][l] * mk[l][j];
      }
    mk = std::move(next);
  }
  return coeff;
}

mpz_class norm(const CyclicField& f, const FieldElement& x) {
  return det(mult_matrix(f, x));
}

mpz_class trace(const CyclicField& f, const FieldElement& x) {
  // Trace(eta_i) = -1 for every i
  mpz_class t = 0;
  for (const auto& v : x.c) t -= v;
  return t;
}

int descartes_positive_roots(const std::vector<mpz_class>& poly) {
  int v = 0, prev = 0;
  for (const auto& c : poly) {
    int s = sgn(c);
    if (s != 0 && prev != 0 && s != prev) ++v;
    if (s != 0) prev = s;
  }
  return v;
}

bool is_totally_positive(const CyclicField& f, const FieldElement& x) {
  if (is_zero(x)) throw ZeroElement();
  auto cp = char_poly(f, x);
  // all roots real: positive roots <=> strictly alternating coefficients
  int n = f.params.n;
  for (int k = 0; k <= n; ++k) {
    int want = ((n - k) % 2) ? -1 : 1;
    if (sgn(cp[k]) != want) return false;
  }
  return true;
}

std::vector<int> signature(const CyclicField& f, const FieldElement& x, int start_prec) {
  if (is_zero(x)) throw ZeroElement();
  int n = f.params.n;
  int maxp = max_precision();
  mpz_class abs_sum = 0;
  for (const auto& v : x.c) abs_sum += abs(v);
  for (int prec = start_prec; prec <= maxp; prec *= 2) {
    std::vector<Real*> vals;
    for (int t = 0; t < n; ++t) vals.push_back(new Real(prec));
    Real err(prec), bound(prec), acc(prec), term(prec);
    period_values(f, prec, vals, err.v);
    // embedding error <= sum |c_i| * err
    mpfr_mul_z(bound.v, err.v, abs_sum.get_mpz_t(), MPFR_RNDU);
    std::vector<int> out(n, 0);
    bool certified = true;
    for (int t = 0; t < n && certified; ++t) {
      mpfr_set_zero(acc.v, 1);
      for (int i = 0; i < n; ++i) {
        mpfr_mul_z(term.v, vals[(i + t) % n]->v, x.c[i].get_mpz_t(), MPFR_RNDN);
        mpfr_add(acc.v, acc.v, term.v, MPFR_RNDN);
      }
      mpfr_abs(term.v, acc.v, MPFR_RNDD);
      if (mpfr_cmp(term.v, bound.v) <= 0)
        certified = false;
      else
        out[t] = mpfr_sgn(acc.v) > 0 ? 1 : -1;
    }
    for (auto* r : vals) delete r;
    if (certified) return out;
  }
  throw PrecisionExhausted("signature not certified at max precision");
}

}  // namespace spinlab

#include "spinlab/residue.hpp"

#include <cassert>

namespace spinlab {
namespace {

// F_2[x] arithmetic on bitmasks, for the irreducibility check
uint64_t gf2_mulmod(uint64_t a, uint64_t b, uint64_t mod, int deg) {
  uint64_t acc = 0;
  while (b) {
    if (b & 1) acc ^= a;
    b >>= 1;
    a <<= 1;
    if (a >> deg) a ^= mod;
  }
  return acc;
}

uint64_t gf2_gcd(uint64_t a, uint64_t b) {
  auto degree = [](uint64_t v) { return 63 - __builtin_clzll(v); };
  while (b) {
    while (a && degree(a) >= degree(b)) a ^= b << (degree(a) - degree(b));
    std::swap(a, b);
  }
  return a;
}

bool gf2_irreducible(uint64_t poly, int deg) {
  if (deg == 1) return true;
  // x^(2^deg) = x mod poly, and gcd(x^(2^(deg/q)) - x, poly) = 1 for primes q|deg
  auto frob_iter = [&](int k) {
    uint64_t t = 2;  // x
    for (int i = 0; i < k; ++i) t = gf2_mulmod(t, t, poly, deg);
    return t;
  };
  if (frob_iter(deg) != 2) return false;
  for (int q = 2; q <= deg; ++q) {
    if (deg % q) continue;
    bool prime = true;
    for (int d = 2; d * d <= q; ++d)
      if (q % d == 0) prime = false;
    if (!prime) continue;
    if (gf2_gcd(frob_iter(deg / q) ^ 2, poly) != 1) return false;
  }
  return true;
}

void build_mod2_tables(Ring8& r) {
  int n = r.n;
  r.mult2.assign(n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      uint32_t bits = 0;
      for (int k = 0; k < n; ++k)
        if (r.mult8[(i * n + j) * n + k] & 1) bits |= 1u << k;
      r.mult2[i * n + j] = bits;
    }
  r.one2 = 0;
  for (int k = 0; k < n; ++k)
    if (r.one.c[k] & 1) r.one2 |= 1u << k;
}

Ring8Element eval_poly_at(const Ring8& r, const std::vector<uint8_t>& coeffs,
                          const Ring8Element& t) {
  // Horner; coeffs index = power, scalar coefficients mod 8
  Ring8Element acc{std::vector<uint8_t>(r.n, 0)};
  for (size_t k = coeffs.size(); k-- > 0;) {
    acc = r8_mul(r, acc, t);
    for (int i = 0; i < r.n; ++i)
      acc.c[i] = (uint8_t)((acc.c[i] + coeffs[k] * r.one.c[i]) % 8);
  }
  return acc;
}

}  // namespace

Ring8 make_ring8(const CyclicField& f) {
  Ring8 r;
  r.n = f.params.n;
  r.field = &f;
  int n = r.n;
  r.mult8.assign(n * n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        r.mult8[(i * n + j) * n + k] =
            (uint8_t)(((f.mult_table[i][j][k] % 8) + 8) % 8);
  r.one.c.assign(n, 7);  // 1 = -sum eta_i
  build_mod2_tables(r);
  // Frobenius at 2 is the global shift by coset_table[2]
  int t = f.frob2_shift;
  r.frob.assign(n, std::vector<uint8_t>(n, 0));
  for (int j = 0; j < n; ++j) r.frob[(j + t) % n][j] = 1;
  for (int i = 0; i < n; ++i) {
    Ring8Element ei{std::vector<uint8_t>(n, 0)};
    ei.c[i] = 1;
    assert(mod2(r, r8_mul(r, ei, ei)) ==
           mod2(r, r8_shift(r, ei, t)) &&
           "squaring mod 2 must be the discovered shift");
  }
  return r;
}

Ring8 synthetic_ring(int n, uint32_t modulus_bits) {
  assert(n >= 1 && n <= 20);
  uint64_t poly = (uint64_t(1) << n) | modulus_bits;
  if (!gf2_irreducible(poly, n))
    throw ReduciblePolynomial("modulus is reducible over F_2");

  Ring8 r;
  r.n = n;
  // x^(i+j) reduced by the 0/1 lift of the modulus, coefficients mod 8
  auto reduce_power = [&](int e) {
    std::vector<int> v(2 * n, 0);
    v[e] = 1;
    for (int d = 2 * n - 1; d >= n; --d) {
      int t = v[d];
      if (!t) continue;
      v[d] = 0;
      for (int b = 0; b < n; ++b)
        if ((modulus_bits >> b) & 1) v[d - n + b] = ((v[d - n + b] - t) % 8 + 8) % 8;
    }
    std::vector<uint8_t> out(n);
    for (int k = 0; k < n; ++k) out[k] = (uint8_t)(((v[k] % 8) + 8) % 8);
    return out;
  };
  r.mult8.assign(n * n * n, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      auto row = reduce_power(i + j);
      for (int k = 0; k < n; ++k) r.mult8[(i * n + j) * n + k] = row[k];
    }
  r.one.c.assign(n, 0);
  r.one.c[0] = 1;
  build_mod2_tables(r);

  // Hensel: the Frobenius sends x to the root of the modulus congruent to x^2
  // mod 2; Newton steps converge mod 8 after two iterations
  std::vector<uint8_t> fc(n + 1), dc(n);
  for (int b = 0; b < n; ++b) fc[b] = (modulus_bits >> b) & 1;
  fc[n] = 1;
  for (int b = 1; b <= n; ++b) dc[b - 1] = (uint8_t)((b * fc[b]) % 8);
  Ring8Element x{std::vector<uint8_t>(n, 0)};
  if (n == 1) {
    // ring is Z/8; Frobenius is the identity
    r.frob.assign(1, std::vector<uint8_t>(1, 1));
    return r;
  }
  x.c[1] = 1;
  Ring8Element t = r8_mul(r, x, x);
  for (int it = 0; it < 3; ++it) {
    Ring8Element ft = eval_poly_at(r, fc, t);
    Ring8Element dt = eval_poly_at(r, dc, t);
    Ring8Element corr = r8_mul(r, ft, r8_inv(r, dt));
    for (int i = 0; i < n; ++i) t.c[i] = (uint8_t)((t.c[i] - corr.c[i] + 8) % 8);
  }
  assert(is_zero(eval_poly_at(r, fc, t)));
  r.frob.assign(n, std::vector<uint8_t>(n, 0));
  Ring8Element pw = r.one;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) r.frob[i][j] = pw.c[i];
    pw = r8_mul(r, pw, t);
  }
  return r;
}

Ring8Element ring_el(const Ring8& r, std::vector<int> coords) {
  assert((int)coords.size() == r.n);
  Ring8Element x{std::vector<uint8_t>(r.n)};
  for (int i = 0; i < r.n; ++i) x.c[i] = (uint8_t)(((coords[i] % 8) + 8) % 8);
  return x;
}

Ring8Element reduce(const Ring8& r, const FieldElement& x) {
  assert(r.field != nullptr);
  Ring8Element out{std::vector<uint8_t>(r.n)};
  for (int i = 0; i < r.n; ++i) {
    mpz_class m = x.c[i] % 8;
    long v = m.get_si();
    out.c[i] = (uint8_t)((v + 8) % 8);
  }
  return out;
}

Ring8Element r8_add(const Ring8& r, const Ring8Element& x, const Ring8Element& y) {
  Ring8Element z = x;
  for (int i = 0; i < r.n; ++i) z.c[i] = (uint8_t)((z.c[i] + y.c[i]) % 8);
  return z;
}

Ring8Element r8_neg(const Ring8& r, const Ring8Element& x) {
  Ring8Element z = x;
  for (int i = 0; i < r.n; ++i) z.c[i] = (uint8_t)((8 - z.c[i]) % 8);
  return z;
}

Ring8Element r8_mul(const Ring8& r, const Ring8Element& x, const Ring8Element& y) {
  int n = r.n;
  Ring8Element z{std::vector<uint8_t>(n, 0)};
  for (int i = 0; i < n; ++i) {
    if (!x.c[i]) continue;
    for (int j = 0; j < n; ++j) {
      if (!y.c[j]) continue;
      int c = x.c[i] * y.c[j];
      const uint8_t* row = &r.mult8[(i * n + j) * n];
      for (int k = 0; k < n; ++k) z.c[k] = (uint8_t)((z.c[k] + c * row[k]) % 8);
    }
  }
  return z;
}

Ring8Element r8_pow(const Ring8& r, const Ring8Element& x, unsigned long e) {
  Ring8Element acc = r.one, base = x;
  while (e) {
    if (e & 1) acc = r8_mul(r, acc, base);
    e >>= 1;
    if (e) base = r8_mul(r, base, base);
  }
  return acc;
}

bool is_unit(const Ring8& r, const Ring8Element& x) {
  (void)r;
  for (uint8_t v : x.c)
    if (v & 1) return true;
  return false;
}

bool is_zero(const Ring8Element& x) {
  for (uint8_t v : x.c)
    if (v) return false;
  return true;
}

Ring8Element r8_shift(const Ring8& r, const Ring8Element& x, int j) {
  assert(r.field != nullptr);
  int n = r.n;
  j = ((j % n) + n) % n;
  Ring8Element z{std::vector<uint8_t>(n)};
  for (int i = 0; i < n; ++i) z.c[(i + j) % n] = x.c[i];
  return z;
}

Ring8Element frobenius(const Ring8& r, const Ring8Element& x) {
  int n = r.n;
  Ring8Element z{std::vector<uint8_t>(n, 0)};
  for (int j = 0; j < n; ++j) {
    if (!x.c[j]) continue;
    for (int i = 0; i < n; ++i)
      z.c[i] = (uint8_t)((z.c[i] + x.c[j] * r.frob[i][j]) % 8);
  }
  return z;
}

uint32_t mod2(const Ring8& r, const Ring8Element& x) {
  uint32_t bits = 0;
  for (int i = 0; i < r.n; ++i)
    if (x.c[i] & 1) bits |= 1u << i;
  return bits;
}

Ring8Element lift_bits(const Ring8& r, uint32_t bits) {
  Ring8Element x{std::vector<uint8_t>(r.n, 0)};
  for (int i = 0; i < r.n; ++i)
    if ((bits >> i) & 1) x.c[i] = 1;
  return x;
}

uint32_t mul2(const Ring8& r, uint32_t a, uint32_t b) {
  uint32_t acc = 0;
  int n = r.n;
  for (int i = 0; i < n; ++i) {
    if (!((a >> i) & 1)) continue;
    for (int j = 0; j < n; ++j)
      if ((b >> j) & 1) acc ^= r.mult2[i * n + j];
  }
  return acc;
}

uint32_t square2(const Ring8& r, uint32_t a) { return mul2(r, a, a); }

int residue_trace(const Ring8& r, uint32_t xbar) {
  uint32_t acc = 0, cur = xbar;
  for (int i = 0; i < r.n; ++i) {
    acc ^= cur;
    cur = square2(r, cur);
  }
  assert(cur == xbar);  // Frobenius has order n
  if (acc == 0) return 0;
  assert(acc == r.one2);
  return 1;
}

Ring8Element teichmuller_normalize(const Ring8& r, const Ring8Element& u) {
  if (!is_unit(r, u)) throw NotAUnit();
  return r8_pow(r, u, (1ul << r.n) - 1);
}

Ring8Element r8_inv(const Ring8& r, const Ring8Element& u) {
  if (!is_unit(r, u)) throw NotAUnit();
  // lift the mod-2 inverse, then two Newton steps
  uint32_t ub = mod2(r, u);
  uint32_t inv2 = r.one2;
  uint32_t cur = ub;
  for (int i = 1; i < r.n; ++i) {
    cur = square2(r, cur);
    inv2 = mul2(r, inv2, cur);
  }
  assert(mul2(r, inv2, ub) == r.one2);
  Ring8Element v = lift_bits(r, inv2);
  for (int it = 0; it < 2; ++it) {
    // v <- v (2 - u v)
    Ring8Element uv = r8_mul(r, u, v);
    Ring8Element two_minus{std::vector<uint8_t>(r.n)};
    for (int i = 0; i < r.n; ++i)
      two_minus.c[i] = (uint8_t)(((2 * r.one.c[i] - uv.c[i]) % 8 + 8) % 8);
    v = r8_mul(r, v, two_minus);
  }
  assert(r8_mul(r, u, v) == r.one);
  return v;
}

}  // namespace spinlab

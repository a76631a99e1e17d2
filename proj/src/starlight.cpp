#include "spinlab/starlight.hpp"

#include <cassert>
#include <random>
#include <string>

namespace spinlab {
namespace {

std::string bits_str(uint32_t b, int n) {
  std::string s(n, '0');
  for (int i = 0; i < n; ++i)
    if ((b >> i) & 1) s[i] = '1';
  return s;
}

// star of an explicit mod-8 unit, via the full coords8 normal form
int star_of_unit(const Ring8& r, const Ring8Element& u, const GramMatrix& g) {
  UnitSquareClass8 cu = coords8(r, u);
  for (int j = 1; j <= (r.n - 1) / 2; ++j) {
    UnitSquareClass8 cv = coords8(r, r8_shift(r, u, j));
    if (symbol_classes(g, cu, cv) == -1) return -1;
  }
  return 1;
}

Ring8Element canonical_lift(const Ring8& r, uint32_t bits) {
  Ring8Element lift = lift_bits(r, bits);
  Ring8Element a = r.one;
  for (int i = 0; i < r.n; ++i) a.c[i] = (uint8_t)((a.c[i] + 2 * lift.c[i]) % 8);
  return a;
}

}  // namespace

int star_of_class(const Ring8& r, SquareClassM4 c, const GramMatrix& g) {
  assert(c.n == r.n && g.n == r.n);
  // the canonical lift 1 + 2*lift(c) lands in square class (c, 0), and its
  // sigma^j conjugate in (rot(c, j), 0); symmetry halves the symbol range
  UnitSquareClass8 cu{c.bits, 0, r.n};
  for (int j = 1; j <= (r.n - 1) / 2; ++j) {
    UnitSquareClass8 cv{rot_bits(c.bits, j, r.n), 0, r.n};
    if (symbol_classes(g, cu, cv) == -1) return -1;
  }
  return 1;
}

long star_count_direct(const Ring8& r, const GramMatrix& g) {
  long pos = 0;
  for (uint32_t b = 0; b < (uint32_t(1) << r.n); ++b)
    if (star_of_class(r, SquareClassM4{b, r.n}, g) == 1) ++pos;
  return pos;
}

StarTable starlight_invariant(const CyclicField& f, const Ring8& r,
                              const OrbitTable& ot, const GramMatrix& g) {
  assert(r.field == &f && g.n == r.n && ot.n == r.n);
  int n = r.n;
  size_t total = size_t(1) << n;
  std::vector<int8_t> all(total);
  long pos = 0;
  for (uint32_t b = 0; b < total; ++b) {
    all[b] = (int8_t)star_of_class(r, SquareClassM4{b, n}, g);
    if (all[b] == 1) ++pos;
  }

  StarTable st;
  st.n = n;
  st.orbit_star.reserve(ot.orbits.size());
  long kernel_orbits = 0, mk = 0;
  for (const auto& orb : ot.orbits) {
    int s = all[orb.first];
    for (int j = 1; j < orb.second; ++j)
      if (all[rot_bits(orb.first, j, n)] != s)
        throw StarInconsistency("star is not constant on the orbit of " +
                                bits_str(orb.first, n));
    st.orbit_star.push_back(s);
    if (s == 1) {
      ++kernel_orbits;
      if (orb.second == n) ++mk;
    }
  }
  st.m_k = mk;
  st.kernel_size = kernel_orbits;

  if (all[0] != 1) throw StarInconsistency("star of the trivial class is not +1");
  if (all[total - 1] != -1)
    throw StarInconsistency("star of the class of -1 is not -1");
  if (st.m_k != st.kernel_size - 1)
    throw StarInconsistency("kernel orbit count does not match the invariant");
  if (pos != st.m_k * n + 1)
    throw StarInconsistency("kernel class count is not m_K*n + 1");
  if (st.m_k > ((long(1) << (n - 1)) - 1) / n)
    throw StarInconsistency("m_K exceeds the half-kernel bound");
  return st;
}

void check_halfstar(const Ring8& r, const GramMatrix& g) {
  uint32_t allones = (uint32_t(1) << r.n) - 1;
  for (uint32_t b = 0; b <= allones; ++b)
    if (star_of_class(r, SquareClassM4{b, r.n}, g) == 1 &&
        star_of_class(r, SquareClassM4{b ^ allones, r.n}, g) != -1)
      throw StarInconsistency("star +1 on both " + bits_str(b, r.n) +
                              " and its negative");
}

DensityReport density_report(int n, long m_k) {
  if (n < 3 || m_k < 0) throw ParamError("density formulas need degree >= 3");
  mpz_class two_n = mpz_class(1) << n;
  mpz_class two_n1 = mpz_class(1) << (n - 1);
  mpz_class half_pow = mpz_class(1) << ((3 * n - 1) / 2);
  mpz_class kern = mpz_class(m_k) * n + 1;
  DensityReport d;
  d.D_K = mpq_class(two_n1 * (n - 1) + kern, two_n * n);
  d.d_RS = mpq_class(kern, two_n);
  d.C_K = mpq_class(two_n1 * (n - 1) + kern, half_pow * n);
  d.C_KS = mpq_class(kern, half_pow);
  d.D_low = mpq_class(two_n1 * (n - 1) + 1, two_n * n);
  d.D_high = mpq_class(1, 2);
  d.d_low = mpq_class(1, two_n);
  d.d_high = mpq_class(1, 2);
  for (mpq_class* q : {&d.D_K, &d.d_RS, &d.C_K, &d.C_KS, &d.D_low, &d.D_high,
                       &d.d_low, &d.d_high})
    q->canonicalize();
  mpq_class decomp = mpq_class(n - 1, 2 * n) + d.d_RS / n;
  decomp.canonicalize();
  assert(d.D_K == decomp);
  if (d.D_K < d.D_low || d.D_K > d.D_high)
    throw BoundViolation("overall density leaves its proven interval");
  if (d.d_RS < d.d_low || d.d_RS > d.d_high)
    throw BoundViolation("relative density leaves its proven interval");
  return d;
}

WellDefReport star_welldefined_check(const CyclicField& f, const Ring8& r,
                                     const GramMatrix& g, int trials,
                                     uint64_t seed) {
  assert(r.field == &f);
  int n = r.n;
  std::mt19937_64 rng(seed);
  WellDefReport rep{trials, 0, 0, 0};
  for (int t = 0; t < trials; ++t) {
    uint32_t bits = (uint32_t)(rng() & ((uint64_t(1) << n) - 1));
    SquareClassM4 c{bits, n};
    int s0 = star_of_class(r, c, g);
    Ring8Element canon = canonical_lift(r, bits);

    // arbitrary lift: canonical * w^2 * (1 + 4t), any unit w, any t
    Ring8Element w{std::vector<uint8_t>(n)};
    do {
      for (int i = 0; i < n; ++i) w.c[i] = (uint8_t)(rng() & 7);
    } while (!is_unit(r, w));
    Ring8Element u = r8_mul(r, canon, r8_mul(r, w, w));
    Ring8Element tw = lift_bits(r, (uint32_t)(rng() & ((uint64_t(1) << n) - 1)));
    Ring8Element shift = r.one;
    for (int i = 0; i < n; ++i)
      shift.c[i] = (uint8_t)((shift.c[i] + 4 * tw.c[i]) % 8);
    u = r8_mul(r, u, shift);
    if (star_of_unit(r, u, g) != s0)
      throw WellDefinednessFailure("star depends on the mod-8 lift of class " +
                                   bits_str(bits, n));
    ++rep.lift_checks;

    int jr = 1 + (int)(rng() % (uint64_t)n);
    if (star_of_class(r, galois_on_class(r, c, jr), g) != s0)
      throw WellDefinednessFailure("star differs on a conjugate of class " +
                                   bits_str(bits, n));
    ++rep.orbit_checks;

    Ring8Element u5 = canon;
    for (int i = 0; i < n; ++i) u5.c[i] = (uint8_t)((5 * u5.c[i]) % 8);
    if (star_of_unit(r, u5, g) != s0)
      throw WellDefinednessFailure("star changes under a 5-twist of class " +
                                   bits_str(bits, n));
    ++rep.twist_checks;
  }
  return rep;
}

}  // namespace spinlab

#include "spinlab/hilbert.hpp"

#include <cassert>
#include <chrono>
#include <random>
#include <string>

namespace spinlab {
namespace {

// 3 bits per coefficient; oracle degrees fit in a uint32
uint32_t pack3(const Ring8Element& x) {
  uint32_t v = 0;
  for (size_t i = 0; i < x.c.size(); ++i) v |= uint32_t(x.c[i]) << (3 * i);
  return v;
}

Ring8Element unpack3(const Ring8& r, uint32_t v) {
  Ring8Element x{std::vector<uint8_t>(r.n)};
  for (int i = 0; i < r.n; ++i) x.c[i] = (v >> (3 * i)) & 7;
  return x;
}

template <int N>
uint32_t sub3(uint32_t a, uint32_t b) {
  uint32_t r = 0;
  for (int i = 0; i < N; ++i)
    r |= (((a >> (3 * i)) - (b >> (3 * i))) & 7u) << (3 * i);
  return r;
}

struct Bitset {
  std::vector<uint64_t> w;
  explicit Bitset(size_t bits) : w((bits + 63) / 64, 0) {}
  void set(uint32_t i) { w[i >> 6] |= uint64_t(1) << (i & 63); }
  bool test(uint32_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
};

struct SquareTables {
  std::vector<uint32_t> all, unit;  // packed distinct square values mod 8
};

SquareTables square_tables(const Ring8& r) {
  int n = r.n;
  uint32_t lifts = 1u << n;
  // x^2 mod 8 depends on x mod 4 = l + 2m with 0/1 lifts l, m:
  // (l + 2m)^2 = l^2 + 4(lm + m^2)
  std::vector<uint32_t> lsq(lifts);
  std::vector<uint32_t> msq2(lifts);
  for (uint32_t l = 0; l < lifts; ++l) {
    Ring8Element e = lift_bits(r, l);
    lsq[l] = pack3(r8_mul(r, e, e));
    msq2[l] = square2(r, l);
  }
  Bitset seen(size_t(1) << (3 * n));
  SquareTables t;
  for (uint32_t l = 0; l < lifts; ++l)
    for (uint32_t m = 0; m < lifts; ++m) {
      uint32_t four = mul2(r, l, m) ^ msq2[m];
      uint32_t packed = lsq[l];
      for (int i = 0; i < n; ++i)
        if ((four >> i) & 1) {
          uint32_t lane = (packed >> (3 * i)) & 7;
          packed = (packed & ~(7u << (3 * i))) | (((lane + 4) & 7) << (3 * i));
        }
      if (!seen.test(packed)) {
        seen.set(packed);
        t.all.push_back(packed);
        if (l) t.unit.push_back(packed);
      } else if (l) {
        // value may have appeared first from a non-unit x; track separately
        bool have = false;
        for (uint32_t q : t.unit)
          if (q == packed) {
            have = true;
            break;
          }
        if (!have) t.unit.push_back(packed);
      }
    }
  return t;
}

template <int N>
bool pass_hit(const std::vector<uint32_t>& ws, const std::vector<uint32_t>& zs,
              const Bitset& member) {
  for (uint32_t w : ws)
    for (uint32_t z : zs)
      if (member.test(sub3<N>(z, w))) return true;
  return false;
}

bool pass_dispatch(int n, const std::vector<uint32_t>& ws,
                   const std::vector<uint32_t>& zs, const Bitset& member) {
  switch (n) {
    case 1: return pass_hit<1>(ws, zs, member);
    case 2: return pass_hit<2>(ws, zs, member);
    case 3: return pass_hit<3>(ws, zs, member);
    case 4: return pass_hit<4>(ws, zs, member);
    case 5: return pass_hit<5>(ws, zs, member);
    case 6: return pass_hit<6>(ws, zs, member);
    default: return pass_hit<7>(ws, zs, member);
  }
}

int oracle_with_tables(const Ring8& r, const Ring8Element& u, const Ring8Element& v,
                       const SquareTables& t) {
  int n = r.n;
  auto scale = [&](const Ring8Element& c, const std::vector<uint32_t>& src) {
    std::vector<uint32_t> out;
    out.reserve(src.size());
    for (uint32_t s : src) out.push_back(pack3(r8_mul(r, c, unpack3(r, s))));
    return out;
  };
  std::vector<uint32_t> ux_all = scale(u, t.all);
  std::vector<uint32_t> ux_unit = scale(u, t.unit);
  Bitset b_all(size_t(1) << (3 * n)), b_unit(size_t(1) << (3 * n));
  for (uint32_t s : scale(v, t.all)) b_all.set(s);
  for (uint32_t s : scale(v, t.unit)) b_unit.set(s);
  // z unit, then x unit, then y unit; together these cover every primitive
  // solution of u x^2 + v y^2 = z^2 mod 8
  if (pass_dispatch(n, ux_all, t.unit, b_all)) return 1;
  if (pass_dispatch(n, ux_unit, t.all, b_all)) return 1;
  if (pass_dispatch(n, ux_all, t.all, b_unit)) return 1;
  return -1;
}

std::vector<Ring8Element> gram_basis(const Ring8& r) {
  std::vector<Ring8Element> basis;
  for (int i = 0; i < r.n; ++i) {
    Ring8Element a = r.one;
    a.c[i] = (uint8_t)((a.c[i] + 2) % 8);
    basis.push_back(a);
  }
  basis.push_back(delta_element(r));
  return basis;
}

void finish_gram(GramMatrix& g) {
  g.identity_block = true;
  for (int i = 0; i < g.n && g.identity_block; ++i)
    if ((g.rows[i] & ((1u << g.n) - 1)) != (1u << i)) g.identity_block = false;
  for (int i = 0; i <= g.n; ++i)
    if (g.entry(i, g.n) || g.entry(g.n, i))
      throw ValidationFailed("Delta row of the Gram matrix is not zero");
}

}  // namespace

uint32_t default_modulus(int n) {
  switch (n) {
    case 1: return 0b1;        // x + 1
    case 3: return 0b011;      // x^3 + x + 1
    case 5: return 0b00101;    // x^5 + x^2 + 1
    case 7: return 0b0000011;  // x^7 + x + 1
    default: throw ParamError("no default modulus for degree " + std::to_string(n));
  }
}

Ring8Element delta_element(const Ring8& r) {
  for (int i = 0; i < r.n; ++i)
    if (residue_trace(r, 1u << i) == 1) {
      Ring8Element d = r.one;
      d.c[i] = (uint8_t)((d.c[i] + 4) % 8);
      return d;
    }
  assert(false && "trace vanishes on a basis");
  return r.one;
}

UnitSquareClass8 coords8(const Ring8& r, const Ring8Element& u) {
  if (!is_unit(r, u)) throw NotAUnit();
  Ring8Element t = teichmuller_normalize(r, u);
  uint32_t a = 0;
  for (int i = 0; i < r.n; ++i) {
    int d = (t.c[i] - r.one.c[i] + 8) % 8;
    assert(d % 2 == 0);
    if ((d / 2) & 1) a |= 1u << i;
  }
  Ring8Element lift = lift_bits(r, a);
  Ring8Element canon = r.one;
  for (int i = 0; i < r.n; ++i)
    canon.c[i] = (uint8_t)((canon.c[i] + 2 * lift.c[i]) % 8);
  Ring8Element q = r8_mul(r, t, r8_inv(r, canon));
  uint32_t cbits = 0;
  for (int i = 0; i < r.n; ++i) {
    int d = (q.c[i] - r.one.c[i] + 8) % 8;
    assert(d % 4 == 0);
    if ((d / 4) & 1) cbits |= 1u << i;
  }
  return UnitSquareClass8{a, residue_trace(r, cbits), r.n};
}

int conic_oracle(const Ring8& r, const Ring8Element& u, const Ring8Element& v) {
  if (r.n > 7) throw DegreeTooLarge("conic oracle supports degree <= 7");
  if (!is_unit(r, u) || !is_unit(r, v)) throw NotAUnit();
  SquareTables t = square_tables(r);
  return oracle_with_tables(r, u, v, t);
}

GramMatrix gram_from_oracle(const Ring8& r) {
  if (r.n > 7) throw DegreeTooLarge("conic oracle supports degree <= 7");
  SquareTables t = square_tables(r);
  auto basis = gram_basis(r);
  GramMatrix g;
  g.n = r.n;
  g.provenance = GramProvenance::oracle;
  g.rows.assign(r.n + 1, 0);
  for (int i = 0; i <= r.n; ++i)
    for (int j = i; j <= r.n; ++j) {
      int s = oracle_with_tables(r, basis[i], basis[j], t);
      if (s == -1) {
        g.rows[i] |= 1u << j;
        if (i != j) g.rows[j] |= 1u << i;
      }
    }
  finish_gram(g);
  return g;
}

GramMatrix gram_from_formula(const Ring8& r) {
  GramMatrix g;
  g.n = r.n;
  g.provenance = GramProvenance::formula;
  g.rows.assign(r.n + 1, 0);
  for (int i = 0; i < r.n; ++i)
    for (int j = 0; j < r.n; ++j)
      if (residue_trace(r, r.mult2[i * r.n + j])) g.rows[i] |= 1u << j;
  finish_gram(g);
  return g;
}

int symbol_classes(const GramMatrix& g, const UnitSquareClass8& cu,
                   const UnitSquareClass8& cv) {
  uint32_t xu = cu.a | (uint32_t(cu.eps) << g.n);
  uint32_t xv = cv.a | (uint32_t(cv.eps) << g.n);
  int par = 0;
  for (int i = 0; i <= g.n; ++i)
    if ((xu >> i) & 1) par ^= __builtin_popcount(g.rows[i] & xv) & 1;
  return par ? -1 : 1;
}

int symbol(const Ring8& r, const Ring8Element& u, const Ring8Element& v,
           const GramMatrix& g) {
  return symbol_classes(g, coords8(r, u), coords8(r, v));
}

GramValidation validate_gram(int n, uint32_t modulus_bits) {
  if (n > 7) throw DegreeTooLarge("validation requires the oracle, degree <= 7");
  Ring8 r = synthetic_ring(n, modulus_bits);
  GramValidation rep;
  rep.n = n;

  auto t0 = std::chrono::steady_clock::now();
  SquareTables tables = square_tables(r);
  auto basis = gram_basis(r);
  GramMatrix go;
  go.n = n;
  go.provenance = GramProvenance::oracle;
  go.rows.assign(n + 1, 0);
  for (int i = 0; i <= n; ++i)
    for (int j = i; j <= n; ++j) {
      auto e0 = std::chrono::steady_clock::now();
      int s = oracle_with_tables(r, basis[i], basis[j], tables);
      double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - e0)
                      .count();
      rep.max_entry_seconds = std::max(rep.max_entry_seconds, dt);
      if (s == -1) {
        go.rows[i] |= 1u << j;
        if (i != j) go.rows[j] |= 1u << i;
      }
    }
  finish_gram(go);
  rep.oracle_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  GramMatrix gf = gram_from_formula(r);
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (go.entry(i, j) != gf.entry(i, j))
        throw ValidationFailed("oracle and formula Grams differ at basis pair (" +
                               std::to_string(i) + "," + std::to_string(j) + ")");

  // Galois invariance of the oracle symbol under the Frobenius lift; pair
  // count shrinks with degree (negative answers cost the full three passes)
  int pairs = n <= 3 ? 100 : (n == 5 ? 40 : 6);
  std::mt19937_64 rng(0x5eedbead ^ uint64_t(n));
  for (int trial = 0; trial < pairs; ++trial) {
    Ring8Element u{std::vector<uint8_t>(n)}, v{std::vector<uint8_t>(n)};
    do {
      for (int i = 0; i < n; ++i) u.c[i] = rng() & 7;
    } while (!is_unit(r, u));
    do {
      for (int i = 0; i < n; ++i) v.c[i] = rng() & 7;
    } while (!is_unit(r, v));
    int s1 = oracle_with_tables(r, u, v, tables);
    int s2 = oracle_with_tables(r, frobenius(r, u), frobenius(r, v), tables);
    if (s1 != s2)
      throw ValidationFailed("oracle symbol is not Frobenius invariant at degree " +
                             std::to_string(n));
    ++rep.frobenius_pairs;
  }
  rep.ok = true;
  return rep;
}

}  // namespace spinlab

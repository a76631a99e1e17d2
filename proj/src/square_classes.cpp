#include "spinlab/square_classes.hpp"

#include <cassert>

namespace spinlab {

SquareClassM4 class_of(const Ring8& r, const Ring8Element& u) {
  if (!is_unit(r, u)) throw NotAUnit();
  Ring8Element t = teichmuller_normalize(r, u);
  // t = 1 + 2x; the class is x mod 2
  uint32_t bits = 0;
  for (int i = 0; i < r.n; ++i) {
    int d = (t.c[i] - r.one.c[i] + 8) % 8;
    assert(d % 2 == 0);
    if ((d / 2) & 1) bits |= 1u << i;
  }
  return SquareClassM4{bits, r.n};
}

SquareClassM4 galois_on_class(const Ring8& r, SquareClassM4 c, int j) {
  assert(r.field != nullptr && c.n == r.n);
  // canonical lift 1 + 2 lift(c) maps to 1 + 2 lift(rot(c)) under the shift
  return SquareClassM4{rot_bits(c.bits, j, r.n), r.n};
}

OrbitTable orbit_table(const CyclicField& f) {
  int n = f.params.n;
  uint32_t total = 1u << n;
  assert((total - 2) % n == 0);  // Fermat
  OrbitTable ot;
  ot.n = n;
  ot.lookup.assign(total, -1);
  uint32_t allones = total - 1;
  for (uint32_t c = 0; c < total; ++c) {
    if (ot.lookup[c] >= 0) continue;
    uint32_t rep = c;
    int size = 1;
    for (uint32_t v = rot_bits(c, 1, n); v != c; v = rot_bits(v, 1, n)) {
      if (v < rep) rep = v;
      ++size;
    }
    if (size == 1 && c != 0 && c != allones)
      throw OrbitInvariantViolation("shift-fixed class is not +-1");
    assert(size == 1 || size == n);
    int idx = (int)ot.orbits.size();
    ot.orbits.emplace_back(rep, size);
    uint32_t v = c;
    do {
      ot.lookup[v] = idx;
      v = rot_bits(v, 1, n);
    } while (v != c);
  }
  assert((long)ot.orbits.size() == 2 + ((long)total - 2) / n);
  return ot;
}

}  // namespace spinlab

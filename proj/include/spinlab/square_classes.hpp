#pragma once
#include <cstdint>
#include <utility>
#include <vector>

#include "spinlab/residue.hpp"

namespace spinlab {

// Class of a unit in (O_K/4)^x modulo squares, as the x in u^(2^n-1) = 1+2x
// mod 4.  The zero vector is exactly the class of squares.
struct SquareClassM4 {
  uint32_t bits = 0;  // bit i = coefficient of e_i mod 2
  int n = 0;

  bool operator==(const SquareClassM4&) const = default;
};

struct OrbitTable {
  int n = 0;
  // canonical representative = smallest bits value in the orbit; size 1 or n
  std::vector<std::pair<uint32_t, int>> orbits;
  std::vector<int32_t> lookup;  // 2^n entries, class bits -> orbit index
};

SquareClassM4 class_of(const Ring8& r, const Ring8Element& u);
SquareClassM4 galois_on_class(const Ring8& r, SquareClassM4 c, int j);
OrbitTable orbit_table(const CyclicField& f);

inline uint32_t rot_bits(uint32_t b, int j, int n) {
  j %= n;
  if (j < 0) j += n;
  uint32_t mask = (n == 32) ? ~0u : ((1u << n) - 1);
  return ((b << j) | (b >> (n - j))) & mask;
}

}  // namespace spinlab

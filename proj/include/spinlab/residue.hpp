#pragma once
#include <cstdint>
#include <vector>

#include "spinlab/errors.hpp"
#include "spinlab/field.hpp"

namespace spinlab {

// O_K/8 in the period basis, or a synthetic unramified model Z[x]/(8, F).
// The mod-2 quotient is a field with 2^n elements in both cases.
struct Ring8Element {
  std::vector<uint8_t> c;  // each in 0..7

  bool operator==(const Ring8Element&) const = default;
};

struct Ring8 {
  int n = 0;
  const CyclicField* field = nullptr;  // null for synthetic rings
  std::vector<uint8_t> mult8;          // (i*n+j)*n+k -> coeff of e_i e_j mod 8
  std::vector<uint32_t> mult2;         // i*n+j -> bitmask of e_i e_j mod 2
  Ring8Element one;
  uint32_t one2 = 0;                   // one mod 2 as bitmask
  std::vector<std::vector<uint8_t>> frob;  // Frobenius lift, column j = frob(e_j)
};

Ring8 make_ring8(const CyclicField& f);
// modulus_bits: low coefficients of a monic degree-n polynomial, bit i = coeff
// of x^i; must be irreducible over F_2.
Ring8 synthetic_ring(int n, uint32_t modulus_bits);

Ring8Element ring_el(const Ring8& r, std::vector<int> coords);
Ring8Element reduce(const Ring8& r, const FieldElement& x);
Ring8Element r8_add(const Ring8& r, const Ring8Element& x, const Ring8Element& y);
Ring8Element r8_neg(const Ring8& r, const Ring8Element& x);
Ring8Element r8_mul(const Ring8& r, const Ring8Element& x, const Ring8Element& y);
Ring8Element r8_pow(const Ring8& r, const Ring8Element& x, unsigned long e);
bool is_unit(const Ring8& r, const Ring8Element& x);
bool is_zero(const Ring8Element& x);

// coordinate shift, field-backed rings only
Ring8Element r8_shift(const Ring8& r, const Ring8Element& x, int j);
// ring endomorphism lifting squaring mod 2
Ring8Element frobenius(const Ring8& r, const Ring8Element& x);

uint32_t mod2(const Ring8& r, const Ring8Element& x);
Ring8Element lift_bits(const Ring8& r, uint32_t bits);  // 0/1 coefficients
uint32_t mul2(const Ring8& r, uint32_t a, uint32_t b);
uint32_t square2(const Ring8& r, uint32_t a);

// absolute trace of the mod-2 residue: x + x^2 + ... + x^(2^(n-1))
int residue_trace(const Ring8& r, uint32_t xbar);

// u^(2^n - 1): kills the residue-field part, preserves the square class
Ring8Element teichmuller_normalize(const Ring8& r, const Ring8Element& u);
Ring8Element r8_inv(const Ring8& r, const Ring8Element& u);

}  // namespace spinlab

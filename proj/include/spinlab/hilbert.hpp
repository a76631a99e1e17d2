#pragma once
#include <cstdint>
#include <vector>

#include "spinlab/residue.hpp"
#include "spinlab/square_classes.hpp"

namespace spinlab {

// Two-stage normal form of a unit square class mod 8: a = mod-4 coordinate,
// eps = trace of the 1+4c quotient against the canonical a-part lift.
// coords8(uv) = coords8(u) xor coords8(v); zero iff u is a square mod 8.
struct UnitSquareClass8 {
  uint32_t a = 0;
  int eps = 0;
  int n = 0;

  bool operator==(const UnitSquareClass8&) const = default;
};

enum class GramProvenance { oracle, formula };

// Pairing matrix on the basis {1+2e_0, ..., 1+2e_{n-1}, Delta} of units modulo
// squares, Delta = 1+4c with trace(c) = 1.  Delta row and column are zero.
struct GramMatrix {
  int n = 0;  // unit-block dimension; full dimension n+1
  GramProvenance provenance = GramProvenance::formula;
  std::vector<uint32_t> rows;  // n+1 bitmask rows
  bool identity_block = false;

  int entry(int i, int j) const { return (rows[i] >> j) & 1; }
};

UnitSquareClass8 coords8(const Ring8& r, const Ring8Element& u);

// Canonical Delta: 1 + 4 e_i for the smallest i with trace(e_i) = 1.
Ring8Element delta_element(const Ring8& r);

// +1 iff u x^2 + v y^2 = z^2 has a solution mod 8 with a unit among x, y, z;
// equivalent to solvability over the unramified dyadic completion.  n <= 7.
int conic_oracle(const Ring8& r, const Ring8Element& u, const Ring8Element& v);

GramMatrix gram_from_oracle(const Ring8& r);  // n <= 7
GramMatrix gram_from_formula(const Ring8& r);

int symbol(const Ring8& r, const Ring8Element& u, const Ring8Element& v,
           const GramMatrix& g);
int symbol_classes(const GramMatrix& g, const UnitSquareClass8& cu,
                   const UnitSquareClass8& cv);

struct GramValidation {
  int n = 0;
  bool ok = false;
  double oracle_seconds = 0;
  double max_entry_seconds = 0;
  int frobenius_pairs = 0;
};

// Builds the synthetic ring, compares oracle and formula Grams entrywise, and
// checks Galois invariance of the oracle symbol on Frobenius-lifted pairs.
// Throws ValidationFailed on any mismatch.
GramValidation validate_gram(int n, uint32_t modulus_bits);

uint32_t default_modulus(int n);  // x+1, x^3+x+1, x^5+x^2+1, x^7+x+1

}  // namespace spinlab

#pragma once
#include <gmpxx.h>

#include <vector>

#include "spinlab/errors.hpp"

namespace spinlab {

struct FieldParams {
  int n = 3;     // field degree, odd prime
  long ell = 7;  // conductor, odd prime with n | ell-1 and 2 inert
  int h = 1;     // assumed class number, odd; hypothesis, never computed
};

// Coordinates in the period basis eta_0..eta_{n-1}.
struct FieldElement {
  std::vector<mpz_class> c;

  bool operator==(const FieldElement&) const = default;
};

struct CyclicField {
  FieldParams params;
  long g = 0;                  // smallest primitive root mod ell
  std::vector<long> H;         // n-th power residues mod ell, sorted
  std::vector<int> coset_table;  // residue -> period index; [0] = -1
  // eta_i * eta_j = sum_k mult_table[i][j][k] eta_k
  std::vector<std::vector<std::vector<long>>> mult_table;
  FieldElement unity;  // (-1,...,-1): 1 = -sum eta_i
  std::vector<mpz_class> period_minpoly;        // monic, index = power
  std::vector<std::vector<mpq_class>> interp;   // eta_i = interp[i](eta_0)
  int frob2_shift = 0;  // sigma^{frob2_shift} is the Frobenius at 2
};

CyclicField build_field(const FieldParams& params);

FieldElement element(const CyclicField& f, std::vector<long> coords);
FieldElement from_int(const CyclicField& f, const mpz_class& k);
bool is_zero(const FieldElement& x);

FieldElement add(const FieldElement& x, const FieldElement& y);
FieldElement sub(const FieldElement& x, const FieldElement& y);
FieldElement neg(const FieldElement& x);
FieldElement scalar_mul(const mpz_class& k, const FieldElement& x);
FieldElement mul(const CyclicField& f, const FieldElement& x, const FieldElement& y);
FieldElement pow_u(const CyclicField& f, const FieldElement& x, unsigned long e);

// sigma^j with sigma(eta_i) = eta_{i+1}
FieldElement galois_apply(const CyclicField& f, const FieldElement& x, int j);

// Monic characteristic polynomial of multiplication by x; index = power.
std::vector<mpz_class> char_poly(const CyclicField& f, const FieldElement& x);
mpz_class norm(const CyclicField& f, const FieldElement& x);
mpz_class trace(const CyclicField& f, const FieldElement& x);

// Exact: all embeddings are real, so positivity of every root of char_poly
// is equivalent to strict sign alternation of its coefficients.
bool is_totally_positive(const CyclicField& f, const FieldElement& x);

// Sign variation count of a real-rooted monic polynomial = its positive roots.
int descartes_positive_roots(const std::vector<mpz_class>& poly);

// Certified signs under the n real embeddings; embedding t sends eta_i to the
// numeric value of eta_{i+t}.  Escalates precision until every sign is proven,
// starting at start_prec bits and doubling up to max_precision() bits.
std::vector<int> signature(const CyclicField& f, const FieldElement& x,
                           int start_prec = 64);

// 4096 unless overridden by SPINLAB_MAX_PRECISION.
int max_precision();

}  // namespace spinlab

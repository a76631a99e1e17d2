#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <vector>

#include "spinlab/hilbert.hpp"

namespace spinlab {

struct StarTable {
  int n = 0;
  std::vector<int> orbit_star;  // +-1 per orbit, indexed like OrbitTable
  long m_k = 0;                 // size-n orbits with star = +1
  long kernel_size = 0;         // all orbits with star = +1
};

struct DensityReport {
  mpq_class D_K, d_RS, C_K, C_KS;
  mpq_class D_low, D_high;  // bound interval for D_K
  mpq_class d_low, d_high;  // bound interval for d_RS
};

// +1 iff the canonical lift A of c satisfies (A, sigma^j A) = +1 for
// j = 1..(n-1)/2; symmetry of the pairing covers the remaining j.
int star_of_class(const Ring8& r, SquareClassM4 c, const GramMatrix& g);

StarTable starlight_invariant(const CyclicField& f, const Ring8& r,
                              const OrbitTable& ot, const GramMatrix& g);

// independent of orbit bookkeeping: star evaluated on every class directly
long star_count_direct(const Ring8& r, const GramMatrix& g);

DensityReport density_report(int n, long m_k);

struct WellDefReport {
  int trials = 0;
  int lift_checks = 0;
  int orbit_checks = 0;
  int twist_checks = 0;
};

// Random lifts, orbit conjugates and 5-twists must not change star.
WellDefReport star_welldefined_check(const CyclicField& f, const Ring8& r,
                                     const GramMatrix& g, int trials,
                                     uint64_t seed);

// star(c) = +1 forces star(-c) = -1; checked over every class.
void check_halfstar(const Ring8& r, const GramMatrix& g);

}  // namespace spinlab

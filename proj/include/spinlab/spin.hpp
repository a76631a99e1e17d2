#pragma once
#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "spinlab/hilbert.hpp"
#include "spinlab/starlight.hpp"

namespace spinlab {

int frobenius_degree(const FieldParams& params, long p);

// Roots of the period polynomial mod p, sorted ascending; requires that it
// splits completely (split prime).
std::vector<long> minpoly_roots_mod_p(const CyclicField& f, long p);

struct IdealDescriptor {
  long p = 0;
  long root = 0;           // root of the period polynomial labeling this prime
  std::vector<long> vals;  // vals[i] = P_i(root) mod p
};

// One descriptor per prime above a split p, sorted by root; index 0 is the
// canonical choice.
std::vector<IdealDescriptor> primes_above(const CyclicField& f, long p);

// alpha with |Norm(alpha)| = p^h generating the h-th power of the canonical
// prime above p; shortest trace-form candidates tested first.
FieldElement ideal_generator(const CyclicField& f, const IdealDescriptor& d, int h);

struct UnitBasis {
  std::vector<FieldElement> units;  // norm +-1, includes -1
  std::vector<uint32_t> sig_cols;   // bit t = 1 iff embedding t is negative
};

// Short-vector search under the trace form, radius doubling from
// search_radius (default 2n) until unit signatures span F_2^n.
UnitBasis unit_basis(const CyclicField& f, long search_radius = 0);

uint32_t signature_bits(const CyclicField& f, const FieldElement& x);
FieldElement make_totally_positive(const CyclicField& f, const FieldElement& x,
                                   const UnitBasis& ub);

// spin against sigma^j of the canonical prime: eta_i evaluates at
// P_{i-j mod n}(root), then the Legendre symbol mod p.
int spin_at(const CyclicField& f, const FieldElement& alpha,
            const IdealDescriptor& d, int j);

struct PrimeRecord {
  long p = 0;
  int f = 0;  // inertia degree, 1 or n
  uint32_t class_bits = 0;
  int star = 0;
  std::vector<int> spins;  // split primes: j = 1..n-1
  FieldElement generator;
  bool flagship_ok = true;       // spin(j) spin(n-j) = (alpha, sigma^j alpha)
  bool star_matches_spins = true;
};

struct SkippedPrime {
  long p = 0;
  std::string reason;
};

struct SampleStats {
  long total = 0, split = 0, inert = 0;
  std::vector<long> class_counts;  // 2^n entries, split primes
  long star_pos_split = 0, star_pos_inert = 0, star_pos_all = 0;
  long all_spins_pos_split = 0;
  long flagship_violations = 0;
  long star_spin_mismatches = 0;
  std::vector<SkippedPrime> skipped;
};

struct SampleConfig {
  long bound = 0;
  int h = 1;
  int jobs = 1;
};

// Deterministic for any jobs value: records arrive at the sink ordered by p.
// Throws if more than 0.1% of eligible primes had to be skipped.
SampleStats sample(const CyclicField& f, const Ring8& r, const GramMatrix& g,
                   const UnitBasis& ub, const SampleConfig& cfg,
                   const std::function<void(const PrimeRecord&)>& sink);

std::vector<long> primes_up_to(long bound);

}  // namespace spinlab

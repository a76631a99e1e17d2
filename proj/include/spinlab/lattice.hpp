#pragma once
#include <gmpxx.h>

#include <utility>
#include <vector>

namespace spinlab {

using ZMat = std::vector<std::vector<mpz_class>>;

mpz_class det(ZMat a);  // Bareiss, fraction-free

// Row-space Hermite normal form of a full-column-rank stack of rows; returns a
// square upper-triangular basis with positive diagonal.
ZMat hnf_rows(ZMat rows);

// LLL (delta = 3/4) on basis rows under the inner product <x,y> = x^T form y;
// form must be symmetric positive definite.  Exact rational Gram-Schmidt.
void lll_reduce(ZMat& basis, const ZMat& form);

// All lattice vectors x != 0 with Q(x) = x^T gram x <= bound, one per +-pair
// (the highest-index nonzero coordinate is positive), sorted by increasing Q
// then lexicographically.  gram must be SPD.
std::vector<std::pair<mpz_class, std::vector<long>>> enumerate_short(
    const ZMat& gram, const mpz_class& bound);

}  // namespace spinlab

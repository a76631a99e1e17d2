#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>
#include <gmpxx.h>

#include <algorithm>
#include <random>
#include <vector>

#include "spinlab/lattice.hpp"

using namespace spinlab;

static ZMat zmat(std::vector<std::vector<long>> rows) {
  ZMat m(rows.size());
  for (size_t i = 0; i < rows.size(); ++i)
    for (long v : rows[i]) m[i].push_back(v);
  return m;
}

static mpz_class quad_form(const ZMat& g, const std::vector<long>& x) {
  mpz_class q = 0;
  for (size_t i = 0; i < x.size(); ++i)
    for (size_t j = 0; j < x.size(); ++j) q += g[i][j] * x[i] * x[j];
  return q;
}

// reduce v against an upper-triangular HNF basis; true iff v is in the lattice
static bool hnf_member(const ZMat& h, std::vector<mpz_class> v) {
  for (size_t i = 0; i < h.size(); ++i) {
    if (v[i] % h[i][i] != 0) return false;
    mpz_class q = v[i] / h[i][i];
    for (size_t j = i; j < v.size(); ++j) v[j] -= q * h[i][j];
  }
  for (const auto& c : v)
    if (c != 0) return false;
  return true;
}

TEST_CASE("determinant") {
  CHECK(det(zmat({{1, 2}, {3, 4}})) == -2);
  CHECK(det(zmat({{0, 1}, {1, 0}})) == -1);
  CHECK(det(zmat({{2, 0, 1}, {1, 3, -1}, {0, 5, 2}})) == 27);
  CHECK(det(zmat({{7}})) == 7);
  CHECK(det(zmat({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}})) == 1);
  CHECK(det(zmat({{2, 4}, {1, 2}})) == 0);
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    ZMat a(4, std::vector<mpz_class>(4));
    ZMat b = a;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        a[i][j] = (long)(rng() % 19) - 9;
        b[i][j] = (long)(rng() % 19) - 9;
      }
    ZMat ab(4, std::vector<mpz_class>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) ab[i][j] += a[i][k] * b[k][j];
    CHECK(det(ab) == det(a) * det(b));
  }
}

TEST_CASE("hermite normal form") {
  ZMat h = hnf_rows(zmat({{2, 0}, {1, 1}, {0, 2}}));
  CHECK(h == zmat({{1, 1}, {0, 2}}));
  h = hnf_rows(zmat({{4, 2}, {1, 3}}));
  CHECK(h == zmat({{1, 3}, {0, 10}}));

  std::mt19937_64 rng(8);
  for (int t = 0; t < 25; ++t) {
    int n = 3;
    ZMat rows(2 * n, std::vector<mpz_class>(n));
    ZMat sq;
    do {
      for (auto& r : rows)
        for (auto& v : r) v = (long)(rng() % 15) - 7;
      sq = ZMat(rows.begin(), rows.begin() + n);
    } while (det(sq) == 0);
    ZMat hh = hnf_rows(rows);
    REQUIRE(hh.size() == (size_t)n);
    for (int i = 0; i < n; ++i) {
      CHECK(hh[i][i] > 0);
      for (int j = 0; j < i; ++j) CHECK(hh[i][j] == 0);
    }
    // every input row lies in the HNF lattice
    for (const auto& r : rows) CHECK(hnf_member(hh, r));
    // index bound: HNF determinant divides the determinant of any full-rank
    // square subset
    mpz_class dh = 1;
    for (int i = 0; i < n; ++i) dh *= hh[i][i];
    CHECK(det(sq) % dh == 0);
  }
}

TEST_CASE("lll preserves the lattice and reduces the form") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 15; ++t) {
    int n = 4;
    // SPD form A^T A + I
    ZMat a(n, std::vector<mpz_class>(n));
    for (auto& r : a)
      for (auto& v : r) v = (long)(rng() % 7) - 3;
    ZMat form(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) form[i][j] += a[k][i] * a[k][j];
        if (i == j) form[i][j] += 1;
      }
    // messy unimodular basis from random shears of the identity
    ZMat basis(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i) basis[i][i] = 1;
    for (int s = 0; s < 24; ++s) {
      int i = (int)(rng() % n), j = (int)(rng() % n);
      if (i == j) continue;
      mpz_class k = (long)(rng() % 9) - 4;
      for (int c = 0; c < n; ++c) basis[i][c] += k * basis[j][c];
    }
    ZMat before = basis;
    lll_reduce(basis, form);
    CHECK(hnf_rows(basis) == hnf_rows(before));
    CHECK(abs(det(basis)) == 1);

    // exact rational Gram-Schmidt; check size reduction and Lovasz
    auto ip = [&](const std::vector<mpq_class>& x, const std::vector<mpq_class>& y) {
      mpq_class s = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += x[i] * form[i][j] * y[j];
      return s;
    };
    std::vector<std::vector<mpq_class>> bq(n, std::vector<mpq_class>(n)), gs = bq;
    std::vector<std::vector<mpq_class>> mu(n, std::vector<mpq_class>(n));
    std::vector<mpq_class> norm2(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) bq[i][j] = basis[i][j];
    for (int i = 0; i < n; ++i) {
      gs[i] = bq[i];
      for (int j = 0; j < i; ++j) {
        mu[i][j] = ip(bq[i], gs[j]) / norm2[j];
        for (int c = 0; c < n; ++c) gs[i][c] -= mu[i][j] * gs[j][c];
      }
      norm2[i] = ip(gs[i], gs[i]);
      CHECK(norm2[i] > 0);
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < i; ++j) CHECK(abs(mu[i][j]) <= mpq_class(1, 2));
    for (int i = 1; i < n; ++i) {
      mpq_class lhs = norm2[i] + mu[i][i - 1] * mu[i][i - 1] * norm2[i - 1];
      CHECK(lhs >= mpq_class(3, 4) * norm2[i - 1]);
    }
  }
}

TEST_CASE("short vector enumeration, exact lists") {
  auto got = enumerate_short(zmat({{1, 0}, {0, 1}}), 4);
  std::vector<std::pair<mpz_class, std::vector<long>>> want = {
      {1, {0, 1}}, {1, {1, 0}}, {2, {-1, 1}}, {2, {1, 1}}, {4, {0, 2}}, {4, {2, 0}}};
  CHECK(got == want);

  // trace form of the degree-3 conductor-7 field: Q(1,1,1) = 3 is minimal
  ZMat g0 = zmat({{5, -2, -2}, {-2, 5, -2}, {-2, -2, 5}});
  got = enumerate_short(g0, 5);
  want = {{3, {1, 1, 1}}, {5, {0, 0, 1}}, {5, {0, 1, 0}}, {5, {1, 0, 0}}};
  CHECK(got == want);
}

TEST_CASE("short vector enumeration matches brute force") {
  std::mt19937_64 rng(10);
  for (int t = 0; t < 10; ++t) {
    int n = 3;
    ZMat a(n, std::vector<mpz_class>(n));
    for (auto& r : a)
      for (auto& v : r) v = (long)(rng() % 5) - 2;
    ZMat gram(n, std::vector<mpz_class>(n));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int k = 0; k < n; ++k) gram[i][j] += a[k][i] * a[k][j];
        if (i == j) gram[i][j] += 1;
      }
    mpz_class bound = 9 + (long)(rng() % 8);
    // Q(x) >= |x|^2, so |x_i| <= 4 covers bound <= 16
    std::vector<std::pair<mpz_class, std::vector<long>>> brute;
    for (long x = -4; x <= 4; ++x)
      for (long y = -4; y <= 4; ++y)
        for (long z = -4; z <= 4; ++z) {
          std::vector<long> v = {x, y, z};
          if (x == 0 && y == 0 && z == 0) continue;
          // one representative per +-pair, highest-index nonzero positive
          long lead = z != 0 ? z : (y != 0 ? y : x);
          if (lead < 0) continue;
          mpz_class q = quad_form(gram, v);
          if (q <= bound) brute.emplace_back(q, v);
        }
    std::sort(brute.begin(), brute.end());
    CHECK(enumerate_short(gram, bound) == brute);
  }
}

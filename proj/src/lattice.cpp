#include "spinlab/lattice.hpp"

#include <algorithm>
#include <cassert>

namespace spinlab {
namespace {

mpq_class ip(const ZMat& form, const std::vector<mpz_class>& x,
             const std::vector<mpz_class>& y) {
  mpz_class acc = 0;
  size_t n = x.size();
  for (size_t i = 0; i < n; ++i) {
    if (x[i] == 0) continue;
    mpz_class row = 0;
    for (size_t j = 0; j < n; ++j)
      if (y[j] != 0) row += form[i][j] * y[j];
    acc += x[i] * row;
  }
  return mpq_class(acc);
}

mpz_class round_nearest(const mpq_class& q) {
  // floor(q + 1/2)
  mpq_class t = q + mpq_class(1, 2);
  mpz_class out;
  mpz_fdiv_q(out.get_mpz_t(), t.get_num().get_mpz_t(), t.get_den().get_mpz_t());
  return out;
}

struct Gso {
  std::vector<std::vector<mpq_class>> mu;  // lower triangular
  std::vector<mpq_class> B;                // |b*_i|^2

  void compute(const ZMat& basis, const ZMat& form) {
    size_t n = basis.size();
    mu.assign(n, std::vector<mpq_class>(n, 0));
    B.assign(n, 0);
    // b*_i = b_i - sum_{j<i} mu_ij b*_j; inner products tracked via
    // <b_i, b*_j> = <b_i, b_j> - sum_{k<j} mu_jk <b_i, b*_k>
    std::vector<std::vector<mpq_class>> s(n, std::vector<mpq_class>(n, 0));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = 0; j <= i; ++j) {
        mpq_class v = ip(form, basis[i], basis[j]);
        for (size_t k = 0; k < j; ++k) v -= mu[j][k] * s[i][k];
        s[i][j] = v;
        if (j < i) mu[i][j] = v / B[j];
      }
      B[i] = s[i][i];
      assert(sgn(B[i]) > 0);
    }
  }
};

}  // namespace

mpz_class det(ZMat a) {
  size_t n = a.size();
  if (n == 0) return 1;
  mpz_class prev = 1;
  int sign = 1;
  for (size_t k = 0; k + 1 < n; ++k) {
    if (a[k][k] == 0) {
      size_t s = k + 1;
      while (s < n && a[s][k] == 0) ++s;
      if (s == n) return 0;
      std::swap(a[k], a[s]);
      sign = -sign;
    }
    for (size_t i = k + 1; i < n; ++i)
      for (size_t j = k + 1; j < n; ++j) {
        a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
        mpz_class q;
        mpz_divexact(q.get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
        a[i][j] = q;
      }
    prev = a[k][k];
  }
  return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

ZMat hnf_rows(ZMat rows) {
  assert(!rows.empty());
  size_t m = rows.size(), n = rows[0].size();
  size_t r = 0;
  for (size_t col = 0; col < n && r < m; ++col) {
    while (true) {
      size_t best = m;
      for (size_t i = r; i < m; ++i)
        if (rows[i][col] != 0 &&
            (best == m ||
             mpz_cmpabs(rows[i][col].get_mpz_t(), rows[best][col].get_mpz_t()) < 0))
          best = i;
      assert(best < m && "rank-deficient stack");
      std::swap(rows[r], rows[best]);
      bool done = true;
      for (size_t i = r + 1; i < m; ++i) {
        if (rows[i][col] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
        for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
        if (rows[i][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[r][col] < 0)
      for (size_t j = 0; j < n; ++j) rows[r][j] = -rows[r][j];
    for (size_t i = 0; i < r; ++i) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[i][col].get_mpz_t(), rows[r][col].get_mpz_t());
      if (q != 0)
        for (size_t j = 0; j < n; ++j) rows[i][j] -= q * rows[r][j];
    }
    ++r;
  }
  assert(r == std::min(m, n));
  rows.resize(r);
  return rows;
}

void lll_reduce(ZMat& basis, const ZMat& form) {
  size_t n = basis.size();
  if (n < 2) return;
  Gso gso;
  gso.compute(basis, form);
  size_t k = 1;
  while (k < n) {
    for (size_t j = k; j-- > 0;) {
      mpz_class q = round_nearest(gso.mu[k][j]);
      if (q == 0) continue;
      for (size_t t = 0; t < basis[k].size(); ++t) basis[k][t] -= q * basis[j][t];
      for (size_t t = 0; t < j; ++t) gso.mu[k][t] -= mpq_class(q) * gso.mu[j][t];
      gso.mu[k][j] -= q;
    }
    mpq_class lhs = gso.B[k];
    mpq_class rhs = (mpq_class(3, 4) - gso.mu[k][k - 1] * gso.mu[k][k - 1]) * gso.B[k - 1];
    if (lhs >= rhs) {
      ++k;
    } else {
      std::swap(basis[k], basis[k - 1]);
      gso.compute(basis, form);
      k = k > 1 ? k - 1 : 1;
    }
  }
}

std::vector<std::pair<mpz_class, std::vector<long>>> enumerate_short(
    const ZMat& gram, const mpz_class& bound) {
  size_t n = gram.size();
  // gram = U^T D U with U unit upper triangular
  std::vector<std::vector<mpq_class>> u(n, std::vector<mpq_class>(n, 0));
  std::vector<mpq_class> d(n);
  for (size_t i = 0; i < n; ++i) {
    u[i][i] = 1;
    for (size_t j = i; j < n; ++j) {
      mpq_class v(gram[i][j]);
      for (size_t k = 0; k < i; ++k) v -= d[k] * u[k][i] * u[k][j];
      if (j == i) {
        d[i] = v;
        assert(sgn(d[i]) > 0);
      } else {
        u[i][j] = v / d[i];
      }
    }
  }

  std::vector<std::pair<mpz_class, std::vector<long>>> out;
  std::vector<long> x(n, 0);
  mpq_class qbound(bound);

  // level i consumes x_i given x_{i+1}..x_{n-1}; used = sum_{k>i} d_k (x_k+t_k)^2
  auto rec = [&](auto&& self, size_t level, const mpq_class& used, bool zero_above) -> void {
    size_t i = level;
    mpq_class t = 0;
    for (size_t j = i + 1; j < n; ++j)
      if (x[j]) t += u[i][j] * x[j];
    mpq_class rem = qbound - used;
    mpq_class rat = rem / d[i];
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), rat.get_num().get_mpz_t(), rat.get_den().get_mpz_t());
    mpz_class s;
    mpz_sqrt(s.get_mpz_t(), fl.get_mpz_t());
    s += 1;
    mpz_class clo, chi;
    // x_i ranges over [-t - s, -t + s]
    mpq_class mt = -t;
    mpz_cdiv_q(clo.get_mpz_t(), mt.get_num().get_mpz_t(), mt.get_den().get_mpz_t());
    mpz_fdiv_q(chi.get_mpz_t(), mt.get_num().get_mpz_t(), mt.get_den().get_mpz_t());
    clo -= s;
    chi += s;
    if (zero_above && clo < 0) clo = 0;
    assert(clo.fits_slong_p() && chi.fits_slong_p());
    for (long v = clo.get_si(); v <= chi.get_si(); ++v) {
      mpq_class term = mpq_class(v) + t;
      term = d[i] * term * term;
      mpq_class used2 = used + term;
      if (used2 > qbound) continue;
      x[i] = v;
      bool za = zero_above && v == 0;
      if (i == 0) {
        if (!za) {
          mpz_class q = 0;
          for (size_t a = 0; a < n; ++a) {
            if (!x[a]) continue;
            mpz_class row = 0;
            for (size_t b = 0; b < n; ++b)
              if (x[b]) row += gram[a][b] * x[b];
            q += x[a] * row;
          }
          assert(q <= bound);
          out.emplace_back(q, x);
        }
      } else {
        self(self, i - 1, used2, za);
      }
    }
    x[i] = 0;
  };
  if (n > 0 && sgn(bound) > 0) rec(rec, n - 1, mpq_class(0), true);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace spinlab

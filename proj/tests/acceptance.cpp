// Acceptance harness: one pass/fail line per criterion, exit 0 only if all
// hard criteria pass.  Every criterion runs even when an earlier one fails.
#include <gmpxx.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <random>
#include <string>
#include <vector>

#include "spinlab/field.hpp"
#include "spinlab/hilbert.hpp"
#include "spinlab/io.hpp"
#include "spinlab/residue.hpp"
#include "spinlab/spin.hpp"
#include "spinlab/square_classes.hpp"
#include "spinlab/starlight.hpp"

using namespace spinlab;
using Clock = std::chrono::steady_clock;

namespace {

double secs_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Crit {
  bool pass = false;
  std::string detail;
};

struct Row {
  int n;
  long ell;
  long mk;
  const char* dk;
};

constexpr Row kRows[] = {{3, 7, 1, "1/2"},        {5, 11, 1, "7/16"},
                         {7, 43, 3, "29/64"},     {11, 23, 3, "467/1024"},
                         {13, 53, 5, "1893/4096"}, {17, 103, 17, "30849/65536"},
                         {19, 191, 27, "124187/262144"}};

struct Kit {
  CyclicField f;
  Ring8 r;
  OrbitTable ot;
  GramMatrix g;
  StarTable st;
  DensityReport dens;
  bool ready = false;
};

std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

double zscore(long count, long total, const mpq_class& q) {
  double p = q.get_d();
  double mean = (double)total * p;
  double sd = std::sqrt((double)total * p * (1 - p));
  return ((double)count - mean) / sd;
}

std::vector<Ring8Element> all_units_n3(const Ring8& r) {
  std::vector<Ring8Element> out;
  for (unsigned m = 0; m < (1u << 9); ++m) {
    Ring8Element x =
        ring_el(r, {(int)(m & 7), (int)((m >> 3) & 7), (int)((m >> 6) & 7)});
    if (is_unit(r, x)) out.push_back(x);
  }
  return out;
}

Ring8Element rand_unit(const Ring8& r, std::mt19937_64& rng) {
  for (;;) {
    std::vector<int> c(r.n);
    for (auto& v : c) v = (int)(rng() % 8);
    Ring8Element x = ring_el(r, c);
    if (is_unit(r, x)) return x;
  }
}

}  // namespace

int main() {
  std::vector<Crit> C(11);
  Kit kits[7];

  // ---- criterion 3 first: its outcome gates formula provenance ----
  bool formula_allowed = false;
  {
    auto& c = C[3];
    try {
      std::string parts;
      double n7 = 0;
      bool ok = true;
      for (int n : {1, 3, 5, 7}) {
        GramValidation v = validate_gram(n, default_modulus(n));
        ok = ok && v.ok;
        if (n == 7) n7 = v.oracle_seconds;
      }
      bool in_budget = n7 <= 300.0;
      c.pass = ok && in_budget;
      formula_allowed = c.pass;
      c.detail = "oracle and formula grams identical for n=1,3,5,7; n=7 oracle " +
                 fmt("%.1fs", n7) + (in_budget ? " (budget 300s)" : " EXCEEDS 300s");
    } catch (const std::exception& e) {
      c.detail = std::string("validation failed: ") + e.what();
    }
  }

  // ---- criteria 1 and 2: Table 1 ----
  {
    auto& c1 = C[1];
    auto& c2 = C[2];
    auto t0 = Clock::now();
    int good = 0, consistent = 0;
    std::string bad;
    bool provenance_ok = true;
    for (int i = 0; i < 7; ++i) {
      const Row& row = kRows[i];
      Kit& k = kits[i];
      try {
        k.f = build_field({row.n, row.ell, 1});
        k.r = make_ring8(k.f);
        k.ot = orbit_table(k.f);
        if (row.n <= 7) {
          k.g = gram_from_oracle(k.r);
        } else {
          k.g = gram_from_formula(k.r);
          if (!formula_allowed) provenance_ok = false;
        }
        k.st = starlight_invariant(k.f, k.r, k.ot, k.g);
        k.dens = density_report(row.n, k.st.m_k);
        k.ready = true;
        mpq_class expect(row.dk);
        if (k.st.m_k == row.mk && k.dens.D_K == expect) {
          ++good;
        } else {
          bad += " n=" + std::to_string(row.n);
        }
        // closed formula from first principles
        mpq_class manual(mpz_class(1) << (row.n - 1), 1);
        manual = manual * (row.n - 1) + k.st.m_k * row.n + 1;
        manual /= mpq_class((mpz_class(1) << row.n) * row.n, 1);
        manual.canonicalize();
        if (manual == expect && manual == k.dens.D_K) ++consistent;
      } catch (const std::exception& e) {
        bad += " n=" + std::to_string(row.n) + "(" + e.what() + ")";
      }
    }
    double el = secs_since(t0);
    bool in_budget = el <= 600.0;
    c1.pass = good == 7 && in_budget && provenance_ok;
    c1.detail = std::to_string(good) + "/7 rows exact (oracle grams n<=7, formula n>=11) in " +
                fmt("%.1fs", el) + (in_budget ? " (budget 600s)" : " EXCEEDS 600s");
    if (!provenance_ok) c1.detail += "; formula provenance blocked by criterion 3";
    if (!bad.empty()) c1.detail += "; mismatches:" + bad;
    c2.pass = consistent == 7;
    c2.detail = "closed-form D_K from m_K reduces to the published fraction on " +
                std::to_string(consistent) + "/7 rows (n=11: (10240+34)/22528 = 467/1024)";
    if (consistent == 7) {
      mpq_class ex(10240 + 34, 22528);
      ex.canonicalize();
      if (ex != mpq_class(467, 1024)) {
        c2.pass = false;
        c2.detail = "worked example failed to reduce";
      }
    }
  }

  // ---- criterion 4: symbol properties ----
  {
    auto& c = C[4];
    try {
      long checks = 0;
      bool ok = true;
      // degree 3: exhaustive over all 448 units
      {
        Kit& k = kits[0];
        auto units = all_units_n3(k.r);
        ok = ok && units.size() == 448;
        std::vector<UnitSquareClass8> cs, csr;
        for (auto& u : units) {
          cs.push_back(coords8(k.r, u));
          csr.push_back(coords8(k.r, r8_shift(k.r, u, 1)));
        }
        UnitSquareClass8 c5 = coords8(k.r, reduce(k.r, from_int(k.f, 5)));
        UnitSquareClass8 cm1 = coords8(k.r, r8_neg(k.r, k.r.one));
        ok = ok && symbol_classes(k.g, cm1, cm1) == -1;
        for (size_t i = 0; i < units.size() && ok; ++i) {
          ok = ok && symbol_classes(k.g, c5, cs[i]) == 1;
          // bimultiplicativity holds exhaustively because coords8 is a
          // homomorphism and the pairing is bilinear in the coordinates
          for (size_t j = 0; j < units.size() && ok; ++j) {
            int s = symbol_classes(k.g, cs[i], cs[j]);
            ok = ok && s == symbol_classes(k.g, cs[j], cs[i]);
            ok = ok && s == symbol_classes(k.g, csr[i], csr[j]);
            UnitSquareClass8 cij = coords8(k.r, r8_mul(k.r, units[i], units[j]));
            ok = ok && cij.a == (cs[i].a ^ cs[j].a) && cij.eps == (cs[i].eps ^ cs[j].eps);
            ++checks;
          }
        }
        // direct triple-level spot check
        std::mt19937_64 rng(0xc4c4);
        for (int t = 0; t < 10000 && ok; ++t) {
          size_t i = rng() % 448, j = rng() % 448, kk = rng() % 448;
          ok = ok && symbol(k.r, r8_mul(k.r, units[i], units[j]), units[kk], k.g) ==
                         symbol_classes(k.g, cs[i], cs[kk]) * symbol_classes(k.g, cs[j], cs[kk]);
          ++checks;
        }
      }
      // degrees 5 and 7: random sampling
      for (int ki : {1, 2}) {
        Kit& k = kits[ki];
        std::mt19937_64 rng(0xc400 + ki);
        Ring8Element five = reduce(k.r, from_int(k.f, 5));
        Ring8Element m1 = r8_neg(k.r, k.r.one);
        ok = ok && symbol(k.r, m1, m1, k.g) == -1;
        for (int t = 0; t < 10000 && ok; ++t) {
          Ring8Element u = rand_unit(k.r, rng), v = rand_unit(k.r, rng),
                       w = rand_unit(k.r, rng);
          int s = symbol(k.r, u, v, k.g);
          ok = ok && s == symbol(k.r, v, u, k.g);
          int j = 1 + (int)(rng() % (k.r.n - 1));
          ok = ok && s == symbol(k.r, r8_shift(k.r, u, j), r8_shift(k.r, v, j), k.g);
          ok = ok && symbol(k.r, r8_mul(k.r, u, w), v, k.g) == s * symbol(k.r, w, v, k.g);
          ok = ok && symbol(k.r, five, v, k.g) == 1;
          ++checks;
        }
      }
      c.pass = ok;
      c.detail = ok ? "bimultiplicative, symmetric, Galois-invariant; (-1,-1)=-1, (5,v)=+1; " +
                          std::to_string(checks) + " checks (n=3 exhaustive, 10^4 random for n=5,7)"
                    : "property violated";
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
  }

  // ---- criterion 5: class group size and Galois-fixed classes ----
  {
    auto& c = C[5];
    try {
      bool ok = true;
      for (Kit& k : kits) {
        ok = ok && k.ready;
        if (!k.ready) continue;
        int n = k.f.params.n;
        // the basis units 1+2e_i hit the standard basis classes, so the class
        // map is onto F_2^n
        for (int i = 0; i < n && ok; ++i) {
          std::vector<int> coords(n);
          for (int t = 0; t < n; ++t) coords[t] = (int)((k.r.one.c[t] + (t == i ? 2 : 0)) & 7);
          ok = ok && class_of(k.r, ring_el(k.r, coords)).bits == (1u << i);
        }
        long total = 0;
        int fixed = 0;
        uint32_t all = (1u << n) - 1;
        for (auto& [rep, size] : k.ot.orbits) {
          total += size;
          if (size == 1) {
            ++fixed;
            ok = ok && (rep == 0 || rep == all);
          }
        }
        ok = ok && total == (1l << n) && fixed == 2;
      }
      c.pass = ok;
      c.detail = ok ? "|M4| = 2^n and the only Galois-fixed classes are class(1) and class(-1), all 7 fields"
                    : "violated";
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
  }

  // ---- criteria 6-9: sampling ----
  SampleStats s37, s511;
  bool have37 = false, have511 = false;
  double t37 = 0;
  {
    auto& c = C[6];
    try {
      Kit& k = kits[0];
      UnitBasis ub = unit_basis(k.f);
      auto t0 = Clock::now();
      s37 = sample(k.f, k.r, k.g, ub, {2000000, 1, 8}, [](const PrimeRecord&) {});
      t37 = secs_since(t0);
      have37 = true;
      double worst = 0;
      for (long count : s37.class_counts)
        worst = std::max(worst, std::abs(zscore(count, s37.split, mpq_class(1, 8))));
      bool in_budget = t37 <= 600.0;
      c.pass = worst <= 3.0 && in_budget && have37;
      c.detail = "split primes " + std::to_string(s37.split) +
                 " below 2*10^6; all 8 class frequencies within 3 sigma of 1/8 (max |z| " +
                 fmt("%.2f", worst) + ") in " + fmt("%.1fs", t37) +
                 (in_budget ? " (budget 600s)" : " EXCEEDS 600s");
      if (worst > 3.0) c.detail += "; EXCEEDS 3 sigma";
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
  }
  {
    auto& c = C[7];
    try {
      Kit& k5 = kits[1];
      UnitBasis ub5 = unit_basis(k5.f);
      s511 = sample(k5.f, k5.r, k5.g, ub5, {100000, 1, 8}, [](const PrimeRecord&) {});
      have511 = true;
      double z_split = zscore(s37.star_pos_split, s37.split, kits[0].dens.d_RS);
      double z_inert = zscore(s37.star_pos_inert, s37.inert, mpq_class(1, 2));
      double z_all = zscore(s37.star_pos_all, s37.total, kits[0].dens.D_K);
      double z5 = zscore(s511.star_pos_split, s511.split, kits[1].dens.d_RS);
      c.pass = have37 && std::abs(z_split) <= 3 && std::abs(z_inert) <= 3 &&
               std::abs(z_all) <= 3 && std::abs(z5) <= 3;
      c.detail = "(3,7) star at 1/2: split z " + fmt("%.2f", z_split) + ", inert z " +
                 fmt("%.2f", z_inert) + ", overall z " + fmt("%.2f", z_all) +
                 "; (5,11) split at 3/16: z " + fmt("%.2f", z5) + " (all within 3 sigma)";
      if (!c.pass) c.detail += "; EXCEEDS 3 sigma";
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
  }
  {
    auto& c = C[8];
    // soft criterion: reported, flagged only beyond 4 sigma, never fails the run
    c.pass = true;
    if (have37) {
      double z = zscore(s37.all_spins_pos_split, s37.split, kits[0].dens.C_KS);
      double freq = (double)s37.all_spins_pos_split / (double)s37.split;
      c.detail = "all-spins-positive frequency " + fmt("%.4f", freq) +
                 " vs conjectured 1/4, z " + fmt("%.2f", z) +
                 (std::abs(z) > 4 ? " FLAG: beyond 4 sigma (soft criterion, not failing)"
                                  : " (within 4 sigma, soft)");
    } else {
      c.detail = "no (3,7) sample available (criterion 6 failed); soft criterion";
    }
  }
  {
    auto& c = C[9];
    c.pass = have37 && have511 && s37.flagship_violations == 0 &&
             s37.star_spin_mismatches == 0 && s511.flagship_violations == 0 &&
             s511.star_spin_mismatches == 0;
    long checked = (have37 ? s37.split : 0) + (have511 ? s511.split : 0);
    c.detail = "spin(j)*spin(n-j) = (alpha, alpha^(sigma^j)) mod 8 on 100% of " +
               std::to_string(checked) + " split primes; 0 violations";
    if (!c.pass)
      c.detail = "violations: (3,7) " + std::to_string(s37.flagship_violations) +
                 " flagship + " + std::to_string(s37.star_spin_mismatches) +
                 " star/spin; (5,11) " + std::to_string(s511.flagship_violations) +
                 " flagship + " + std::to_string(s511.star_spin_mismatches) + " star/spin";
  }

  // ---- criterion 10: star map soundness ----
  {
    auto& c = C[10];
    try {
      bool ok = true;
      std::string fails;
      for (Kit& k : kits) {
        if (!k.ready) {
          ok = false;
          continue;
        }
        int n = k.f.params.n;
        WellDefReport w = star_welldefined_check(k.f, k.r, k.g, 1000, 0x5747a2u + n);
        bool field_ok = w.trials == 1000 && w.lift_checks == 1000 &&
                        w.orbit_checks == 1000 && w.twist_checks == 1000;
        check_halfstar(k.r, k.g);  // throws on violation, every class
        field_ok = field_ok && k.st.kernel_size == k.st.m_k + 1;
        field_ok = field_ok && star_count_direct(k.r, k.g) == k.st.m_k * n + 1;
        field_ok = field_ok && k.st.m_k <= ((1l << (n - 1)) - 1) / n;
        field_ok = field_ok && k.dens.D_low < k.dens.D_K && k.dens.D_K <= k.dens.D_high;
        field_ok = field_ok && k.dens.d_low < k.dens.d_RS && k.dens.d_RS <= k.dens.d_high;
        if (!field_ok) fails += " n=" + std::to_string(n);
        ok = ok && field_ok;
      }
      c.pass = ok;
      c.detail = ok ? "10^3 well-definedness trials per field, halfstar exhaustive, kernel and "
                      "count identities, both bound theorems: all exact on 7 fields"
                    : "failures:" + fails;
    } catch (const std::exception& e) {
      c.detail = std::string("exception: ") + e.what();
    }
  }

  int passed = 0;
  for (int i = 1; i <= 10; ++i) {
    if (C[i].pass) ++passed;
    std::printf("criterion %2d: %s - %s\n", i, C[i].pass ? "PASS" : "FAIL",
                C[i].detail.c_str());
  }
  std::printf("acceptance: %d/10 criteria passed\n", passed);
  return passed == 10 ? 0 : 3;
}

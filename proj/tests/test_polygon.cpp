#include <catch2/catch_amalgamated.hpp>

#include "chowcert/polygon.hpp"

using namespace chowcert;

TEST_CASE("isogeny_apply evaluates the component formula", "[polygon]") {
  // Equal component counts: both coordinates multiply by a.
  IsogenyDescriptor d{2, 5, 5, IsogenyDirection::forward};
  CHECK(isogeny_apply(d, TorsionPoint(5, 1, 3)) == TorsionPoint(5, 2, 1));

  // a = 1 with k = n is the identity.
  IsogenyDescriptor id{1, 2, 2, IsogenyDirection::forward};
  CHECK(isogeny_apply(id, TorsionPoint(2, 1, 1)) == TorsionPoint(2, 1, 1));
  CHECK(isogeny_apply(id, TorsionPoint(2, 0, 1)) == TorsionPoint(2, 0, 1));

  // Unequal counts: forward multiplier on mu is a * k1 / gcd.
  IsogenyDescriptor mixed{2, 5, 10, IsogenyDirection::forward};
  CHECK(isogeny_apply(mixed, TorsionPoint(5, 1, 1)) == TorsionPoint(5, 2, 2));

  // Dual direction swaps the component counts: multiplier 2 * 10/5 = 4.
  IsogenyDescriptor dual{2, 5, 10, IsogenyDirection::dual};
  CHECK(isogeny_apply(dual, TorsionPoint(5, 1, 1)) == TorsionPoint(5, 2, 4));
}

TEST_CASE("isogeny_apply rejects non-rational torsion", "[polygon]") {
  IsogenyDescriptor d{2, 3, 5, IsogenyDirection::forward};
  CHECK_THROWS_AS(isogeny_apply(d, TorsionPoint(5, 1, 1)), precondition_error);
}

TEST_CASE("isogeny_apply is a homomorphism", "[polygon]") {
  const long n = 5;
  IsogenyDescriptor d{2, 5, 10, IsogenyDirection::forward};
  for (long u1 = 0; u1 < n; ++u1)
    for (long m1 = 0; m1 < n; ++m1)
      for (long u2 = 0; u2 < n; ++u2)
        for (long m2 = 0; m2 < n; ++m2) {
          TorsionPoint x(n, u1, m1), y(n, u2, m2);
          TorsionPoint sum(n, u1 + u2, m1 + m2);
          TorsionPoint fx = isogeny_apply(d, x), fy = isogeny_apply(d, y);
          CHECK(isogeny_apply(d, sum) == TorsionPoint(n, fx.u + fy.u, fx.mu + fy.mu));
        }
}

TEST_CASE("weil pairing normalization, alternation and arithmetic", "[polygon]") {
  CHECK(weil_pairing(5, TorsionPoint(5, 1, 0), TorsionPoint(5, 0, 1)) == 1);
  CHECK(weil_pairing(5, TorsionPoint(5, 2, 3), TorsionPoint(5, 1, 4)) == 0);  // 8 - 3 = 5
  for (long u = 0; u < 5; ++u)
    for (long m = 0; m < 5; ++m) {
      TorsionPoint p(5, u, m);
      CHECK(weil_pairing(5, p, p) == 0);
    }
  CHECK_THROWS_AS(weil_pairing(5, TorsionPoint(5, 1, 0), TorsionPoint(7, 0, 1)),
                  precondition_error);
}

TEST_CASE("weil pairing is bilinear and non-degenerate", "[polygon]") {
  for (long n : {5L, 17L}) {
    CAPTURE(n);
    // Bilinearity in the first slot over sampled pairs (full loop for n = 5).
    long step = (n == 5) ? 1 : 3;
    for (long u1 = 0; u1 < n; u1 += step)
      for (long m1 = 0; m1 < n; m1 += step)
        for (long u2 = 0; u2 < n; u2 += step)
          for (long m2 = 0; m2 < n; m2 += step)
            for (long u3 = 0; u3 < n; u3 += step)
              for (long m3 = 0; m3 < n; m3 += step) {
                TorsionPoint x(n, u1, m1), y(n, u2, m2), z(n, u3, m3);
                TorsionPoint xy(n, u1 + u2, m1 + m2);
                long lhs = weil_pairing(n, xy, z);
                long rhs = mod_norm(weil_pairing(n, x, z) + weil_pairing(n, y, z), n);
                REQUIRE(lhs == rhs);
              }
    // Non-degeneracy: every nonzero point pairs nontrivially with something.
    for (long u = 0; u < n; ++u)
      for (long m = 0; m < n; ++m) {
        if (u == 0 && m == 0) continue;
        bool hit = false;
        for (long u2 = 0; u2 < n && !hit; ++u2)
          for (long m2 = 0; m2 < n && !hit; ++m2)
            if (weil_pairing(n, TorsionPoint(n, u, m), TorsionPoint(n, u2, m2)) != 0) hit = true;
        REQUIRE(hit);
      }
  }
}

TEST_CASE("multiplication by a inverts the pairing", "[polygon]") {
  auto rep = antiisometry_check(2, 5, 5);
  CHECK(rep.holds);
  CHECK(rep.witnesses.empty());
  CHECK(rep.n == 5);

  // Unequal component counts with multiplier 2 * 5/5 = 2 still invert.
  CHECK(antiisometry_check(2, 5, 10).holds);

  CHECK(antiisometry_check(4, 17, 17).holds);

  // a = 1 gives even torsion level.
  CHECK_THROWS_AS(antiisometry_check(1, 2, 2), precondition_error);
  CHECK_THROWS_AS(antiisometry_check(2, 3, 5), precondition_error);
}

TEST_CASE("the identity map is not an anti-isometry", "[polygon]") {
  // Reference loop: e(x, y) + e(x, y) must vanish for all pairs for the
  // identity to pass, which fails at the standard basis pair.
  const long n = 5;
  bool holds = true;
  std::array<long, 4> witness{};
  for (long u1 = 0; u1 < n && holds; ++u1)
    for (long m1 = 0; m1 < n && holds; ++m1)
      for (long u2 = 0; u2 < n && holds; ++u2)
        for (long m2 = 0; m2 < n && holds; ++m2) {
          TorsionPoint x(n, u1, m1), y(n, u2, m2);
          if (mod_norm(2 * weil_pairing(n, x, y), n) != 0) {
            holds = false;
            witness = {u1, m1, u2, m2};
          }
        }
  CHECK_FALSE(holds);
  CHECK(weil_pairing(n, TorsionPoint(n, witness[0], witness[1]),
                     TorsionPoint(n, witness[2], witness[3])) != 0);
}

TEST_CASE("adjointness of the dual with respect to the pairing", "[polygon]") {
  const long n = 5;
  IsogenyDescriptor fwd{2, 5, 5, IsogenyDirection::forward};
  IsogenyDescriptor dual{2, 5, 5, IsogenyDirection::dual};
  for (long u1 = 0; u1 < n; ++u1)
    for (long m1 = 0; m1 < n; ++m1)
      for (long u2 = 0; u2 < n; ++u2)
        for (long m2 = 0; m2 < n; ++m2) {
          TorsionPoint x(n, u1, m1), y(n, u2, m2);
          CHECK(weil_pairing(n, isogeny_apply(fwd, x), y) ==
                weil_pairing(n, x, isogeny_apply(dual, y)));
        }
}

TEST_CASE("dual composite multipliers", "[polygon]") {
  auto equal = dual_composite_check(2, 10, 10);
  CHECK(equal.mult_u == 4);
  CHECK(equal.mult_mu == 4);
  CHECK(equal.is_mult_by_n_minus_1);

  auto same = dual_composite_check(2, 5, 5);
  CHECK(same.is_mult_by_n_minus_1);

  // k1 != k2: the component multiplier picks up k1 k2 / gcd^2 = 2, giving
  // 8 = 3 mod 5 instead of 4.
  auto mixed = dual_composite_check(2, 5, 10);
  CHECK(mixed.mult_u == 4);
  CHECK(mixed.mult_mu == 3);
  CHECK_FALSE(mixed.is_mult_by_n_minus_1);

  // a = 0 collapses the torsion group; vacuously multiplication by n - 1.
  auto trivial = dual_composite_check(0, 3, 3);
  CHECK(trivial.n == 1);
  CHECK(trivial.is_mult_by_n_minus_1);
}

TEST_CASE("kernel of the gluing map is the graph of multiplication by a", "[polygon]") {
  auto rep = frey_kani_kernel_check(2, 5);
  CHECK(rep.kernel_size == 25);
  CHECK(rep.equals_graph);
  // Kernel size squared matches the torsion order when the graph shape holds.
  CHECK(rep.kernel_size * rep.kernel_size == 5 * 5 * 5 * 5);

  auto trivial = frey_kani_kernel_check(0, 1);
  CHECK(trivial.kernel_size == 1);
  CHECK(trivial.equals_graph);

  auto big = frey_kani_kernel_check(4, 17);
  CHECK(big.kernel_size == 289);
  CHECK(big.equals_graph);

  CHECK_THROWS_AS(frey_kani_kernel_check(2, 6), precondition_error);
}

TEST_CASE("polygon reports serialize their parameters", "[polygon]") {
  auto rep = dual_composite_check(2, 5, 10).to_json();
  CHECK(rep["a"] == 2);
  CHECK(rep["k1"] == 5);
  CHECK(rep["k2"] == 10);
  CHECK(rep["n"] == 5);
  CHECK(rep["mult_mu"] == 3);
  CHECK(rep["is_mult_by_n_minus_1"] == false);

  auto anti = antiisometry_check(2, 5, 5).to_json();
  CHECK(anti["holds"] == true);
  CHECK(anti["witnesses"].empty());

  auto fk = frey_kani_kernel_check(2, 5).to_json();
  CHECK(fk["kernel_size"] == 25);
  CHECK(fk["equals_graph"] == true);

  PolygonFibre fibre(5);
  CHECK(fibre.k == 5);
  CHECK_THROWS_AS(PolygonFibre(0), precondition_error);
}

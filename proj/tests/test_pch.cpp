#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "chowcert/pch.hpp"

using namespace chowcert;

TEST_CASE("quotient dimensions with frozen kernel and image ranks", "[pch]") {
  struct Case {
    int k1, k2, kernel, image;
  } cases[] = {
      {3, 3, 55, 52},
      {5, 5, 151, 148},
      {4, 6, 145, 142},
  };
  for (auto [k1, k2, kernel, image] : cases) {
    CAPTURE(k1, k2);
    ProductFibre f(k1, k2);
    PchSpace p(f);
    CHECK(p.ambient_dim() == 8 * k1 * k2);
    CHECK(p.kernel_dim() == kernel);
    CHECK(p.image_rank() == image);
    CHECK(p.quotient_dim() == 3);
  }
}

TEST_CASE("generator cycles lie in the kernel", "[pch]") {
  ProductFibre f(4, 5);
  SparseRatMatrix ii = istar_istar_matrix(f);
  auto g = generator_cycles(f);
  CHECK(g.e1.size() == 4);   // one H per cell of the base column
  CHECK(g.e2.size() == 5);   // one V per cell of the base row
  CHECK(g.f.size() == 40);   // 2A - 2B on each of the 20 exceptional components
  CHECK(vec_is_zero(ii.apply(g.e1)));
  CHECK(vec_is_zero(ii.apply(g.e2)));
  CHECK(vec_is_zero(ii.apply(g.f)));
}

TEST_CASE("generators form the coordinate basis of the quotient", "[pch]") {
  ProductFibre f(3, 4);
  PchSpace p = pch_space(f);
  CHECK(pch_coords(p, p.generators().e1) == std::array<Rat, 3>{Rat(1), Rat(0), Rat(0)});
  CHECK(pch_coords(p, p.generators().e2) == std::array<Rat, 3>{Rat(0), Rat(1), Rat(0)});
  CHECK(pch_coords(p, p.generators().f) == std::array<Rat, 3>{Rat(0), Rat(0), Rat(1)});
}

TEST_CASE("image vectors vanish in the quotient", "[pch]") {
  ProductFibre f(3, 3);
  PchSpace p(f);
  auto cols = p.gamma().column_view();
  for (int d : {0, 7, 20, 33, 53}) {
    CAPTURE(d);
    CHECK(p.coords(cols[d]) == std::array<Rat, 3>{Rat(0), Rat(0), Rat(0)});
  }
}

TEST_CASE("coordinates are linear and blind to the image", "[pch]") {
  ProductFibre f(3, 3);
  PchSpace p(f);
  auto cols = p.gamma().column_view();
  std::mt19937 rng(911u);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(cols.size()) - 1);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int trial = 0; trial < 100; ++trial) {
    CAPTURE(trial);
    Rat a(coeff(rng)), b(coeff(rng)), c(coeff(rng));
    CycleVector v;
    vec_add_scaled(v, a, p.generators().e1);
    vec_add_scaled(v, b, p.generators().e2);
    vec_add_scaled(v, c, p.generators().f);
    CycleVector noisy = v;
    for (int t = 0; t < 4; ++t) vec_add_scaled(noisy, Rat(coeff(rng)), cols[pick(rng)]);
    auto base = p.coords(v);
    auto shifted = p.coords(noisy);
    CHECK(base == std::array<Rat, 3>{a, b, c});
    CHECK(shifted == base);
  }
}

TEST_CASE("pch coordinates agree with the generic quotient construction", "[pch]") {
  // Independent route: materialize the kernel and build the quotient from
  // scratch, then verify dimension agreement and that subtracting the
  // coordinate combination of the generators lands exactly in the image.
  ProductFibre f(3, 3);
  PchSpace p(f);
  SparseRatMatrix ii = istar_istar_matrix(f);
  std::vector<SparseVecR> kernel = kernel_basis(ii);
  CHECK(static_cast<int>(kernel.size()) == p.kernel_dim());
  QuotientSpace q(f.coord_dim(), kernel, gamma_matrix(f).column_view());
  CHECK(q.quotient_dim() == p.quotient_dim());

  std::mt19937 rng(4242u);
  std::uniform_int_distribution<long> coeff(-2, 2);
  auto cols = p.gamma().column_view();
  std::uniform_int_distribution<int> pick(0, static_cast<int>(cols.size()) - 1);
  for (int trial = 0; trial < 10; ++trial) {
    CAPTURE(trial);
    CycleVector v;
    vec_add_scaled(v, Rat(coeff(rng)), p.generators().e1);
    vec_add_scaled(v, Rat(coeff(rng)), p.generators().e2);
    vec_add_scaled(v, Rat(coeff(rng)), p.generators().f);
    for (int t = 0; t < 3; ++t) vec_add_scaled(v, Rat(coeff(rng)), cols[pick(rng)]);
    auto c = p.coords(v);
    CycleVector residual = v;
    vec_add_scaled(residual, -c[0], p.generators().e1);
    vec_add_scaled(residual, -c[1], p.generators().e2);
    vec_add_scaled(residual, -c[2], p.generators().f);
    auto qc = q.coords(residual);
    for (const Rat& x : qc) CHECK(x == 0);
  }
}

TEST_CASE("generator classes do not depend on the base point", "[pch]") {
  ProductFibre f(5, 4);
  PchSpace p(f);
  for (int i0 = 0; i0 < 3; ++i0)
    for (int j0 = 0; j0 < 3; ++j0) {
      CAPTURE(i0, j0);
      auto g = generator_cycles(f, i0, j0);
      CHECK(p.coords(g.e1) == std::array<Rat, 3>{Rat(1), Rat(0), Rat(0)});
      CHECK(p.coords(g.e2) == std::array<Rat, 3>{Rat(0), Rat(1), Rat(0)});
    }
  // A space built at a shifted base point keeps the same dimensions.
  PchSpace shifted(f, 2, 1);
  CHECK(shifted.quotient_dim() == p.quotient_dim());
  CHECK(shifted.kernel_dim() == p.kernel_dim());
}

TEST_CASE("quotient dimension is stable under coordinate relabeling", "[pch]") {
  // Cyclic shift (i, j) -> (i+1, j+1) induces a permutation of components,
  // coordinates and curves; ranks must not move.
  ProductFibre f(3, 4);
  int ns = f.num_strict();
  auto comp_shift = [&](int c) {
    auto [i, j] = f.cell(c);
    return f.is_strict(c) ? f.strict_id(i + 1, j + 1) : f.exc_id(i + 1, j + 1);
  };
  auto coord_shift = [&](int idx) {
    int comp, cls;
    if (idx < 6 * ns) {
      comp = idx / 6;
      cls = idx % 6;
    } else {
      comp = ns + (idx - 6 * ns) / 2;
      cls = (idx - 6 * ns) % 2;
    }
    return f.coord(comp_shift(comp), cls);
  };
  SparseRatMatrix ii = istar_istar_matrix(f);
  SparseRatMatrix ii_shift(ii.rows(), ii.cols());
  for (const auto& [rc, v] : ii.entries())
    ii_shift.set(comp_shift(rc.first), coord_shift(rc.second), v);
  CHECK(rank(ii_shift) == rank(ii));

  SparseRatMatrix g = gamma_matrix(f);
  SparseRatMatrix g_shift(g.rows(), g.cols());
  for (const auto& [rc, v] : g.entries()) g_shift.set(coord_shift(rc.first), rc.second, v);
  CHECK(rank(g_shift) == rank(g));
}

TEST_CASE("error paths of the quotient space", "[pch]") {
  ProductFibre f(3, 3);
  PchSpace p(f);
  // A bare H class telescopes onto its neighbours, so it is not in the kernel.
  CycleVector h;
  add_class(h, f, f.strict_id(0, 0), static_cast<int>(StrictClass::H), Rat(1));
  CHECK_FALSE(p.in_kernel(h));
  CHECK_THROWS_AS(p.coords(h), precondition_error);
  CHECK_THROWS_AS(p.coords(CycleVector{{f.coord_dim(), Rat(1)}}), precondition_error);

  // Under all-ones multiplicities the gamma columns leave the kernel and the
  // construction must refuse.
  ProductFibre ones(3, 3, MultiplicityProfile::all_ones);
  CHECK_THROWS_AS(PchSpace(ones), consistency_error);
}

TEST_CASE("summary report carries dimensions and generator coordinates", "[pch]") {
  ProductFibre f(3, 3);
  PchSpace p(f);
  auto j = p.summary_json();
  CHECK(j["ambient_dim"] == 72);
  CHECK(j["kernel_dim"] == 55);
  CHECK(j["image_rank"] == 52);
  CHECK(j["quotient_dim"] == 3);
  CHECK(j["generator_coords"][0] == nlohmann::ordered_json({"1", "0", "0"}));
  CHECK(j["generator_coords"][1] == nlohmann::ordered_json({"0", "1", "0"}));
  CHECK(j["generator_coords"][2] == nlohmann::ordered_json({"0", "0", "1"}));
}

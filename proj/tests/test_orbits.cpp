#include "hodge/orbits.hpp"

#include "orbit_fixtures.hpp"

#include <doctest.h>

#include <cmath>

using namespace hodge;
using namespace hodge::testing;

namespace {

Point iy(std::initializer_list<long> ys) {
  Point z;
  for (long y : ys) z.emplace_back(Rational(0), Rational(y));
  return z;
}

Complex rat(long a, long b = 1) { return Complex(Rational(a, b)); }

// Closed-form e^{t N} for the disc: F^1 = span{e0 + t e1}.
DecFiltration disc_point(const Complex& t) {
  return dec(0, {Subspace::full(2), Subspace::span({vec({1, t})}, 2)});
}

}  // namespace

TEST_CASE("orbit_eval worked values") {
  auto spec = non_conv_spec();
  CHECK(orbit_eval(spec, {Complex(), Complex()}) == spec.F_inf());
  for (long y : {1L, 3L, 40L}) {
    auto f = orbit_eval(spec, iy({y, y}));
    Subspace expect = Subspace::span({unit_vector(3, 0), vec({0, 1, cx(0, 2 * y)})}, 3);
    CHECK(f.at(0) == expect);
  }
  auto d = disc::spec();
  CHECK(orbit_eval(d, {cx(2, 5)}) == disc_point(cx(2, 5)));
  CHECK(orbit_membership(d, orbit_eval(d, {cx(0, 1)})) == Membership::in_M);
  CHECK(orbit_membership(d, orbit_eval(d, {cx(0, -1)})) != Membership::in_M);
}

TEST_CASE("orbit_eval periodicity") {
  std::mt19937_64 rng(11);
  auto spec = non_conv_spec();
  for (int t = 0; t < 10; ++t) {
    Point z{small_complex(rng), small_complex(rng)};
    for (std::size_t j = 0; j < 2; ++j) {
      Point z1 = z;
      z1[j] += Complex(1);
      CHECK(orbit_eval(spec, z1) == orbit_eval(spec, z).transformed(exp_nilpotent(spec.N[j])));
    }
  }
}

TEST_CASE("s coordinates reduce the real part") {
  Point z{Complex(Rational(7, 4), Rational(1)), Complex(Rational(-1, 4), Rational(2))};
  Point z0{Complex(Rational(3, 4), Rational(1)), Complex(Rational(3, 4), Rational(2))};
  CHECK(s_coordinates(z) == s_coordinates(z0));
  auto s = s_coordinates({Complex(Rational(0), Rational(1))});
  CHECK(std::abs(s[0].to_double() - std::exp(-2 * M_PI)) < 1e-15);
  CHECK(s[0].im().get_d() == doctest::Approx(0.0));
}

TEST_CASE("lnf_eval") {
  SUBCASE("Gamma = 0 is the orbit") {
    auto spec = non_conv_spec();
    Point z = iy({3, 2});
    CHECK(lnf_eval(spec, {}, z) == orbit_eval(spec, z));
  }
  SUBCASE("disc with Gamma = s N against substitution") {
    auto spec = disc::spec();
    LocalNormalForm lnf;
    lnf.gamma[{1}] = disc::N();
    check_lnf(spec, lnf);
    for (auto z : {cx(0, 1), Complex(Rational(1, 3), Rational(1, 2)), Complex(Rational(-5, 2), Rational(2))}) {
      Complex s = s_coordinates({z})[0];
      CHECK(lnf_eval(spec, lnf, {z}) == disc_point(z + s));
    }
  }
  SUBCASE("deck invariance, all j") {
    std::mt19937_64 rng(5);
    auto spec = non_conv_spec();
    for (int t = 0; t < 5; ++t) {
      auto lnf = random_lnf(rng, spec);
      Point z{Complex(small_rational(rng), Rational(1 + static_cast<long>(rng() % 3))),
              Complex(small_rational(rng), Rational(1, 2))};
      for (std::size_t j = 0; j < 2; ++j) {
        Point z1 = z;
        z1[j] += Complex(1);
        CHECK(lnf_eval(spec, lnf, z1) == lnf_eval(spec, lnf, z).transformed(exp_nilpotent(spec.N[j])));
      }
    }
  }
  SUBCASE("restricted Gamma_j") {
    auto spec = non_conv_spec();
    LocalNormalForm lnf;
    lnf.gamma[{1, 0}] = mat(3, {{2, 0, 1}});
    lnf.gamma[{0, 1}] = mat(3, {{2, 0, 3}});
    check_lnf(spec, lnf);
    Point z = iy({1, 1});
    Complex s2 = s_coordinates(z)[1];
    auto expect = orbit_eval(spec, z).transformed(exp_nilpotent(s2 * mat(3, {{2, 0, 3}})));
    CHECK(lnf_eval(spec, lnf, z, 1) == expect);
    CHECK(lnf_eval(spec, lnf, z, 2) == orbit_eval(spec, z));
    CHECK(lnf.restricted(1).gamma.size() == 1);
  }
}

TEST_CASE("check_lnf rejects invalid Gamma") {
  auto spec = non_conv_spec();
  LocalNormalForm bad_q;
  bad_q.gamma[{1, 0}] = mat(3, {{0, 2, 1}});  // raises the Hodge index
  CHECK_THROWS_WITH_AS(check_lnf(spec, bad_q), doctest::Contains("not in q"), HodgeError);
  LocalNormalForm constant;
  constant.gamma[{0, 0}] = mat(3, {{2, 0, 1}});
  CHECK_THROWS_AS(check_lnf(spec, constant), HodgeError);

  // non-inv: Gamma_j must commute with N_j when s_j is absent; for rank one every term has s_1.
  auto ni = non_inv_spec();
  auto basis = q_basis(ni);
  REQUIRE(!basis.empty());
  LocalNormalForm ok;
  ok.gamma[{2}] = basis.front();
  CHECK_NOTHROW(check_lnf(ni, ok));

  // disc_plus: gamma_flat commutes with N, so it may appear without s_1 in a two-variable copy.
  auto dp = disc_plus::spec();
  dp.N.push_back(disc_plus::N());
  LocalNormalForm flat;
  flat.gamma[{0, 1}] = disc_plus::gamma_flat();
  CHECK_NOTHROW(check_lnf(dp, flat));
  // two-variable copy of non-inv: q contains elements that do not commute with N.
  auto ni2 = non_inv_spec();
  ni2.N.push_back(non_inv::N());
  bool found = false;
  for (const auto& x : q_basis(ni2)) {
    if (commutator(non_inv::N(), x).is_zero()) continue;
    found = true;
    LocalNormalForm noncommuting;
    noncommuting.gamma[{0, 1}] = x;
    CHECK_THROWS_WITH_AS(check_lnf(ni2, noncommuting), doctest::Contains("does not commute"), HodgeError);
    noncommuting.gamma.clear();
    noncommuting.gamma[{1, 1}] = x;
    CHECK_NOTHROW(check_lnf(ni2, noncommuting));
  }
  CHECK(found);
}

TEST_CASE("random local normal forms commute with the leading nilpotents") {
  std::mt19937_64 rng(21);
  for (const auto& spec : {non_conv_spec(), unipotent2::spec()}) {
    for (int t = 0; t < 5; ++t) {
      auto lnf = random_lnf(rng, spec);
      for (std::size_t j = 0; j <= spec.rank(); ++j)
        for (const auto& [k, g] : lnf.restricted(j).gamma)
          for (std::size_t i = 0; i < j; ++i) CHECK(commutator(spec.N[i], g).is_zero());
    }
  }
}

TEST_CASE("grading_t") {
  auto sl2 = non_inv_sl2();
  check_sl2(sl2, non_inv::W());
  CHECK(grading_t(sl2, {1.0}) == Matrix::identity(4));
  // t(y) = diag(1, 1, y, y^2) here, and its inverse.
  CHECK(grading_t(sl2, {4.0}) == diag({1, 1, 4, 16}));
  CHECK(grading_t_inverse(sl2, {4.0}) == diag({1, 1, rat(1, 4), rat(1, 16)}));
  // group law
  auto d = disc::sl2();
  CHECK(grading_t(d, {4.0}) * grading_t(d, {9.0}) == grading_t(d, {36.0}));
  CHECK(grading_t(d, {9.0}) == diag({rat(1, 9), 1}));
  // half-integer powers
  SL2Data h{{diag({1, -1})}, diag({0, 0})};
  CHECK(grading_t(h, {4.0}) == diag({rat(1, 2), 2}));
  CHECK(std::abs(grading_t(h, {2.0})(0, 0).re().get_d() - 1 / std::sqrt(2.0)) < 1e-15);
  CHECK_THROWS_AS(grading_t(h, {0.0}), HodgeError);
  // pure case: y^{-Y0/2} is a scalar and fixes flags
  auto spec = disc::spec();
  SL2Data only_h{{diag({1, -1})}, diag({0, 0})};
  auto f = orbit_eval(spec, {cx(0, 7)});
  CHECK(f.transformed(grading_t(d, {16.0})) == f.transformed(grading_t(only_h, {16.0})));
  // t^{-1}(y) e^{iyN} F is constant
  for (double y : {1.0, 4.0, 25.0})
    CHECK(orbit_eval(spec, {Complex(Rational(0), rational_from_double(y))}).transformed(grading_t_inverse(d, {y})) ==
          disc_point(cx(0, 1)));
}

TEST_CASE("check_sl2 rejects bad data") {
  CHECK_THROWS_AS(check_sl2({{mat(2, {{1, 0, 1}})}, diag({1, 1})}, IncFiltration::trivial(2, 1)), HodgeError);
  CHECK_THROWS_AS(check_sl2({{diag({1, -1})}, diag({0, 0})}, IncFiltration::trivial(2, 1)), HodgeError);
  CHECK_THROWS_AS(check_sl2({{diag({1, -1}), mat(2, {{0, 1, 1}, {1, 0, 1}})}, diag({1, 1})}, IncFiltration::trivial(2, 1)),
                  HodgeError);
}

TEST_CASE("P-function bound stable over two decades") {
  auto spec = non_inv_spec();
  auto sl2 = non_inv_sl2();
  double b1 = p_function_bound(spec, sl2, {{1.0}, {2.0}, {5.0}, {10.0}});
  double b2 = p_function_bound(spec, sl2, {{10.0}, {20.0}, {50.0}, {100.0}, {1000.0}});
  CHECK(b2 <= b1 + 1e-12);
  auto d = disc::spec();
  CHECK(p_function_bound(d, disc::sl2(), {{1.0}, {100.0}, {1e4}}) == doctest::Approx(1.0));
}

TEST_CASE("sl2 triples") {
  SUBCASE("dim 2") {
    auto t = sl2_triple_one_var(disc::N(), disc::base().F, 1);
    CHECK(t.H == diag({1, -1}));
    CHECK(t.N_plus == mat(2, {{0, 1, 1}}));
  }
  SUBCASE("Jordan block of size 3") {
    Matrix n = mat(3, {{1, 0, 1}, {2, 1, 1}});
    auto f = dec(0, {Subspace::full(3), coords(3, {0, 1}), coords(3, {0})});
    auto t = sl2_triple_one_var(n, f, 2);
    CHECK(t.H == diag({2, 0, -2}));
    CHECK(t.N_plus == mat(3, {{0, 1, 2}, {1, 2, 2}}));
  }
  SUBCASE("random desk examples and the nilp-conv identity") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 10; ++t) {
      auto o = random_split_orbit(rng);
      auto tr = sl2_triple_one_var(o.N, o.F, o.k);
      CHECK(commutator(tr.H, tr.N) == Complex(-2) * tr.N);
      CHECK(commutator(tr.H, tr.N_plus) == Complex(2) * tr.N_plus);
      CHECK(commutator(tr.N_plus, tr.N) == tr.H);
      auto phi = naive_limit(o.N, o.F, o.k);
      CHECK(o.F.transformed(exp_nilpotent(I() * o.N)) == phi.transformed(exp_nilpotent(-I() * tr.N_plus)));
    }
  }
  SUBCASE("two-variable cone") {
    // C^2 (x) C^2 with N_1 = N (x) 1, N_2 = 1 (x) N; basis ee, ef, fe, ff.
    Matrix n1 = mat(4, {{2, 0, 1}, {3, 1, 1}});
    Matrix n2 = mat(4, {{1, 0, 1}, {3, 2, 1}});
    Matrix p1 = mat(4, {{0, 2, 1}, {1, 3, 1}});
    Matrix p2 = mat(4, {{0, 1, 1}, {2, 3, 1}});
    auto f = dec(0, {Subspace::full(4), coords(4, {0, 1, 2}), coords(4, {0})});
    auto w = monodromy_weight_filtration(n1 + n2, 2);
    for (auto [a, b] : {std::pair{1L, 1L}, {2L, 1L}, {5L, 3L}, {1L, 7L}, {9L, 2L}}) {
      Matrix ny = rat(a) * n1 + rat(b) * n2;
      CHECK(monodromy_weight_filtration(ny, 2) == w);
      auto tr = sl2_triple_one_var(ny, f, 2);
      CHECK(commutator(tr.N_plus, tr.N) == tr.H);
      CHECK(tr.H == diag({2, 0, 0, -2}));
      auto phi = naive_limit(ny, f, 2);
      CHECK(f.transformed(exp_nilpotent(I() * ny)) == phi.transformed(exp_nilpotent(-I() * tr.N_plus)));
      // (sum y_j N_j, H, sum y_j^{-1} N_j^+) is an sl2-triple for the commuting family
      Matrix np = rat(1, a) * p1 + rat(1, b) * p2;
      CHECK(commutator(np, ny) == tr.H);
      CHECK(commutator(tr.H, np) == Complex(2) * np);
    }
  }
  SUBCASE("no-solution") {
    // hat F not split for W(N)
    auto f = dec(0, {Subspace::full(2), Subspace::span({vec({1, I()})}, 2)});
    CHECK_THROWS_WITH_AS(sl2_triple_one_var(disc::N(), f, 1), doctest::Contains("no-solution"), HodgeError);
    // N raises the Hodge filtration
    CHECK_THROWS_AS(sl2_triple_one_var(mat(2, {{0, 1, 1}}), disc::base().F, 1), HodgeError);
  }
}

TEST_CASE("Gamma decay along the default ray") {
  SUBCASE("Gamma = 0") {
    auto r = ad_gamma_decay(non_conv_spec(), {}, default_ray(2));
    CHECK(r.ok());
    for (double v : r.values) CHECK(v == 0.0);
  }
  SUBCASE("closed form for the disc") {
    auto spec = disc::spec();
    LocalNormalForm lnf;
    lnf.gamma[{1}] = disc::N();
    auto r = ad_gamma_decay(spec, lnf, default_ray(1));
    CHECK(r.ok());
    for (std::size_t m = 0; m < r.values.size(); ++m) {
      double y = static_cast<double>(m + 1);
      CHECK(r.values[m] == doctest::Approx(std::exp(-2 * M_PI * y)).epsilon(1e-12));
    }
  }
  SUBCASE("random local normal forms") {
    std::mt19937_64 rng(3);
    for (const auto& spec : {non_conv_spec(), non_inv_spec(), disc_plus::spec()}) {
      for (int t = 0; t < 3; ++t) {
        auto r = ad_gamma_decay(spec, random_lnf(rng, spec), default_ray(spec.rank()));
        CHECK(r.ok());
        CHECK(r.values.back() < 1e-8);
      }
    }
  }
}

TEST_CASE("vanishing pattern") {
  // Two copies of the disc direction: Gamma^2 must have no positive ad(Y^1) weight.
  auto spec = disc_plus::spec();
  spec.N.push_back(Matrix::zero(4));
  SL2Data sl2{{diag({1, -1, 0, 0}), Matrix::zero(4)}, diag({1, 1, 1, 1})};
  std::vector<Point> samples{{rat(1, 3), rat(1, 5)}, {cx(1, 2), rat(1, 7)}};
  LocalNormalForm good;
  good.gamma[{1, 0}] = disc_plus::N();
  good.gamma[{0, 1}] = disc_plus::gamma_flat();
  check_lnf(spec, good);
  CHECK(vanishing_violations(spec, good, sl2, samples).empty());
  // A term of positive ad(Y^1)-weight surviving into Gamma^2 is reported.
  LocalNormalForm bad;
  bad.gamma[{0, 1}] = mat(4, {{0, 1, 1}});
  auto v = vanishing_violations(spec, bad, sl2, samples);
  CHECK(!v.empty());
}

TEST_CASE("positivity margin") {
  CHECK(positivity_margin(weight_one_plane()) > 0);
  CHECK(positivity_margin(weight_one_plane(-1)) < 0);
  auto spec = non_inv_spec();
  auto sl2 = non_inv_sl2();
  double m4 = positivity_margin(spec.base.with_F(orbit_eval(spec, {cx(0, 4)}).transformed(grading_t_inverse(sl2, {4.0}))));
  double m100 =
      positivity_margin(spec.base.with_F(orbit_eval(spec, {cx(0, 100)}).transformed(grading_t_inverse(sl2, {100.0}))));
  CHECK(m4 == doctest::Approx(m100));
  double raw4 = positivity_margin(spec.base.with_F(orbit_eval(spec, {cx(0, 4)})));
  double raw100 = positivity_margin(spec.base.with_F(orbit_eval(spec, {cx(0, 100)})));
  CHECK(raw100 < raw4);
}

TEST_CASE("scans") {
  SUBCASE("Gamma = 0 passes trivially") {
    auto r = distance_scan(disc::spec(), {}, {{5.0}, {10.0}}, MetricMode::standard);
    CHECK(r.pass());
    for (const auto& p : r.points) CHECK(p.value == 0.0);
  }
  SUBCASE("grid outside the region") {
    CHECK_THROWS_AS(distance_scan(non_conv_spec(), {}, {{1.0, 2.0}}, MetricMode::standard), HodgeError);
    CHECK_THROWS_AS(distance_scan(disc::spec(), {}, {{0.5}}, MetricMode::standard), HodgeError);
  }
  SUBCASE("disc: logarithmic growth at most") {
    LocalNormalForm lnf;
    lnf.gamma[{1}] = disc::N();
    std::vector<std::vector<double>> grid;
    for (double y : {5.0, 8.0, 13.0, 20.0, 30.0, 40.0}) grid.push_back({y});
    auto r = distance_scan(disc::spec(), lnf, grid, MetricMode::standard, {}, 0.25, 16);
    CHECK(r.flags.at("evaluated"));
    CHECK(r.pass());
    // hyperbolic length of a shift by s at height y: the residual falls like 1/y
    CHECK(r.fit.at("slope") == doctest::Approx(-1.0).epsilon(0.05));
  }
  SUBCASE("rel-compact on non-inv with and without t(y)") {
    std::vector<std::vector<double>> grid{{1.0}, {4.0}, {16.0}, {64.0}, {100.0}};
    auto spec = non_inv_spec();
    auto r = rel_compact_scan(spec, {}, non_inv_sl2(), grid, {}, true, 0.1);
    CHECK(r.pass());
    CHECK(r.alpha.has_value());
    auto raw = rel_compact_scan(spec, {}, non_inv_sl2(), grid, {}, false, 0.1);
    CHECK(!raw.flags.at("margin"));
    CHECK(raw.fit.at("margin_min") < r.fit.at("margin_min") / 10);
  }
  SUBCASE("constant period map") {
    auto spec = make_spec({Matrix::zero(2)}, weight_one_plane());
    SL2Data sl2{{Matrix::zero(2)}, diag({1, 1})};
    auto r = rel_compact_scan(spec, {}, sl2, {{1.0}, {10.0}}, {}, true);
    CHECK(r.pass());
    CHECK(r.fit.at("chart_max") == 0.0);
  }
}

TEST_CASE("membership threshold") {
  auto a = membership_threshold(disc::spec(), {});
  REQUIRE(a.has_value());
  CHECK(*a <= 1.0 / 64);
  LocalNormalForm lnf;
  // F^1 = e0 + (iy - 8i e^{-2 pi y}) e1 on the imaginary axis: in M once y > 8 e^{-2 pi y}.
  lnf.gamma[{1}] = cx(0, -8) * disc::N();
  auto b = membership_threshold(disc::spec(), lnf);
  REQUIRE(b.has_value());
  double y = *b;
  CHECK(y - 8 * std::exp(-2 * M_PI * y) > 0);
  CHECK(y - 1.0 / 64 - 8 * std::exp(-2 * M_PI * (y - 1.0 / 64)) <= 0);
}

TEST_CASE("line fit") {
  auto f = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.residual < 1e-12);
}

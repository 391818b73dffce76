#include "doctest.h"
#include "helpers.hpp"

#include "hodge/subspace.hpp"

#include <random>

using namespace hodge;
using namespace hodge::testing;

TEST_CASE("complex field arithmetic is exact") {
  Complex a(Rational(1, 3), Rational(-2, 7));
  Complex b(Rational(5, 2), Rational(1, 1));
  CHECK((a * b) / b == a);
  CHECK(a.conj().conj() == a);
  CHECK((a * b).conj() == a.conj() * b.conj());
  CHECK(Complex(Rational(3, 4)).conj() == Complex(Rational(3, 4)));
  CHECK(!Complex::i().is_real());
  CHECK(Complex::i() * Complex::i() == Complex(-1));
}

TEST_CASE("rational parsing") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational(" -0.25 ") == Rational(-1, 4));
  CHECK_THROWS_AS(parse_rational("1/0"), HodgeError);
  CHECK_THROWS_AS(parse_rational("x"), HodgeError);
  CHECK(rational_from_long_double(0.1L) != Rational(1, 10));
  CHECK(static_cast<long double>(rational_from_long_double(0.1L).get_d()) - 0.1L < 1e-15L);
}

TEST_CASE("subspace sum") {
  const std::size_t n = 3;
  auto e = [&](std::size_t i) { return unit_vector(n, i); };
  CHECK(Subspace::span({e(1)}, n) + Subspace::span({e(2)}, n) == Subspace::coordinate(n, {1, 2}));
  Subspace a = Subspace::span({e(0) + e(1), e(2)}, n);
  CHECK(a + a == a);
  CHECK(Subspace::span({e(1) + e(2)}, n) + Subspace::span({e(2)}, n) == Subspace::coordinate(n, {1, 2}));
  CHECK_THROWS_AS(Subspace(2) + Subspace(3), HodgeError);
}

TEST_CASE("subspace intersection") {
  const std::size_t n = 4;
  auto e = [&](std::size_t i) { return unit_vector(n, i); };
  CHECK(subspace_intersect(Subspace::coordinate(n, {1, 2}), Subspace::coordinate(n, {2, 3})) ==
        Subspace::coordinate(n, {2}));
  CHECK(subspace_intersect(Subspace::coordinate(n, {1, 2}), Subspace(n)).is_zero());
  auto f0 = unit_vector(2, 0), f1 = unit_vector(2, 1);
  CHECK(subspace_intersect(Subspace::span({f0 + f1}, 2), Subspace::span({f0 - f1}, 2)).is_zero());
  CHECK_THROWS_AS(subspace_intersect(Subspace(2), Subspace(3)), HodgeError);
  (void)e;
}

TEST_CASE("kernel, image and preimage") {
  Matrix n = Matrix::elementary(3, 1, 0) + Matrix::elementary(3, 2, 1);
  CHECK(kernel(n) == Subspace::coordinate(3, {2}));
  CHECK(image(n) == Subspace::coordinate(3, {1, 2}));
  CHECK(preimage(n, Subspace::coordinate(3, {2})) == Subspace::coordinate(3, {1, 2}));
  Subspace h = hermitian_complement(Subspace::span({Vector{Complex(1), Complex::i(), Complex(0)}}, 3));
  CHECK(h.dim() == 2);
  CHECK(h.contains(Vector{Complex(1), Complex(0) - Complex::i(), Complex(0)}));
  CHECK(!h.contains(Vector{Complex(1), Complex::i(), Complex(0)}));
}

TEST_CASE("filtrations normalize and shift") {
  const std::size_t n = 3;
  IncFiltration w(-3, {Subspace(n), Subspace::coordinate(n, {2}), Subspace::coordinate(n, {2}),
                       Subspace::full(n), Subspace::full(n)});
  CHECK(w.k_min() == -2);
  CHECK(w.k_max() == 0);
  CHECK(w.at(-1) == Subspace::coordinate(n, {2}));
  CHECK(w.at(5).is_full());
  CHECK(w.jumps() == std::vector<int>{-2, 0});
  CHECK(w.length() == 3);
  CHECK(w.shifted(2).at(-3) == w.at(-1));
  CHECK_THROWS_AS(IncFiltration(0, {Subspace::coordinate(n, {0}), Subspace::coordinate(n, {1, 2})}), HodgeError);

  DecFiltration f(-2, {Subspace::full(n), Subspace::full(n), Subspace::coordinate(n, {0}), Subspace(n)});
  CHECK(f.p_min() == -1);
  CHECK(f.p_max() == 0);
  CHECK(f.at(-7).is_full());
  CHECK(f.at(1).is_zero());
  CHECK_THROWS_AS(DecFiltration(0, {Subspace::coordinate(n, {0})}), HodgeError);
}

TEST_CASE("induced graded filtration") {
  SUBCASE("trivial W returns F") {
    const std::size_t n = 2;
    DecFiltration f(0, {Subspace::full(n), Subspace::span({Vector{Complex(1), Complex::i()}}, n)});
    auto g = induced_graded_filtration(f, IncFiltration::trivial(n, 1), 1);
    CHECK(g == f);
  }
  SUBCASE("full flags in dimension 2") {
    const std::size_t n = 2;
    // W_{-1} = span{e1}, W_0 = V; F^1 = span{e0 + e1}, F^2 = span{e1}... choose F^1 = span{e1}.
    IncFiltration w(-1, {Subspace::coordinate(n, {1}), Subspace::full(n)});
    DecFiltration f(0, {Subspace::full(n), Subspace::coordinate(n, {1})});
    auto g = induced_graded_filtration(f, w, 0);
    // F^1 cap W_0 = span{e1} lies in W_{-1}: jump only at p = 0.
    CHECK(g.p_min() == 0);
    CHECK(g.p_max() == 0);
    DecFiltration f2(0, {Subspace::full(n), Subspace::span({Vector{Complex(1), Complex(1)}}, n)});
    auto g2 = induced_graded_filtration(f2, w, 0);
    CHECK(g2.p_max() == 1);
    CHECK(g2.at(1).dim() == 1);
    auto g3 = induced_graded_filtration(f2, w, -1);
    CHECK(g3.p_max() == 0);
  }
  SUBCASE("non-inv data under M at weight -2") {
    const std::size_t n = 4;
    IncFiltration m(-4, {Subspace::coordinate(n, {3}), Subspace::coordinate(n, {3}),
                         Subspace::coordinate(n, {2, 3}), Subspace::coordinate(n, {2, 3}), Subspace::full(n)});
    DecFiltration f(-2, {Subspace::full(n), Subspace::coordinate(n, {0, 1, 2}), Subspace::coordinate(n, {0, 1})});
    // Oracle: direct image of F^p cap M_{-2} modulo M_{-3}.
    auto piece = GradedPiece::automatic(m, -2);
    auto g = induced_graded_filtration(f, piece);
    REQUIRE(piece.dim() == 1);
    for (int p = -3; p <= 1; ++p) {
      Subspace direct = subspace_intersect(f.at(p), m.at(-2));
      bool nonzero_mod_lower = !m.at(-3).contains(direct);
      CHECK(g.at(p).dim() == (nonzero_mod_lower ? 1u : 0u));
    }
    CHECK(g.p_max() == -1);
  }
}

TEST_CASE("graded piece coordinates") {
  const std::size_t n = 3;
  IncFiltration w(-1, {Subspace::coordinate(n, {2}), Subspace::full(n)});
  GradedPiece p(w, 0, {unit_vector(n, 0) + unit_vector(n, 2), unit_vector(n, 1)});
  auto c = p.project(Vector{Complex(2), Complex(3), Complex(7)});
  CHECK(c == Vector{Complex(2), Complex(3)});
  CHECK_THROWS_AS(GradedPiece(w, 0, {unit_vector(n, 2), unit_vector(n, 1)}), HodgeError);
  Matrix x = Matrix::elementary(n, 1, 0) + Matrix::elementary(n, 2, 1);
  Matrix ind = p.induced(x);
  CHECK(ind(1, 0) == Complex(1));
  CHECK(ind(0, 1) == Complex(0));
}

TEST_CASE("random subspace lattice properties") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 6;
    Subspace a = random_subspace(rng, n), b = random_subspace(rng, n), c = random_subspace(rng, n);
    Subspace s = a + b, i = subspace_intersect(a, b);
    CHECK(a.dim() + b.dim() == s.dim() + i.dim());
    CHECK(s.contains(a));
    CHECK(a.contains(i));
    // modular law: if a ⊆ c then a + (b ∩ c) = (a + b) ∩ c
    Subspace ac = a + c;
    CHECK(a + subspace_intersect(b, ac) == subspace_intersect(a + b, ac));
    CHECK(a.conj().conj() == a);
    CHECK((a + b).conj() == a.conj() + b.conj());
    CHECK(subspace_intersect(a, b).conj() == subspace_intersect(a.conj(), b.conj()));
    // canonical form equality iff mutual containment
    Subspace a2 = Subspace::span(std::span<const Vector>(random_basis_change(rng, a)), n);
    CHECK(a2 == a);
    CHECK((a == b) == (a.contains(b) && b.contains(a)));
  }
}

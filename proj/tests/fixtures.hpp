#pragma once

// Worked instances shared by the unit tests and the acceptance suite.

#include "hodge/mhs.hpp"

#include "helpers.hpp"

#include <random>

namespace hodge::testing {

inline Vector vec(std::initializer_list<Complex> xs) { return Vector(xs); }
inline Complex cx(long re, long im) { return {Rational(re), Rational(im)}; }
inline Complex I() { return Complex::i(); }

inline Matrix mat(std::size_t n, std::initializer_list<std::tuple<std::size_t, std::size_t, Complex>> entries) {
  Matrix m(n, n);
  for (const auto& [r, c, v] : entries) m(r, c) = v;
  return m;
}

inline Matrix diag(std::initializer_list<Complex> xs) {
  Matrix m(xs.size(), xs.size());
  std::size_t i = 0;
  for (const auto& x : xs) {
    m(i, i) = x;
    ++i;
  }
  return m;
}

/// Increasing filtration from consecutive levels starting at k_min.
inline IncFiltration inc(int k_min, std::initializer_list<Subspace> levels) {
  return IncFiltration(k_min, std::vector<Subspace>(levels));
}
inline DecFiltration dec(int p_min, std::initializer_list<Subspace> levels) {
  return DecFiltration(p_min, std::vector<Subspace>(levels));
}
inline Subspace coords(std::size_t n, std::initializer_list<std::size_t> idx) { return Subspace::coordinate(n, idx); }

inline Polarization polarization(std::vector<Vector> lift, Matrix form) { return {std::move(lift), std::move(form)}; }

// Weight 1, dim 2, Q = [[0,1],[-1,0]], F^1 spanned by e0 + s i e1.
inline GPMHSInstance weight_one_plane(int s = 1) {
  GPMHSInstance inst;
  inst.dim = 2;
  inst.W = IncFiltration::trivial(2, 1);
  inst.F = dec(0, {Subspace::full(2), Subspace::span({vec({1, cx(0, s)})}, 2)});
  inst.hodge_numbers = {{{1, 0}, 1}, {{0, 1}, 1}};
  inst.polarizations[1] = polarization({unit_vector(2, 0), unit_vector(2, 1)}, mat(2, {{0, 1, 1}, {1, 0, -1}}));
  return inst;
}

// W_{-2} = span{e1}, W_0 = V, F^0 spanned by e0 + i e1.
inline GPMHSInstance plane_extension() {
  GPMHSInstance inst;
  inst.dim = 2;
  inst.W = inc(-2, {coords(2, {1}), coords(2, {1}), Subspace::full(2)});
  inst.F = dec(-1, {Subspace::full(2), Subspace::span({vec({1, I()})}, 2)});
  inst.hodge_numbers = {{{0, 0}, 1}, {{-1, -1}, 1}};
  inst.polarizations[0] = polarization({unit_vector(2, 0)}, diag({1}));
  inst.polarizations[-2] = polarization({unit_vector(2, 1)}, diag({1}));
  return inst;
}

// Four-dimensional example with non-invariant reduced limit.
namespace non_inv {

inline Matrix N() { return mat(4, {{2, 0, 1}, {2, 1, 1}, {3, 2, 1}}); }
inline IncFiltration W() { return inc(-2, {coords(4, {1, 2, 3}), coords(4, {1, 2, 3}), Subspace::full(4)}); }
inline IncFiltration M() {
  return inc(-4, {coords(4, {3}), coords(4, {3}), coords(4, {2, 3}), coords(4, {2, 3}), Subspace::full(4)});
}
inline DecFiltration F() { return dec(-2, {Subspace::full(4), coords(4, {0, 1, 2}), coords(4, {0, 1})}); }
inline Matrix Y0() { return diag({0, -2, -2, -2}); }
inline Matrix H() { return diag({0, 2, 0, -2}); }

// (F, M) with positive forms on the Gr^M pieces.
inline GPMHSInstance limit_mhs() {
  GPMHSInstance inst;
  inst.dim = 4;
  inst.W = M();
  inst.F = F();
  inst.hodge_numbers = {{{0, 0}, 2}, {{-1, -1}, 1}, {{-2, -2}, 1}};
  inst.polarizations[0] = polarization({unit_vector(4, 0), unit_vector(4, 1)}, diag({1, 1}));
  inst.polarizations[-2] = polarization({unit_vector(4, 2)}, diag({1}));
  inst.polarizations[-4] = polarization({unit_vector(4, 3)}, diag({1}));
  return inst;
}

// (F, W) with the polarization of the variation: Q(e1,e3) = 1, Q(e2,e2) = -1 on Gr_{-2}.
inline GPMHSInstance variation_data() {
  GPMHSInstance inst;
  inst.dim = 4;
  inst.W = W();
  inst.F = F();
  inst.hodge_numbers = {{{0, 0}, 1}, {{0, -2}, 1}, {{-1, -1}, 1}, {{-2, 0}, 1}};
  inst.polarizations[0] = polarization({unit_vector(4, 0)}, diag({1}));
  inst.polarizations[-2] = polarization({unit_vector(4, 1), unit_vector(4, 2), unit_vector(4, 3)},
                                        mat(3, {{0, 2, 1}, {2, 0, 1}, {1, 1, -1}}));
  return inst;
}

}  // namespace non_inv

// Three-dimensional two-variable example whose limits depend on the path.
namespace non_conv {

inline Matrix N1() { return mat(3, {{2, 0, 1}, {2, 1, 1}}); }
inline Matrix N2() { return mat(3, {{2, 0, -1}, {2, 1, 1}}); }
inline IncFiltration W() { return inc(-1, {coords(3, {1, 2}), Subspace::full(3)}); }
inline DecFiltration F() { return dec(-1, {Subspace::full(3), coords(3, {0, 1})}); }

inline GPMHSInstance variation_data() {
  GPMHSInstance inst;
  inst.dim = 3;
  inst.W = W();
  inst.F = F();
  inst.hodge_numbers = {{{0, 0}, 1}, {{0, -1}, 1}, {{-1, 0}, 1}};
  inst.polarizations[0] = polarization({unit_vector(3, 0)}, diag({1}));
  inst.polarizations[-1] = polarization({unit_vector(3, 1), unit_vector(3, 2)}, mat(2, {{0, 1, 1}, {1, 0, -1}}));
  return inst;
}

}  // namespace non_conv

// Biextension model: e0 spans Gr_0, (e1, e2) span H with Q(e1,e2) = 1, e3 spans Gr_{-2}.
namespace biext_model {

inline IncFiltration W() { return inc(-2, {coords(4, {3}), coords(4, {1, 2, 3}), Subspace::full(4)}); }

inline GPMHSInstance instance(const Rational& lambda) {
  GPMHSInstance inst;
  inst.dim = 4;
  inst.W = W();
  Vector a = vec({1, 0, 0, Complex(Rational(0), lambda)});
  Vector b = vec({0, 1, I(), 0});
  inst.F = dec(-1, {Subspace::full(4), Subspace::span({a, b}, 4)});
  inst.hodge_numbers = {{{0, 0}, 1}, {{0, -1}, 1}, {{-1, 0}, 1}, {{-1, -1}, 1}};
  inst.polarizations[0] = polarization({unit_vector(4, 0)}, diag({1}));
  inst.polarizations[-1] = polarization({unit_vector(4, 1), unit_vector(4, 2)}, mat(2, {{0, 1, 1}, {1, 0, -1}}));
  inst.polarizations[-2] = polarization({unit_vector(4, 3)}, diag({1}));
  return inst;
}

inline Matrix mu() { return mat(4, {{3, 0, 1}}); }

}  // namespace biext_model

// ------------------------------------------------------------ random instances

struct RandomMHS {
  GPMHSInstance inst;
  Matrix lambda;  // element of Lambda^{-1,-1} of the split structure that was applied
  Matrix g;       // real W-preserving change applied last
};

/// Real W-preserving invertible operator with small rational entries.
inline Matrix random_w_preserving(std::mt19937_64& rng, const std::vector<int>& weight_of) {
  const std::size_t n = weight_of.size();
  Matrix u = Matrix::identity(n), l = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    u(i, i) = Complex(Rational(1 + static_cast<long>(rng() % 2)));
    for (std::size_t j = 0; j < n; ++j) {
      if (i < j && weight_of[i] <= weight_of[j]) u(i, j) = Complex(small_rational(rng, 2));
      if (i > j && weight_of[i] == weight_of[j]) l(i, j) = Complex(small_rational(rng, 2));
    }
  }
  return u * l;
}

/// Random graded-polarized MHS: start from an R-split polarized bigrading in coordinates,
/// apply exp(lambda) with lambda in Lambda^{-1,-1}, then a random real W-preserving g.
/// Coordinates are sorted by increasing weight.
inline RandomMHS random_mhs(std::mt19937_64& rng, std::size_t max_dim = 8, int max_weights = 4,
                            bool split = false) {
  for (;;) {
    int nweights = 1 + static_cast<int>(rng() % static_cast<unsigned>(max_weights));
    std::vector<int> weights;
    int w = -static_cast<int>(rng() % 3);
    for (int i = 0; i < nweights; ++i) {
      weights.push_back(w);
      w -= 1 + static_cast<int>(rng() % 2);
    }
    std::sort(weights.begin(), weights.end());
    // Per weight: pairs (p > q) and real classes (p = q).
    struct Block {
      int w;
      std::vector<int> pair_p;  // p for each pair with p > q
      int real_count = 0;       // number of (w/2, w/2) vectors
    };
    std::vector<Block> blocks;
    std::size_t n = 0;
    for (int wt : weights) {
      Block b{wt, {}, 0};
      int half = (wt >= 0) ? wt / 2 : -((-wt + 1) / 2);  // floor(wt/2)
      int npairs = static_cast<int>(rng() % 2) + (wt % 2 != 0 ? 1 : 0);
      for (int k = 0; k < npairs; ++k) {
        int p = half + 1 + static_cast<int>(rng() % 2);
        if (wt % 2 == 0 && p == wt / 2) ++p;
        b.pair_p.push_back(p);
      }
      if (wt % 2 == 0) b.real_count = static_cast<int>(rng() % 2) + (npairs == 0 ? 1 : 0);
      n += 2 * b.pair_p.size() + static_cast<std::size_t>(b.real_count);
      blocks.push_back(b);
    }
    if (n == 0 || n > max_dim) continue;

    GPMHSInstance inst;
    inst.dim = n;
    std::vector<int> weight_of;
    std::map<HodgeType, std::vector<Vector>> split_pieces;
    std::size_t idx = 0;
    for (const auto& b : blocks) {
      std::size_t start = idx;
      std::size_t d = 2 * b.pair_p.size() + static_cast<std::size_t>(b.real_count);
      Matrix form(d, d);
      std::size_t local = 0;
      for (int p : b.pair_p) {
        int q = b.w - p;
        std::size_t ia = idx++, ib = idx++;
        Vector f = unit_vector(n, ia) + Complex::i() * unit_vector(n, ib);
        split_pieces[{p, q}].push_back(f);
        split_pieces[{q, p}].push_back(conj(f));
        if (b.w % 2 == 0) {
          int s = ((p - q) / 2) % 2 == 0 ? 1 : -1;
          form(local, local) = Complex(s);
          form(local + 1, local + 1) = Complex(s);
        } else {
          int s = ((p - q - 1) / 2) % 2 == 0 ? 1 : -1;
          form(local, local + 1) = Complex(s);
          form(local + 1, local) = Complex(-s);
        }
        inst.hodge_numbers[{p, q}] += 1;
        inst.hodge_numbers[{q, p}] += 1;
        local += 2;
      }
      for (int r = 0; r < b.real_count; ++r) {
        std::size_t ir = idx++;
        split_pieces[{b.w / 2, b.w / 2}].push_back(unit_vector(n, ir));
        form(local, local) = Complex(1);
        inst.hodge_numbers[{b.w / 2, b.w / 2}] += 1;
        ++local;
      }
      std::vector<Vector> lift;
      for (std::size_t i = start; i < idx; ++i) {
        lift.push_back(unit_vector(n, i));
        weight_of.push_back(b.w);
      }
      inst.polarizations[b.w] = {lift, form};
    }
    std::vector<Subspace> wl;
    for (int k = weights.front(); k <= weights.back(); ++k) {
      std::vector<std::size_t> idxs;
      std::vector<Vector> vs;
      for (std::size_t i = 0; i < n; ++i)
        if (weight_of[i] <= k) vs.push_back(unit_vector(n, i));
      wl.push_back(Subspace::span(std::span<const Vector>(vs), n));
    }
    inst.W = IncFiltration(weights.front(), wl);
    std::map<HodgeType, Subspace> pieces;
    for (auto& [pq, vs] : split_pieces) pieces.emplace(pq, Subspace::span(std::span<const Vector>(vs), n));
    Bigrading b(n, pieces);
    int pmin = 1000, pmax = -1000;
    for (const auto& [pq, s] : pieces) {
      pmin = std::min(pmin, pq.first);
      pmax = std::max(pmax, pq.first);
    }
    std::vector<Subspace> fl;
    for (int p = pmin; p <= pmax; ++p) {
      Subspace acc(n);
      for (const auto& [pq, s] : pieces)
        if (pq.first >= p) acc = acc + s;
      fl.push_back(acc);
    }
    DecFiltration f(pmin, fl);

    // lambda in Lambda^{-1,-1}, written in the adapted basis.
    Matrix la(n, n);
    if (!split) {
      const auto& types = b.basis_types();
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (types[i].first < types[j].first && types[i].second < types[j].second && rng() % 3 != 0)
            la(i, j) = small_complex(rng, 2);
    }
    Matrix lambda = b.adapted_basis() * la * b.adapted_basis_inverse();
    Matrix g = random_w_preserving(rng, weight_of);
    inst.F = f.transformed(g * exp_nilpotent(lambda));
    for (auto& [wt, pol] : inst.polarizations)
      for (auto& v : pol.lift) v = g * v;
    return {inst, lambda, g};
  }
}

/// Random instance that is not split over R (nonzero delta).
inline RandomMHS random_nonsplit_mhs(std::mt19937_64& rng, std::size_t max_dim = 6, int max_weights = 3) {
  for (;;) {
    auto r = random_mhs(rng, max_dim, max_weights);
    if (!delta_operator(r.inst.F, r.inst.W).is_zero()) return r;
  }
}

}  // namespace hodge::testing

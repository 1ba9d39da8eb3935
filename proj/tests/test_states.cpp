#include <cmath>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "qperm/errors.hpp"

using namespace qperm;
using namespace fixtures;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InvalidSpec;
}

void check_slice(const BirkhoffSlice& s, const std::vector<double>& expect, double tol) {
  REQUIRE(s.m.size() == expect.size());
  for (std::size_t k = 0; k < expect.size(); ++k) CHECK(std::abs(s.m[k] - expect[k]) < tol);
}

// |u_{i_n j_n} ⋯ u_{i_1 j_1}|² on the ambient carrier
CMatrix monomial_square(const MagicUnitary& u, const std::vector<Letter>& letters) {
  CMatrix m = CMatrix::identity(u.ambient_dim);
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) m = m * u.entry(it->i, it->j);
  return m.adjoint() * m;
}

QuantumPermutation random_state(GroupPtr h, std::mt19937_64& gen) {
  std::normal_distribution<double> nd;
  const std::size_t d = h->ambient_dim();
  CMatrix a(d, d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) a(i, j) = cplx(nd(gen), nd(gen));
  CMatrix rho = a * a.adjoint();
  rho *= 1.0 / rho.trace().real();
  return state_from_density(std::move(h), rho);
}

QuantumPermutation pal_state(std::size_t i) {
  return state_from_density(kp(), basis_projector(6, {{0, 0.25}, {3, 0.25}, {3 + i, 0.5}}));
}

}  // namespace

TEST_CASE("density states") {
  const auto s = state_from_density(s3(), CMatrix::identity(6) * cplx(1.0 / 6.0));
  CHECK(birkhoff_slice(s)(0, 0) == doctest::Approx(1.0 / 3.0));
  CHECK(check_state(s).valid);

  const auto e5 = state_from_density(kp(), basis_projector(6, {{4, 1.0}}));
  CHECK(birkhoff_slice(e5)(0, 2) == doctest::Approx(0.5).epsilon(1e-12));

  const auto f1 = state_from_density(kp(), basis_projector(6, {{0, 1.0}}));
  CHECK(max_abs_diff(f1.coords, kp()->counit_vec) < 1e-12);

  CHECK(kind_of([] { state_from_density(kp(), CMatrix::identity(6)); }) == ErrorKind::NotDensity);
  CHECK(kind_of([] { state_from_density(kp(), CMatrix::identity(5) * cplx(0.2)); }) == ErrorKind::NotDensity);
  CHECK(kind_of([] {
          state_from_density(kp(), basis_projector(6, {{0, 1.5}, {1, -0.5}}));
        }) == ErrorKind::NotDensity);
}

TEST_CASE("positive definite functions on duals") {
  const auto h = dual_s3();
  const auto& g = h->magic.dual->group;
  const auto ones = state_from_function(h, std::vector<cplx>(g.order, 1.0));
  CHECK(max_abs_diff(ones.coords, h->counit_vec) < 1e-12);

  std::vector<cplx> sign(g.order);
  for (std::size_t e = 0; e < g.order; ++e) {
    const auto& p = g.elements[e];
    std::size_t inversions = 0;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) inversions += p[a] > p[b] ? 1 : 0;
    sign[e] = inversions % 2 ? -1.0 : 1.0;
  }
  const auto sg = state_from_function(h, sign);
  const auto sl = birkhoff_slice(sg);
  check_slice(sl, {0, 1, 0, 0, 1, 0, 0, 0, 0, 0, 0, 1, 0, 0, 1, 0}, 1e-12);
  CHECK(max_abs_diff(convolve(sg, sg).coords, h->counit_vec) < 1e-12);

  const auto t = three_fixed_point_state();
  CHECK(check_state(t).valid);
  check_slice(birkhoff_slice(t), {0.75, 0.25, 0, 0, 0.25, 0.75, 0, 0, 0, 0, 0.75, 0.25, 0, 0, 0.25, 0.75}, 1e-12);

  std::vector<cplx> bad(g.order, 0.0);
  bad[g.identity] = 1.0;
  bad[(g.identity + 1) % g.order] = 2.0;
  CHECK(kind_of([&] { state_from_function(h, bad); }) == ErrorKind::NotPositiveDefinite);
  CHECK(kind_of([&] { state_from_function(kp(), bad); }) == ErrorKind::InvalidSpec);
}

TEST_CASE("character states") {
  const auto h = kp();
  std::vector<Permutation> found;
  for (const auto& p : all_permutations(4)) {
    try {
      const auto s = character_state(h, p);
      found.push_back(p);
      const auto sl = birkhoff_slice(s);
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) CHECK(std::abs(sl(i, j) - (p[j] == i ? 1.0 : 0.0)) < 1e-12);
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::NotInGroup);
    }
  }
  CHECK(found == std::vector<Permutation>{perm1({1, 2, 3, 4}), perm1({1, 2, 4, 3}), perm1({2, 1, 3, 4}),
                                          perm1({2, 1, 4, 3})});
  CHECK(max_abs_diff(character_state(h, identity_permutation(4)).coords, h->counit_vec) < 1e-12);

  CHECK(deterministic_enumerate(s4()).size() == 24);
  CHECK(deterministic_enumerate(dual_s3()).size() == 2);
  CHECK(deterministic_enumerate(dual_s4()).size() == 2);
}

TEST_CASE("classical characters are point masses") {
  const auto h = s4();
  const auto& pts = h->magic.classical_points;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const auto s = character_state(h, pts[k]);
    // δ_σ = Π_j 1_{j→σ(j)}
    CMatrix prod = CMatrix::identity(24);
    for (std::size_t j = 0; j < 4; ++j) prod = prod * h->magic.entry(pts[k][j], j);
    CMatrix delta(24, 24);
    delta(k, k) = 1.0;
    CHECK(prod == delta);
    CHECK(std::abs(s.on_matrix(delta) - 1.0) < 1e-12);
  }
}

TEST_CASE("conditioning") {
  const auto h = kp();
  const auto haar = haar_state(h);
  const auto c = condition(haar, h->generator(2, 0));
  check_slice(birkhoff_slice(c), {0, 0, 0.5, 0.5, 0, 0, 0.5, 0.5, 1, 0, 0, 0, 0, 1, 0, 0}, 1e-9);
  CHECK(check_state(c).valid);

  const auto eps = counit_state(h);
  for (std::size_t j = 0; j < 4; ++j) {
    CHECK(max_abs_diff(condition(eps, h->generator(j, j)).coords, eps.coords) < 1e-12);
  }
  // a one appears in the conditioned entry
  std::mt19937_64 gen(5);
  for (int trial = 0; trial < 5; ++trial) {
    const auto phi = random_state(h, gen);
    const std::size_t i = trial % 4, j = (trial + 1) % 4;
    CHECK(birkhoff_slice(condition(phi, h->generator(i, j)))(i, j) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(kind_of([&] { condition(eps, h->generator(1, 0)); }) == ErrorKind::NullEvent);
}

TEST_CASE("sequential probabilities") {
  const auto h = kp();
  const auto e5 = state_from_density(h, basis_projector(6, {{4, 1.0}}));
  const auto rho = condition(e5, h->generator(3, 0));
  // measured in order: ρ(1)=4, ρ(3)=1, ρ(1)=3
  const double p = sequential_probability(rho, std::vector<Event>{{3, 0}, {0, 2}, {2, 0}});
  CHECK(p == doctest::Approx(0.25).epsilon(1e-10));

  // oracle: trace against the Haar density on the carrier
  const auto haar = haar_state(h);
  const CMatrix rho_h = kp_haar_density();
  std::mt19937_64 gen(9);
  std::uniform_int_distribution<std::size_t> idx(0, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Event> ev;
    CMatrix m = CMatrix::identity(6);
    for (int k = 0; k < 4; ++k) {
      Event e{idx(gen), idx(gen), (trial + k) % 3 != 0};
      ev.push_back(e);
      const CMatrix p_k = e.outcome ? h->magic.entry(e.i, e.j) : CMatrix::identity(6) - h->magic.entry(e.i, e.j);
      m = p_k * m;
    }
    const double oracle = (rho_h * m.adjoint() * m).trace().real();
    CHECK(std::abs(sequential_probability(haar, ev) - oracle) < 1e-12);
    // appending an event never increases the probability
    std::vector<Event> shorter(ev.begin(), ev.end() - 1);
    CHECK(sequential_probability(haar, ev) <= sequential_probability(haar, shorter) + 1e-12);
  }
  // repeating an event changes nothing
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(std::abs(sequential_probability(haar, std::vector<Event>{{i, j}, {i, j}}) -
                     haar(h->generator(i, j)).real()) < 1e-10);
    }
}

TEST_CASE("convolution") {
  std::mt19937_64 gen(17);
  for (const auto& h : {kp(), s4(), dual_s3()}) {
    const auto eps = counit_state(h);
    for (int trial = 0; trial < 5; ++trial) {
      const auto a = random_state(h, gen);
      const auto b = random_state(h, gen);
      const auto c = random_state(h, gen);
      CHECK(max_abs_diff(convolve(eps, a).coords, a.coords) < 1e-10);
      CHECK(max_abs_diff(convolve(a, eps).coords, a.coords) < 1e-10);
      CHECK(max_abs_diff(convolve(convolve(a, b), c).coords, convolve(a, convolve(b, c)).coords) < 1e-10);
      CHECK(check_state(convolve(a, b)).valid);
      // Birkhoff slices multiply
      const auto sa = birkhoff_slice(a), sb = birkhoff_slice(b), sab = birkhoff_slice(convolve(a, b));
      const std::size_t n = sa.n;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double v = 0.0;
          for (std::size_t k = 0; k < n; ++k) v += sa(i, k) * sb(k, j);
          CHECK(std::abs(sab(i, j) - v) < 1e-8);
        }
    }
  }
  CHECK(kind_of([] { convolve(haar_state(kp()), haar_state(s4())); }) == ErrorKind::GroupMismatch);
}

TEST_CASE("convolution on a dual is pointwise multiplication") {
  const auto h = dual_s4();
  const auto& g = h->magic.dual->group;
  const auto a = four_fixed_point_state();
  std::vector<cplx> va = four_fixed_values(*h);
  std::vector<cplx> vb(g.order);
  for (std::size_t e = 0; e < g.order; ++e) vb[e] = g.elements[e][3] == 3 ? 1.0 : 0.0;
  const auto b = state_from_function(h, vb);  // indicator of the stabiliser of 4
  std::vector<cplx> prod(g.order);
  for (std::size_t e = 0; e < g.order; ++e) prod[e] = va[e] * vb[e];
  // evaluate both sides on group elements
  const auto ab = convolve(a, b);
  for (std::size_t e = 0; e < g.order; ++e) {
    const auto x = h->coords(h->magic.dual->element_ops[e]).values;
    CHECK(std::abs(ab(x) - prod[e]) < 1e-10);
  }
}

TEST_CASE("reverse state") {
  const auto h = kp();
  CHECK(max_abs_diff(reverse_state(counit_state(h)).coords, h->counit_vec) < 1e-12);
  const auto t = character_state(h, perm1({2, 1, 4, 3}));
  CHECK(max_abs_diff(reverse_state(t).coords, t.coords) < 1e-12);
  const auto s = s4();
  for (const auto& p : all_permutations(4)) {
    CHECK(max_abs_diff(reverse_state(character_state(s, p)).coords, character_state(s, inverse(p)).coords) < 1e-12);
  }
  std::mt19937_64 gen(23);
  std::uniform_int_distribution<std::size_t> idx(0, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_state(h, gen);
    const auto rev = reverse_state(phi);
    std::vector<Letter> w, flipped;
    for (int k = 0; k < 3; ++k) {
      Letter l{idx(gen), idx(gen)};
      w.push_back(l);
      flipped.push_back({l.j, l.i});
    }
    const auto lhs = rev.on_matrix(monomial_square(h->magic, w));
    const auto rhs = phi.on_matrix(monomial_square(h->magic, flipped));
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("twisted conjugation identity") {
  const auto h = kp();
  std::mt19937_64 gen(31);
  std::uniform_int_distribution<std::size_t> idx(0, 3);
  const auto det = deterministic_enumerate(h);
  for (int trial = 0; trial < 10; ++trial) {
    const auto phi = random_state(h, gen);
    const auto& sigma = det[idx(gen)].first;
    const auto& tau = det[idx(gen)].first;
    std::vector<Letter> w, moved;
    for (int k = 0; k < 3; ++k) {
      Letter l{idx(gen), idx(gen)};
      w.push_back(l);
      moved.push_back({sigma[l.i], tau[l.j]});
    }
    const auto tw = twisted_conjugate(phi, sigma, tau);
    CHECK(std::abs(tw.on_matrix(monomial_square(h->magic, w)) - phi.on_matrix(monomial_square(h->magic, moved))) <
          1e-9);
  }
  const auto phi = haar_state(h);
  CHECK(max_abs_diff(twisted_conjugate(phi, identity_permutation(4), identity_permutation(4)).coords, phi.coords) <
        1e-12);
  CHECK(kind_of([&] { twisted_conjugate(phi, perm1({2, 3, 1, 4}), identity_permutation(4)); }) ==
        ErrorKind::NotInGroup);
}

TEST_CASE("convolution powers on duals") {
  const auto t = three_fixed_point_state();
  const auto h = t.group;
  const auto& g = h->magic.dual->group;
  const auto even = convolution_power(t, 50).state;
  const auto odd = convolution_power(t, 51).state;
  for (std::size_t e = 0; e < g.order; ++e) {
    const auto x = h->coords(h->magic.dual->element_ops[e]).values;
    const bool in_sub = g.elements[e] == identity_permutation(3) || g.elements[e] == perm1({1, 3, 2});
    const double sign = g.elements[e] == perm1({1, 3, 2}) ? -1.0 : 1.0;
    CHECK(std::abs(even(x) - (in_sub ? 1.0 : 0.0)) < 1e-8);
    CHECK(std::abs(odd(x) - (in_sub ? sign : 0.0)) < 1e-8);
  }
  CHECK(convolution_power(t, 1).state.coords == t.coords);

  const auto r = four_fixed_point_state();
  const auto lim = convolution_power(r, 200);
  CHECK(lim.converged);
  CHECK(is_idempotent(lim.state));
  CHECK(classify_idempotent(lim.state) == IdempotentClass::NonHaar);

  const auto ces = cesaro(t, 200);
  CHECK(is_idempotent(ces.state, 1e-2));
  CHECK(ces.iterations == 200);
}

TEST_CASE("subgroup indicators on duals") {
  const auto h = dual_s3();
  const auto& g = h->magic.dual->group;
  auto indicator = [&](auto pred) {
    std::vector<cplx> v(g.order);
    for (std::size_t e = 0; e < g.order; ++e) v[e] = pred(g.elements[e]) ? 1.0 : 0.0;
    return state_from_function(h, v);
  };
  // ⟨(23)⟩ is not normal, A₃ is
  const auto non_normal = indicator([](const Permutation& p) { return p[0] == 0; });
  const auto normal = indicator([](const Permutation& p) {
    std::size_t inv = 0;
    for (std::size_t a = 0; a < 3; ++a)
      for (std::size_t b = a + 1; b < 3; ++b) inv += p[a] > p[b];
    return inv % 2 == 0;
  });
  CHECK(classify_idempotent(non_normal) == IdempotentClass::NonHaar);
  CHECK(classify_idempotent(normal) == IdempotentClass::Haar);
  CHECK(classify_idempotent(three_fixed_point_state()) == IdempotentClass::NotIdempotent);
}

TEST_CASE("Pal idempotents and quasi-subgroups") {
  const auto h = kp();
  for (std::size_t i = 1; i <= 2; ++i) {
    const auto pal = pal_state(i);
    CHECK(is_idempotent(pal, 1e-9));
    CHECK(classify_idempotent(pal) == IdempotentClass::NonHaar);
    CHECK(quasi_subgroup_membership(pal, pal));
  }
  const auto pal = pal_state(1);
  const auto sp = support_projection(pal);
  CHECK(sp.minimality_defect < 1e-9);
  // f1 + f4 + E11
  CHECK(sp.support.max_abs_diff(basis_projector(6, {{0, 1.0}, {3, 1.0}, {4, 1.0}})) < 1e-9);

  const auto e11 = state_from_density(h, basis_projector(6, {{4, 1.0}}));
  CHECK(quasi_subgroup_membership(e11, pal));
  const auto moved = condition(e11, h->generator(0, 2));
  CHECK(moved(sp.coords).real() == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(quasi_subgroup_membership(moved, pal));
  CHECK(kind_of([&] { quasi_subgroup_membership(e11, moved); }) == ErrorKind::NotIdempotent);
}

TEST_CASE("support projections") {
  const auto h = kp();
  const auto eps = support_projection(counit_state(h));
  CHECK(eps.support.max_abs_diff(basis_projector(6, {{0, 1.0}})) < 1e-9);
  const auto haar = support_projection(haar_state(h));
  CHECK(haar.support.max_abs_diff(CMatrix::identity(6)) < 1e-9);
  CHECK(haar.null_space_dim == 0);
}

TEST_CASE("truly quantum") {
  const auto h = kp();
  CHECK_FALSE(truly_quantum_check(counit_state(h)));
  CHECK(truly_quantum_check(state_from_density(h, basis_projector(6, {{4, 1.0}}))));
  const auto m = mix({{1e-6, counit_state(h)}, {1.0 - 1e-6, state_from_density(h, basis_projector(6, {{5, 1.0}}))}});
  CHECK_FALSE(truly_quantum_check(m));
  // random permutations are never truly quantum
  const auto s = s4();
  CHECK_FALSE(truly_quantum_check(haar_state(s)));
}

TEST_CASE("fixed point spectrum") {
  auto values = [](const FixSpectrum& f) { return f.values; };
  const auto a = fix_spectrum(*dual_s3());
  REQUIRE(a.values.size() == 4);
  const std::vector<double> expect_a{0, 1, 3, 4};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(values(a)[k] - expect_a[k]) < 1e-8);

  const auto b = fix_spectrum(*dual_s4());
  const double r = std::sqrt(17.0);
  const std::vector<double> expect_b{0, (5 - r) / 2, 1, 2, 3, 4, (5 + r) / 2, 5};
  REQUIRE(b.values.size() == expect_b.size());
  for (std::size_t k = 0; k < expect_b.size(); ++k) CHECK(std::abs(b.values[k] - expect_b[k]) < 1e-7);

  // classical: exactly the fixed-point counts of permutations
  const auto c = fix_spectrum(*s4());
  CHECK(c.values.size() == 4);
  const std::vector<double> expect_c{0, 1, 2, 4};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(c.values[k] - expect_c[k]) < 1e-10);

  const auto t = three_fixed_point_state();
  const auto fp = fixed_points_of(t);
  REQUIRE(fp.count.has_value());
  CHECK(*fp.count == doctest::Approx(3.0));
  const auto sl = birkhoff_slice(t);
  CHECK(fp.expectation == doctest::Approx(sl(0, 0) + sl(1, 1) + sl(2, 2) + sl(3, 3)).epsilon(1e-8));

  const auto rt = fixed_points_of(four_fixed_point_state());
  REQUIRE(rt.count.has_value());
  CHECK(*rt.count == doctest::Approx(4.0));
  CHECK(max_abs_diff(four_fixed_point_state().coords, dual_s4()->counit_vec) > 0.1);
}

TEST_CASE("quantum transposition in a doubled dual") {
  const auto u = repeat_embed(dual_s4()->magic, 2);
  const auto h = std::make_shared<const HopfData>(build_hopf(u));
  CHECK(h->n() == 10);
  const auto s = state_from_function(h, four_fixed_values(*h));
  const auto fp = fixed_points_of(s);
  REQUIRE(fp.count.has_value());
  CHECK(*fp.count == doctest::Approx(8.0));
}

TEST_CASE("central character evaluation") {
  for (double t : {0.0, 0.5, 2.0, 3.7}) {
    CHECK(central_character_eval(0, t) == 1.0);
    CHECK(central_character_eval(1, t) == doctest::Approx(t - 1.0));
    // U_4(x) = 16x⁴ - 12x² + 1 with x² = t/4
    CHECK(central_character_eval(2, t) == doctest::Approx(t * t - 3 * t + 1));
  }
  CHECK(central_character_eval(1, 5.0 - 2.0) == doctest::Approx(2.0));
  CHECK_THROWS_AS(central_character_eval(1, -1.0), Error);
}

TEST_CASE("measurement sessions") {
  const auto h = kp();
  const auto ev = character_state(h, perm1({2, 1, 4, 3}));
  MeasurementSession det(ev, 3);
  for (int k = 0; k < 6; ++k) {
    const auto& r = det.measure(0);
    CHECK(r.outcome == 1);
    CHECK_FALSE(r.non_classical);
  }
  CHECK(max_abs_diff(det.current().coords, ev.coords) < 1e-12);

  MeasurementSession a(haar_state(h), 99);
  MeasurementSession b(haar_state(h), 99);
  for (std::size_t k = 0; k < 8; ++k) {
    const auto ra = a.measure(k % 4);
    const auto rb = b.measure(k % 4);
    CHECK(ra.outcome == rb.outcome);
    CHECK(ra.probability == rb.probability);
  }
  CHECK(a.replay_defect() < 1e-10);
  const auto first = a.history().front().outcome;
  a.reset();
  CHECK(a.history().empty());
  CHECK(a.measure(0).outcome == first);
  CHECK_THROWS_AS(a.measure(4), Error);
}

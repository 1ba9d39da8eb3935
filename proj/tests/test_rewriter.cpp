#include <doctest.h>

#include "qperm/errors.hpp"
#include "qperm/rewriter.hpp"
#include "qperm/rng.hpp"

using namespace qperm;

namespace {

MagicExpr random_expr(SplitMix64& rng, std::size_t n, std::size_t terms, std::size_t max_len) {
  MagicExpr e{n, {}};
  for (std::size_t t = 0; t < terms; ++t) {
    Word w(static_cast<std::size_t>(rng.next() % (max_len + 1)));
    for (Letter& l : w) l = {static_cast<std::size_t>(rng.next() % n), static_cast<std::size_t>(rng.next() % n)};
    const long long num = static_cast<long long>(rng.next() % 7) - 3;
    const long long den = static_cast<long long>(rng.next() % 3) + 1;
    if (reduce_word(w)) e.add(w, Rational(num, den));
  }
  return e;
}

double value_gap(const MagicExpr& a, const MagicExpr& b, const MagicUnitary& u) {
  return (evaluate(a, u) - evaluate(b, u)).frobenius_norm();
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no error raised");
  return ErrorKind::InvalidSpec;
}

const MagicUnitary& classical_s3() {
  static const MagicUnitary u = symmetric_group(3);
  return u;
}

const MagicUnitary& kp_magic() {
  static const MagicUnitary u = kac_paljutkin();
  return u;
}

}  // namespace

TEST_CASE("parse applies local reductions") {
  CHECK(parse_expr("u[1,1] u[1,2]", 3).is_zero());
  CHECK(parse_expr("u[2,1]u[3,1]", 3).is_zero());
  CHECK(parse_expr("u[1,1] u[1,1]", 3) == MagicExpr::generator(3, 0, 0));
  const MagicExpr c = parse_expr("u[1,1] u[2,2] - u[2,2] u[1,1]", 3);
  CHECK(c.terms.size() == 2);
  CHECK(to_string(c) == "u[1,1]u[2,2] - u[2,2]u[1,1]");
}

TEST_CASE("parse coefficients, units and signs") {
  const MagicExpr e = parse_expr("-1/2 u[1,2] + 3 - 1 u[2,1]*u[1,2] + 2*u[3,3]", 3);
  CHECK(e.terms.at({}) == Rational(3));
  CHECK(e.terms.at({Letter{0, 1}}) == Rational(-1, 2));
  CHECK(e.terms.at({Letter{1, 0}, Letter{0, 1}}) == Rational(-1));
  CHECK(e.terms.at({Letter{2, 2}}) == Rational(2));
  CHECK(parse_expr("u[1,1] 1 u[2,2]", 3) == parse_expr("u[1,1]u[2,2]", 3));
  CHECK(parse_expr("1", 2) == MagicExpr::unit(2));
  CHECK(parse_expr("u[1,1] - u[1,1]", 2).is_zero());
  CHECK(to_string(parse_expr("2/4 u[1,1] - 1", 2)) == "-1 + 1/2 u[1,1]");
}

TEST_CASE("printed expressions parse back to themselves") {
  SplitMix64 rng(11);
  for (int k = 0; k < 50; ++k) {
    const MagicExpr e = random_expr(rng, 4, 5, 4);
    CHECK(parse_expr(to_string(e), 4) == e);
  }
}

TEST_CASE("parse errors carry positions") {
  CHECK(kind_of([] { parse_expr("u[1,1] + ", 3); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("u[1,4]", 3); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([] { parse_expr("u[0,1]", 3); }) == ErrorKind::IndexOutOfRange);
  CHECK(kind_of([] { parse_expr("", 3); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("u[1 1]", 3); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("1/0 u[1,1]", 3); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_expr("u[1,1] x", 3); }) == ErrorKind::SyntaxError);
  CHECK(kind_of([] { parse_equation("u[1,1]", 3); }) == ErrorKind::SyntaxError);
  try {
    parse_expr("u[1,1] ? u[2,2]", 3);
    FAIL("expected a syntax error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("position 8") != std::string::npos);
  }
  try {
    parse_equation("u[1,1] == u[2,9]", 3);
    FAIL("expected an index error");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IndexOutOfRange);
    CHECK(std::string(e.what()).find("position 15") != std::string::npos);
  }
}

TEST_CASE("normalize: row sums and orthogonality") {
  CHECK(normalize(parse_expr("u[1,1] + u[1,2] + u[1,3]", 3)) == MagicExpr::unit(3));
  CHECK(normalize(parse_expr("u[1,2] + u[2,2] + u[3,2]", 3)) == MagicExpr::unit(3));
  CHECK(normalize(parse_expr("u[2,1]u[3,1]", 3)).is_zero());
  CHECK(normalize(parse_expr("u[2,2]", 2)) == parse_expr("u[1,1]", 2));
  CHECK(normalize(parse_expr("u[1,1]", 1)) == MagicExpr::unit(1));
  // the first and third equalities of the commutativity chain are already visible here
  CHECK(normalize(parse_expr("u[1,1]u[3,3]", 3)) == parse_expr("u[1,1]u[2,2]", 3));
  CHECK(normalize(parse_expr("u[2,2]u[3,3]", 3)) == parse_expr("u[2,2]u[1,1]", 3));
}

TEST_CASE("normalize is idempotent, removes the last index and preserves values") {
  SplitMix64 rng(2024);
  for (int k = 0; k < 100; ++k) {
    const std::size_t n = 3 + static_cast<std::size_t>(k % 2);
    const MagicExpr e = random_expr(rng, n, 4, 3);
    const MagicExpr nf = normalize(e);
    CHECK(normalize(nf) == nf);
    for (const auto& [w, c] : nf.terms)
      for (const Letter& l : w) CHECK((l.i < n - 1 && l.j < n - 1));
    const MagicUnitary& u = n == 3 ? classical_s3() : kp_magic();
    CHECK(value_gap(e, nf, u) < 1e-10);
  }
}

TEST_CASE("local reductions shorten or delete words") {
  SplitMix64 rng(5);
  for (int k = 0; k < 200; ++k) {
    Word w(1 + rng.next() % 6);
    for (Letter& l : w) l = {static_cast<std::size_t>(rng.next() % 3), static_cast<std::size_t>(rng.next() % 3)};
    Word v = w;
    if (reduce_word(v)) {
      CHECK(v.size() <= w.size());
      for (std::size_t p = 1; p < v.size(); ++p) CHECK((v[p - 1].i != v[p].i && v[p - 1].j != v[p].j));
    }
  }
}

TEST_CASE("every move is an identity in a noncommutative representation") {
  SplitMix64 rng(99);
  for (int k = 0; k < 60; ++k) {
    const MagicExpr e = random_expr(rng, 4, 3, 3);
    if (e.is_zero()) continue;
    std::size_t t = 0;
    for (const auto& [w, c] : e.terms) {
      for (std::size_t p = 0; p < w.size(); ++p) {
        for (Complement kind : {Complement::Row, Complement::Column}) {
          CHECK(value_gap(e, apply_move(e, {t, p, kind}), kp_magic()) < 1e-10);
        }
      }
      ++t;
    }
  }
  const MagicExpr x = parse_expr("u[1,1]u[2,2]", 3);
  CHECK(apply_move(x, {0, 1, Complement::Row}) == parse_expr("u[1,1] - u[1,1]u[2,3]", 3));
  CHECK(apply_move(x, {0, 1, Complement::Column}) == parse_expr("u[1,1] - u[1,1]u[3,2]", 3));
  CHECK(describe(x, {0, 1, Complement::Row}) == "row sum: u[2,2] = 1 - u[2,1] - u[2,3] in u[1,1]u[2,2]");
}

TEST_CASE("reflexive identities need no moves") {
  SplitMix64 rng(3);
  for (int k = 0; k < 10; ++k) {
    const MagicExpr a = random_expr(rng, 4, 3, 3);
    const ProofResult r = prove_equal(a, a, 0);
    CHECK(r.proved);
    CHECK(r.steps.empty());
    CHECK(r.moves == 0);
  }
}

TEST_CASE("commutativity identities for N = 3") {
  struct Case {
    std::string equation;
    std::size_t max_moves;
  };
  const Case cases[] = {
      {"u[1,1]u[2,2] == u[2,2]u[1,1]", 6},
      {"u[3,1]u[1,2] == u[3,1]u[2,3]", 6},
      {"u[1,1]u[2,2] == u[1,1]u[3,3]", 6},
      {"u[1,1]u[3,3] == u[2,2]u[3,3]", 6},
      {"u[2,2]u[3,3] == u[2,2]u[1,1]", 6},
  };
  for (const Case& c : cases) {
    CAPTURE(c.equation);
    const auto [a, b] = parse_equation(c.equation, 3);
    const ProofResult r = prove_equal(a, b, 6);
    REQUIRE(r.proved);
    CHECK(r.moves <= c.max_moves);
    CHECK(proof_defect(r, classical_s3()) < 1e-10);
    // chains are contiguous and start and end at the two sides
    REQUIRE(!r.steps.empty());
    CHECK(r.steps.front().from == a);
    CHECK(r.steps.back().to == b);
    for (std::size_t k = 1; k < r.steps.size(); ++k) CHECK(r.steps[k - 1].to == r.steps[k].from);
    MESSAGE(c.equation << "\n" << format_proof(r));
  }
}

TEST_CASE("noncommutativity for N = 4 is not proved") {
  const auto [a, b] = parse_equation("u[1,1]u[2,2] == u[2,2]u[1,1]", 4);
  const ProofResult r = prove_equal(a, b, 6);
  CHECK_FALSE(r.proved);
  CHECK(r.states > 0);
  MESSAGE(format_proof(r));
  // a commutator that is nonzero in a concrete quantum permutation group
  const MagicUnitary& u = kp_magic();
  bool found = false;
  for (std::size_t x = 0; x < 16 && !found; ++x) {
    for (std::size_t y = 0; y < 16 && !found; ++y) {
      const MagicExpr p = MagicExpr::generator(4, x / 4, x % 4) * MagicExpr::generator(4, y / 4, y % 4);
      const MagicExpr q = MagicExpr::generator(4, y / 4, y % 4) * MagicExpr::generator(4, x / 4, x % 4);
      if (value_gap(p, q, u) < 0.1) continue;
      found = true;
      CAPTURE(to_string(p));
      CHECK_FALSE(prove_equal(p, q, 6).proved);
    }
  }
  CHECK(found);
}

TEST_CASE("false identities are never proved") {
  const auto [a, b] = parse_equation("u[1,1] == u[1,2]", 3);
  CHECK_FALSE(prove_equal(a, b, 4).proved);
  const auto [c, d] = parse_equation("u[1,1]u[2,2] == 0", 3);
  CHECK_FALSE(prove_equal(c, d, 4).proved);
}

#pragma once

#include <boost/rational.hpp>
#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qperm/magic.hpp"
#include "qperm/numerics.hpp"

namespace qperm {

using Rational = boost::rational<long long>;

/// Degree first, then lexicographic on letters.
struct TermOrder {
  bool operator()(const Word& a, const Word& b) const {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
};

/// Formal linear combination of words in the generators of the universal
/// N×N magic algebra. Letters are 0-based; the empty word is the unit.
struct MagicExpr {
  std::size_t n = 0;
  std::map<Word, Rational, TermOrder> terms;  // no zero coefficients

  bool is_zero() const { return terms.empty(); }
  void add(const Word& w, const Rational& c);
  bool operator==(const MagicExpr& other) const { return n == other.n && terms == other.terms; }

  static MagicExpr unit(std::size_t n);
  static MagicExpr generator(std::size_t n, std::size_t i, std::size_t j);
};

MagicExpr operator+(const MagicExpr& a, const MagicExpr& b);
MagicExpr operator-(const MagicExpr& a, const MagicExpr& b);
MagicExpr operator*(const MagicExpr& a, const MagicExpr& b);
MagicExpr operator*(const Rational& c, const MagicExpr& a);

/// Text form with 1-based indices, e.g. "u[1,1]u[2,2] - 1/2 u[3,1]".
std::string to_string(const MagicExpr& e);
std::string to_string(const Word& w);

/// expr := term (('+'|'-') term)*, term := coeff? factor+, factor := u[i,j] | 1.
/// The result is locally reduced. Throws SyntaxError (with position) or IndexOutOfRange.
MagicExpr parse_expr(std::string_view src, std::size_t n);
/// "lhs == rhs"
std::pair<MagicExpr, MagicExpr> parse_equation(std::string_view src, std::size_t n);

/// Idempotence and row/column orthogonality on one word; false if the word vanishes.
bool reduce_word(Word& w);
MagicExpr local_reduce(const MagicExpr& e);

/// Local reductions, elimination of every generator with an index equal to N
/// (rows first), local reductions again.
MagicExpr normalize(const MagicExpr& e);

enum class Complement { Row, Column };

/// Replace the generator at (term, position) by its row or column complement
/// u_ij = 1 - Σ_{k≠j} u_ik  or  u_ij = 1 - Σ_{k≠i} u_kj, then reduce locally.
struct Move {
  std::size_t term = 0;  // index in term order
  std::size_t position = 0;
  Complement kind = Complement::Row;
};

MagicExpr apply_move(const MagicExpr& e, const Move& m);
std::string describe(const MagicExpr& e, const Move& m);

struct ProofStep {
  MagicExpr from;
  MagicExpr to;
  std::string rule;
};

struct SearchLimits {
  std::size_t max_terms = 24;
  std::size_t max_word_length = 6;
  std::size_t max_states_per_side = 200000;
};

struct ProofResult {
  bool proved = false;
  std::size_t moves = 0;
  std::vector<ProofStep> steps;
  std::size_t states = 0;  // distinct expressions visited
  bool pruned = false;     // some state was discarded by the limits
};

inline constexpr std::size_t kDefaultProofDepth = 6;

/// Bounded bidirectional search: a is expanded up to ⌈depth/2⌉ moves, b up to
/// ⌊depth/2⌋, and the two sides meet when their normal forms coincide.
/// Not proved means unknown, never false.
ProofResult prove_equal(const MagicExpr& a, const MagicExpr& b, std::size_t depth = kDefaultProofDepth,
                        const SearchLimits& limits = {});

std::string format_proof(const ProofResult& r);

/// Substitutes the entries of a concrete magic unitary.
CMatrix evaluate(const MagicExpr& e, const MagicUnitary& u);
/// Largest Frobenius defect over the steps of a proof in a concrete representation.
double proof_defect(const ProofResult& r, const MagicUnitary& u);

}  // namespace qperm

#include "qperm/rewriter.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <limits>
#include <optional>
#include <sstream>
#include <unordered_map>

#include "qperm/errors.hpp"

namespace qperm {

void MagicExpr::add(const Word& w, const Rational& c) {
  if (c.numerator() == 0) return;
  auto [it, inserted] = terms.try_emplace(w, c);
  if (inserted) return;
  it->second += c;
  if (it->second.numerator() == 0) terms.erase(it);
}

MagicExpr MagicExpr::unit(std::size_t n) {
  MagicExpr e{n, {}};
  e.add({}, 1);
  return e;
}

MagicExpr MagicExpr::generator(std::size_t n, std::size_t i, std::size_t j) {
  MagicExpr e{n, {}};
  e.add({Letter{i, j}}, 1);
  return e;
}

namespace {

void require_same_n(const MagicExpr& a, const MagicExpr& b) {
  if (a.n != b.n) throw Error(ErrorKind::ShapeMismatch, "expressions over different N");
}

}  // namespace

MagicExpr operator+(const MagicExpr& a, const MagicExpr& b) {
  require_same_n(a, b);
  MagicExpr r = a;
  for (const auto& [w, c] : b.terms) r.add(w, c);
  return r;
}

MagicExpr operator-(const MagicExpr& a, const MagicExpr& b) {
  require_same_n(a, b);
  MagicExpr r = a;
  for (const auto& [w, c] : b.terms) r.add(w, -c);
  return r;
}

MagicExpr operator*(const Rational& c, const MagicExpr& a) {
  MagicExpr r{a.n, {}};
  if (c.numerator() == 0) return r;
  for (const auto& [w, d] : a.terms) r.add(w, c * d);
  return r;
}

// Concatenation followed by local reduction of each product word.
MagicExpr operator*(const MagicExpr& a, const MagicExpr& b) {
  require_same_n(a, b);
  MagicExpr r{a.n, {}};
  for (const auto& [wa, ca] : a.terms) {
    for (const auto& [wb, cb] : b.terms) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      if (reduce_word(w)) r.add(w, ca * cb);
    }
  }
  return r;
}

std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const Letter& l : w) s += "u[" + std::to_string(l.i + 1) + "," + std::to_string(l.j + 1) + "]";
  return s;
}

std::string to_string(const MagicExpr& e) {
  if (e.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [w, c] : e.terms) {
    const bool negative = c.numerator() < 0;
    const Rational mag = negative ? -c : c;
    if (first) {
      if (negative) os << "-";
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    if (w.empty()) {
      os << mag.numerator();
      if (mag.denominator() != 1) os << "/" << mag.denominator();
      continue;
    }
    if (mag != Rational(1)) {
      os << mag.numerator();
      if (mag.denominator() != 1) os << "/" << mag.denominator();
      os << " ";
    }
    os << to_string(w);
  }
  return os.str();
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  Parser(std::string_view src, std::size_t n, std::size_t offset) : src_(src), n_(n), offset_(offset) {}

  MagicExpr parse() {
    MagicExpr out{n_, {}};
    skip();
    if (at_end()) fail("empty expression");
    bool negative = false;
    if (peek() == '+' || peek() == '-') {
      negative = peek() == '-';
      ++pos_;
    }
    for (;;) {
      auto [w, c] = term();
      if (reduce_word(w)) out.add(w, negative ? -c : c);
      skip();
      if (at_end()) break;
      if (peek() != '+' && peek() != '-') fail("expected '+' or '-'");
      negative = peek() == '-';
      ++pos_;
    }
    return out;
  }

 private:
  std::string_view src_;
  std::size_t n_;
  std::size_t offset_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= src_.size(); }
  char peek() const { return src_[pos_]; }
  void skip() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::SyntaxError, what + " at position " + std::to_string(offset_ + pos_ + 1));
  }

  long long integer() {
    const std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (start == pos_) fail("expected an integer");
    long long v = 0;
    auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    (void)ptr;
    if (ec != std::errc{}) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  std::pair<Word, Rational> term() {
    skip();
    if (at_end()) fail("expected a term");
    Rational coeff = 1;
    Word w;
    bool factors = false;
    bool has_coeff = false;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      // A leading number is a coefficient, except that a lone "1" followed by
      // a factor reads the same either way.
      long long num = integer();
      long long den = 1;
      skip();
      if (!at_end() && peek() == '/') {
        ++pos_;
        skip();
        const std::size_t at = pos_;
        den = integer();
        if (den == 0) {
          pos_ = at;
          fail("zero denominator");
        }
      }
      coeff = Rational(num, den);
      has_coeff = true;
      skip();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip();
        if (at_end() || (peek() != 'u' && peek() != '1')) fail("expected a factor after '*'");
      }
    }
    for (;;) {
      skip();
      if (at_end()) break;
      const char c = peek();
      if (c == 'u') {
        w.push_back(letter());
        factors = true;
      } else if (c == '1' && factors) {
        const std::size_t at = pos_;
        ++pos_;
        if (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
          pos_ = at;
          fail("unexpected number inside a product");
        }
      } else if (c == '*' && factors) {
        ++pos_;
        skip();
        if (at_end() || (peek() != 'u' && peek() != '1')) fail("expected a factor after '*'");
      } else if (c == '+' || c == '-') {
        break;
      } else {
        fail(std::string("unexpected '") + c + "'");
      }
    }
    if (!has_coeff && !factors) fail("expected a term");
    return {w, coeff};
  }

  Letter letter() {
    ++pos_;  // 'u'
    skip();
    if (at_end() || peek() != '[') fail("expected '['");
    ++pos_;
    skip();
    const std::size_t at_i = pos_;
    const long long i = integer();
    skip();
    if (at_end() || peek() != ',') fail("expected ','");
    ++pos_;
    skip();
    const std::size_t at_j = pos_;
    const long long j = integer();
    skip();
    if (at_end() || peek() != ']') fail("expected ']'");
    ++pos_;
    check_index(i, at_i);
    check_index(j, at_j);
    return {static_cast<std::size_t>(i - 1), static_cast<std::size_t>(j - 1)};
  }

  void check_index(long long v, std::size_t at) const {
    if (v < 1 || static_cast<unsigned long long>(v) > n_) {
      throw Error(ErrorKind::IndexOutOfRange, "index " + std::to_string(v) + " outside 1.." + std::to_string(n_) +
                                                  " at position " + std::to_string(offset_ + at + 1));
    }
  }
};

void require_n(std::size_t n) {
  if (n == 0) throw Error(ErrorKind::InvalidSpec, "N must be positive");
}

}  // namespace

MagicExpr parse_expr(std::string_view src, std::size_t n) {
  require_n(n);
  return Parser(src, n, 0).parse();
}

std::pair<MagicExpr, MagicExpr> parse_equation(std::string_view src, std::size_t n) {
  require_n(n);
  const auto at = src.find("==");
  if (at == std::string_view::npos) {
    throw Error(ErrorKind::SyntaxError, "expected 'lhs == rhs' at position " + std::to_string(src.size() + 1));
  }
  if (src.find("==", at + 2) != std::string_view::npos) {
    throw Error(ErrorKind::SyntaxError, "second '==' at position " + std::to_string(src.find("==", at + 2) + 1));
  }
  return {Parser(src.substr(0, at), n, 0).parse(), Parser(src.substr(at + 2), n, at + 2).parse()};
}

// ---------------------------------------------------------------- reduction

bool reduce_word(Word& w) {
  Word out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty()) {
      const Letter& top = out.back();
      if (top == l) continue;
      if (top.i == l.i || top.j == l.j) return false;
    }
    out.push_back(l);
  }
  w = std::move(out);
  return true;
}

MagicExpr local_reduce(const MagicExpr& e) {
  MagicExpr r{e.n, {}};
  for (const auto& [w, c] : e.terms) {
    Word v = w;
    if (reduce_word(v)) r.add(v, c);
  }
  return r;
}

namespace {

MagicExpr row_complement(std::size_t n, std::size_t i, std::size_t j) {
  MagicExpr e = MagicExpr::unit(n);
  for (std::size_t k = 0; k < n; ++k)
    if (k != j) e.add({Letter{i, k}}, -1);
  return e;
}

MagicExpr column_complement(std::size_t n, std::size_t i, std::size_t j) {
  MagicExpr e = MagicExpr::unit(n);
  for (std::size_t k = 0; k < n; ++k)
    if (k != i) e.add({Letter{k, j}}, -1);
  return e;
}

// Expression for a letter with the last index eliminated. The corner goes
// through its row first: u_LL = 1 - Σ_k u_Lk, then each u_Lk by its column,
// which collapses to (2 - N) + Σ_{m,k<L} u_mk.
MagicExpr eliminate_last(std::size_t n, const Letter& l) {
  const std::size_t last = n - 1;
  if (l.i != last && l.j != last) return MagicExpr::generator(n, l.i, l.j);
  if (l.i != last) return row_complement(n, l.i, l.j);
  if (l.j != last) return column_complement(n, l.i, l.j);
  MagicExpr e{n, {}};
  e.add({}, Rational(2 - static_cast<long long>(n)));
  for (std::size_t m = 0; m < last; ++m)
    for (std::size_t k = 0; k < last; ++k) e.add({Letter{m, k}}, 1);
  return e;
}

}  // namespace

MagicExpr normalize(const MagicExpr& e) {
  const MagicExpr reduced = local_reduce(e);
  if (reduced.n == 0) return reduced;
  const std::size_t last = reduced.n - 1;
  MagicExpr out{reduced.n, {}};
  for (const auto& [w, c] : reduced.terms) {
    const bool touches = std::any_of(w.begin(), w.end(), [&](const Letter& l) { return l.i == last || l.j == last; });
    if (!touches) {
      out.add(w, c);
      continue;
    }
    MagicExpr prod = MagicExpr::unit(reduced.n);
    for (const Letter& l : w) {
      prod = prod * eliminate_last(reduced.n, l);
      if (prod.is_zero()) break;
    }
    for (const auto& [v, d] : prod.terms) out.add(v, c * d);
  }
  return out;
}

// ---------------------------------------------------------------- moves

namespace {

std::pair<Word, Rational> term_at(const MagicExpr& e, std::size_t index) {
  if (index >= e.terms.size()) throw Error(ErrorKind::IndexOutOfRange, "no term " + std::to_string(index));
  auto it = e.terms.begin();
  std::advance(it, static_cast<long>(index));
  return *it;
}

}  // namespace

MagicExpr apply_move(const MagicExpr& e, const Move& m) {
  const auto [w, c] = term_at(e, m.term);
  if (m.position >= w.size()) throw Error(ErrorKind::IndexOutOfRange, "no letter " + std::to_string(m.position));
  const Letter l = w[m.position];
  const MagicExpr repl =
      m.kind == Complement::Row ? row_complement(e.n, l.i, l.j) : column_complement(e.n, l.i, l.j);
  MagicExpr prefix{e.n, {}};
  prefix.add(Word(w.begin(), w.begin() + static_cast<long>(m.position)), 1);
  MagicExpr suffix{e.n, {}};
  suffix.add(Word(w.begin() + static_cast<long>(m.position) + 1, w.end()), 1);
  MagicExpr r = e;
  r.add(w, -c);
  r = r + c * (prefix * repl * suffix);
  return local_reduce(r);
}

std::string describe(const MagicExpr& e, const Move& m) {
  const auto [w, c] = term_at(e, m.term);
  const Letter l = w.at(m.position);
  const MagicExpr repl =
      m.kind == Complement::Row ? row_complement(e.n, l.i, l.j) : column_complement(e.n, l.i, l.j);
  std::ostringstream os;
  os << (m.kind == Complement::Row ? "row" : "column") << " sum: " << to_string(Word{l}) << " = " << to_string(repl)
     << " in " << to_string(w);
  return os.str();
}

// ---------------------------------------------------------------- search

namespace {

struct Node {
  MagicExpr expr;
  std::size_t parent = 0;
  std::size_t depth = 0;
  std::string rule;
};

struct Side {
  std::vector<Node> nodes;
  std::unordered_map<std::string, std::size_t> seen;     // raw form
  std::unordered_map<std::string, std::size_t> by_norm;  // normal form, first node
  std::vector<std::size_t> frontier;
  std::size_t depth = 0;
  bool exhausted = false;
};

bool within(const MagicExpr& e, const SearchLimits& lim) {
  if (e.terms.size() > lim.max_terms) return false;
  for (const auto& [w, c] : e.terms)
    if (w.size() > lim.max_word_length) return false;
  return true;
}

// Returns the matching node on the other side, if any.
std::optional<std::size_t> insert(Side& side, const Side& other, MagicExpr e, std::size_t parent, std::size_t depth,
                                  std::string rule, bool& added) {
  added = false;
  std::string key = to_string(e);
  if (side.seen.count(key)) return std::nullopt;
  const std::string norm = to_string(normalize(e));
  const std::size_t id = side.nodes.size();
  side.nodes.push_back({std::move(e), parent, depth, std::move(rule)});
  side.seen.emplace(std::move(key), id);
  side.by_norm.try_emplace(norm, id);
  side.frontier.push_back(id);
  added = true;
  auto hit = other.by_norm.find(norm);
  if (hit != other.by_norm.end()) return hit->second;
  return std::nullopt;
}

std::vector<std::size_t> path_to(const Side& side, std::size_t id) {
  std::vector<std::size_t> p{id};
  while (id != 0) {
    id = side.nodes[id].parent;
    p.push_back(id);
  }
  std::reverse(p.begin(), p.end());
  return p;
}

ProofResult assemble(const MagicExpr& a, const MagicExpr& b, const Side& sa, std::size_t ia, const Side& sb,
                     std::size_t ib) {
  ProofResult r;
  r.proved = true;
  if (!(local_reduce(a) == a)) r.steps.push_back({a, sa.nodes[0].expr, "local reductions"});
  const auto pa = path_to(sa, ia);
  for (std::size_t k = 1; k < pa.size(); ++k)
    r.steps.push_back({sa.nodes[pa[k - 1]].expr, sa.nodes[pa[k]].expr, sa.nodes[pa[k]].rule});
  const MagicExpr& x = sa.nodes[ia].expr;
  const MagicExpr& y = sb.nodes[ib].expr;
  if (!(x == y)) {
    const MagicExpr nf = normalize(x);
    if (!(nf == x)) r.steps.push_back({x, nf, "normalize"});
    if (!(nf == y)) r.steps.push_back({nf, y, "normalize (reversed)"});
  }
  const auto pb = path_to(sb, ib);
  for (std::size_t k = pb.size(); k-- > 1;)
    r.steps.push_back({sb.nodes[pb[k]].expr, sb.nodes[pb[k - 1]].expr, sb.nodes[pb[k]].rule + " (reversed)"});
  if (!(local_reduce(b) == b)) r.steps.push_back({sb.nodes[0].expr, b, "local reductions (reversed)"});
  r.moves = sa.nodes[ia].depth + sb.nodes[ib].depth;
  r.states = sa.nodes.size() + sb.nodes.size();
  return r;
}

}  // namespace

ProofResult prove_equal(const MagicExpr& a, const MagicExpr& b, std::size_t depth, const SearchLimits& limits) {
  require_same_n(a, b);
  Side sa, sb;
  bool added = false;
  insert(sa, sb, local_reduce(a), 0, 0, "start", added);
  if (auto hit = insert(sb, sa, local_reduce(b), 0, 0, "start", added)) return assemble(a, b, sa, *hit, sb, 0);

  const std::size_t budget_a = (depth + 1) / 2;
  const std::size_t budget_b = depth / 2;
  bool pruned = false;

  auto expand = [&](Side& side, Side& other, bool side_is_a) -> std::optional<std::pair<std::size_t, std::size_t>> {
    std::vector<std::size_t> current;
    current.swap(side.frontier);
    ++side.depth;
    for (std::size_t id : current) {
      const MagicExpr e = side.nodes[id].expr;
      std::size_t t = 0;
      for (const auto& [w, c] : e.terms) {
        for (std::size_t p = 0; p < w.size(); ++p) {
          for (Complement kind : {Complement::Row, Complement::Column}) {
            const Move m{t, p, kind};
            MagicExpr next = apply_move(e, m);
            if (!within(next, limits)) {
              pruned = true;
              continue;
            }
            if (side.nodes.size() >= limits.max_states_per_side) {
              pruned = true;
              return std::nullopt;
            }
            auto hit = insert(side, other, std::move(next), id, side.depth, describe(e, m), added);
            if (hit) {
              const std::size_t mine = side.nodes.size() - 1;
              return side_is_a ? std::make_pair(mine, *hit) : std::make_pair(*hit, mine);
            }
          }
        }
        ++t;
      }
    }
    if (side.frontier.empty()) side.exhausted = true;
    return std::nullopt;
  };

  for (;;) {
    const bool can_a = sa.depth < budget_a && !sa.exhausted && !sa.frontier.empty();
    const bool can_b = sb.depth < budget_b && !sb.exhausted && !sb.frontier.empty();
    if (!can_a && !can_b) break;
    const bool pick_a = can_a && (!can_b || sa.depth <= sb.depth);
    auto hit = pick_a ? expand(sa, sb, true) : expand(sb, sa, false);
    if (hit) {
      ProofResult r = assemble(a, b, sa, hit->first, sb, hit->second);
      r.pruned = pruned;
      return r;
    }
  }
  ProofResult r;
  r.states = sa.nodes.size() + sb.nodes.size();
  r.pruned = pruned;
  return r;
}

std::string format_proof(const ProofResult& r) {
  std::ostringstream os;
  if (!r.proved) {
    os << "Unknown (" << r.states << " expressions explored" << (r.pruned ? ", search pruned" : "") << ")\n";
    return os.str();
  }
  os << "Proved in " << r.moves << " move" << (r.moves == 1 ? "" : "s") << "\n";
  std::size_t k = 1;
  for (const ProofStep& s : r.steps) {
    os << "  " << k++ << ". " << to_string(s.from) << "\n     = " << to_string(s.to) << "    [" << s.rule << "]\n";
  }
  return os.str();
}

CMatrix evaluate(const MagicExpr& e, const MagicUnitary& u) {
  if (e.n != u.n) throw Error(ErrorKind::ShapeMismatch, "expression and magic unitary differ in N");
  CMatrix acc = CMatrix::zeros(u.ambient_dim, u.ambient_dim);
  for (const auto& [w, c] : e.terms) {
    CMatrix prod = CMatrix::identity(u.ambient_dim);
    for (const Letter& l : w) prod = prod * u.entry(l.i, l.j);
    acc += prod * cplx(boost::rational_cast<double>(c), 0.0);
  }
  return acc;
}

double proof_defect(const ProofResult& r, const MagicUnitary& u) {
  double worst = 0.0;
  for (const ProofStep& s : r.steps) worst = std::max(worst, (evaluate(s.from, u) - evaluate(s.to, u)).frobenius_norm());
  return worst;
}

}  // namespace qperm

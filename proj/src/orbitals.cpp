#include "qperm/orbitals.hpp"

#include <algorithm>
#include <numeric>

#include "qperm/errors.hpp"
#include "qperm/kernels.hpp"

namespace qperm {

namespace {

double monomial_norm(const HopfData& h, const Tuple& is, const Tuple& js) {
  CMatrix m = h.magic.entry(is[0], js[0]);
  for (std::size_t t = 1; t < is.size(); ++t) m = kernels::serial::matmul(m, h.magic.entry(is[t], js[t]));
  // ‖m‖_op ≤ ‖m‖_F, so a small Frobenius norm settles it without an eigensolve
  const double f = m.frobenius_norm();
  if (f <= 1e-12) return f;
  return operator_norm(m);
}

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + std::to_string(t[i] + 1);
  return s + ")";
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

}  // namespace

Relatedness related(const HopfData& h, const Tuple& is, const Tuple& js, double tol) {
  if (is.empty() || is.size() != js.size()) throw Error(ErrorKind::ShapeMismatch, "tuples must have equal length >= 1");
  for (std::size_t t = 0; t < is.size(); ++t) {
    if (is[t] >= h.n() || js[t] >= h.n()) throw Error(ErrorKind::IndexOutOfRange, "tuple entry out of range");
  }
  const double norm = monomial_norm(h, is, js);
  return {norm > tol, norm};
}

std::vector<Tuple> all_tuples(std::size_t n, std::size_t k) {
  std::vector<Tuple> out;
  Tuple t(k, 0);
  while (true) {
    out.push_back(t);
    std::size_t pos = k;
    while (pos > 0 && ++t[pos - 1] == n) t[--pos] = 0;
    if (pos == 0) break;
  }
  return out;
}

OrbitalRelation orbital_relation(const HopfData& h, std::size_t k, double tol, Execution exec) {
  if (k < 1 || k > kMaxOrbitalArity) throw Error(ErrorKind::TooLarge, "orbital scans support 1 <= k <= 4");
  OrbitalRelation rel;
  rel.k = k;
  rel.n = h.n();
  rel.tol = tol;
  rel.tuples = all_tuples(h.n(), k);
  const std::size_t count = rel.tuples.size();
  rel.norms.assign(count * count, 0.0);
  const auto total = static_cast<long>(count * count);
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic, 16)
    for (long p = 0; p < total; ++p) {
      const auto a = static_cast<std::size_t>(p) / count, b = static_cast<std::size_t>(p) % count;
      rel.norms[static_cast<std::size_t>(p)] = monomial_norm(h, rel.tuples[a], rel.tuples[b]);
    }
  } else {
    for (long p = 0; p < total; ++p) {
      const auto a = static_cast<std::size_t>(p) / count, b = static_cast<std::size_t>(p) % count;
      rel.norms[static_cast<std::size_t>(p)] = monomial_norm(h, rel.tuples[a], rel.tuples[b]);
    }
  }
  return rel;
}

OrbitClasses orbit_classes(const HopfData& h, std::size_t k, double tol) {
  if (k < 1 || k > 2) throw Error(ErrorKind::TooLarge, "orbit classes are computed for k = 1, 2");
  const auto rel = orbital_relation(h, k, tol);
  const std::size_t count = rel.tuples.size();
  for (std::size_t a = 0; a < count; ++a) {
    if (!rel.related(a, a)) {
      throw Error(ErrorKind::NotEquivalence, "not reflexive at " + tuple_text(rel.tuples[a]));
    }
    for (std::size_t b = 0; b < count; ++b)
      if (rel.related(a, b) != rel.related(b, a)) {
        throw Error(ErrorKind::NotEquivalence,
                    "not symmetric at " + tuple_text(rel.tuples[a]) + ", " + tuple_text(rel.tuples[b]));
      }
  }
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) {
      if (!rel.related(a, b)) continue;
      for (std::size_t c = 0; c < count; ++c)
        if (rel.related(b, c) && !rel.related(a, c)) {
          throw Error(ErrorKind::NotEquivalence, "not transitive: " + tuple_text(rel.tuples[a]) + " ~ " +
                                                     tuple_text(rel.tuples[b]) + " ~ " + tuple_text(rel.tuples[c]));
        }
    }

  std::vector<std::size_t> parent(count);
  std::iota(parent.begin(), parent.end(), 0);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b)
      if (rel.related(a, b)) parent[find_root(parent, a)] = find_root(parent, b);

  OrbitClasses out;
  out.k = k;
  std::vector<std::size_t> slot(count, count);
  for (std::size_t a = 0; a < count; ++a) {
    const auto r = find_root(parent, a);
    if (slot[r] == count) {
      slot[r] = out.classes.size();
      out.classes.emplace_back();
    }
    out.classes[slot[r]].push_back(rel.tuples[a]);
  }
  return out;
}

ThreeOrbitalReport three_orbital_transitivity_report(const HopfData& h, double tol, Execution exec,
                                                     std::size_t max_n) {
  if (h.n() > max_n) throw Error(ErrorKind::TooLarge, "three-orbital scan needs N <= " + std::to_string(max_n));
  const auto rel = orbital_relation(h, 3, tol, exec);
  const std::size_t count = rel.tuples.size();
  ThreeOrbitalReport rep;
  std::vector<std::vector<std::size_t>> nbrs(count);
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b) {
      const double x = rel.norm(a, b);
      if (rel.related(a, b)) {
        ++rep.related_pairs;
        nbrs[a].push_back(b);
      }
      if (rel.related(a, b) != rel.related(b, a)) rep.symmetric = false;
      if (x >= 1e-12 && x <= 1e-6) rep.suspicious.push_back({{rel.tuples[a], rel.tuples[b]}, x});
    }
  for (std::size_t a = 0; a < count; ++a)
    for (auto b : nbrs[a])
      for (auto c : nbrs[b])
        if (!rel.related(a, c)) {
          rep.witnesses.push_back(
              {{rel.tuples[a], rel.tuples[b], rel.tuples[c]}, rel.norm(a, b), rel.norm(b, c), rel.norm(a, c)});
        }
  return rep;
}

}  // namespace qperm

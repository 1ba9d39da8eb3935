#pragma once

// Shared groups and states for the test binaries.

#include <map>
#include <memory>

#include "qperm/hopf.hpp"
#include "qperm/states.hpp"

namespace fixtures {

using namespace qperm;

inline Permutation perm1(std::initializer_list<long long> images) { return permutation_from_one_based(images); }

inline GroupPtr kp() {
  static const GroupPtr h = std::make_shared<const HopfData>(build_hopf(kac_paljutkin()));
  return h;
}

inline GroupPtr s3() {
  static const GroupPtr h = std::make_shared<const HopfData>(build_hopf(symmetric_group(3)));
  return h;
}

inline GroupPtr s4() {
  static const GroupPtr h = std::make_shared<const HopfData>(build_hopf(symmetric_group(4)));
  return h;
}

// Ŝ₃ ⊂ S₄⁺ via (12), (13)
inline GroupPtr dual_s3() {
  static const GroupPtr h = std::make_shared<const HopfData>(
      build_hopf(dual_group(GroupTable::from_permutations({perm1({2, 1, 3}), perm1({3, 2, 1})}))));
  return h;
}

// Ŝ₄ ⊂ S₅⁺ via (12), (234)
inline GroupPtr dual_s4() {
  static const GroupPtr h = std::make_shared<const HopfData>(
      build_hopf(dual_group(GroupTable::from_permutations({perm1({2, 1, 3, 4}), perm1({1, 3, 4, 2})}))));
  return h;
}

// Density diag(1,1,1,1,2,2)/8, the trace form on C⁴ ⊕ M₂.
inline CMatrix kp_haar_density() {
  return CMatrix::diagonal(std::vector<cplx>{1.0 / 8, 1.0 / 8, 1.0 / 8, 1.0 / 8, 2.0 / 8, 2.0 / 8});
}

inline CMatrix basis_projector(std::size_t dim, std::initializer_list<std::pair<std::size_t, double>> weights) {
  CMatrix m(dim, dim);
  for (auto [k, w] : weights) m(k, k) = w;
  return m;
}

// pdf values keyed by permutation, mapped onto the group's element order
inline std::vector<cplx> pdf_values(const HopfData& h, const std::map<Permutation, double>& by_perm, double fallback) {
  const auto& g = h.magic.dual->group;
  std::vector<cplx> v(g.order, fallback);
  for (const auto& [p, x] : by_perm) v[*g.index_of(p)] = x;
  return v;
}

// e:1, (12):½, (13):½, (23):−1, (123):−½, (132):−½
inline QuantumPermutation three_fixed_point_state() {
  const auto h = dual_s3();
  std::map<Permutation, double> v{{perm1({1, 2, 3}), 1.0},  {perm1({2, 1, 3}), 0.5},  {perm1({3, 2, 1}), 0.5},
                                  {perm1({1, 3, 2}), -1.0}, {perm1({2, 3, 1}), -0.5}, {perm1({3, 1, 2}), -0.5}};
  return state_from_function(h, pdf_values(*h, v, 0.0));
}

inline double four_fixed_value(const Permutation& s) {
  const auto id = identity_permutation(4);
  const auto t34 = perm1({1, 2, 4, 3});
  const auto t12 = perm1({2, 1, 3, 4});
  if (s == id || s == t34) return 1.0;
  if (s == t12 || s == compose(t12, t34)) return 1.0 / 3.0;
  if (s[0] == 0) return 5.0 / 6.0;
  if (s[1] == 1) return -0.5;
  if (s == perm1({3, 4, 1, 2}) || s == perm1({4, 3, 2, 1}) || s == perm1({4, 3, 1, 2}) || s == perm1({3, 4, 2, 1})) {
    return -2.0 / 3.0;
  }
  return -1.0 / 6.0;
}

inline std::vector<cplx> four_fixed_values(const HopfData& h) {
  const auto& g = h.magic.dual->group;
  std::vector<cplx> v(g.order);
  for (std::size_t e = 0; e < g.order; ++e) v[e] = four_fixed_value(g.elements[e]);
  return v;
}

inline QuantumPermutation four_fixed_point_state() { return state_from_function(dual_s4(), four_fixed_values(*dual_s4())); }

}  // namespace fixtures

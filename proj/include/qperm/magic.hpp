#pragma once

#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qperm/numerics.hpp"

namespace qperm {

/// Permutation of {0,…,n-1} stored as its image list: p[j] = σ(j).
using Permutation = std::vector<std::size_t>;

Permutation identity_permutation(std::size_t n);
/// (a∘b)(x) = a(b(x))
Permutation compose(const Permutation& a, const Permutation& b);
Permutation inverse(const Permutation& p);
/// All of S_n in lexicographic order of image lists.
std::vector<Permutation> all_permutations(std::size_t n);
std::size_t fixed_point_count(const Permutation& p);
/// One-line notation with 1-based images, e.g. "[2,1,3]".
std::string to_string(const Permutation& p);
/// Parses 1-based images; throws InvalidSpec unless it is a permutation.
Permutation permutation_from_one_based(const std::vector<long long>& images);

/// Generator u_ij with 0-based indices.
struct Letter {
  std::size_t i = 0;
  std::size_t j = 0;
  bool operator==(const Letter&) const = default;
  auto operator<=>(const Letter&) const = default;
};
using Word = std::vector<Letter>;

/// Finite group given by its Cayley table, table[g][h] = g·h.
struct GroupTable {
  std::size_t order = 0;
  std::vector<std::vector<std::size_t>> table;
  std::size_t identity = 0;
  std::vector<std::size_t> generators;
  std::vector<std::size_t> element_orders;
  /// Present when the group was built from permutation generators.
  std::vector<Permutation> elements;

  /// Validates the table (closure, identity, inverses, associativity) and
  /// that the generators generate. Throws InvalidTable / NotGenerating.
  static GroupTable from_cayley(std::vector<std::vector<std::size_t>> table, std::size_t identity,
                                std::vector<std::size_t> generators);
  /// Closure of the given permutations under composition, elements in
  /// breadth-first discovery order starting at the identity.
  static GroupTable from_permutations(const std::vector<Permutation>& generators,
                                      std::size_t max_order = 5040);

  std::size_t inverse_of(std::size_t g) const;
  std::size_t power(std::size_t g, std::size_t k) const;
  /// Index of a permutation element, if the group was built from permutations.
  std::optional<std::size_t> index_of(const Permutation& p) const;
};

/// Left regular representation: g maps e_h to e_{gh}.
CMatrix regular_representation(const GroupTable& g, std::size_t element);

/// Extra structure carried by magic unitaries built from a group.
struct DualGroupInfo {
  GroupTable group;
  std::vector<CMatrix> element_ops;  // regular representation of every element
};

/// N×N array of projections on one carrier whose rows and columns are
/// partitions of unity.
struct MagicUnitary {
  std::size_t n = 0;
  std::size_t ambient_dim = 0;
  std::vector<CMatrix> entries;  // row-major, n*n
  std::string label;
  /// Identifies the carrier; parts with the same carrier can be stacked
  /// block-diagonally without tensoring.
  std::string carrier;
  std::optional<DualGroupInfo> dual;
  /// For symmetric_group: coordinate k of the carrier is the point σ_k.
  std::vector<Permutation> classical_points;

  const CMatrix& entry(std::size_t i, std::size_t j) const { return entries[i * n + j]; }
};

struct ValidationReport {
  std::vector<double> projection_defects;  // per entry, max(‖p-p*‖, ‖p²-p‖)
  std::vector<double> row_defects;
  std::vector<double> column_defects;
  double max_defect = 0.0;
  bool passed = false;
};

ValidationReport validate_magic(const MagicUnitary& u, double tol = kDefaultTol);

/// Classical S_n acting on F(S_n) ≅ C^{n!}; entry (i,j) is the indicator of
/// {σ : σ(j) = i}. Throws TooLarge for n > 6.
MagicUnitary symmetric_group(std::size_t n);

/// Dual of a finite group in its regular representation, one circulant
/// block per generator.
MagicUnitary dual_group(const GroupTable& g, std::string label = "dual");

/// The eight-dimensional Kac–Paljutkin quantum group on C⁴ ⊕ C², block
/// order (f₁,f₂,f₃,f₄,M₂).
MagicUnitary kac_paljutkin();

MagicUnitary direct_sum(const std::vector<MagicUnitary>& parts);
MagicUnitary repeat_embed(const MagicUnitary& u, std::size_t times);

}  // namespace qperm

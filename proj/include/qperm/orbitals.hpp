#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "qperm/hopf.hpp"

namespace qperm {

/// k-tuple (i_k, …, i_1), 0-based. The monomial of a pair of tuples is
/// u_{i_k j_k} ⋯ u_{i_1 j_1}, multiplied in tuple order.
using Tuple = std::vector<std::size_t>;

inline constexpr double kOrbitalTol = 1e-9;
inline constexpr std::size_t kMaxOrbitalArity = 4;

enum class Execution { Serial, Parallel };

struct Relatedness {
  bool related = false;
  double norm = 0.0;  // operator norm of the monomial
};

Relatedness related(const HopfData& h, const Tuple& is, const Tuple& js, double tol = kOrbitalTol);

/// All k-tuples over {0..n-1} in lexicographic order.
std::vector<Tuple> all_tuples(std::size_t n, std::size_t k);

struct OrbitalRelation {
  std::size_t k = 0;
  std::size_t n = 0;
  double tol = kOrbitalTol;
  std::vector<Tuple> tuples;
  std::vector<double> norms;  // norms[a * tuples.size() + b]

  double norm(std::size_t a, std::size_t b) const { return norms[a * tuples.size() + b]; }
  bool related(std::size_t a, std::size_t b) const { return norm(a, b) > tol; }
};

/// Norms of every monomial for k ≤ 4.
OrbitalRelation orbital_relation(const HopfData& h, std::size_t k, double tol = kOrbitalTol,
                                 Execution exec = Execution::Parallel);

struct OrbitClasses {
  std::size_t k = 0;
  std::vector<std::vector<Tuple>> classes;
};

/// Equivalence classes of ∼_k for k ∈ {1,2}; throws NotEquivalence with the
/// offending tuples if the relation is not an equivalence.
OrbitClasses orbit_classes(const HopfData& h, std::size_t k, double tol = kOrbitalTol);

struct TransitivityWitness {
  std::array<Tuple, 3> tuples;  // a ∼ b, b ∼ c, a ≁ c
  double ab = 0.0;
  double bc = 0.0;
  double ac = 0.0;
};

struct ThreeOrbitalReport {
  std::size_t related_pairs = 0;
  bool symmetric = true;
  std::vector<TransitivityWitness> witnesses;
  /// Pairs whose norm falls in [1e-12, 1e-6]: neither clearly zero nor clearly not.
  std::vector<std::pair<std::pair<Tuple, Tuple>, double>> suspicious;
};

/// Scans all triples of 3-tuples; N ≤ max_n (default 6) bounds the N⁶ pair scan.
ThreeOrbitalReport three_orbital_transitivity_report(const HopfData& h, double tol = kOrbitalTol,
                                                     Execution exec = Execution::Parallel, std::size_t max_n = 6);

}  // namespace qperm

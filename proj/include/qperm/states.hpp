#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qperm/hopf.hpp"
#include "qperm/rng.hpp"

namespace qperm {

using GroupPtr = std::shared_ptr<const HopfData>;

/// A state on the algebra, stored by its values on the basis.
struct QuantumPermutation {
  GroupPtr group;
  std::vector<cplx> coords;  // φ(b_r)
  std::string label;

  const HopfData& h() const { return *group; }
  cplx operator()(std::span<const cplx> x) const { return HopfData::evaluate(coords, x); }
  /// φ(a) for an ambient matrix a that lies in the algebra.
  cplx on_matrix(const CMatrix& a) const;
};

struct StateReport {
  double normalization = 0.0;  // |φ(1) - 1|
  double hermiticity = 0.0;    // max |φ(b*) - conj φ(b)|
  double min_gram_eigenvalue = 0.0;
  bool valid = false;
};

/// Gram matrix G(i,j) = φ(b_i* b_j).
CMatrix gram_matrix(const HopfData& h, std::span<const cplx> phi);
StateReport check_state(const QuantumPermutation& phi, double tol = kDefaultTol);
/// Throws NotAState unless check_state passes.
void require_state(const QuantumPermutation& phi, double tol = kDefaultTol);

QuantumPermutation state_from_density(GroupPtr h, const CMatrix& rho, double tol = kDefaultTol);
/// Vector state of an ambient unit vector.
QuantumPermutation state_from_vector(GroupPtr h, std::span<const cplx> v, double tol = kDefaultTol);
/// Dual groups only: the functional γ ↦ values[γ], indexed like the Cayley table.
QuantumPermutation state_from_function(GroupPtr h, std::span<const cplx> values, double tol = kDefaultTol);
/// ev_σ with ev_σ(u_ij) = δ_{i,σ(j)}; throws NotInGroup if σ is not a character.
QuantumPermutation character_state(GroupPtr h, const Permutation& sigma, double tol = kDefaultTol);
QuantumPermutation counit_state(GroupPtr h);
QuantumPermutation haar_state(GroupPtr h);
/// Convex combination; weights must be non-negative and sum to 1.
QuantumPermutation mix(const std::vector<std::pair<double, QuantumPermutation>>& terms, double tol = kDefaultTol);

/// Row-major N×N doubly stochastic matrix [φ(u_ij)].
struct BirkhoffSlice {
  std::size_t n = 0;
  std::vector<double> m;
  double operator()(std::size_t i, std::size_t j) const { return m[i * n + j]; }
  /// Largest violation of double stochasticity.
  double stochastic_defect() const;
};

BirkhoffSlice birkhoff_slice(const QuantumPermutation& phi);

/// Left/right multiplication by x as matrices on coordinates.
CMatrix left_multiplication(const HopfData& h, std::span<const cplx> x);
CMatrix right_multiplication(const HopfData& h, std::span<const cplx> x);

/// p̃φ(f) = φ(pfp)/φ(p). Throws NullEvent if φ(p) ≤ tol.
QuantumPermutation condition(const QuantumPermutation& phi, std::span<const cplx> p, double tol = kDefaultTol);

/// Outcome of measuring u_ij (0-based): true means the projection u_ij,
/// false its complement 1 - u_ij.
struct Event {
  std::size_t i = 0;
  std::size_t j = 0;
  bool outcome = true;
};

std::vector<cplx> event_projection(const HopfData& h, const Event& e);

/// Probability that events[0], events[1], … are observed in that order:
/// φ(p_1 p_2 ⋯ p_n ⋯ p_2 p_1).
double sequential_probability(const QuantumPermutation& phi, const std::vector<Event>& events);
double sequential_probability(const QuantumPermutation& phi, const std::vector<std::vector<cplx>>& projections);

QuantumPermutation convolve(const QuantumPermutation& phi, const QuantumPermutation& psi);
QuantumPermutation reverse_state(const QuantumPermutation& phi);

struct IterationResult {
  QuantumPermutation state;
  std::size_t iterations = 0;
  double last_change = 0.0;  // sup-coordinate change of the last step
  bool converged = false;
};

/// φ^{⋆k}
IterationResult convolution_power(const QuantumPermutation& phi, std::size_t k);
/// (1/n) Σ_{k=1..n} φ^{⋆k}; converged when the last step moved less than 1e-9.
IterationResult cesaro(const QuantumPermutation& phi, std::size_t n);

inline constexpr double kIdempotentTol = 1e-8;

bool is_idempotent(const QuantumPermutation& phi, double tol = kIdempotentTol);

struct SupportProjection {
  CMatrix support;  // 1 - q on the ambient carrier
  std::vector<cplx> coords;
  CMatrix null_projection;               // q, N_φ = A q
  std::size_t null_space_dim = 0;        // dim N_φ
  double value = 0.0;                    // φ(support)
  double minimality_defect = 0.0;        // max ‖g(1-q)‖ over the Gram kernel
};

SupportProjection support_projection(const QuantumPermutation& phi, double tol = kDefaultTol);

enum class IdempotentClass { Haar, NonHaar, NotIdempotent };
std::string_view to_string(IdempotentClass c);
IdempotentClass classify_idempotent(const QuantumPermutation& phi, double tol = kIdempotentTol);

/// φ(1_S) ≥ 1 - tol for the support 1_S of the idempotent ψ.
bool quasi_subgroup_membership(const QuantumPermutation& phi, const QuantumPermutation& psi,
                               double tol = kDefaultTol);

/// All characters among S_N (N ≤ 6), as (σ, ev_σ) in lexicographic order.
std::vector<std::pair<Permutation, QuantumPermutation>> deterministic_enumerate(GroupPtr h, double tol = kDefaultTol);

/// Sum of the central projections of the one-dimensional blocks.
std::vector<cplx> classical_projection(const HopfData& h);
bool truly_quantum_check(const QuantumPermutation& phi, double tol = kDefaultTol);

struct FixSpectrum {
  std::vector<double> values;
  std::vector<CMatrix> projections;
  std::vector<std::vector<cplx>> coords;
};

/// Spectral decomposition of fix = Σ_j u_jj.
FixSpectrum fix_spectrum(const HopfData& h, double tol = kDefaultTol);

inline constexpr double kFixedPointWeight = 1e-8;

struct FixedPoints {
  std::vector<std::pair<double, double>> distribution;  // (λ, φ(p_λ))
  std::optional<double> count;  // λ when φ(p_λ) ≥ 1 - 1e-8
  double expectation = 0.0;     // Σ λ φ(p_λ)
};

FixedPoints fixed_points_of(const QuantumPermutation& phi, const FixSpectrum& spectrum,
                            double weight_tol = kFixedPointWeight);
FixedPoints fixed_points_of(const QuantumPermutation& phi, double weight_tol = kFixedPointWeight);

/// U_{2n}(√t / 2) for Chebyshev polynomials of the second kind.
double central_character_eval(std::size_t n, double t);

/// ev_{σ⁻¹} ⋆ φ ⋆ ev_τ
QuantumPermutation twisted_conjugate(const QuantumPermutation& phi, const Permutation& sigma, const Permutation& tau,
                                     double tol = kDefaultTol);

struct MeasurementRecord {
  std::size_t position = 0;  // j
  std::size_t outcome = 0;   // i
  double probability = 0.0;
  bool non_classical = false;  // contradicts an earlier outcome at the same position
};

/// Seeded sequence of card flips. Single writer.
class MeasurementSession {
 public:
  MeasurementSession(QuantumPermutation initial, std::uint64_t seed, std::string id = {});

  /// Draws i with probability φ(u_ij), conditions on u_ij and records it.
  const MeasurementRecord& measure(std::size_t position, double tol = kDefaultTol);
  void reset();

  const QuantumPermutation& current() const { return current_; }
  const QuantumPermutation& initial() const { return initial_; }
  const std::vector<MeasurementRecord>& history() const { return history_; }
  std::uint64_t seed() const { return seed_; }
  const std::string& id() const { return id_; }

  /// Re-applies the recorded outcomes to the initial state; returns the
  /// sup-coordinate distance to the current state.
  double replay_defect() const;

 private:
  QuantumPermutation initial_;
  QuantumPermutation current_;
  std::uint64_t seed_;
  SplitMix64 rng_;
  std::string id_;
  std::vector<MeasurementRecord> history_;
};

}  // namespace qperm

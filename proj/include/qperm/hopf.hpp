#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qperm/magic.hpp"
#include "qperm/numerics.hpp"

namespace qperm {

/// How basis element k arose: b_k = (b_parent · u_letter - Σ_q c_q b_q) / norm.
/// Basis element 0 (the normalised identity) has no derivation.
struct Derivation {
  std::size_t parent = 0;
  Letter letter;
  std::vector<cplx> coefficients;  // over b_0..b_{k-1}
  double norm = 1.0;
};

struct Block {
  std::size_t dim = 0;  // d_α, the block is M_{d_α}
  CMatrix projection;   // z_α on the ambient carrier
  std::vector<cplx> coords;
  /// For one-dimensional blocks: the character's permutation, σ(j) = i iff χ(u_ij) = 1.
  std::optional<Permutation> character;
};

struct HopfOptions {
  double tol = kDefaultTol;
  std::size_t max_word_len = 12;
  double new_direction = 1e-7;
  std::uint64_t seed = 0x5eed'c0ffee;
  int wedderburn_retries = 8;
};

/// Basis of the *-algebra generated by a magic unitary together with all
/// Hopf structure in coordinates. Immutable once built.
struct HopfData {
  MagicUnitary magic;
  std::size_t dim = 0;
  std::vector<CMatrix> basis;  // HS-orthonormal, basis[0] = I/√ambient
  std::vector<Word> words;
  std::vector<Derivation> derivations;  // derivations[0] unused
  std::vector<CMatrix> mult;            // mult[k](i,j) = coord_k(b_i b_j)
  CMatrix star;                         // star(q,r) = coord_q(b_r*)
  std::vector<CMatrix> comult;          // Δ(b_r) = Σ comult[r](s,t) b_s ⊗ b_t
  std::vector<cplx> counit_vec;         // ε(b_r)
  CMatrix antipode_mat;                 // antipode_mat(q,r) = coord_q(S(b_r))
  std::vector<cplx> haar_vec;           // h(b_r)
  std::vector<Block> blocks;
  std::vector<std::vector<cplx>> generator_coords;  // coords of u_ij, row-major

  std::size_t n() const { return magic.n; }
  std::size_t ambient_dim() const { return magic.ambient_dim; }

  struct Coordinates {
    std::vector<cplx> values;
    double residual = 0.0;
  };
  Coordinates coords(const CMatrix& a) const;
  CMatrix element(std::span<const cplx> x) const;
  std::vector<cplx> one() const;
  std::vector<cplx> generator(std::size_t i, std::size_t j) const;
  std::vector<cplx> word(const Word& w) const;
  std::vector<cplx> multiply(std::span<const cplx> x, std::span<const cplx> y) const;
  std::vector<cplx> adjoint(std::span<const cplx> x) const;
  std::vector<cplx> antipode(std::span<const cplx> x) const;
  /// Δ(x) as a coefficient matrix over b_s ⊗ b_t.
  CMatrix comultiply(std::span<const cplx> x) const;
  /// R with φ(a) = Tr(R a) for every algebra element a, where φ(b_r) = phi[r].
  CMatrix functional_matrix(std::span<const cplx> phi) const;
  /// φ(x) = Σ x_r φ_r
  static cplx evaluate(std::span<const cplx> phi, std::span<const cplx> x);
};

struct BasisResult {
  std::vector<CMatrix> basis;
  std::vector<Word> words;
  std::vector<Derivation> derivations;
};

/// Breadth-first closure of words in the generators with modified
/// Gram–Schmidt. Throws Truncated if closure needs longer words.
BasisResult generate_basis(const MagicUnitary& u, double new_direction = 1e-7, std::size_t max_word_len = 12);

std::vector<CMatrix> build_multiplication(const HopfData& h);
CMatrix build_star(const HopfData& h);
std::vector<CMatrix> build_comultiplication(const HopfData& h, double tol = kDefaultTol);
std::vector<cplx> build_counit(const HopfData& h, double tol = kDefaultTol);
CMatrix build_antipode(const HopfData& h, double tol = kDefaultTol);
std::vector<cplx> build_haar(const HopfData& h, double tol = kDefaultTol);
std::vector<Block> wedderburn_decompose(const HopfData& h, double tol = kDefaultTol,
                                        std::uint64_t seed = HopfOptions{}.seed, int retries = 8);

/// Full pipeline: validate, basis, all structure tensors, Haar, blocks.
HopfData build_hopf(const MagicUnitary& u, const HopfOptions& opts = {});

/// The character of a one-dimensional block, read off as a permutation.
Permutation block_character(const HopfData& h, const Block& b, double tol = kDefaultTol);

struct InvariantReport {
  double coassociativity = 0.0;
  double counital = 0.0;
  double antipodal = 0.0;
  double antipode_involution = 0.0;
  double haar_invariance = 0.0;
  double block_orthogonality = 0.0;
  double max() const;
};

InvariantReport hopf_invariants(const HopfData& h);

}  // namespace qperm

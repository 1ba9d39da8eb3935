#include "qperm/hopf.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qperm/errors.hpp"
#include "qperm/kernels.hpp"
#include "qperm/rng.hpp"

namespace qperm {

namespace {

std::vector<cplx> project(std::span<const CMatrix> basis, const CMatrix& a) {
  if (basis.size() * a.size() >= 65536) return kernels::parallel::project(basis, a);
  return kernels::serial::project(basis, a);
}

std::vector<Letter> all_letters(std::size_t n) {
  std::vector<Letter> out;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out.push_back({i, j});
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

// RM(a,s) = coord_a(b_s · g)
CMatrix right_mult(const HopfData& h, const CMatrix& g) {
  CMatrix out(h.dim, h.dim);
  for (std::size_t s = 0; s < h.dim; ++s) {
    const auto c = project(h.basis, h.basis[s] * g);
    for (std::size_t a = 0; a < h.dim; ++a) out(a, s) = c[a];
  }
  return out;
}

// LM(a,s) = coord_a(g · b_s)
CMatrix left_mult(const HopfData& h, const CMatrix& g) {
  CMatrix out(h.dim, h.dim);
  for (std::size_t s = 0; s < h.dim; ++s) {
    const auto c = project(h.basis, g * h.basis[s]);
    for (std::size_t a = 0; a < h.dim; ++a) out(a, s) = c[a];
  }
  return out;
}

// Δ(x)Δ(u_ij) in coordinates: Σ_k RM_{ik} D RM_{kj}^T
CMatrix times_comult_generator(const std::vector<CMatrix>& rm, std::size_t n, const CMatrix& d, Letter g) {
  CMatrix out(d.rows(), d.cols());
  for (std::size_t k = 0; k < n; ++k) {
    out += rm[g.i * n + k] * d * rm[k * n + g.j].transpose();
  }
  return out;
}

std::vector<CMatrix> generator_right_mults(const HopfData& h) {
  std::vector<CMatrix> rm;
  for (const auto& e : h.magic.entries) rm.push_back(right_mult(h, e));
  return rm;
}

// Orthonormal basis of the null space of a PSD matrix, as columns.
std::vector<std::vector<cplx>> null_space(const CMatrix& m) {
  const auto es = jacobi_eigensystem(m);
  const double scale = std::max(1.0, std::abs(es.values.back()));
  std::vector<std::vector<cplx>> out;
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    if (es.values[k] > 1e-12 * scale) break;
    std::vector<cplx> v(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) v[i] = es.vectors(i, k);
    out.push_back(std::move(v));
  }
  return out;
}

// Accumulates a^H a for one row vector a into m.
void add_gram_row(CMatrix& m, std::span<const cplx> a) {
  for (std::size_t p = 0; p < a.size(); ++p) {
    if (a[p] == cplx{}) continue;
    const cplx cp = std::conj(a[p]);
    for (std::size_t q = 0; q < a.size(); ++q) m(p, q) += cp * a[q];
  }
}

std::size_t first_support_index(const CMatrix& p) {
  for (std::size_t i = 0; i < p.rows(); ++i)
    if (std::abs(p(i, i)) > 1e-6) return i;
  return p.rows();
}

}  // namespace

HopfData::Coordinates HopfData::coords(const CMatrix& a) const {
  if (a.rows() != ambient_dim() || a.cols() != ambient_dim()) {
    throw Error(ErrorKind::ShapeMismatch, "matrix is not on the ambient carrier");
  }
  Coordinates c;
  c.values = project(basis, a);
  c.residual = (a - element(c.values)).frobenius_norm();
  return c;
}

CMatrix HopfData::element(std::span<const cplx> x) const {
  CMatrix out(ambient_dim(), ambient_dim());
  for (std::size_t r = 0; r < dim; ++r) {
    if (x[r] == cplx{}) continue;
    auto dst = out.entries();
    auto src = basis[r].entries();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] += x[r] * src[k];
  }
  return out;
}

std::vector<cplx> HopfData::one() const {
  std::vector<cplx> v(dim);
  v[0] = std::sqrt(static_cast<double>(ambient_dim()));
  return v;
}

std::vector<cplx> HopfData::generator(std::size_t i, std::size_t j) const {
  if (i >= n() || j >= n()) throw Error(ErrorKind::IndexOutOfRange, "generator index out of range");
  if (!generator_coords.empty()) return generator_coords[i * n() + j];
  return project(basis, magic.entry(i, j));
}

std::vector<cplx> HopfData::word(const Word& w) const {
  CMatrix m = CMatrix::identity(ambient_dim());
  for (const auto& l : w) {
    if (l.i >= n() || l.j >= n()) throw Error(ErrorKind::IndexOutOfRange, "generator index out of range");
    m = m * magic.entry(l.i, l.j);
  }
  return project(basis, m);
}

std::vector<cplx> HopfData::multiply(std::span<const cplx> x, std::span<const cplx> y) const {
  if (dim >= 48) return kernels::parallel::contract_bilinear(mult, x, y);
  return kernels::serial::contract_bilinear(mult, x, y);
}

std::vector<cplx> HopfData::adjoint(std::span<const cplx> x) const {
  std::vector<cplx> out(dim);
  for (std::size_t q = 0; q < dim; ++q)
    for (std::size_t r = 0; r < dim; ++r) out[q] += star(q, r) * std::conj(x[r]);
  return out;
}

std::vector<cplx> HopfData::antipode(std::span<const cplx> x) const {
  std::vector<cplx> out(dim);
  for (std::size_t q = 0; q < dim; ++q)
    for (std::size_t r = 0; r < dim; ++r) out[q] += antipode_mat(q, r) * x[r];
  return out;
}

CMatrix HopfData::comultiply(std::span<const cplx> x) const {
  CMatrix out(dim, dim);
  for (std::size_t r = 0; r < dim; ++r)
    if (x[r] != cplx{}) out += comult[r] * x[r];
  return out;
}

CMatrix HopfData::functional_matrix(std::span<const cplx> phi) const {
  CMatrix out(ambient_dim(), ambient_dim());
  for (std::size_t r = 0; r < dim; ++r)
    if (phi[r] != cplx{}) out += basis[r].adjoint() * phi[r];
  return out;
}

cplx HopfData::evaluate(std::span<const cplx> phi, std::span<const cplx> x) {
  cplx acc{};
  for (std::size_t r = 0; r < phi.size(); ++r) acc += phi[r] * x[r];
  return acc;
}

BasisResult generate_basis(const MagicUnitary& u, double new_direction, std::size_t max_word_len) {
  BasisResult out;
  const double amb = static_cast<double>(u.ambient_dim);
  out.basis.push_back(CMatrix::identity(u.ambient_dim) * cplx(1.0 / std::sqrt(amb)));
  out.words.emplace_back();
  out.derivations.emplace_back();
  const auto letters = all_letters(u.n);
  for (std::size_t k = 0; k < out.basis.size(); ++k) {
    for (const auto& l : letters) {
      CMatrix c = out.basis[k] * u.entry(l.i, l.j);
      std::vector<cplx> coeffs(out.basis.size());
      for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t q = 0; q < out.basis.size(); ++q) {
          const cplx a = hs_inner(out.basis[q], c);
          coeffs[q] += a;
          c -= out.basis[q] * a;
        }
      }
      const double norm = c.frobenius_norm();
      if (norm <= new_direction) continue;
      if (out.words[k].size() + 1 > max_word_len) {
        throw Error(ErrorKind::Truncated, "algebra not closed by words of length " + std::to_string(max_word_len) +
                                              " (dimension so far " + std::to_string(out.basis.size()) + ")");
      }
      out.basis.push_back(c * cplx(1.0 / norm));
      Word w = out.words[k];
      w.push_back(l);
      out.words.push_back(std::move(w));
      out.derivations.push_back({k, l, std::move(coeffs), norm});
    }
  }
  return out;
}

std::vector<CMatrix> build_multiplication(const HopfData& h) {
  std::vector<CMatrix> mult(h.dim, CMatrix(h.dim, h.dim));
  const auto dim = static_cast<long>(h.dim);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < dim; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    for (std::size_t j = 0; j < h.dim; ++j) {
      const auto c = kernels::serial::project(h.basis, h.basis[ii] * h.basis[j]);
      for (std::size_t k = 0; k < h.dim; ++k) mult[k](ii, j) = c[k];
    }
  }
  return mult;
}

CMatrix build_star(const HopfData& h) {
  CMatrix s(h.dim, h.dim);
  for (std::size_t r = 0; r < h.dim; ++r) {
    const auto c = project(h.basis, h.basis[r].adjoint());
    for (std::size_t q = 0; q < h.dim; ++q) s(q, r) = c[q];
  }
  return s;
}

std::vector<CMatrix> build_comultiplication(const HopfData& h, double tol) {
  const std::size_t n = h.n();
  const auto rm = generator_right_mults(h);
  std::vector<CMatrix> d(h.dim, CMatrix(h.dim, h.dim));
  d[0](0, 0) = std::sqrt(static_cast<double>(h.ambient_dim()));
  for (std::size_t k = 1; k < h.dim; ++k) {
    const auto& der = h.derivations[k];
    CMatrix x = times_comult_generator(rm, n, d[der.parent], der.letter);
    for (std::size_t q = 0; q < k; ++q)
      if (der.coefficients[q] != cplx{}) x -= d[q] * der.coefficients[q];
    d[k] = x * cplx(1.0 / der.norm);
  }

  // Δ(1) = 1⊗1 and Δ(b_r)Δ(g) = Δ(b_r g) for every basis element and
  // generator make Δ multiplicative on the whole algebra.
  const auto letters = all_letters(n);
  double defect = 0.0;
  for (std::size_t r = 0; r < h.dim; ++r) {
    for (const auto& g : letters) {
      const CMatrix lhs = times_comult_generator(rm, n, d[r], g);
      CMatrix rhs(h.dim, h.dim);
      const auto& col = rm[g.i * n + g.j];
      for (std::size_t q = 0; q < h.dim; ++q)
        if (std::abs(col(q, r)) > 0.0) rhs += d[q] * col(q, r);
      defect = std::max(defect, lhs.max_abs_diff(rhs));
    }
    // *-compatibility: Δ(b_r)* = Δ(b_r*)
    CMatrix conj_d(h.dim, h.dim);
    for (std::size_t s = 0; s < h.dim; ++s)
      for (std::size_t t = 0; t < h.dim; ++t) conj_d(s, t) = std::conj(d[r](s, t));
    const CMatrix lhs = h.star * conj_d * h.star.transpose();
    CMatrix rhs(h.dim, h.dim);
    for (std::size_t q = 0; q < h.dim; ++q)
      if (h.star(q, r) != cplx{}) rhs += d[q] * h.star(q, r);
    defect = std::max(defect, lhs.max_abs_diff(rhs));
  }
  if (defect > tol) {
    throw Error(ErrorKind::InconsistentComultiplication, "homomorphism defect " + fmt(defect));
  }
  return d;
}

std::vector<cplx> build_counit(const HopfData& h, double tol) {
  std::vector<cplx> e(h.dim);
  e[0] = 1.0 / std::sqrt(static_cast<double>(h.ambient_dim()));
  for (std::size_t k = 1; k < h.dim; ++k) {
    const auto& der = h.derivations[k];
    cplx x = der.letter.i == der.letter.j ? e[der.parent] : cplx{};
    for (std::size_t q = 0; q < k; ++q) x -= der.coefficients[q] * e[q];
    e[k] = x / der.norm;
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < h.dim; ++i)
    for (std::size_t j = 0; j < h.dim; ++j) {
      cplx v{};
      for (std::size_t k = 0; k < h.dim; ++k) v += h.mult[k](i, j) * e[k];
      defect = std::max(defect, std::abs(v - e[i] * e[j]));
    }
  for (std::size_t a = 0; a < h.n(); ++a)
    for (std::size_t b = 0; b < h.n(); ++b) {
      const auto g = h.generator(a, b);
      defect = std::max(defect, std::abs(HopfData::evaluate(e, g) - (a == b ? 1.0 : 0.0)));
    }
  if (defect > tol) throw Error(ErrorKind::NoCounit, "counit defect " + fmt(defect));
  return e;
}

CMatrix build_antipode(const HopfData& h, double tol) {
  std::vector<CMatrix> images(h.dim);
  images[0] = h.basis[0];
  for (std::size_t k = 1; k < h.dim; ++k) {
    const auto& der = h.derivations[k];
    CMatrix x = h.magic.entry(der.letter.j, der.letter.i) * images[der.parent];
    for (std::size_t q = 0; q < k; ++q)
      if (der.coefficients[q] != cplx{}) x -= images[q] * der.coefficients[q];
    images[k] = x * cplx(1.0 / der.norm);
  }
  CMatrix s(h.dim, h.dim);
  double defect = 0.0;
  for (std::size_t r = 0; r < h.dim; ++r) {
    const auto c = h.coords(images[r]);
    defect = std::max(defect, c.residual);
    for (std::size_t q = 0; q < h.dim; ++q) s(q, r) = c.values[q];
  }
  if (defect > tol) throw Error(ErrorKind::NoAntipode, "antipode leaves the algebra, residual " + fmt(defect));

  // S(b_i b_j) = S(b_j) S(b_i)
  for (std::size_t i = 0; i < h.dim; ++i)
    for (std::size_t j = 0; j < h.dim; ++j) {
      std::vector<cplx> prod(h.dim);
      for (std::size_t k = 0; k < h.dim; ++k) prod[k] = h.mult[k](i, j);
      std::vector<cplx> lhs(h.dim);
      for (std::size_t q = 0; q < h.dim; ++q)
        for (std::size_t k = 0; k < h.dim; ++k) lhs[q] += s(q, k) * prod[k];
      std::vector<cplx> si(h.dim), sj(h.dim);
      for (std::size_t q = 0; q < h.dim; ++q) {
        si[q] = s(q, i);
        sj[q] = s(q, j);
      }
      defect = std::max(defect, max_abs_diff(lhs, h.multiply(sj, si)));
    }
  defect = std::max(defect, (s * s).max_abs_diff(CMatrix::identity(h.dim)));
  if (defect > tol) throw Error(ErrorKind::NoAntipode, "antipode defect " + fmt(defect));
  return s;
}

std::vector<cplx> build_haar(const HopfData& h, double tol) {
  const auto one = h.one();
  CMatrix m(h.dim, h.dim);
  std::vector<cplx> row(h.dim);
  for (std::size_t r = 0; r < h.dim; ++r) {
    const auto& d = h.comult[r];
    // (id ⊗ h)Δ(b_r) = h_r · 1, coordinate s
    for (std::size_t s = 0; s < h.dim; ++s) {
      for (std::size_t t = 0; t < h.dim; ++t) row[t] = d(s, t);
      row[r] -= one[s];
      add_gram_row(m, row);
    }
    // (h ⊗ id)Δ(b_r) = h_r · 1, coordinate t
    for (std::size_t t = 0; t < h.dim; ++t) {
      for (std::size_t s = 0; s < h.dim; ++s) row[s] = d(s, t);
      row[r] -= one[t];
      add_gram_row(m, row);
    }
  }
  const auto ns = null_space(m);
  if (ns.empty()) throw Error(ErrorKind::NoHaar, "no invariant functional");
  if (ns.size() > 1) {
    throw Error(ErrorKind::NonUniqueHaar, std::to_string(ns.size()) + "-dimensional space of invariant functionals");
  }
  std::vector<cplx> haar = ns.front();
  const cplx norm = HopfData::evaluate(haar, one);
  if (std::abs(norm) < tol) throw Error(ErrorKind::NoHaar, "invariant functional vanishes on the unit");
  for (auto& x : haar) x /= norm;

  const CMatrix rf = h.functional_matrix(haar);
  CMatrix gram(h.dim, h.dim);
  for (std::size_t j = 0; j < h.dim; ++j) {
    const CMatrix bj_r = h.basis[j] * rf;
    for (std::size_t i = 0; i < h.dim; ++i) gram(i, j) = hs_inner(h.basis[i], bj_r);
  }
  gram = (gram + gram.adjoint()) * cplx(0.5);
  if (!psd_check(gram, tol)) throw Error(ErrorKind::NoHaar, "invariant functional is not positive");
  return haar;
}

Permutation block_character(const HopfData& h, const Block& b, double tol) {
  const double tr = b.projection.trace().real();
  Permutation sigma(h.n(), h.n());
  for (std::size_t i = 0; i < h.n(); ++i)
    for (std::size_t j = 0; j < h.n(); ++j) {
      const double v = (b.projection * h.magic.entry(i, j)).trace().real() / tr;
      if (std::abs(v - 1.0) <= tol) {
        if (sigma[j] != h.n()) throw Error(ErrorKind::NotInGroup, "character is not a permutation");
        sigma[j] = i;
      } else if (std::abs(v) > tol) {
        throw Error(ErrorKind::NotInGroup, "character value " + fmt(v) + " is not 0 or 1");
      }
    }
  for (auto x : sigma)
    if (x == h.n()) throw Error(ErrorKind::NotInGroup, "character is not a permutation");
  return sigma;
}

std::vector<Block> wedderburn_decompose(const HopfData& h, double tol, std::uint64_t seed, int retries) {
  CMatrix m(h.dim, h.dim);
  for (const auto& g : h.magic.entries) {
    const CMatrix c = left_mult(h, g) - right_mult(h, g);
    m += c.adjoint() * c;
  }
  const auto center = null_space(m);
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt <= retries; ++attempt) {
    std::vector<cplx> z(h.dim);
    for (const auto& v : center) {
      const double a = rng.uniform(-1.0, 1.0);
      for (std::size_t r = 0; r < h.dim; ++r) z[r] += a * v[r];
    }
    CMatrix zm = h.element(z);
    zm = (zm + zm.adjoint()) * cplx(0.5);
    const auto sd = hermitian_eigen(zm, kClusterTol);
    if (sd.projections.size() != center.size()) continue;

    std::vector<Block> blocks;
    double total = 0.0;
    for (const auto& p : sd.projections) {
      Block b;
      auto c = h.coords(p);
      if (c.residual > std::max(tol, 1e-8)) {
        throw Error(ErrorKind::ProjectionOutsideAlgebra, "central projection residual " + fmt(c.residual));
      }
      b.projection = p;
      b.coords = std::move(c.values);
      double rank = 0.0;
      for (std::size_t r = 0; r < h.dim; ++r) rank += hs_inner(h.basis[r], p * h.basis[r]).real();
      b.dim = static_cast<std::size_t>(std::llround(std::sqrt(std::max(0.0, rank))));
      total += rank;
      if (b.dim == 1) b.character = block_character(h, b, 1e-7);
      blocks.push_back(std::move(b));
    }
    if (std::abs(total - static_cast<double>(h.dim)) > 1e-6) continue;
    std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) {
      if (a.dim != b.dim) return a.dim < b.dim;
      if (a.character && b.character && *a.character != *b.character) return *a.character < *b.character;
      return first_support_index(a.projection) < first_support_index(b.projection);
    });
    return blocks;
  }
  throw Error(ErrorKind::DegenerateCentralElement,
              "no central element with simple spectrum after " + std::to_string(retries + 1) + " draws");
}

HopfData build_hopf(const MagicUnitary& u, const HopfOptions& opts) {
  const auto report = validate_magic(u, std::max(opts.tol, 1e-9));
  if (!report.passed) {
    throw Error(ErrorKind::InvalidSpec, "not a magic unitary, defect " + fmt(report.max_defect));
  }
  HopfData h;
  h.magic = u;
  auto b = generate_basis(u, opts.new_direction, opts.max_word_len);
  h.basis = std::move(b.basis);
  h.words = std::move(b.words);
  h.derivations = std::move(b.derivations);
  h.dim = h.basis.size();
  for (const auto& e : u.entries) h.generator_coords.push_back(project(h.basis, e));
  h.mult = build_multiplication(h);
  h.star = build_star(h);
  h.comult = build_comultiplication(h, opts.tol);
  h.counit_vec = build_counit(h, opts.tol);
  h.antipode_mat = build_antipode(h, opts.tol);
  h.haar_vec = build_haar(h, opts.tol);
  h.blocks = wedderburn_decompose(h, opts.tol, opts.seed, opts.wedderburn_retries);
  return h;
}

double InvariantReport::max() const {
  return std::max({coassociativity, counital, antipodal, antipode_involution, haar_invariance, block_orthogonality});
}

InvariantReport hopf_invariants(const HopfData& h) {
  InvariantReport rep;
  const std::size_t dim = h.dim;
  const auto one = h.one();

  // (Δ⊗id)Δ(b_r)[a,c,t] = Σ_s D_r(s,t) D_s(a,c);  (id⊗Δ)Δ(b_r)[a,c,t] = Σ_u D_r(a,u) D_u(c,t)
  std::vector<double> coass(dim, 0.0);
  const auto ldim = static_cast<long>(dim);
#pragma omp parallel for schedule(dynamic)
  for (long rl = 0; rl < ldim; ++rl) {
    const auto& d = h.comult[static_cast<std::size_t>(rl)];
    double worst = 0.0;
    for (std::size_t a = 0; a < dim; ++a)
      for (std::size_t c = 0; c < dim; ++c)
        for (std::size_t t = 0; t < dim; ++t) {
          cplx lhs{}, rhs{};
          for (std::size_t s = 0; s < dim; ++s) {
            if (d(s, t) != cplx{}) lhs += d(s, t) * h.comult[s](a, c);
            if (d(a, s) != cplx{}) rhs += d(a, s) * h.comult[s](c, t);
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
    coass[static_cast<std::size_t>(rl)] = worst;
  }
  rep.coassociativity = *std::max_element(coass.begin(), coass.end());

  std::vector<CMatrix> s_images(dim);
  for (std::size_t s = 0; s < dim; ++s) {
    std::vector<cplx> col(dim);
    for (std::size_t q = 0; q < dim; ++q) col[q] = h.antipode_mat(q, s);
    s_images[s] = h.element(col);
  }
  const CMatrix id = CMatrix::identity(h.ambient_dim());
  for (std::size_t r = 0; r < dim; ++r) {
    const auto& d = h.comult[r];
    for (std::size_t x = 0; x < dim; ++x) {
      cplx left{}, right{}, hl{}, hr{};
      for (std::size_t y = 0; y < dim; ++y) {
        left += h.counit_vec[y] * d(y, x);
        right += d(x, y) * h.counit_vec[y];
        hl += h.haar_vec[y] * d(y, x);
        hr += d(x, y) * h.haar_vec[y];
      }
      const double target = x == r ? 1.0 : 0.0;
      rep.counital = std::max({rep.counital, std::abs(left - target), std::abs(right - target)});
      rep.haar_invariance = std::max(
          {rep.haar_invariance, std::abs(hl - h.haar_vec[r] * one[x]), std::abs(hr - h.haar_vec[r] * one[x])});
    }
    // m(S⊗id)Δ(b_r) = ε(b_r)1 = m(id⊗S)Δ(b_r)
    CMatrix ls(h.ambient_dim(), h.ambient_dim());
    CMatrix rs(h.ambient_dim(), h.ambient_dim());
    for (std::size_t s = 0; s < dim; ++s) {
      std::vector<cplx> row(dim), col(dim);
      for (std::size_t t = 0; t < dim; ++t) {
        row[t] = d(s, t);
        col[t] = d(t, s);
      }
      ls += s_images[s] * h.element(row);
      rs += h.element(col) * s_images[s];
    }
    const CMatrix target = id * h.counit_vec[r];
    rep.antipodal = std::max({rep.antipodal, ls.max_abs_diff(target), rs.max_abs_diff(target)});
  }
  rep.antipode_involution = (h.antipode_mat * h.antipode_mat).max_abs_diff(CMatrix::identity(dim));

  CMatrix sum(h.ambient_dim(), h.ambient_dim());
  for (std::size_t a = 0; a < h.blocks.size(); ++a) {
    sum += h.blocks[a].projection;
    for (std::size_t b = 0; b < h.blocks.size(); ++b) {
      const CMatrix prod = h.blocks[a].projection * h.blocks[b].projection;
      const CMatrix target = a == b ? h.blocks[a].projection : CMatrix(h.ambient_dim(), h.ambient_dim());
      rep.block_orthogonality = std::max(rep.block_orthogonality, prod.max_abs_diff(target));
    }
  }
  rep.block_orthogonality = std::max(rep.block_orthogonality, sum.max_abs_diff(id));
  return rep;
}

}  // namespace qperm

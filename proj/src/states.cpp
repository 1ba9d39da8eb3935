#include "qperm/states.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qperm/errors.hpp"
#include "qperm/kernels.hpp"

namespace qperm {

namespace {

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(4);
  os << x;
  return os.str();
}

double sup_change(std::span<const cplx> a, std::span<const cplx> b) { return max_abs_diff(a, b); }

void require_same_group(const QuantumPermutation& a, const QuantumPermutation& b) {
  if (a.group.get() != b.group.get()) throw Error(ErrorKind::GroupMismatch, "states live on different groups");
}

QuantumPermutation make_state(GroupPtr h, std::vector<cplx> coords, std::string label) {
  return QuantumPermutation{std::move(h), std::move(coords), std::move(label)};
}

}  // namespace

cplx QuantumPermutation::on_matrix(const CMatrix& a) const {
  const auto c = group->coords(a);
  if (c.residual > 1e-7) {
    throw Error(ErrorKind::ProjectionOutsideAlgebra, "matrix is not in the algebra, residual " + fmt(c.residual));
  }
  return (*this)(c.values);
}

CMatrix gram_matrix(const HopfData& h, std::span<const cplx> phi) {
  const CMatrix r = h.functional_matrix(phi);
  CMatrix g(h.dim, h.dim);
  for (std::size_t j = 0; j < h.dim; ++j) {
    const CMatrix bj_r = h.basis[j] * r;
    for (std::size_t i = 0; i < h.dim; ++i) g(i, j) = hs_inner(h.basis[i], bj_r);
  }
  return g;
}

StateReport check_state(const QuantumPermutation& phi, double tol) {
  const auto& h = phi.h();
  StateReport rep;
  rep.normalization = std::abs(phi(h.one()) - 1.0);
  for (std::size_t r = 0; r < h.dim; ++r) {
    cplx star_value{};
    for (std::size_t q = 0; q < h.dim; ++q) star_value += h.star(q, r) * phi.coords[q];
    rep.hermiticity = std::max(rep.hermiticity, std::abs(star_value - std::conj(phi.coords[r])));
  }
  CMatrix g = gram_matrix(h, phi.coords);
  g = (g + g.adjoint()) * cplx(0.5);
  rep.min_gram_eigenvalue = jacobi_eigensystem(g).values.front();
  rep.valid = rep.normalization <= tol && rep.hermiticity <= tol && rep.min_gram_eigenvalue >= -tol;
  return rep;
}

void require_state(const QuantumPermutation& phi, double tol) {
  const auto rep = check_state(phi, tol);
  if (!rep.valid) {
    throw Error(ErrorKind::NotAState, "normalisation defect " + fmt(rep.normalization) + ", hermiticity defect " +
                                          fmt(rep.hermiticity) + ", least Gram eigenvalue " +
                                          fmt(rep.min_gram_eigenvalue));
  }
}

QuantumPermutation state_from_density(GroupPtr h, const CMatrix& rho, double tol) {
  if (rho.rows() != h->ambient_dim() || rho.cols() != h->ambient_dim()) {
    throw Error(ErrorKind::NotDensity, "density matrix is not on the ambient carrier");
  }
  if (hermitian_defect(rho) > tol) throw Error(ErrorKind::NotDensity, "density matrix is not Hermitian");
  if (!psd_check(rho, tol)) throw Error(ErrorKind::NotDensity, "density matrix is not positive");
  if (std::abs(rho.trace() - 1.0) > tol) throw Error(ErrorKind::NotDensity, "density matrix trace is not 1");
  std::vector<cplx> c(h->dim);
  for (std::size_t r = 0; r < h->dim; ++r) c[r] = hs_inner(rho.adjoint(), h->basis[r]);
  return make_state(std::move(h), std::move(c), "density");
}

QuantumPermutation state_from_vector(GroupPtr h, std::span<const cplx> v, double tol) {
  if (v.size() != h->ambient_dim()) throw Error(ErrorKind::NotDensity, "vector is not on the ambient carrier");
  double norm = 0.0;
  for (auto x : v) norm += std::norm(x);
  if (std::abs(norm - 1.0) > tol) throw Error(ErrorKind::NotDensity, "vector is not a unit vector");
  const CMatrix col = CMatrix::column(v);
  auto s = state_from_density(std::move(h), col * col.adjoint(), tol);
  s.label = "vector";
  return s;
}

QuantumPermutation state_from_function(GroupPtr h, std::span<const cplx> values, double tol) {
  if (!h->magic.dual) throw Error(ErrorKind::InvalidSpec, "positive definite functions need a dual group");
  const auto& info = *h->magic.dual;
  const auto& g = info.group;
  if (values.size() != g.order) throw Error(ErrorKind::ShapeMismatch, "one value per group element required");
  if (std::abs(values[g.identity] - 1.0) > tol) {
    throw Error(ErrorKind::NotPositiveDefinite, "value at the identity must be 1");
  }
  // L_γ are HS-orthogonal with norm² |G|, so b_r = Σ_γ ⟨L_γ, b_r⟩ L_γ / |G|.
  const double order = static_cast<double>(g.order);
  std::vector<cplx> c(h->dim);
  for (std::size_t r = 0; r < h->dim; ++r)
    for (std::size_t e = 0; e < g.order; ++e) {
      if (values[e] == cplx{}) continue;
      c[r] += values[e] * hs_inner(info.element_ops[e], h->basis[r]) / order;
    }
  auto s = make_state(std::move(h), std::move(c), "pdf");
  const auto rep = check_state(s, tol);
  if (!rep.valid) {
    throw Error(ErrorKind::NotPositiveDefinite,
                "function is not positive definite (least Gram eigenvalue " + fmt(rep.min_gram_eigenvalue) + ")");
  }
  return s;
}

QuantumPermutation character_state(GroupPtr h, const Permutation& sigma, double tol) {
  if (sigma.size() != h->n()) throw Error(ErrorKind::ShapeMismatch, "permutation size differs from N");
  std::vector<cplx> e(h->dim);
  e[0] = 1.0 / std::sqrt(static_cast<double>(h->ambient_dim()));
  for (std::size_t k = 1; k < h->dim; ++k) {
    const auto& der = h->derivations[k];
    cplx x = sigma[der.letter.j] == der.letter.i ? e[der.parent] : cplx{};
    for (std::size_t q = 0; q < k; ++q) x -= der.coefficients[q] * e[q];
    e[k] = x / der.norm;
  }
  double defect = 0.0;
  for (std::size_t i = 0; i < h->n(); ++i)
    for (std::size_t j = 0; j < h->n(); ++j) {
      const double expect = sigma[j] == i ? 1.0 : 0.0;
      defect = std::max(defect, std::abs(HopfData::evaluate(e, h->generator(i, j)) - expect));
    }
  for (std::size_t a = 0; a < h->dim && defect <= tol; ++a)
    for (std::size_t b = 0; b < h->dim; ++b) {
      cplx v{};
      for (std::size_t k = 0; k < h->dim; ++k) v += h->mult[k](a, b) * e[k];
      defect = std::max(defect, std::abs(v - e[a] * e[b]));
    }
  if (defect > tol) throw Error(ErrorKind::NotInGroup, to_string(sigma) + " is not a character of the algebra");
  return make_state(std::move(h), std::move(e), "ev" + to_string(sigma));
}

QuantumPermutation counit_state(GroupPtr h) {
  auto c = h->counit_vec;
  return make_state(std::move(h), std::move(c), "counit");
}

QuantumPermutation haar_state(GroupPtr h) {
  auto c = h->haar_vec;
  return make_state(std::move(h), std::move(c), "haar");
}

QuantumPermutation mix(const std::vector<std::pair<double, QuantumPermutation>>& terms, double tol) {
  if (terms.empty()) throw Error(ErrorKind::InvalidSpec, "empty mixture");
  double total = 0.0;
  std::vector<cplx> c(terms.front().second.coords.size());
  for (const auto& [w, s] : terms) {
    require_same_group(terms.front().second, s);
    if (w < -tol) throw Error(ErrorKind::InvalidSpec, "negative mixture weight");
    total += w;
    for (std::size_t r = 0; r < c.size(); ++r) c[r] += w * s.coords[r];
  }
  if (std::abs(total - 1.0) > tol) throw Error(ErrorKind::InvalidSpec, "mixture weights must sum to 1");
  return make_state(terms.front().second.group, std::move(c), "mix");
}

double BirkhoffSlice::stochastic_defect() const {
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0, col = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      row += (*this)(i, j);
      col += (*this)(j, i);
      d = std::max({d, -(*this)(i, j), (*this)(i, j) - 1.0});
    }
    d = std::max({d, std::abs(row - 1.0), std::abs(col - 1.0)});
  }
  return d;
}

BirkhoffSlice birkhoff_slice(const QuantumPermutation& phi) {
  const auto& h = phi.h();
  BirkhoffSlice s{h.n(), std::vector<double>(h.n() * h.n())};
  for (std::size_t i = 0; i < h.n(); ++i)
    for (std::size_t j = 0; j < h.n(); ++j) s.m[i * h.n() + j] = phi(h.generator(i, j)).real();
  return s;
}

CMatrix left_multiplication(const HopfData& h, std::span<const cplx> x) {
  CMatrix out(h.dim, h.dim);
  for (std::size_t k = 0; k < h.dim; ++k)
    for (std::size_t s = 0; s < h.dim; ++s) {
      if (x[s] == cplx{}) continue;
      for (std::size_t r = 0; r < h.dim; ++r) out(k, r) += x[s] * h.mult[k](s, r);
    }
  return out;
}

CMatrix right_multiplication(const HopfData& h, std::span<const cplx> x) {
  CMatrix out(h.dim, h.dim);
  for (std::size_t k = 0; k < h.dim; ++k)
    for (std::size_t r = 0; r < h.dim; ++r) {
      cplx acc{};
      for (std::size_t t = 0; t < h.dim; ++t) acc += h.mult[k](r, t) * x[t];
      out(k, r) = acc;
    }
  return out;
}

QuantumPermutation condition(const QuantumPermutation& phi, std::span<const cplx> p, double tol) {
  const auto& h = phi.h();
  const double pp = phi(p).real();
  if (pp <= tol) throw Error(ErrorKind::NullEvent, "event has probability " + fmt(pp));
  // φ'(b_r) = Σ_k φ_k coord_k(p b_r p) / φ(p)
  const CMatrix lm = left_multiplication(h, p);
  const CMatrix rm = right_multiplication(h, p);
  std::vector<cplx> v(h.dim);
  for (std::size_t m = 0; m < h.dim; ++m)
    for (std::size_t k = 0; k < h.dim; ++k) v[m] += phi.coords[k] * lm(k, m);
  std::vector<cplx> out(h.dim);
  for (std::size_t r = 0; r < h.dim; ++r) {
    cplx acc{};
    for (std::size_t m = 0; m < h.dim; ++m) acc += v[m] * rm(m, r);
    out[r] = acc / pp;
  }
  return make_state(phi.group, std::move(out), "conditioned " + phi.label);
}

std::vector<cplx> event_projection(const HopfData& h, const Event& e) {
  auto g = h.generator(e.i, e.j);
  if (e.outcome) return g;
  auto one = h.one();
  for (std::size_t r = 0; r < h.dim; ++r) one[r] -= g[r];
  return one;
}

double sequential_probability(const QuantumPermutation& phi, const std::vector<std::vector<cplx>>& projections) {
  if (projections.empty()) return 1.0;
  const auto& h = phi.h();
  std::vector<cplx> x = projections.back();
  for (std::size_t k = projections.size() - 1; k-- > 0;) {
    x = h.multiply(h.multiply(projections[k], x), projections[k]);
  }
  return phi(x).real();
}

double sequential_probability(const QuantumPermutation& phi, const std::vector<Event>& events) {
  std::vector<std::vector<cplx>> ps;
  for (const auto& e : events) ps.push_back(event_projection(phi.h(), e));
  return sequential_probability(phi, ps);
}

QuantumPermutation convolve(const QuantumPermutation& phi, const QuantumPermutation& psi) {
  require_same_group(phi, psi);
  const auto& h = phi.h();
  auto c = h.dim >= 48 ? kernels::parallel::contract_bilinear(h.comult, phi.coords, psi.coords)
                       : kernels::serial::contract_bilinear(h.comult, phi.coords, psi.coords);
  return make_state(phi.group, std::move(c), phi.label + "*" + psi.label);
}

QuantumPermutation reverse_state(const QuantumPermutation& phi) {
  const auto& h = phi.h();
  std::vector<cplx> c(h.dim);
  for (std::size_t r = 0; r < h.dim; ++r)
    for (std::size_t q = 0; q < h.dim; ++q) c[r] += phi.coords[q] * h.antipode_mat(q, r);
  return make_state(phi.group, std::move(c), "reverse " + phi.label);
}

IterationResult convolution_power(const QuantumPermutation& phi, std::size_t k) {
  if (k < 1) throw Error(ErrorKind::InvalidSpec, "convolution power needs k >= 1");
  IterationResult res{phi, 1, 0.0, false};
  for (std::size_t i = 2; i <= k; ++i) {
    auto next = convolve(res.state, phi);
    res.last_change = sup_change(next.coords, res.state.coords);
    res.state = std::move(next);
    res.iterations = i;
  }
  res.converged = k > 1 && res.last_change < 1e-9;
  res.state.label = phi.label + "^" + std::to_string(k);
  return res;
}

IterationResult cesaro(const QuantumPermutation& phi, std::size_t n) {
  if (n < 1) throw Error(ErrorKind::InvalidSpec, "Cesaro average needs n >= 1");
  IterationResult res{phi, 1, 0.0, false};
  QuantumPermutation power = phi;
  for (std::size_t k = 2; k <= n; ++k) {
    power = convolve(power, phi);
    std::vector<cplx> next(res.state.coords);
    for (std::size_t r = 0; r < next.size(); ++r) next[r] += (power.coords[r] - next[r]) / static_cast<double>(k);
    res.last_change = sup_change(next, res.state.coords);
    res.state.coords = std::move(next);
    res.iterations = k;
  }
  res.converged = n > 1 && res.last_change < 1e-9;
  res.state.label = "cesaro(" + phi.label + "," + std::to_string(n) + ")";
  return res;
}

bool is_idempotent(const QuantumPermutation& phi, double tol) {
  return sup_change(convolve(phi, phi).coords, phi.coords) <= tol;
}

SupportProjection support_projection(const QuantumPermutation& phi, double tol) {
  require_state(phi, std::max(tol, 1e-8));
  const auto& h = phi.h();
  CMatrix g = gram_matrix(h, phi.coords);
  g = (g + g.adjoint()) * cplx(0.5);
  const auto es = jacobi_eigensystem(g);

  SupportProjection out;
  std::vector<CMatrix> kernel;
  CMatrix sum(h.ambient_dim(), h.ambient_dim());
  for (std::size_t k = 0; k < h.dim; ++k) {
    if (es.values[k] > tol) break;
    std::vector<cplx> c(h.dim);
    for (std::size_t i = 0; i < h.dim; ++i) c[i] = es.vectors(i, k);
    CMatrix el = h.element(c);
    sum += el.adjoint() * el;
    kernel.push_back(std::move(el));
  }
  out.null_space_dim = kernel.size();
  out.null_projection = kernel.empty() ? CMatrix(h.ambient_dim(), h.ambient_dim()) : range_projection(sum, tol);
  out.support = CMatrix::identity(h.ambient_dim()) - out.null_projection;
  auto c = h.coords(out.support);
  if (c.residual > 1e-7) {
    throw Error(ErrorKind::ProjectionOutsideAlgebra, "support projection residual " + fmt(c.residual));
  }
  out.coords = std::move(c.values);
  out.value = phi(out.coords).real();
  if (std::abs(out.value - 1.0) > 1e-7) {
    throw Error(ErrorKind::NotAState, "support carries weight " + fmt(out.value));
  }
  for (const auto& el : kernel) {
    out.minimality_defect = std::max(out.minimality_defect, (el * out.support).frobenius_norm());
  }
  return out;
}

std::string_view to_string(IdempotentClass c) {
  switch (c) {
    case IdempotentClass::Haar:
      return "Haar-idempotent";
    case IdempotentClass::NonHaar:
      return "non-Haar-idempotent";
    case IdempotentClass::NotIdempotent:
      return "not-idempotent";
  }
  return "unknown";
}

IdempotentClass classify_idempotent(const QuantumPermutation& phi, double tol) {
  if (!is_idempotent(phi, tol)) return IdempotentClass::NotIdempotent;
  const auto sp = support_projection(phi);
  const auto& q = sp.null_projection;
  for (const auto& u : phi.h().magic.entries) {
    if ((q * u).max_abs_diff(u * q) > tol) return IdempotentClass::NonHaar;
  }
  return IdempotentClass::Haar;
}

bool quasi_subgroup_membership(const QuantumPermutation& phi, const QuantumPermutation& psi, double tol) {
  require_same_group(phi, psi);
  if (!is_idempotent(psi)) throw Error(ErrorKind::NotIdempotent, "reference state is not idempotent");
  const auto sp = support_projection(psi);
  return phi(sp.coords).real() >= 1.0 - tol;
}

std::vector<std::pair<Permutation, QuantumPermutation>> deterministic_enumerate(GroupPtr h, double tol) {
  if (h->n() > 6) throw Error(ErrorKind::TooLarge, "deterministic enumeration needs N <= 6");
  std::vector<std::pair<Permutation, QuantumPermutation>> out;
  for (const auto& sigma : all_permutations(h->n())) {
    try {
      out.emplace_back(sigma, character_state(h, sigma, tol));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotInGroup) throw;
    }
  }
  // ev_τ ⋆ ev_σ = ev_{τσ}, and the set is closed
  for (const auto& [tau, a] : out)
    for (const auto& [sigma, b] : out) {
      const auto prod = compose(tau, sigma);
      const auto it = std::find_if(out.begin(), out.end(), [&](const auto& p) { return p.first == prod; });
      if (it == out.end()) throw Error(ErrorKind::NotInGroup, "characters are not closed under convolution");
      if (sup_change(convolve(a, b).coords, it->second.coords) > 1e-8) {
        throw Error(ErrorKind::InconsistentComultiplication, "character convolution mismatch");
      }
    }
  return out;
}

std::vector<cplx> classical_projection(const HopfData& h) {
  std::vector<cplx> p(h.dim);
  for (const auto& b : h.blocks) {
    if (b.dim != 1) continue;
    for (std::size_t r = 0; r < h.dim; ++r) p[r] += b.coords[r];
  }
  return p;
}

bool truly_quantum_check(const QuantumPermutation& phi, double tol) {
  return phi(classical_projection(phi.h())).real() <= tol;
}

FixSpectrum fix_spectrum(const HopfData& h, double tol) {
  CMatrix fix(h.ambient_dim(), h.ambient_dim());
  for (std::size_t j = 0; j < h.n(); ++j) fix += h.magic.entry(j, j);
  const auto sd = hermitian_eigen(fix, kClusterTol);
  FixSpectrum out;
  for (std::size_t k = 0; k < sd.values.size(); ++k) {
    auto c = h.coords(sd.projections[k]);
    if (c.residual > tol) {
      throw Error(ErrorKind::ProjectionOutsideAlgebra, "spectral projection residual " + fmt(c.residual));
    }
    out.values.push_back(sd.values[k]);
    out.projections.push_back(sd.projections[k]);
    out.coords.push_back(std::move(c.values));
  }
  return out;
}

FixedPoints fixed_points_of(const QuantumPermutation& phi, const FixSpectrum& spectrum, double weight_tol) {
  FixedPoints out;
  for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
    const double w = phi(spectrum.coords[k]).real();
    out.distribution.emplace_back(spectrum.values[k], w);
    out.expectation += spectrum.values[k] * w;
    if (w >= 1.0 - weight_tol) out.count = spectrum.values[k];
  }
  return out;
}

FixedPoints fixed_points_of(const QuantumPermutation& phi, double weight_tol) {
  return fixed_points_of(phi, fix_spectrum(phi.h()), weight_tol);
}

double central_character_eval(std::size_t n, double t) {
  if (!(t >= 0.0)) throw Error(ErrorKind::InvalidSpec, "t must be non-negative");
  const double x = std::sqrt(t) / 2.0;
  double prev = 1.0;  // U_0
  if (n == 0) return prev;
  double cur = 2.0 * x;  // U_1
  for (std::size_t k = 1; k < 2 * n; ++k) {
    const double next = 2.0 * x * cur - prev;
    prev = cur;
    cur = next;
  }
  return cur;
}

QuantumPermutation twisted_conjugate(const QuantumPermutation& phi, const Permutation& sigma, const Permutation& tau,
                                     double tol) {
  const auto left = character_state(phi.group, inverse(sigma), tol);
  const auto right = character_state(phi.group, tau, tol);
  auto out = convolve(convolve(left, phi), right);
  out.label = "twist(" + phi.label + ")";
  return out;
}

MeasurementSession::MeasurementSession(QuantumPermutation initial, std::uint64_t seed, std::string id)
    : initial_(initial), current_(std::move(initial)), seed_(seed), rng_(seed), id_(std::move(id)) {}

const MeasurementRecord& MeasurementSession::measure(std::size_t position, double tol) {
  const auto& h = current_.h();
  if (position >= h.n()) throw Error(ErrorKind::IndexOutOfRange, "position out of range");
  std::vector<double> probs(h.n());
  double total = 0.0;
  for (std::size_t i = 0; i < h.n(); ++i) {
    probs[i] = std::max(0.0, current_(h.generator(i, position)).real());
    total += probs[i];
  }
  if (std::abs(total - 1.0) > 1e-6) throw Error(ErrorKind::NotAState, "outcome probabilities sum to " + fmt(total));
  const double draw = rng_.uniform() * total;
  std::size_t outcome = h.n();
  double acc = 0.0;
  for (std::size_t i = 0; i < h.n(); ++i) {
    if (probs[i] <= tol) continue;
    acc += probs[i];
    outcome = i;
    if (draw < acc) break;
  }
  if (outcome == h.n()) throw Error(ErrorKind::NullEvent, "no outcome has positive probability");
  MeasurementRecord rec{position, outcome, probs[outcome] / total, false};
  for (const auto& prev : history_)
    if (prev.position == position && prev.outcome != outcome) rec.non_classical = true;
  current_ = condition(current_, h.generator(outcome, position), tol);
  history_.push_back(rec);
  return history_.back();
}

void MeasurementSession::reset() {
  current_ = initial_;
  rng_ = SplitMix64(seed_);
  history_.clear();
}

double MeasurementSession::replay_defect() const {
  QuantumPermutation s = initial_;
  for (const auto& rec : history_) s = condition(s, s.h().generator(rec.outcome, rec.position));
  return sup_change(s.coords, current_.coords);
}

}  // namespace qperm

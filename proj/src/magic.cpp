#include "qperm/magic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>
#include <sstream>

#include "qperm/errors.hpp"

namespace qperm {

Permutation identity_permutation(std::size_t n) {
  Permutation p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  return p;
}

Permutation compose(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw Error(ErrorKind::ShapeMismatch, "permutation sizes differ");
  Permutation c(a.size());
  for (std::size_t x = 0; x < a.size(); ++x) c[x] = a[b[x]];
  return c;
}

Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t x = 0; x < p.size(); ++x) q[p[x]] = x;
  return q;
}

std::vector<Permutation> all_permutations(std::size_t n) {
  std::vector<Permutation> out;
  Permutation p = identity_permutation(n);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::size_t fixed_point_count(const Permutation& p) {
  std::size_t c = 0;
  for (std::size_t x = 0; x < p.size(); ++x) c += p[x] == x ? 1 : 0;
  return c;
}

std::string to_string(const Permutation& p) {
  std::ostringstream os;
  os << '[';
  for (std::size_t x = 0; x < p.size(); ++x) os << (x ? "," : "") << p[x] + 1;
  os << ']';
  return os.str();
}

Permutation permutation_from_one_based(const std::vector<long long>& images) {
  const std::size_t n = images.size();
  Permutation p(n);
  std::vector<bool> seen(n, false);
  for (std::size_t x = 0; x < n; ++x) {
    if (images[x] < 1 || static_cast<std::size_t>(images[x]) > n || seen[images[x] - 1]) {
      throw Error(ErrorKind::InvalidSpec, "not a permutation of 1..n");
    }
    p[x] = static_cast<std::size_t>(images[x] - 1);
    seen[p[x]] = true;
  }
  return p;
}

GroupTable GroupTable::from_cayley(std::vector<std::vector<std::size_t>> table, std::size_t identity,
                                   std::vector<std::size_t> generators) {
  const std::size_t n = table.size();
  if (n == 0) throw Error(ErrorKind::InvalidTable, "empty table");
  if (identity >= n) throw Error(ErrorKind::InvalidTable, "identity out of range");
  for (const auto& row : table) {
    if (row.size() != n) throw Error(ErrorKind::InvalidTable, "table is not square");
    std::vector<bool> seen(n, false);
    for (auto x : row) {
      if (x >= n || seen[x]) throw Error(ErrorKind::InvalidTable, "row is not a permutation of the elements");
      seen[x] = true;
    }
  }
  for (std::size_t g = 0; g < n; ++g) {
    if (table[identity][g] != g || table[g][identity] != g) {
      throw Error(ErrorKind::InvalidTable, "identity element does not act trivially");
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (table[table[a][b]][c] != table[a][table[b][c]]) {
          throw Error(ErrorKind::InvalidTable, "table is not associative");
        }
  for (std::size_t g = 0; g < n; ++g) {
    const auto& row = table[g];
    if (std::find(row.begin(), row.end(), identity) == row.end()) {
      throw Error(ErrorKind::InvalidTable, "missing inverse");
    }
  }

  GroupTable out;
  out.order = n;
  out.table = std::move(table);
  out.identity = identity;
  out.element_orders.resize(n);
  for (std::size_t g = 0; g < n; ++g) {
    std::size_t k = 1;
    std::size_t x = g;
    while (x != identity) {
      x = out.table[x][g];
      ++k;
    }
    out.element_orders[g] = k;
  }
  if (generators.empty()) throw Error(ErrorKind::NotGenerating, "no generators");
  for (auto g : generators) {
    if (g >= n) throw Error(ErrorKind::InvalidTable, "generator index out of range");
    if (out.element_orders[g] < 2) throw Error(ErrorKind::NotGenerating, "generator of order 1");
  }
  std::vector<bool> reached(n, false);
  std::deque<std::size_t> queue{identity};
  reached[identity] = true;
  while (!queue.empty()) {
    const auto x = queue.front();
    queue.pop_front();
    for (auto g : generators) {
      const auto y = out.table[x][g];
      if (!reached[y]) {
        reached[y] = true;
        queue.push_back(y);
      }
    }
  }
  if (std::find(reached.begin(), reached.end(), false) != reached.end()) {
    throw Error(ErrorKind::NotGenerating, "generators do not generate the group");
  }
  out.generators = std::move(generators);
  return out;
}

GroupTable GroupTable::from_permutations(const std::vector<Permutation>& generators, std::size_t max_order) {
  if (generators.empty()) throw Error(ErrorKind::NotGenerating, "no generators");
  const std::size_t n = generators.front().size();
  for (const auto& g : generators) {
    if (g.size() != n) throw Error(ErrorKind::InvalidSpec, "generators act on different sets");
  }
  std::vector<Permutation> elements{identity_permutation(n)};
  std::map<Permutation, std::size_t> index{{elements[0], 0}};
  for (std::size_t head = 0; head < elements.size(); ++head) {
    for (const auto& g : generators) {
      Permutation y = compose(elements[head], g);
      if (!index.contains(y)) {
        if (elements.size() >= max_order) throw Error(ErrorKind::TooLarge, "group closure exceeds bound");
        index.emplace(y, elements.size());
        elements.push_back(std::move(y));
      }
    }
  }
  const std::size_t order = elements.size();
  std::vector<std::vector<std::size_t>> table(order, std::vector<std::size_t>(order));
  for (std::size_t a = 0; a < order; ++a)
    for (std::size_t b = 0; b < order; ++b) table[a][b] = index.at(compose(elements[a], elements[b]));
  std::vector<std::size_t> gens;
  for (const auto& g : generators) gens.push_back(index.at(g));
  GroupTable out = from_cayley(std::move(table), 0, std::move(gens));
  out.elements = std::move(elements);
  return out;
}

std::size_t GroupTable::inverse_of(std::size_t g) const {
  for (std::size_t h = 0; h < order; ++h)
    if (table[g][h] == identity) return h;
  throw Error(ErrorKind::InvalidTable, "missing inverse");
}

std::size_t GroupTable::power(std::size_t g, std::size_t k) const {
  std::size_t x = identity;
  for (std::size_t i = 0; i < k; ++i) x = table[x][g];
  return x;
}

std::optional<std::size_t> GroupTable::index_of(const Permutation& p) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == p) return i;
  return std::nullopt;
}

CMatrix regular_representation(const GroupTable& g, std::size_t element) {
  CMatrix m(g.order, g.order);
  for (std::size_t h = 0; h < g.order; ++h) m(g.table[element][h], h) = 1.0;
  return m;
}

ValidationReport validate_magic(const MagicUnitary& u, double tol) {
  ValidationReport r;
  const CMatrix id = CMatrix::identity(u.ambient_dim);
  for (const auto& p : u.entries) {
    const double herm = p.max_abs_diff(p.adjoint());
    const double idem = (p * p).max_abs_diff(p);
    r.projection_defects.push_back(std::max(herm, idem));
  }
  for (std::size_t i = 0; i < u.n; ++i) {
    CMatrix row(u.ambient_dim, u.ambient_dim);
    CMatrix col(u.ambient_dim, u.ambient_dim);
    for (std::size_t k = 0; k < u.n; ++k) {
      row += u.entry(i, k);
      col += u.entry(k, i);
    }
    r.row_defects.push_back(row.max_abs_diff(id));
    r.column_defects.push_back(col.max_abs_diff(id));
  }
  for (const auto* v : {&r.projection_defects, &r.row_defects, &r.column_defects})
    for (double d : *v) r.max_defect = std::max(r.max_defect, d);
  r.passed = r.max_defect <= tol;
  return r;
}

MagicUnitary symmetric_group(std::size_t n) {
  if (n > 6) throw Error(ErrorKind::TooLarge, "symmetric_group supports n <= 6");
  if (n < 1) throw Error(ErrorKind::InvalidSpec, "symmetric_group needs n >= 1");
  MagicUnitary u;
  u.n = n;
  u.classical_points = all_permutations(n);
  u.ambient_dim = u.classical_points.size();
  u.label = "S" + std::to_string(n);
  u.carrier = "symmetric:" + std::to_string(n);
  u.entries.assign(n * n, CMatrix(u.ambient_dim, u.ambient_dim));
  for (std::size_t k = 0; k < u.ambient_dim; ++k) {
    const auto& sigma = u.classical_points[k];
    for (std::size_t j = 0; j < n; ++j) u.entries[sigma[j] * n + j](k, k) = 1.0;
  }
  return u;
}

MagicUnitary dual_group(const GroupTable& g, std::string label) {
  DualGroupInfo info{g, {}};
  for (std::size_t e = 0; e < g.order; ++e) info.element_ops.push_back(regular_representation(g, e));

  std::size_t total = 0;
  for (auto gen : g.generators) total += g.element_orders[gen];

  MagicUnitary u;
  u.n = total;
  u.ambient_dim = g.order;
  u.label = std::move(label);
  u.entries.assign(total * total, CMatrix(g.order, g.order));
  std::size_t offset = 0;
  for (auto gen : g.generators) {
    const std::size_t np = g.element_orders[gen];
    const double step = 2.0 * std::numbers::pi / static_cast<double>(np);
    for (std::size_t i = 0; i < np; ++i)
      for (std::size_t j = 0; j < np; ++j) {
        CMatrix block(g.order, g.order);
        for (std::size_t l = 1; l <= np; ++l) {
          const double angle = step * static_cast<double>((static_cast<long>(i) - static_cast<long>(j)) *
                                                          static_cast<long>(l));
          block += info.element_ops[g.power(gen, l)] * std::polar(1.0 / static_cast<double>(np), angle);
        }
        u.entries[(offset + i) * total + (offset + j)] = std::move(block);
      }
    offset += np;
  }
  std::ostringstream carrier;
  carrier << "dual:";
  for (const auto& row : g.table)
    for (auto x : row) carrier << x << ',';
  u.carrier = carrier.str();
  u.dual = std::move(info);
  return u;
}

MagicUnitary kac_paljutkin() {
  constexpr std::size_t dim = 6;
  auto unit = [](std::initializer_list<std::size_t> idx) {
    CMatrix m(dim, dim);
    for (auto k : idx) m(k, k) = 1.0;
    return m;
  };
  const cplx half = 0.5;
  const double q = std::numbers::pi / 4.0;
  CMatrix p(dim, dim);
  p(4, 4) = half;
  p(4, 5) = std::polar(0.5, -q);
  p(5, 4) = std::polar(0.5, q);
  p(5, 5) = half;
  const CMatrix pt = p.transpose();
  const CMatrix i2 = unit({4, 5});

  const CMatrix f12 = unit({0, 1});
  const CMatrix f34 = unit({2, 3});
  const CMatrix f13 = unit({0, 2});
  const CMatrix f24 = unit({1, 3});

  MagicUnitary u;
  u.n = 4;
  u.ambient_dim = dim;
  u.label = "Kac-Paljutkin";
  u.carrier = "kac_paljutkin";
  u.entries = {f12, f34, p,      i2 - p,                //
               f34, f12, i2 - p, p,                     //
               pt,  i2 - pt, f13, f24,                  //
               i2 - pt, pt,  f24, f13};
  return u;
}

MagicUnitary direct_sum(const std::vector<MagicUnitary>& parts) {
  if (parts.empty()) throw Error(ErrorKind::InvalidSpec, "direct_sum needs at least one part");
  if (parts.size() == 1) return parts.front();

  const bool shared = std::all_of(parts.begin(), parts.end(), [&](const MagicUnitary& m) {
    return m.carrier == parts.front().carrier && m.ambient_dim == parts.front().ambient_dim;
  });

  std::size_t total = 0;
  for (const auto& m : parts) total += m.n;

  // Ambient dimension and per-part embedding a ↦ I_left ⊗ a ⊗ I_right.
  std::vector<std::size_t> left(parts.size(), 1);
  std::vector<std::size_t> right(parts.size(), 1);
  std::size_t ambient = parts.front().ambient_dim;
  if (!shared) {
    ambient = 1;
    for (const auto& m : parts) ambient *= m.ambient_dim;
    for (std::size_t p = 0; p < parts.size(); ++p) {
      for (std::size_t q = 0; q < p; ++q) left[p] *= parts[q].ambient_dim;
      for (std::size_t q = p + 1; q < parts.size(); ++q) right[p] *= parts[q].ambient_dim;
    }
  }

  MagicUnitary u;
  u.n = total;
  u.ambient_dim = ambient;
  u.entries.assign(total * total, CMatrix(ambient, ambient));
  std::size_t offset = 0;
  std::string label = "diag(";
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& m = parts[p];
    label += (p ? "," : "") + m.label;
    for (std::size_t i = 0; i < m.n; ++i)
      for (std::size_t j = 0; j < m.n; ++j) {
        CMatrix e = m.entry(i, j);
        if (!shared) e = kron(kron(CMatrix::identity(left[p]), e), CMatrix::identity(right[p]));
        u.entries[(offset + i) * total + (offset + j)] = std::move(e);
      }
    offset += m.n;
  }
  u.label = label + ")";
  if (shared) {
    u.carrier = parts.front().carrier;
    u.dual = parts.front().dual;
    u.classical_points = parts.front().classical_points;
  } else {
    u.carrier = "tensor(";
    for (const auto& m : parts) u.carrier += m.carrier + ";";
    u.carrier += ")";
  }
  return u;
}

MagicUnitary repeat_embed(const MagicUnitary& u, std::size_t times) {
  if (times < 1) throw Error(ErrorKind::InvalidSpec, "repeat_embed needs times >= 1");
  if (times == 1) return u;
  MagicUnitary out = direct_sum(std::vector<MagicUnitary>(times, u));
  out.label = "repeat(" + u.label + "," + std::to_string(times) + ")";
  return out;
}

}  // namespace qperm

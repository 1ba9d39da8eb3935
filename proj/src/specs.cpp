#include "qperm/specs.hpp"

#include <cmath>
#include <cstdio>

#include "qperm/errors.hpp"

namespace qperm {

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) bad("expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(std::string("missing field '") + key + "'");
  return *it;
}

std::size_t count_of(const Json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) bad(std::string(what) + " must be a non-negative integer");
  return j.get<std::size_t>();
}

Permutation perm_from_json(const Json& j) {
  if (!j.is_array()) bad("a permutation is an array of 1-based images");
  std::vector<long long> images;
  for (const auto& x : j) {
    if (!x.is_number_integer()) bad("permutation images must be integers");
    images.push_back(x.get<long long>());
  }
  try {
    return permutation_from_one_based(images);
  } catch (const Error& e) {
    bad(e.what());
  }
}

Json perm_to_json(const Permutation& p) {
  Json a = Json::array();
  for (auto x : p) a.push_back(x + 1);
  return a;
}

MagicUnitary dual_from_spec(const Json& spec) {
  std::string label = "dual";
  if (spec.contains("label")) {
    if (!spec["label"].is_string()) bad("label must be a string");
    label = spec["label"].get<std::string>();
  }
  if (spec.contains("permutations")) {
    std::vector<Permutation> gens;
    for (const auto& p : field(spec, "permutations")) gens.push_back(perm_from_json(p));
    if (gens.empty()) bad("dual needs at least one generator");
    return dual_group(GroupTable::from_permutations(gens), label);
  }
  const Json& cayley = field(spec, "cayley");
  if (!cayley.is_array()) bad("cayley must be a square array");
  std::vector<std::vector<std::size_t>> table;
  for (const auto& row : cayley) {
    if (!row.is_array()) bad("cayley rows must be arrays");
    std::vector<std::size_t> r;
    for (const auto& x : row) r.push_back(count_of(x, "cayley entry"));
    table.push_back(std::move(r));
  }
  const std::size_t identity = spec.contains("identity") ? count_of(spec["identity"], "identity") : 0;
  std::vector<std::size_t> gens;
  for (const auto& g : field(spec, "generators")) gens.push_back(count_of(g, "generator"));
  return dual_group(GroupTable::from_cayley(std::move(table), identity, std::move(gens)), label);
}

}  // namespace

MagicUnitary magic_from_spec(const Json& spec) {
  const Json& kind_j = field(spec, "kind");
  if (!kind_j.is_string()) bad("kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  try {
    if (kind == "symmetric") return symmetric_group(count_of(field(spec, "n"), "n"));
    if (kind == "kac_paljutkin") return kac_paljutkin();
    if (kind == "dual") return dual_from_spec(spec);
    if (kind == "direct_sum") {
      const Json& parts = field(spec, "parts");
      if (!parts.is_array() || parts.empty()) bad("parts must be a non-empty array");
      std::vector<MagicUnitary> built;
      for (const auto& p : parts) built.push_back(magic_from_spec(p));
      return direct_sum(built);
    }
    if (kind == "repeat") return repeat_embed(magic_from_spec(field(spec, "part")), count_of(field(spec, "times"), "times"));
  } catch (const Error& e) {
    // group construction errors are spec errors at this boundary
    if (e.kind() == ErrorKind::InvalidSpec) throw;
    bad(e.what());
  }
  bad("unknown group kind '" + kind + "'");
}

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  bad("expected a number or [re,im]");
}

Json complex_to_json(cplx z) { return Json::array({z.real(), z.imag()}); }

Json matrix_to_json(const CMatrix& m) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(complex_to_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

CMatrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty()) bad("a matrix is a non-empty array of rows");
  const std::size_t rows = j.size();
  if (!j[0].is_array()) bad("matrix rows must be arrays");
  const std::size_t cols = j[0].size();
  CMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (!j[i].is_array() || j[i].size() != cols) bad("matrix rows must have equal length");
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = complex_from_json(j[i][c]);
  }
  return m;
}

namespace {

std::vector<cplx> vector_from_json(const Json& j) {
  if (!j.is_array()) bad("expected an array of numbers or [re,im] pairs");
  std::vector<cplx> v;
  for (const auto& x : j) v.push_back(complex_from_json(x));
  return v;
}

Json vector_to_json(std::span<const cplx> v) {
  Json a = Json::array();
  for (cplx z : v) a.push_back(complex_to_json(z));
  return a;
}

std::pair<std::size_t, std::size_t> event_from_json(const Json& e, std::size_t n) {
  if (!e.is_array() || e.size() != 2) bad("an event is [i,j]");
  const std::size_t i = count_of(e[0], "event index");
  const std::size_t j = count_of(e[1], "event index");
  if (i < 1 || i > n || j < 1 || j > n) bad("event index outside 1.." + std::to_string(n));
  return {i - 1, j - 1};
}

std::vector<cplx> pdf_from_json(const HopfData& h, const Json& values) {
  if (!h.magic.dual) bad("pdf states need a dual group");
  if (!values.is_object()) bad("pdf values must be an object keyed by element");
  const GroupTable& g = h.magic.dual->group;
  std::vector<cplx> v(g.order, 0.0);
  for (const auto& [key, val] : values.items()) {
    std::size_t idx = g.order;
    if (!key.empty() && key.front() == '[') {
      Json p;
      try {
        p = Json::parse(key);
      } catch (const Json::exception&) {
        bad("unreadable element key '" + key + "'");
      }
      auto found = g.index_of(perm_from_json(p));
      if (!found) bad("permutation " + key + " is not an element of the group");
      idx = *found;
    } else {
      try {
        std::size_t used = 0;
        idx = std::stoul(key, &used);
        if (used != key.size()) idx = g.order;
      } catch (const std::exception&) {
        bad("element keys are 0-based indices or permutations, got '" + key + "'");
      }
    }
    if (idx >= g.order) bad("element key '" + key + "' out of range");
    v[idx] = complex_from_json(val);
  }
  return v;
}

}  // namespace

QuantumPermutation state_from_spec(const GroupPtr& h, const Json& spec) {
  const Json& kind_j = field(spec, "kind");
  if (!kind_j.is_string()) bad("kind must be a string");
  const std::string kind = kind_j.get<std::string>();
  if (kind == "haar") return haar_state(h);
  if (kind == "counit") return counit_state(h);
  if (kind == "character") {
    const Permutation p = perm_from_json(field(spec, "perm"));
    if (p.size() != h->n()) bad("permutation size differs from N");
    return character_state(h, p);
  }
  if (kind == "vector") return state_from_vector(h, vector_from_json(field(spec, "coords")));
  if (kind == "density") return state_from_density(h, matrix_from_json(field(spec, "matrix")));
  if (kind == "pdf") return state_from_function(h, pdf_from_json(*h, field(spec, "values")));
  if (kind == "mix") {
    const Json& terms = field(spec, "terms");
    if (!terms.is_array() || terms.empty()) bad("mix needs a non-empty terms array");
    std::vector<std::pair<double, QuantumPermutation>> parts;
    for (const auto& t : terms) {
      const Json& w = field(t, "w");
      if (!w.is_number()) bad("mix weights must be numbers");
      parts.emplace_back(w.get<double>(), state_from_spec(h, field(t, "state")));
    }
    return mix(parts);
  }
  if (kind == "conditioned") {
    QuantumPermutation phi = state_from_spec(h, field(spec, "base"));
    const Json& events = field(spec, "events");
    if (!events.is_array()) bad("events must be an array");
    for (const auto& e : events) {
      auto [i, j] = event_from_json(e, h->n());
      phi = condition(phi, h->generator(i, j));
    }
    return phi;
  }
  bad("unknown state kind '" + kind + "'");
}

std::string canonical_key(const Json& spec) { return spec.dump(); }

// ---------------------------------------------------------------- bundle

namespace {

Json word_to_json(const Word& w) {
  Json a = Json::array();
  for (const Letter& l : w) a.push_back(Json::array({l.i + 1, l.j + 1}));
  return a;
}

Word word_from_json(const Json& j) {
  Word w;
  for (const auto& l : j) w.push_back({l.at(0).get<std::size_t>() - 1, l.at(1).get<std::size_t>() - 1});
  return w;
}

// Nonzero entries as [i, j, re, im].
Json sparse_to_json(const CMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m(i, j) != cplx(0.0, 0.0)) a.push_back(Json::array({i, j, m(i, j).real(), m(i, j).imag()}));
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(a)}};
}

CMatrix sparse_from_json(const Json& j) {
  CMatrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  for (const auto& e : j.at("entries")) {
    const auto i = e.at(0).get<std::size_t>();
    const auto c = e.at(1).get<std::size_t>();
    if (i >= m.rows() || c >= m.cols()) bad("sparse entry out of range");
    m(i, c) = {e.at(2).get<double>(), e.at(3).get<double>()};
  }
  return m;
}

Json magic_to_json(const MagicUnitary& u) {
  Json entries = Json::array();
  for (const auto& e : u.entries) entries.push_back(sparse_to_json(e));
  Json j{{"n", u.n}, {"ambient_dim", u.ambient_dim}, {"label", u.label}, {"carrier", u.carrier},
         {"entries", std::move(entries)}};
  Json points = Json::array();
  for (const auto& p : u.classical_points) points.push_back(perm_to_json(p));
  j["classical_points"] = std::move(points);
  if (u.dual) {
    const GroupTable& g = u.dual->group;
    Json elements = Json::array();
    for (const auto& p : g.elements) elements.push_back(perm_to_json(p));
    j["dual"] = {{"table", g.table},
                 {"identity", g.identity},
                 {"generators", g.generators},
                 {"element_orders", g.element_orders},
                 {"elements", std::move(elements)}};
  }
  return j;
}

MagicUnitary magic_from_bundle(const Json& j) {
  MagicUnitary u;
  u.n = j.at("n").get<std::size_t>();
  u.ambient_dim = j.at("ambient_dim").get<std::size_t>();
  u.label = j.at("label").get<std::string>();
  u.carrier = j.at("carrier").get<std::string>();
  for (const auto& e : j.at("entries")) u.entries.push_back(sparse_from_json(e));
  if (u.entries.size() != u.n * u.n) bad("bundle has the wrong number of entries");
  for (const auto& p : j.at("classical_points")) u.classical_points.push_back(perm_from_json(p));
  if (j.contains("dual")) {
    const Json& d = j["dual"];
    GroupTable g;
    g.table = d.at("table").get<std::vector<std::vector<std::size_t>>>();
    g.order = g.table.size();
    g.identity = d.at("identity").get<std::size_t>();
    g.generators = d.at("generators").get<std::vector<std::size_t>>();
    g.element_orders = d.at("element_orders").get<std::vector<std::size_t>>();
    for (const auto& p : d.at("elements")) g.elements.push_back(perm_from_json(p));
    DualGroupInfo info{g, {}};
    for (std::size_t e = 0; e < g.order; ++e) info.element_ops.push_back(regular_representation(g, e));
    u.dual = std::move(info);
  }
  return u;
}

}  // namespace

Json hopf_to_json(const HopfData& h) {
  Json j;
  j["format"] = "qperm-hopf/1";
  j["magic"] = magic_to_json(h.magic);
  j["dim"] = h.dim;
  Json basis = Json::array();
  for (const auto& b : h.basis) basis.push_back(matrix_to_json(b));
  j["basis"] = std::move(basis);
  Json words = Json::array();
  for (const auto& w : h.words) words.push_back(word_to_json(w));
  j["words"] = std::move(words);
  Json derivs = Json::array();
  for (const auto& d : h.derivations) {
    derivs.push_back({{"parent", d.parent},
                      {"letter", Json::array({d.letter.i + 1, d.letter.j + 1})},
                      {"coefficients", vector_to_json(d.coefficients)},
                      {"norm", d.norm}});
  }
  j["derivations"] = std::move(derivs);
  Json mult = Json::array();
  for (const auto& m : h.mult) mult.push_back(sparse_to_json(m));
  j["mult"] = std::move(mult);
  j["star"] = sparse_to_json(h.star);
  Json comult = Json::array();
  for (const auto& m : h.comult) comult.push_back(sparse_to_json(m));
  j["comult"] = std::move(comult);
  j["counit"] = vector_to_json(h.counit_vec);
  j["antipode"] = sparse_to_json(h.antipode_mat);
  j["haar"] = vector_to_json(h.haar_vec);
  Json blocks = Json::array();
  for (const auto& b : h.blocks) {
    Json jb{{"dim", b.dim}, {"projection", matrix_to_json(b.projection)}, {"coords", vector_to_json(b.coords)}};
    jb["character"] = b.character ? perm_to_json(*b.character) : Json(nullptr);
    blocks.push_back(std::move(jb));
  }
  j["blocks"] = std::move(blocks);
  Json gens = Json::array();
  for (const auto& g : h.generator_coords) gens.push_back(vector_to_json(g));
  j["generator_coords"] = std::move(gens);
  return j;
}

HopfData hopf_from_json(const Json& j) {
  try {
    if (j.at("format") != "qperm-hopf/1") bad("unknown bundle format");
    HopfData h;
    h.magic = magic_from_bundle(j.at("magic"));
    h.dim = j.at("dim").get<std::size_t>();
    for (const auto& b : j.at("basis")) h.basis.push_back(matrix_from_json(b));
    for (const auto& w : j.at("words")) h.words.push_back(word_from_json(w));
    for (const auto& d : j.at("derivations")) {
      Derivation der;
      der.parent = d.at("parent").get<std::size_t>();
      der.letter = word_from_json(Json::array({d.at("letter")})).front();
      der.coefficients = vector_from_json(d.at("coefficients"));
      der.norm = d.at("norm").get<double>();
      h.derivations.push_back(std::move(der));
    }
    for (const auto& m : j.at("mult")) h.mult.push_back(sparse_from_json(m));
    h.star = sparse_from_json(j.at("star"));
    for (const auto& m : j.at("comult")) h.comult.push_back(sparse_from_json(m));
    h.counit_vec = vector_from_json(j.at("counit"));
    h.antipode_mat = sparse_from_json(j.at("antipode"));
    h.haar_vec = vector_from_json(j.at("haar"));
    for (const auto& b : j.at("blocks")) {
      Block blk;
      blk.dim = b.at("dim").get<std::size_t>();
      blk.projection = matrix_from_json(b.at("projection"));
      blk.coords = vector_from_json(b.at("coords"));
      if (!b.at("character").is_null()) blk.character = perm_from_json(b.at("character"));
      h.blocks.push_back(std::move(blk));
    }
    for (const auto& g : j.at("generator_coords")) h.generator_coords.push_back(vector_from_json(g));
    if (h.basis.size() != h.dim || h.mult.size() != h.dim || h.comult.size() != h.dim) bad("bundle sizes disagree");
    return h;
  } catch (const Json::exception& e) {
    bad(std::string("malformed bundle: ") + e.what());
  }
}

double sig12(double v) {
  if (!std::isfinite(v)) return v;
  if (std::abs(v) < 1e-12) return 0.0;  // round-off, not signal
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;  // no negative zero in output
}

Json slice_to_json(const BirkhoffSlice& s) {
  Json rows = Json::array();
  for (std::size_t i = 0; i < s.n; ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < s.n; ++j) row.push_back(sig12(s(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------- cache

const FixSpectrum& GroupCache::Entry::fix_spectrum() const {
  std::call_once(fix_once_, [this] { fix_ = qperm::fix_spectrum(*group); });
  return fix_;
}

std::shared_ptr<const GroupCache::Entry> GroupCache::get(const Json& spec) {
  const std::string key = canonical_key(spec);
  {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
  }
  // Built outside the lock; if two threads race, the first insertion wins.
  auto entry = std::make_shared<Entry>();
  entry->group = std::make_shared<const HopfData>(build_hopf(magic_from_spec(spec)));
  std::lock_guard lock(mutex_);
  auto [it, inserted] = entries_.emplace(key, entry);
  return it->second;
}

std::size_t GroupCache::size() const {
  std::lock_guard lock(mutex_);
  return entries_.size();
}

}  // namespace qperm

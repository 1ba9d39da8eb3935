#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qperm/errors.hpp"
#include "qperm/orbitals.hpp"
#include "qperm/rewriter.hpp"
#include "qperm/shell.hpp"

namespace qperm {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", sig12(v));
  return buf;
}

std::string tuple_text(const Tuple& t) {
  std::string s = "(";
  for (std::size_t k = 0; k < t.size(); ++k) s += (k ? "," : "") + std::to_string(t[k] + 1);
  return s + ")";
}

Json tuple_json(const Tuple& t) {
  Json a = Json::array();
  for (auto x : t) a.push_back(x + 1);
  return a;
}

Json perm_json(const Permutation& p) {
  Json a = Json::array();
  for (auto x : p) a.push_back(x + 1);
  return a;
}

// Inline JSON, a couple of shorthands, or a path to a file holding JSON.
Json load_spec(const std::string& src, bool group) {
  std::string s = src;
  s.erase(0, s.find_first_not_of(" \t\r\n"));
  if (!s.empty() && (s.front() == '{' || s.front() == '[')) return Json::parse(s);
  if (group) {
    if (s == "kp" || s == "kac_paljutkin") return Json{{"kind", "kac_paljutkin"}};
    if (s.size() >= 2 && (s[0] == 'S' || s[0] == 's') && std::all_of(s.begin() + 1, s.end(), ::isdigit)) {
      return Json{{"kind", "symmetric"}, {"n", std::stoul(s.substr(1))}};
    }
  } else if (s == "haar" || s == "counit") {
    return Json{{"kind", s}};
  }
  std::ifstream f(s);
  if (!f) throw UsageError("cannot read spec '" + src + "' (inline JSON, shorthand or file path expected)");
  std::stringstream buf;
  buf << f.rdbuf();
  return Json::parse(buf.str());
}

Json slice_payload(const BirkhoffSlice& s) { return Json{{"n", s.n}, {"slice", slice_to_json(s)}}; }

struct Context {
  std::istream& in;
  std::ostream& out;
  bool json = false;
  GroupCache cache;

  std::shared_ptr<const GroupCache::Entry> group(const std::string& src) { return cache.get(load_spec(src, true)); }
  QuantumPermutation state(const GroupPtr& h, const std::string& src) { return state_from_spec(h, load_spec(src, false)); }

  void emit(const Json& j) { out << j.dump(2) << "\n"; }
};

int cmd_validate(Context& c, const std::string& group_src) {
  const MagicUnitary u = magic_from_spec(load_spec(group_src, true));
  const ValidationReport r = validate_magic(u);
  const double proj = r.projection_defects.empty() ? 0.0 : *std::max_element(r.projection_defects.begin(), r.projection_defects.end());
  const double row = r.row_defects.empty() ? 0.0 : *std::max_element(r.row_defects.begin(), r.row_defects.end());
  const double col = r.column_defects.empty() ? 0.0 : *std::max_element(r.column_defects.begin(), r.column_defects.end());
  if (c.json) {
    c.emit({{"label", u.label}, {"n", u.n}, {"ambientDim", u.ambient_dim}, {"projectionDefect", proj},
            {"rowDefect", row}, {"columnDefect", col}, {"valid", r.passed}});
  } else {
    c.out << "group: " << u.label << "\nN: " << u.n << "\nambient dimension: " << u.ambient_dim
          << "\nprojection defect: " << num(proj) << "\nrow defect: " << num(row) << "\ncolumn defect: " << num(col)
          << "\nmagic unitary: " << (r.passed ? "valid" : "INVALID") << "\n";
  }
  return r.passed ? 0 : 1;
}

std::vector<Permutation> deterministic_group(const HopfData& h) {
  std::vector<Permutation> out;
  for (const auto& b : h.blocks)
    if (b.dim == 1 && b.character) out.push_back(*b.character);
  std::sort(out.begin(), out.end());
  return out;
}

int cmd_info(Context& c, const std::string& group_src) {
  const auto g = c.group(group_src);
  const HopfData& h = *g->group;
  std::vector<std::size_t> dims;
  for (const auto& b : h.blocks) dims.push_back(b.dim);
  const auto det = deterministic_group(h);
  const bool commutative = std::all_of(dims.begin(), dims.end(), [](std::size_t d) { return d == 1; });
  if (c.json) {
    Json elems = Json::array();
    for (const auto& p : det) elems.push_back(perm_json(p));
    c.emit({{"label", h.magic.label}, {"n", h.n()}, {"ambientDim", h.ambient_dim()}, {"dim", h.dim},
            {"blocks", dims}, {"commutative", commutative},
            {"deterministic", {{"order", det.size()}, {"elements", elems}}}});
    return 0;
  }
  c.out << "group: " << h.magic.label << "\nN: " << h.n() << "\nambient dimension: " << h.ambient_dim()
        << "\nalgebra dimension: " << h.dim << "\nblocks: [";
  for (std::size_t k = 0; k < dims.size(); ++k) c.out << (k ? "," : "") << dims[k];
  c.out << "]\ncommutative: " << (commutative ? "yes" : "no") << "\ndeterministic group order: " << det.size()
        << "\ndeterministic elements:";
  for (const auto& p : det) c.out << " " << to_string(p);
  c.out << "\n";
  return 0;
}

void print_slice(Context& c, const BirkhoffSlice& s, Json extra = Json::object()) {
  if (c.json) {
    Json j = slice_payload(s);
    for (auto& [k, v] : extra.items()) j[k] = v;
    c.emit(j);
    return;
  }
  c.out << render_slice(s);
  for (auto& [k, v] : extra.items()) c.out << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
}

int cmd_fix_spectrum(Context& c, const std::string& group_src, const std::string& state_src) {
  const auto g = c.group(group_src);
  const FixSpectrum& fs = g->fix_spectrum();
  Json values = Json::array();
  for (double v : fs.values) values.push_back(sig12(v));
  if (state_src.empty()) {
    if (c.json) {
      c.emit({{"values", values}});
    } else {
      c.out << "fix spectrum:";
      for (double v : fs.values) c.out << " " << num(v);
      c.out << "\n";
    }
    return 0;
  }
  const FixedPoints fp = fixed_points_of(c.state(g->group, state_src), fs);
  if (c.json) {
    Json dist = Json::array();
    for (auto [l, p] : fp.distribution) dist.push_back({{"fixedPoints", sig12(l)}, {"probability", sig12(p)}});
    c.emit({{"values", values},
            {"distribution", dist},
            {"count", fp.count ? Json(sig12(*fp.count)) : Json(nullptr)},
            {"expectation", sig12(fp.expectation)}});
    return 0;
  }
  c.out << "fix spectrum:";
  for (double v : fs.values) c.out << " " << num(v);
  c.out << "\ndistribution:\n";
  for (auto [l, p] : fp.distribution) c.out << "  " << std::setw(16) << std::left << num(l) << num(p) << "\n";
  c.out << std::right << "fixed points: " << (fp.count ? num(*fp.count) : std::string("not sharp")) << "\nexpectation: "
        << num(fp.expectation) << "\n";
  return 0;
}

int cmd_deterministic(Context& c, const std::string& group_src) {
  const auto g = c.group(group_src);
  std::vector<Permutation> perms;
  if (g->group->n() <= 6) {
    for (auto& [p, s] : deterministic_enumerate(g->group)) perms.push_back(p);
  } else {
    perms = deterministic_group(*g->group);
  }
  if (c.json) {
    Json a = Json::array();
    for (const auto& p : perms) a.push_back(perm_json(p));
    c.emit({{"order", perms.size()}, {"elements", a}});
  } else {
    c.out << "deterministic permutations: " << perms.size() << "\n";
    for (const auto& p : perms) c.out << "  " << to_string(p) << "\n";
  }
  return 0;
}

int cmd_support(Context& c, const std::string& group_src, const std::string& state_src) {
  const auto g = c.group(group_src);
  const SupportProjection sp = support_projection(c.state(g->group, state_src));
  const double rank = sp.support.trace().real();
  if (c.json) {
    c.emit({{"rank", sig12(rank)}, {"nullSpaceDim", sp.null_space_dim}, {"value", sig12(sp.value)},
            {"minimalityDefect", sp.minimality_defect}, {"support", matrix_to_json(sp.support)}});
    return 0;
  }
  c.out << "support rank on carrier: " << num(rank) << "\nnull space dimension: " << sp.null_space_dim
        << "\nstate on support: " << num(sp.value) << "\nminimality defect: " << num(sp.minimality_defect)
        << "\nsupport projection:\n";
  for (std::size_t i = 0; i < sp.support.rows(); ++i) {
    c.out << " ";
    for (std::size_t j = 0; j < sp.support.cols(); ++j) {
      const cplx z = sp.support(i, j);
      std::string cell = num(z.real());
      if (std::abs(z.imag()) > 1e-12) cell += (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
      c.out << " " << std::setw(16) << cell;
    }
    c.out << "\n";
  }
  return 0;
}

int cmd_orbitals(Context& c, const std::string& group_src, std::size_t k) {
  const auto g = c.group(group_src);
  if (k == 1 || k == 2) {
    const OrbitClasses oc = orbit_classes(*g->group, k);
    if (c.json) {
      Json classes = Json::array();
      for (const auto& cl : oc.classes) {
        Json a = Json::array();
        for (const auto& t : cl) a.push_back(tuple_json(t));
        classes.push_back(a);
      }
      c.emit({{"k", k}, {"classes", classes}});
    } else {
      c.out << k << "-orbitals: " << oc.classes.size() << "\n";
      for (const auto& cl : oc.classes) {
        c.out << " ";
        for (const auto& t : cl) c.out << " " << tuple_text(t);
        c.out << "\n";
      }
    }
    return 0;
  }
  if (k != 3) throw UsageError("--k must be 1, 2 or 3");
  const ThreeOrbitalReport r = three_orbital_transitivity_report(*g->group);
  if (c.json) {
    Json w = Json::array();
    for (const auto& x : r.witnesses) {
      w.push_back({{"a", tuple_json(x.tuples[0])}, {"b", tuple_json(x.tuples[1])}, {"c", tuple_json(x.tuples[2])},
                   {"ab", x.ab}, {"bc", x.bc}, {"ac", x.ac}});
    }
    c.emit({{"k", 3}, {"relatedPairs", r.related_pairs}, {"symmetric", r.symmetric}, {"transitive", r.witnesses.empty()},
            {"witnesses", w}, {"suspicious", r.suspicious.size()}});
    return 0;
  }
  c.out << "related pairs: " << r.related_pairs << "\nsymmetric: " << (r.symmetric ? "yes" : "no")
        << "\ntransitive: " << (r.witnesses.empty() ? "yes" : "no") << "\nwitnesses: " << r.witnesses.size() << "\n";
  for (std::size_t q = 0; q < std::min<std::size_t>(r.witnesses.size(), 5); ++q) {
    const auto& x = r.witnesses[q];
    c.out << "  " << tuple_text(x.tuples[0]) << " ~ " << tuple_text(x.tuples[1]) << " ~ " << tuple_text(x.tuples[2])
          << " but " << tuple_text(x.tuples[0]) << " !~ " << tuple_text(x.tuples[2]) << "\n";
  }
  if (!r.suspicious.empty()) c.out << "near-zero norms: " << r.suspicious.size() << "\n";
  return 0;
}

std::vector<Event> events_from(const std::string& src, std::size_t n) {
  const Json j = Json::parse(src);
  if (!j.is_array()) throw Error(ErrorKind::InvalidSpec, "events are [[i,j],...]");
  std::vector<Event> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
      throw Error(ErrorKind::InvalidSpec, "an event is [i,j]");
    }
    const long long i = e[0].get<long long>();
    const long long jj = e[1].get<long long>();
    if (i < 1 || jj < 1 || i > static_cast<long long>(n) || jj > static_cast<long long>(n)) {
      throw Error(ErrorKind::IndexOutOfRange, "event index outside 1.." + std::to_string(n));
    }
    out.push_back({static_cast<std::size_t>(i - 1), static_cast<std::size_t>(jj - 1), true});
  }
  return out;
}

std::vector<std::size_t> positions_from(const std::string& src, std::size_t n) {
  std::vector<std::size_t> out;
  if (src.empty()) {
    for (std::size_t j = 0; j < n; ++j) out.push_back(j);
    return out;
  }
  std::stringstream ss(src);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    std::size_t used = 0;
    long long v = -1;
    try {
      v = std::stoll(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("positions are a comma separated list of integers");
    }
    if (v < 1 || v > static_cast<long long>(n)) throw Error(ErrorKind::IndexOutOfRange, "position " + tok);
    out.push_back(static_cast<std::size_t>(v - 1));
  }
  return out;
}

int cmd_sample(Context& c, const std::string& group_src, const std::string& state_src, std::size_t shots,
               std::uint64_t seed, const std::string& positions_src) {
  const auto g = c.group(group_src);
  const QuantumPermutation phi = c.state(g->group, state_src);
  const auto positions = positions_from(positions_src, g->group->n());
  SplitMix64 seeds(seed);
  std::map<std::vector<std::size_t>, std::size_t> counts;
  for (std::size_t s = 0; s < shots; ++s) {
    MeasurementSession session(phi, seeds.next());
    std::vector<std::size_t> outcome;
    for (auto p : positions) outcome.push_back(session.measure(p).outcome + 1);
    ++counts[outcome];
  }
  std::vector<std::pair<std::vector<std::size_t>, std::size_t>> rows(counts.begin(), counts.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  if (c.json) {
    Json list = Json::array();
    for (const auto& [o, n] : rows) {
      list.push_back({{"outcomes", o}, {"count", n}, {"frequency", sig12(static_cast<double>(n) / shots)}});
    }
    Json pos = Json::array();
    for (auto p : positions) pos.push_back(p + 1);
    c.emit({{"positions", pos}, {"shots", shots}, {"seed", seed}, {"counts", list}});
    return 0;
  }
  c.out << "positions:";
  for (auto p : positions) c.out << " " << p + 1;
  c.out << "\nshots: " << shots << "\nseed: " << seed << "\n";
  for (const auto& [o, n] : rows) {
    std::string key = "[";
    for (std::size_t k = 0; k < o.size(); ++k) key += (k ? "," : "") + std::to_string(o[k]);
    key += "]";
    c.out << "  " << std::left << std::setw(20) << key << std::right << std::setw(10) << n << "  "
          << num(static_cast<double>(n) / shots) << "\n";
  }
  return 0;
}

int cmd_measure(Context& c, const std::string& group_src, const std::string& state_src, std::uint64_t seed) {
  const auto g = c.group(group_src);
  MeasurementSession session(c.state(g->group, state_src), seed, "terminal");
  const std::size_t n = g->group->n();
  c.out << "Flip a card by typing its position (1.." << n << "); 'reset', 'history' or 'quit'.\n";
  c.out << render_slice(birkhoff_slice(session.current()));
  std::string line;
  while (c.out << "flip> " << std::flush, std::getline(c.in, line)) {
    line.erase(0, line.find_first_not_of(" \t"));
    line.erase(line.find_last_not_of(" \t\r") + 1);
    if (line.empty()) continue;
    if (line == "quit" || line == "q" || line == "exit") break;
    if (line == "reset") {
      session.reset();
      c.out << "session reset\n" << render_slice(birkhoff_slice(session.current()));
      continue;
    }
    if (line == "history") {
      for (const auto& r : session.history()) {
        c.out << "  position " << r.position + 1 << ": card " << r.outcome + 1 << " (probability " << num(r.probability)
              << ")" << (r.non_classical ? " non-classical" : "") << "\n";
      }
      continue;
    }
    long long pos = 0;
    try {
      std::size_t used = 0;
      pos = std::stoll(line, &used);
      if (used != line.size()) pos = 0;
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos < 1 || pos > static_cast<long long>(n)) {
      c.out << "expected a position 1.." << n << "\n";
      continue;
    }
    try {
      const MeasurementRecord r = session.measure(static_cast<std::size_t>(pos - 1));
      c.out << "position " << pos << " shows card " << r.outcome + 1 << " (probability " << num(r.probability) << ")\n";
      if (r.non_classical) c.out << "non-classical: this card differs from the earlier reading of position " << pos << "\n";
      c.out << render_slice(birkhoff_slice(session.current()));
    } catch (const Error& e) {
      c.out << e.what() << "\n";
    }
  }
  c.out << "\n";
  return 0;
}

int cmd_rewrite(Context& c, std::size_t n, std::size_t depth, const std::string& equation) {
  const auto [a, b] = parse_equation(equation, n);
  const ProofResult r = prove_equal(a, b, depth);
  if (c.json) {
    Json steps = Json::array();
    for (const auto& s : r.steps) steps.push_back({{"from", to_string(s.from)}, {"to", to_string(s.to)}, {"rule", s.rule}});
    c.emit({{"result", r.proved ? "Proved" : "Unknown"}, {"lhs", to_string(a)}, {"rhs", to_string(b)},
            {"moves", r.moves}, {"depth", depth}, {"states", r.states}, {"pruned", r.pruned}, {"steps", steps}});
  } else {
    c.out << "N = " << n << ", depth " << depth << "\n" << to_string(a) << " == " << to_string(b) << "\n"
          << format_proof(r);
  }
  return 0;
}

}  // namespace

std::string render_slice(const BirkhoffSlice& s) {
  std::ostringstream os;
  os << std::setw(8) << "card\\pos";
  for (std::size_t j = 0; j < s.n; ++j) os << ' ' << std::setw(15) << j + 1;
  os << "\n";
  for (std::size_t i = 0; i < s.n; ++i) {
    os << std::setw(8) << i + 1;
    for (std::size_t j = 0; j < s.n; ++j) os << ' ' << std::setw(15) << num(s(i, j));
    os << "\n";
  }
  return os.str();
}

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"qperm: finite quantum permutation groups, states and measurement"};
  app.require_subcommand(1);
  app.fallthrough();
  bool json = false;
  app.add_flag("--json", json, "machine-readable output");

  std::string group_src, state_src, with_src, events_src, positions_src, equation, host = "127.0.0.1";
  std::size_t k = 1, iterations = 10000, shots = 1000, n = 3, depth = kDefaultProofDepth;
  std::uint64_t seed = 0;
  int port = default_port();

  auto group_opt = [&](CLI::App* sub) { sub->add_option("--group,-g", group_src, "GroupSpec: JSON, file, kp or S<n>")->required(); };
  auto state_opt = [&](CLI::App* sub, bool required) {
    auto* o = sub->add_option("--state,-s", state_src, "StateSpec: JSON, file, haar or counit");
    if (required) o->required();
  };

  auto* validate = app.add_subcommand("validate", "check the magic unitary relations");
  group_opt(validate);
  auto* info = app.add_subcommand("info", "dimensions, blocks and deterministic group");
  group_opt(info);
  auto* slice = app.add_subcommand("slice", "Birkhoff slice of a state");
  group_opt(slice);
  state_opt(slice, true);
  auto* convolve_cmd = app.add_subcommand("convolve", "slice of the convolution of two states");
  group_opt(convolve_cmd);
  state_opt(convolve_cmd, true);
  convolve_cmd->add_option("--with,-w", with_src, "second StateSpec")->required();
  auto* power = app.add_subcommand("power", "k-th convolution power");
  group_opt(power);
  state_opt(power, true);
  power->add_option("--k,-k", k, "exponent")->required()->check(CLI::PositiveNumber);
  auto* ces = app.add_subcommand("cesaro", "Cesaro limit of convolution powers");
  group_opt(ces);
  state_opt(ces, true);
  ces->add_option("--n", iterations, "maximum number of terms")->check(CLI::Range(1, 10000));
  auto* fix = app.add_subcommand("fix-spectrum", "spectrum of the fixed-point observable");
  group_opt(fix);
  state_opt(fix, false);
  auto* det = app.add_subcommand("deterministic", "deterministic permutations (characters)");
  group_opt(det);
  auto* idem = app.add_subcommand("idempotent-classify", "Haar, non-Haar or not idempotent");
  group_opt(idem);
  state_opt(idem, true);
  auto* supp = app.add_subcommand("support", "support projection of a state");
  group_opt(supp);
  state_opt(supp, true);
  auto* orb = app.add_subcommand("orbitals", "orbits on k-tuples");
  group_opt(orb);
  orb->add_option("--k,-k", k, "1, 2 or 3")->required();
  auto* seq = app.add_subcommand("seq-prob", "probability of a sequence of events, first measured first");
  group_opt(seq);
  state_opt(seq, true);
  seq->add_option("--events,-e", events_src, "[[i,j],...] with 1-based indices")->required();
  auto* sample = app.add_subcommand("sample", "repeated seeded measurement runs");
  group_opt(sample);
  state_opt(sample, true);
  sample->add_option("--shots", shots, "number of runs")->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "generator seed");
  sample->add_option("--positions", positions_src, "positions to flip in order, default 1..N");
  auto* meas = app.add_subcommand("measure", "interactive card flipping");
  group_opt(meas);
  state_opt(meas, true);
  meas->add_option("--seed", seed, "generator seed");
  auto* rw = app.add_subcommand("rewrite", "bounded prover for magic algebra identities");
  rw->add_option("--n", n, "matrix size N")->required()->check(CLI::PositiveNumber);
  rw->add_option("--depth", depth, "total number of moves");
  rw->add_option("equation", equation, "\"lhs == rhs\"")->required();
  auto* srv = app.add_subcommand("serve", "serve the session API over HTTP");
  srv->add_option("--port", port, "port, default from QPERM_PORT or 8080")->check(CLI::Range(1, 65535));
  srv->add_option("--host", host, "bind address");

  std::vector<const char*> argv{"qperm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Context c{in, out, json, {}};
  try {
    if (*validate) return cmd_validate(c, group_src);
    if (*info) return cmd_info(c, group_src);
    if (*slice) {
      const auto g = c.group(group_src);
      print_slice(c, birkhoff_slice(c.state(g->group, state_src)));
      return 0;
    }
    if (*convolve_cmd) {
      const auto g = c.group(group_src);
      print_slice(c, birkhoff_slice(convolve(c.state(g->group, state_src), c.state(g->group, with_src))));
      return 0;
    }
    if (*power) {
      const auto g = c.group(group_src);
      const auto r = convolution_power(c.state(g->group, state_src), k);
      print_slice(c, birkhoff_slice(r.state), {{"k", k}, {"idempotent", is_idempotent(r.state) ? "yes" : "no"}});
      return 0;
    }
    if (*ces) {
      const auto g = c.group(group_src);
      const auto r = cesaro(c.state(g->group, state_src), iterations);
      print_slice(c, birkhoff_slice(r.state),
                  {{"iterations", r.iterations},
                   {"converged", r.converged ? "yes" : "no"},
                   {"lastChange", num(r.last_change)},
                   {"class", std::string(to_string(classify_idempotent(r.state)))}});
      return 0;
    }
    if (*fix) return cmd_fix_spectrum(c, group_src, state_src);
    if (*det) return cmd_deterministic(c, group_src);
    if (*idem) {
      const auto g = c.group(group_src);
      const auto cls = classify_idempotent(c.state(g->group, state_src));
      if (json) c.emit({{"class", std::string(to_string(cls))}});
      else out << "class: " << to_string(cls) << "\n";
      return 0;
    }
    if (*supp) return cmd_support(c, group_src, state_src);
    if (*orb) return cmd_orbitals(c, group_src, k);
    if (*seq) {
      const auto g = c.group(group_src);
      const double p = sequential_probability(c.state(g->group, state_src), events_from(events_src, g->group->n()));
      if (json) c.emit({{"probability", sig12(p)}});
      else out << "probability: " << num(p) << "\n";
      return 0;
    }
    if (*sample) return cmd_sample(c, group_src, state_src, shots, seed, positions_src);
    if (*meas) return cmd_measure(c, group_src, state_src, seed);
    if (*rw) return cmd_rewrite(c, n, depth, equation);
    if (*srv) {
      Api api;
      HttpServer server(api);
      if (!server.bind(host, port)) {
        err << "cannot bind " << host << ":" << port << "\n";
        return 1;
      }
      out << "listening on http://" << host << ":" << port << "\n" << std::flush;
      server.listen_after_bind();
      return 0;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const Json::exception& e) {
    err << "InvalidSpec: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace qperm

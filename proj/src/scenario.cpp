#include "rif/scenario.hpp"

#include "rif/catalog.hpp"
#include "rif/corpus.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace rif {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) { throw InputError(path + ": " + msg); }

std::string at(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

void allow_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> keys) {
  if (!obj.is_object()) fail(path, "expected an object");
  for (const auto& [k, v] : obj.items()) {
    bool known = std::any_of(keys.begin(), keys.end(), [&](const char* x) { return k == x; });
    if (!known) fail(at(path, k), "unknown field");
  }
}

const Json& need(const Json& obj, const char* key, const std::string& path) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(at(path, key), "missing");
  return *it;
}

Int to_int(const Json& j, const std::string& path) {
  if (j.is_number_integer()) return Int(j.get<long long>());
  if (!j.is_string()) fail(path, "expected an integer as a decimal string");
  try {
    return parse_int(j.get<std::string>());
  } catch (const std::exception&) {
    fail(path, "not a decimal integer: '" + j.get<std::string>() + "'");
  }
}

std::size_t to_index(const Json& j, const std::string& path, std::size_t bound) {
  Int v = to_int(j, path);
  if (v < 0 || v >= bound) fail(path, "index " + to_string(v) + " out of range [0, " + std::to_string(bound) + ")");
  return static_cast<std::size_t>(to_ll(v));
}

std::string to_name(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

bool to_bool(const Json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

const Json& to_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected a list");
  return j;
}

IntVector to_vector(const Json& j, const std::string& path, std::optional<std::size_t> len = {}) {
  to_array(j, path);
  if (len && j.size() != *len) fail(path, "expected " + std::to_string(*len) + " entries, got " + std::to_string(j.size()));
  IntVector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(to_int(j[i], at(path, i)));
  return v;
}

std::vector<std::size_t> to_indices(const Json& j, const std::string& path, std::size_t bound) {
  to_array(j, path);
  std::vector<std::size_t> v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(to_index(j[i], at(path, i), bound));
  return v;
}

// A matrix as a list of rows.
IntMatrix to_rows(const Json& j, const std::string& path, std::size_t rows, std::size_t cols) {
  to_array(j, path);
  if (j.size() != rows) fail(path, "expected " + std::to_string(rows) + " rows, got " + std::to_string(j.size()));
  IntMatrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    IntVector r = to_vector(j[i], at(path, i), cols);
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = r[c];
  }
  return m;
}

// A matrix as a list of column vectors of length dim.
IntMatrix to_columns(const Json& j, const std::string& path, std::size_t dim) {
  to_array(j, path);
  std::vector<IntVector> cols;
  for (std::size_t i = 0; i < j.size(); ++i) cols.push_back(to_vector(j[i], at(path, i), dim));
  return cols.empty() ? IntMatrix(dim, 0) : IntMatrix::from_columns(cols, dim);
}

Json int_json(const Int& v) { return to_string(v); }

Json vector_json(const IntVector& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(to_string(x));
  return a;
}

Json rows_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vector_json(m.row(i)));
  return a;
}

Json columns_json(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t j = 0; j < m.cols(); ++j) a.push_back(vector_json(m.column(j)));
  return a;
}

Json group_json(const FinAbGroup& g) {
  Json j;
  j["factors"] = vector_json(g.factors());
  j["order"] = g.is_finite() ? to_string(g.order()) : "infinite";
  j["structure"] = g.describe();
  return j;
}

// ---------------------------------------------------------------------------
// Loading

FiniteGroup load_group(const Json& j, const std::string& path) {
  try {
    if (j.is_string()) return named_group(j.get<std::string>());
    allow_keys(j, path, {"table", "name"});
    const Json& t = to_array(need(j, "table", path), at(path, "table"));
    std::vector<std::vector<std::size_t>> table;
    for (std::size_t i = 0; i < t.size(); ++i) table.push_back(to_indices(t[i], at(at(path, "table"), i), t.size()));
    std::string name = j.contains("name") ? to_name(j["name"], at(path, "name")) : "";
    return FiniteGroup(std::move(table), name);
  } catch (const std::invalid_argument& e) {
    fail(j.is_string() ? path : at(path, "table"), e.what());
  }
}

GammaModule load_module(const Json& j, const std::string& path, const FiniteGroup& g) {
  allow_keys(j, path, {"builtin", "kernel", "modulus", "action", "relations", "reduce"});
  GammaModule m;
  try {
    if (j.contains("builtin")) {
      const std::string kind = to_name(j["builtin"], at(path, "builtin"));
      if (kind == "trivial") {
        m = GammaModule::trivial_cyclic(g, j.contains("modulus") ? to_int(j["modulus"], at(path, "modulus")) : Int(0));
      } else if (kind == "sign") {
        m = sign_lattice(g, to_indices(need(j, "kernel", path), at(path, "kernel"), g.order()));
      } else if (kind == "regular") {
        m = regular_lattice(g);
      } else if (kind == "rotation") {
        m = rotation_lattice(g);
      } else if (kind == "s3-standard") {
        m = s3_standard_lattice(g);
      } else {
        fail(at(path, "builtin"), "unknown module '" + kind + "'");
      }
    } else {
      const Json& act = to_array(need(j, "action", path), at(path, "action"));
      if (act.size() != g.order())
        fail(at(path, "action"), "expected one matrix per group element (" + std::to_string(g.order()) + ")");
      const std::size_t rank = act.empty() || !act[0].is_array() ? 0 : act[0].size();
      std::vector<IntMatrix> mats;
      for (std::size_t e = 0; e < act.size(); ++e) mats.push_back(to_rows(act[e], at(at(path, "action"), e), rank, rank));
      IntMatrix rel = j.contains("relations") ? to_columns(j["relations"], at(path, "relations"), rank) : IntMatrix(rank, 0);
      m = GammaModule(g, rel, std::move(mats));
    }
    if (j.contains("reduce")) m = reduce_mod(m, to_int(j["reduce"], at(path, "reduce")));
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  return m;
}

PlaceDecl load_places(const Json& j, const std::string& path, const FiniteGroup& g) {
  allow_keys(j, path, {"blocks", "action", "section", "modulus", "ambient", "allow_violations"});
  PlaceDecl d;
  const Int n = to_int(need(j, "modulus", path), at(path, "modulus"));
  if (n < 1) fail(at(path, "modulus"), "must be positive");
  auto perms = [&](const Json& a, const std::string& p) {
    to_array(a, p);
    if (a.size() != g.order()) fail(p, "expected one permutation per group element (" + std::to_string(g.order()) + ")");
    const std::size_t size = a.empty() ? 0 : to_array(a[0], at(p, 0)).size();
    std::vector<Perm> out;
    for (std::size_t e = 0; e < a.size(); ++e) out.push_back(to_indices(a[e], at(p, e), size));
    try {
      return GammaSet(g, out);
    } catch (const std::invalid_argument& e) {
      fail(p, e.what());
    }
  };
  try {
    if (j.contains("blocks")) {
      if (j.contains("action") || j.contains("section")) fail(path, "give either blocks or action with section");
      const Json& b = to_array(j["blocks"], at(path, "blocks"));
      std::vector<std::vector<std::size_t>> subs;
      for (std::size_t i = 0; i < b.size(); ++i) {
        auto h = to_indices(b[i], at(at(path, "blocks"), i), g.order());
        std::sort(h.begin(), h.end());
        if (!g.is_subgroup(h)) fail(at(at(path, "blocks"), i), "not a subgroup");
        subs.push_back(h);
      }
      d.system = blocks_system(g, subs, n);
    } else {
      d.system.places = perms(need(j, "action", path), at(path, "action"));
      d.system.section = to_indices(need(j, "section", path), at(path, "section"), d.system.places.size());
      d.system.modulus = n;
    }
    if (j.contains("ambient")) d.system.ambient = perms(j["ambient"], at(path, "ambient"));
    d.system.validate();
  } catch (const std::invalid_argument& e) {
    fail(path, e.what());
  }
  if (j.contains("allow_violations")) d.allow_violations = to_bool(j["allow_violations"], at(path, "allow_violations"));
  ConditionReport c = check_place_conditions(d.system);
  if (!d.allow_violations && !c.all())
    fail(path, std::string(c.stabilizers_covered ? "some group element fixes no dotted place" : "a stabilizer is not covered") +
                   "; set allow_violations for a negative control");
  return d;
}

template <class T>
const T& lookup(const std::map<std::string, T>& m, const Json& j, const std::string& path, const char* what) {
  const std::string name = to_name(j, path);
  auto it = m.find(name);
  if (it == m.end()) fail(path, std::string("unknown ") + what + " '" + name + "'");
  return it->second;
}

int to_degree(const Json& j, const std::string& path, int lo, int hi) {
  Int v = to_int(j, path);
  if (v < lo || v > hi) fail(path, "degree must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return static_cast<int>(to_ll(v));
}

// Checks names and parameter ranges; the run itself re-reads the validated parameters.
void check_operation(const Scenario& s, const Json& j, const std::string& path) {
  const std::string op = to_name(need(j, "op", path), at(path, "op"));
  auto module = [&] { lookup(s.modules, need(j, "module", path), at(path, "module"), "module"); };
  auto places = [&] { return lookup(s.places, need(j, "places", path), at(path, "places"), "place system"); };
  auto pair = [&] { lookup(s.pairs, need(j, "pair", path), at(path, "pair"), "pair"); };
  auto complex = [&] { lookup(s.complexes, need(j, "complex", path), at(path, "complex"), "complex"); };
  if (op == "place_conditions" || op == "level_sequence") {
    allow_keys(j, path, {"op", "verify", "places"});
    places();
  } else if (op == "psi") {
    allow_keys(j, path, {"op", "verify", "places", "module"});
    places();
    module();
  } else if (op == "ybar" || op == "sigma") {
    allow_keys(j, path, {"op", "verify", "places", "pair"});
    places();
    pair();
  } else if (op == "l_v") {
    allow_keys(j, path, {"op", "verify", "places", "pair", "place"});
    const PlaceDecl& p = places();
    pair();
    std::size_t v = to_index(need(j, "place", path), at(path, "place"), p.system.places.size());
    if (!p.system.in_section(v)) fail(at(path, "place"), "not a dotted place");
  } else if (op == "component_group") {
    allow_keys(j, path, {"op", "verify", "pair"});
    pair();
  } else if (op == "tate" || op == "cohomology") {
    allow_keys(j, path, {"op", "verify", "module", "degree"});
    module();
    to_degree(need(j, "degree", path), at(path, "degree"), op == "tate" ? -1 : 0, 3);
  } else if (op == "shapiro") {
    allow_keys(j, path, {"op", "verify", "module", "places", "degree"});
    module();
    places();
    to_degree(need(j, "degree", path), at(path, "degree"), -1, 3);
  } else if (op == "cech") {
    allow_keys(j, path, {"op", "verify", "module", "degree", "samples"});
    module();
    to_degree(need(j, "degree", path), at(path, "degree"), 0, 2);
    if (j.contains("samples") && to_int(j["samples"], at(path, "samples")) < 1) fail(at(path, "samples"), "must be positive");
  } else if (op == "hypercohomology") {
    allow_keys(j, path, {"op", "verify", "complex", "degree"});
    complex();
    to_degree(need(j, "degree", path), at(path, "degree"), 0, 3);
  } else if (op == "les") {
    allow_keys(j, path, {"op", "verify", "complex", "kind"});
    complex();
    const std::string k = to_name(need(j, "kind", path), at(path, "kind"));
    if (k != "first" && k != "second") fail(at(path, "kind"), "expected 'first' or 'second'");
  } else if (op == "dual_model") {
    allow_keys(j, path, {"op", "verify", "complex", "modulus", "degree"});
    complex();
    if (to_int(need(j, "modulus", path), at(path, "modulus")) < 1) fail(at(path, "modulus"), "must be positive");
    to_degree(need(j, "degree", path), at(path, "degree"), 0, 3);
  } else if (op == "ker1") {
    allow_keys(j, path, {"op", "verify", "complex", "degree", "family"});
    complex();
    to_degree(need(j, "degree", path), at(path, "degree"), 0, 3);
    const Json& fam = to_array(need(j, "family", path), at(path, "family"));
    for (std::size_t i = 0; i < fam.size(); ++i) {
      auto h = to_indices(fam[i], at(at(path, "family"), i), s.group->order());
      std::sort(h.begin(), h.end());
      if (!s.group->is_subgroup(h)) fail(at(at(path, "family"), i), "not a subgroup");
    }
  } else {
    fail(at(path, "op"), "unknown operation '" + op + "'");
  }
  if (j.contains("verify")) to_bool(j["verify"], at(path, "verify"));
}

}  // namespace

Json parse_scenario_text(const std::string& text) {
  if (std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
    return Json::object();
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    auto cut = what.find("syntax error");
    throw InputError("line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     (cut == std::string::npos ? what : what.substr(cut)));
  }
}

Scenario load_scenario(const Json& doc) {
  allow_keys(doc, "", {"name", "expect", "seed", "budget", "time_budget", "group", "modules", "places", "pairs",
                       "complexes", "operations"});
  Scenario s;
  if (doc.contains("name")) s.name = to_name(doc["name"], "name");
  if (doc.contains("expect")) {
    s.expect = to_name(doc["expect"], "expect");
    if (s.expect != "pass" && s.expect != "fail") fail("expect", "expected 'pass' or 'fail'");
  }
  if (doc.contains("seed")) {
    Int v = to_int(doc["seed"], "seed");
    if (v < 0 || v > Int(std::numeric_limits<std::uint64_t>::max())) fail("seed", "out of range");
    s.seed = static_cast<std::uint64_t>(v);
  }
  if (doc.contains("budget")) {
    s.budget = to_int(doc["budget"], "budget");
    if (s.budget < 1) fail("budget", "must be positive");
  }
  if (doc.contains("time_budget")) {
    Int t = to_int(doc["time_budget"], "time_budget");
    if (t < 1) fail("time_budget", "must be positive");
    s.time_budget = static_cast<double>(to_ll(t));
  }
  const bool needs_group = doc.contains("modules") || doc.contains("places") || doc.contains("pairs") ||
                           doc.contains("complexes") || doc.contains("operations");
  if (doc.contains("group")) s.group = load_group(doc["group"], "group");
  else if (needs_group) fail("group", "missing; declarations need a group");

  auto section = [&](const char* key) -> const Json& {
    static const Json empty = Json::object();
    if (!doc.contains(key)) return empty;
    if (!doc[key].is_object()) fail(key, "expected an object keyed by name");
    return doc[key];
  };
  for (const auto& [name, m] : section("modules").items())
    s.modules.emplace(name, load_module(m, at("modules", name), *s.group));
  for (const auto& [name, p] : section("places").items())
    s.places.emplace(name, load_places(p, at("places", name), *s.group));
  for (const auto& [name, p] : section("pairs").items()) {
    const std::string path = at("pairs", name);
    allow_keys(p, path, {"ybar", "y_basis"});
    const GammaModule& y = lookup(s.modules, need(p, "ybar", path), at(path, "ybar"), "module");
    IsogenyPair pair{y, to_columns(need(p, "y_basis", path), at(path, "y_basis"), y.num_generators())};
    try {
      validate_pair(pair);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
    s.pairs.emplace(name, pair);
  }
  for (const auto& [name, c] : section("complexes").items()) {
    const std::string path = at("complexes", name);
    allow_keys(c, path, {"degree0", "degree1", "map"});
    const GammaModule& t = lookup(s.modules, need(c, "degree0", path), at(path, "degree0"), "module");
    const GammaModule& u = lookup(s.modules, need(c, "degree1", path), at(path, "degree1"), "module");
    LatticeComplex cx{t, u, to_rows(need(c, "map", path), at(path, "map"), u.num_generators(), t.num_generators())};
    try {
      validate_complex(cx);
    } catch (const std::invalid_argument& e) {
      fail(path, e.what());
    }
    s.complexes.emplace(name, cx);
  }
  if (doc.contains("operations")) {
    const Json& ops = to_array(doc["operations"], "operations");
    for (std::size_t i = 0; i < ops.size(); ++i) {
      const std::string path = at("operations", i);
      check_operation(s, ops[i], path);
      s.operations.push_back({ops[i]["op"].get<std::string>(), ops[i],
                              ops[i].contains("verify") ? ops[i]["verify"].get<bool>() : true});
    }
  }
  return s;
}

Scenario load_scenario_text(const std::string& text) { return load_scenario(parse_scenario_text(text)); }

std::string serialize(const Json& doc) { return doc.dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Running

namespace {

struct Verdicts {
  Json list = Json::array();
  std::size_t passed = 0, failed = 0, out_of_budget = 0;

  void pass(const std::string& name) {
    list.push_back({{"name", name}, {"verdict", "pass"}});
    ++passed;
  }
  void fail(const std::string& name, Json witness) {
    list.push_back({{"name", name}, {"verdict", "fail"}, {"witness", std::move(witness)}});
    ++failed;
  }
  void skip(const std::string& name, const std::string& reason) {
    list.push_back({{"name", name}, {"verdict", "out-of-budget"}, {"reason", reason}});
    ++out_of_budget;
  }
  void check(const std::string& name, bool ok, const std::function<Json()>& witness) {
    if (ok) pass(name);
    else fail(name, witness());
  }
};

Json element(const std::string& group, const IntVector& x) { return {{"group", group}, {"element", vector_json(x)}}; }

// A canonical generator of the target outside the image.
Json missed_witness(const GroupMap& f, const std::string& group) {
  IntMatrix img = image_generators(f);
  for (std::size_t j = 0; j < f.target.num_factors(); ++j) {
    IntVector e = unit(f.target.num_factors(), j);
    if (!subgroup_contains(f.target, img, e)) return element(group, e);
  }
  return element(group, {});
}

Json kernel_witness(const GroupMap& f, const std::string& group) {
  IntMatrix k = kernel_generators(f);
  for (std::size_t j = 0; j < k.cols(); ++j)
    if (!is_zero(f.source.reduce(k.column(j)))) return element(group, f.source.reduce(k.column(j)));
  return element(group, {});
}

// Either an element whose image under out o in is nonzero, or an element of ker(out) outside im(in).
Json exactness_witness(const GroupMap& in, const GroupMap& out, const std::string& src, const std::string& mid) {
  for (std::size_t j = 0; j < in.source.num_factors(); ++j) {
    IntVector e = unit(in.source.num_factors(), j);
    if (!is_zero(out.target.reduce(apply_map(compose(out, in), e))))
      return {{"reason", "composite nonzero"}, {"group", src}, {"element", vector_json(e)}};
  }
  IntMatrix img = image_generators(in), ker = kernel_generators(out);
  for (std::size_t j = 0; j < ker.cols(); ++j)
    if (!subgroup_contains(in.target, img, ker.column(j)))
      return {{"reason", "kernel element outside the image"}, {"group", mid},
              {"element", vector_json(in.target.reduce(ker.column(j)))}};
  return Json::object();
}

Level level_of(const Scenario& s, const Json& params) {
  const PlaceDecl& d = s.places.at(params["places"].get<std::string>());
  return make_level(d.system, d.allow_violations);
}

Int param_int(const Json& params, const char* key) { return to_int(params[key], key); }
int param_degree(const Json& params) { return static_cast<int>(to_ll(param_int(params, "degree"))); }

struct Context {
  const Scenario& s;
  std::uint64_t seed;
  Int budget;
};

Json run_operation(const Context& ctx, const Operation& o, std::size_t index, Verdicts& v) {
  const Scenario& s = ctx.s;
  const Json& p = o.params;
  Json values = Json::object();
  const bool check = o.verify;
  auto module = [&] { return s.modules.at(p["module"].get<std::string>()); };
  auto pair = [&] { return s.pairs.at(p["pair"].get<std::string>()); };
  auto complex = [&] { return s.complexes.at(p["complex"].get<std::string>()); };

  if (o.op == "place_conditions") {
    ConditionReport c = check_place_conditions(s.places.at(p["places"].get<std::string>()).system);
    values["ramification_ok"] = c.ramification_ok;
    values["class_group_ok"] = c.class_group_ok;
    values["stabilizers_covered"] = c.stabilizers_covered;
    values["stabilizers_vacuous"] = c.stabilizers_vacuous;
    values["dotted_fixed"] = c.dotted_fixed;
    if (check) {
      auto ids = [](const std::vector<std::size_t>& xs) {
        Json a = Json::array();
        for (auto x : xs) a.push_back(std::to_string(x));
        return a;
      };
      v.check("stabilizers covered", c.stabilizers_covered, [&] { return Json{{"places", ids(c.stabilizer_violators)}}; });
      v.check("dotted fixed points", c.dotted_fixed, [&] { return Json{{"group_elements", ids(c.dotted_fixed_violators)}}; });
    }
  } else if (o.op == "level_sequence") {
    LevelSequence q = level_sequence(level_of(s, p));
    values["kernel"] = group_json(q.ses.a.group());
    values["middle"] = group_json(q.ses.b.group());
    values["quotient"] = group_json(q.ses.c.group());
    if (check) v.check("exact", q.exact, [&] { return Json{{"reason", q.failure}}; });
  } else if (o.op == "psi") {
    PsiReport r = psi_map(level_of(s, p), module());
    values["fixed_homs"] = group_json(r.fixed.group());
    values["fixed_homs_dotted"] = group_json(r.fixed_dotted.group());
    values["cocycles"] = group_json(r.cocycles.group());
    values["cocycles_dotted"] = group_json(r.cocycles_dotted.group());
    values["tate_minus_one"] = group_json(r.tate.group());
    if (check) {
      v.check("psi injective", is_injective(r.psi), [&] { return kernel_witness(r.psi, "fixed_homs"); });
      v.check("psi surjective", is_surjective(r.psi), [&] { return missed_witness(r.psi, "cocycles"); });
      v.check("inverse verified", r.inverse_verified, [&] { return Json{{"reason", "inverse does not compose to the identity"}}; });
      v.check("restricted psi onto section part", r.dotted_onto,
              [&] { return missed_witness(r.psi_dotted, "cocycles_dotted"); });
      v.check("onto Tate H^-1", r.tate_surjective, [&] { return missed_witness(r.to_tate, "tate_minus_one"); });
    }
  } else if (o.op == "ybar") {
    const IsogenyPair pr = pair();
    Level l = level_of(s, p);
    YbarGroup g = ybar_group(pr, l);
    values["group"] = group_json(g.group.group());
    values["whole"] = group_json(g.whole.group());
    values["y_part"] = group_json(g.y_part.group());
    if (check) {
      v.check("norm-killed part is the torsion", g.torsion_certified,
              [&] { return Json{{"reason", "torsion and norm-killed subgroups differ"},
                                {"torsion", group_json(g.whole.torsion().group())}}; });
      v.check("sequence exact", ybar_sequence_exact(pr, l, g), [&] { return Json{{"reason", "not exact at the middle"}}; });
      if (g.group.group().order() > ctx.budget) {
        v.skip("representatives on the section", "group order " + to_string(g.group.group().order()));
      } else {
        std::optional<IntVector> bad;
        g.group.group().for_each_element([&](const IntVector& cls) {
          IntVector rep;
          try {
            rep = g.dotted_representative(cls);
          } catch (const std::logic_error&) {
            bad = cls;
            return false;
          }
          bool ok = g.group.contains(rep) && g.group.classify(rep) == g.group.group().reduce(cls);
          for (std::size_t w = 0; w < l.places().size() && ok; ++w)
            if (!l.system.in_section(w))
              for (std::size_t i = 0; i < g.rank; ++i) ok = ok && rep[w * g.rank + i] == 0;
          if (!ok) bad = cls;
          return ok;
        });
        v.check("representatives on the section", !bad && g.dotted_certified,
                [&] { return element("group", bad.value_or(IntVector{})); });
      }
    }
  } else if (o.op == "sigma") {
    SigmaReport r = sigma_exactness(pair(), level_of(s, p), ctx.budget);
    values["global"] = group_json(r.global);
    values["locals"] = group_json(r.locals);
    values["target"] = group_json(r.target);
    values["kernel_order"] = int_json(r.kernel_order);
    values["image_order"] = int_json(r.image_order);
    if (check) {
      v.check("composite zero", r.composite_zero, [&] { return exactness_witness(r.localization, r.sigma, "global", "locals"); });
      v.check("image equals kernel", r.exact, [&] { return exactness_witness(r.localization, r.sigma, "global", "locals"); });
      if (r.out_of_budget) v.skip("confirmed by enumeration", "locals order " + to_string(r.locals.order()));
      else v.check("confirmed by enumeration", r.enumerated, [&] { return exactness_witness(r.localization, r.sigma, "global", "locals"); });
    }
  } else if (o.op == "l_v") {
    const IsogenyPair pr = pair();
    Level l = level_of(s, p);
    YbarGroup g = ybar_group(pr, l);
    const std::size_t place = static_cast<std::size_t>(to_ll(param_int(p, "place")));
    DecompositionData d = make_decomposition(l.places(), place);
    LvReport r = l_v(pr, l, g, d, check);
    values["local"] = group_json(r.local.group.group());
    values["map"] = rows_json(r.map.matrix);
    values["transversals_checked"] = std::to_string(r.transversals_checked);
    if (check) v.check("independent of the transversal", r.independent, [&] { return Json{{"reason", "two transversals give different maps"}}; });
  } else if (o.op == "component_group") {
    ComponentGroup c = component_group(pair(), ctx.budget);
    values["quotient"] = group_json(c.quotient.group());
    values["torsion"] = group_json(c.torsion);
    values["dual_order"] = int_json(c.dual.group.order());
    if (check) {
      if (c.torsion.order() > ctx.budget) v.skip("pairing nondegenerate on the left", "torsion order " + to_string(c.torsion.order()));
      else v.check("pairing nondegenerate on the left", c.left_nondegenerate, [&] { return Json{{"reason", "an element pairs trivially"}}; });
    }
  } else if (o.op == "tate") {
    values["group"] = group_json(tate_cohomology(module(), param_degree(p)).group());
  } else if (o.op == "cohomology") {
    values["group"] = group_json(group_cohomology(module(), param_degree(p)).group());
  } else if (o.op == "shapiro") {
    ShapiroDecomposition d = shapiro_decompose(s.places.at(p["places"].get<std::string>()).system.places, module(), param_degree(p));
    values["whole"] = group_json(d.whole.group());
    Json parts = Json::array();
    for (const auto& c : d.parts) parts.push_back(group_json(c.group()));
    values["parts"] = parts;
    if (check) v.check("bijective", d.bijective, [&] { return kernel_witness(d.forward, "whole"); });
  } else if (o.op == "cech") {
    const GammaModule m = module();
    const std::size_t k = static_cast<std::size_t>(param_degree(p));
    const std::size_t samples = p.contains("samples") ? static_cast<std::size_t>(to_ll(param_int(p, "samples"))) : 4;
    std::mt19937_64 rng(ctx.seed + index);
    std::uniform_int_distribution<int> entry(-5, 5);
    std::size_t bad = samples;
    CochainTable bad_table;
    for (std::size_t t = 0; t < samples && bad == samples; ++t) {
      CochainTable f(tuple_count(m.gamma(), k), IntVector(m.num_generators()));
      for (auto& x : f)
        for (auto& e : x) e = entry(rng);
      const std::size_t n = k + 1;
      if (!tables_equal(m, to_cech(m, group_differential(m, f, k), n + 1), cech_differential(m, to_cech(m, f, n), n))) {
        bad = t;
        bad_table = f;
      }
    }
    values["samples"] = std::to_string(samples);
    if (check)
      v.check("dictionary commutes with differentials", bad == samples, [&] {
        Json t = Json::array();
        for (const auto& x : bad_table) t.push_back(vector_json(x));
        return Json{{"sample", std::to_string(bad)}, {"cochain", t}};
      });
  } else if (o.op == "hypercohomology") {
    values["group"] = group_json(hypercohomology(complex(), param_degree(p)).group());
  } else if (o.op == "les") {
    LongExactReport r = les_check(complex(), p["kind"] == "first" ? LesKind::First : LesKind::Second);
    Json nodes = Json::array();
    for (const auto& n : r.nodes) nodes.push_back({{"name", n.name}, {"group", group_json(n.group)}});
    values["nodes"] = nodes;
    if (check)
      for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        if (!r.nodes[i].checked) continue;
        const std::string name = "exact at " + r.nodes[i].name;
        v.check(name, r.nodes[i].exact, [&] {
          if (i == 0) return kernel_witness(r.maps[0], r.nodes[0].name);
          return exactness_witness(r.maps[i - 1], r.maps[i], r.nodes[i - 1].name, r.nodes[i].name);
        });
      }
  } else if (o.op == "dual_model") {
    const LatticeComplex c = complex();
    DualModel d{c, param_int(p, "modulus")};
    DualModelCohomology h = dual_model_cohomology(d, param_degree(p));
    values["full"] = group_json(h.full.group());
    values["reduced"] = group_json(h.reduced.group());
    values["threshold"] = int_json(dual_model_threshold(c));
    if (check) {
      StabilizationAudit a = stabilization_audit(d);
      if (!a.above_threshold) {
        v.skip("stable under doubling", "modulus below the threshold " + to_string(a.threshold));
      } else {
        v.check("stable under doubling", a.passed(), [&] {
          Json degrees = Json::array();
          for (std::size_t i = 0; i < a.orders_equal.size(); ++i)
            if (!a.orders_equal[i] || !a.reduced_iso[i]) degrees.push_back(std::to_string(i));
          return Json{{"degrees", degrees}};
        });
      }
    }
  } else if (o.op == "ker1") {
    std::vector<std::vector<std::size_t>> family;
    for (const auto& h : p["family"]) {
      std::vector<std::size_t> sub;
      for (const auto& x : h) sub.push_back(static_cast<std::size_t>(to_ll(to_int(x, "family"))));
      std::sort(sub.begin(), sub.end());
      family.push_back(sub);
    }
    Ker1Locus k = ker1_locus(complex(), family, param_degree(p));
    values["global"] = group_json(k.global.group());
    values["group"] = group_json(k.group);
  }
  Json inputs = p;
  inputs.erase("op");
  inputs.erase("verify");
  return {{"index", std::to_string(index)}, {"op", o.op}, {"inputs", inputs}, {"values", values}, {"properties", v.list}};
}

}  // namespace

RunOutcome run_scenario(const Scenario& s, const RunOptions& options) {
  Context ctx{s, options.seed.value_or(s.seed), options.budget.value_or(s.budget)};
  Json results = Json::array();
  std::size_t passed = 0, failed = 0, oob = 0;
  for (std::size_t i = 0; i < s.operations.size(); ++i) {
    const Operation& o = s.operations[i];
    Verdicts v;
    try {
      results.push_back(run_operation(ctx, o, i, v));
    } catch (const std::invalid_argument& e) {
      throw InputError(at("operations", i) + " (" + o.op + "): " + e.what());
    }
    passed += v.passed;
    failed += v.failed;
    oob += v.out_of_budget;
    if (failed && options.fail_fast) break;
  }
  RunOutcome out;
  out.report = {{"scenario", s.name},
                {"seed", std::to_string(ctx.seed)},
                {"budget", to_string(ctx.budget)},
                {"results", results},
                {"summary", {{"passed", std::to_string(passed)}, {"failed", std::to_string(failed)},
                             {"out_of_budget", std::to_string(oob)}}},
                {"status", failed ? "fail" : "pass"}};
  out.exit_code = failed ? 1 : 0;
  return out;
}

// ---------------------------------------------------------------------------
// Generation

namespace {

Json module_json(const GammaModule& m) {
  Json act = Json::array();
  for (const auto& a : m.action()) act.push_back(rows_json(a));
  Json j = {{"action", act}};
  if (m.relations().cols()) j["relations"] = columns_json(m.relations());
  return j;
}

Json indices_json(const std::vector<std::size_t>& xs) {
  Json a = Json::array();
  for (auto x : xs) a.push_back(std::to_string(x));
  return a;
}

Int smallest_prime_factor(const Int& n) {
  for (Int p = 2; p * p <= n; ++p)
    if (n % p == 0) return p;
  return n;
}

}  // namespace

std::string generate_scenario(std::uint64_t seed, const GenerateBounds& b) {
  const GenerateBounds cap;
  if (b.max_group < 1 || b.max_group > cap.max_group) fail("max-group", "must lie in [1, 12]");
  if (b.max_rank < 1 || b.max_rank > cap.max_rank) fail("max-rank", "must lie in [1, 4]");
  if (b.max_places < 1 || b.max_places > cap.max_places) fail("max-places", "must lie in [1, 8]");
  if (b.max_modulus < 2 || b.max_modulus > cap.max_modulus) fail("max-modulus", "must lie in [2, 12]");
  if (b.negative_control && (b.max_group < 2 || b.max_places < 2))
    fail("negative-control", "needs max-group and max-places of at least 2");

  std::mt19937_64 rng(seed);
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

  std::vector<std::string> names;
  for (const char* n : {"1", "C2", "C3", "C4", "C2xC2", "C5", "C6", "S3", "C7", "C8", "D4", "C2xC4", "C9", "C3xC3",
                        "C10", "C12", "C2xC6"}) {
    FiniteGroup g = named_group(n);
    if (g.order() <= b.max_group && (!b.negative_control || g.order() >= 2)) names.push_back(n);
  }
  const std::string gname = names[pick(names.size())];
  FiniteGroup g = named_group(gname);

  std::vector<GammaModule> lattices;
  for (const auto& l : lattice_catalog(g))
    if (l.num_generators() <= b.max_rank) lattices.push_back(l);
  const GammaModule y = lattices[pick(lattices.size())];

  const Int n = 2 + Int(pick(static_cast<std::size_t>(to_ll(b.max_modulus)) - 1));
  const Int p = smallest_prime_factor(n);

  // Blocks: a fixed place first gives every element a fixed dotted place; the negative control instead uses one block
  // G/H with H proper, and no proper subgroup meets every conjugacy class.
  std::vector<std::vector<std::size_t>> subs = g.subgroups(), blocks;
  if (b.negative_control) {
    std::vector<std::vector<std::size_t>> proper;
    for (const auto& h : subs)
      if (h.size() < g.order() && g.order() / h.size() <= b.max_places) proper.push_back(h);
    if (proper.empty()) fail("negative-control", "no proper subgroup has index within max-places");
    blocks.push_back(proper[pick(proper.size())]);
  } else {
    blocks.push_back(whole_group(g));
    std::size_t used = 1;
    const std::size_t extra = pick(3);
    for (std::size_t t = 0; t < extra; ++t) {
      const auto& h = subs[pick(subs.size())];
      const std::size_t size = g.order() / h.size();
      if (used + size > b.max_places) continue;
      blocks.push_back(h);
      used += size;
    }
  }
  PlaceSystem sys = blocks_system(g, blocks, n);
  ConditionReport cond = check_place_conditions(sys);
  if (b.negative_control == cond.dotted_fixed) throw std::logic_error("generated place system has the wrong fixed-point status");

  Json blocks_json = Json::array();
  for (const auto& h : blocks) blocks_json.push_back(indices_json(h));
  const long long k = 2 + static_cast<long long>(pick(2));

  Json doc;
  doc["name"] = "generated-" + std::to_string(seed) + (b.negative_control ? "-negative" : "");
  doc["seed"] = std::to_string(seed);
  doc["expect"] = b.negative_control ? "fail" : "pass";
  doc["group"] = gname;
  doc["modules"] = {{"Ybar", module_json(y)},
                    {"A", {{"builtin", "trivial"}, {"modulus", to_string(p)}}}};
  Json places = {{"modulus", to_string(n)}, {"blocks", blocks_json}};
  if (b.negative_control) places["allow_violations"] = true;
  doc["places"] = {{"P", places}};
  doc["pairs"] = {{"X", {{"ybar", "Ybar"}, {"y_basis", columns_json(IntMatrix::identity(y.num_generators()).scaled(k))}}}};
  doc["complexes"] = {{"C", {{"degree0", "Ybar"}, {"degree1", "Ybar"},
                             {"map", rows_json(IntMatrix::identity(y.num_generators()).scaled(k))}}}};
  Json ops = Json::array();
  ops.push_back({{"op", "place_conditions"}, {"places", "P"}});
  ops.push_back({{"op", "level_sequence"}, {"places", "P"}});
  ops.push_back({{"op", "psi"}, {"places", "P"}, {"module", "A"}});
  ops.push_back({{"op", "ybar"}, {"places", "P"}, {"pair", "X"}});
  ops.push_back({{"op", "sigma"}, {"places", "P"}, {"pair", "X"}});
  ops.push_back({{"op", "component_group"}, {"pair", "X"}});
  ops.push_back({{"op", "tate"}, {"module", "Ybar"}, {"degree", std::to_string(static_cast<int>(pick(3)) - 1)}});
  ops.push_back({{"op", "hypercohomology"}, {"complex", "C"}, {"degree", std::to_string(1 + pick(2))}});
  ops.push_back({{"op", "les"}, {"complex", "C"}, {"kind", pick(2) ? "first" : "second"}});
  doc["operations"] = ops;
  return serialize(doc);
}

}  // namespace rif

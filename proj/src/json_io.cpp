#include "nilspace/json_io.hpp"

#include <regex>

#include "nilspace/error.hpp"

namespace nilspace {

namespace {

const Json& need(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Parse, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

long need_int(const Json& j, const char* what) {
  if (!j.is_number_integer()) fail(ErrorKind::Parse, std::string(what) + " must be an integer");
  return j.get<long>();
}

const Json& need_array(const Json& j, const char* what) {
  if (!j.is_array()) fail(ErrorKind::Parse, std::string(what) + " must be an array");
  return j;
}

Ring parse_ring(const std::string& s) {
  if (s == "integers" || s == "Z") return Ring::Integers;
  if (s == "residues" || s == "Z_m") return Ring::Residues;
  if (s == "rationals" || s == "reals" || s == "Q" || s == "R") return Ring::Rationals;
  if (s == "torus" || s == "circle" || s == "T") return Ring::Torus;
  fail(ErrorKind::Parse, "unknown group kind \"" + s + "\"");
}

Json spec_json(const GroupSpec& g) {
  Json j;
  j["kind"] = ring_name(g.kind);
  if (g.kind == Ring::Residues) j["modulus"] = g.modulus.get_si();
  j["rank"] = g.rank;
  return j;
}

Kinds parse_spec(const Json& j) {
  GroupSpec g;
  g.kind = parse_ring(need(j, "kind").get<std::string>());
  if (g.kind == Ring::Residues) g.modulus = need_int(need(j, "modulus"), "modulus");
  g.rank = j.contains("rank") ? int(need_int(j.at("rank"), "rank")) : 1;
  return g.coords();
}

// Slot position -> "(degree,j)".
std::vector<std::string> slot_names(const Signature& s) {
  std::vector<std::string> names(s.dim());
  for (int i = 1; i <= s.k; ++i) {
    auto slots = s.slots_of_degree(i);
    for (std::size_t j = 0; j < slots.size(); ++j)
      names[slots[j]] = "(" + std::to_string(i) + "," + std::to_string(j + 1) + ")";
  }
  return names;
}

}  // namespace

Json rational_json(const Rational& q) { return to_string(q); }

Rational parse_rational_json(const Json& j) {
  if (j.is_number_integer()) return Rational(Integer(std::to_string(j.get<long long>())));
  if (j.is_string()) return parse_rational(j.get<std::string>());
  fail(ErrorKind::Parse, "rationals are \"p/q\" strings or integers");
}

Json element_json(const Element& e) {
  Json j = Json::array();
  for (const auto& q : e) j.push_back(rational_json(q));
  return j;
}

Element parse_element(const Json& j) {
  if (!j.is_array()) return {parse_rational_json(j)};
  Element e;
  for (const auto& x : j) e.push_back(parse_rational_json(x));
  return e;
}

Json kinds_json(const Kinds& k) {
  bool uniform = true;
  for (const auto& c : k) uniform = uniform && c == k.front();
  if (!k.empty() && uniform) return spec_json(GroupSpec::from_coords(k));
  Json j = Json::array();
  for (const auto& c : k) j.push_back(spec_json(GroupSpec::from_coords({c})));
  return j;
}

Kinds parse_kinds(const Json& j) {
  if (j.is_object()) return parse_spec(j);
  Kinds k;
  for (const auto& x : need_array(j, "group")) {
    auto part = parse_spec(x);
    k.insert(k.end(), part.begin(), part.end());
  }
  return k;
}

Json signature_json(const Signature& s) {
  Json j;
  j["k"] = s.k;
  bool plain = true, finite = true;
  for (const auto& sl : s.slots) {
    plain = plain && (sl.kind.ring == Ring::Integers || sl.kind.ring == Ring::Rationals);
    finite = finite && sl.kind.ring == Ring::Residues;
  }
  if (plain) {
    std::vector<int> d(s.k, 0), c(s.k, 0);
    for (const auto& sl : s.slots) (sl.kind.ring == Ring::Integers ? d : c)[sl.degree - 1]++;
    j["discrete"] = d;
    j["continuous"] = c;
  } else if (finite) {
    Json m = Json::array();
    for (int i = 1; i <= s.k; ++i) {
      Json row = Json::array();
      for (auto idx : s.slots_of_degree(i)) row.push_back(s.slots[idx].kind.modulus.get_si());
      m.push_back(row);
    }
    j["moduli"] = m;
  } else {
    Json sl = Json::array();
    for (const auto& x : s.slots) {
      Json o = spec_json(GroupSpec::from_coords({x.kind}));
      o.erase("rank");
      o["degree"] = x.degree;
      sl.push_back(o);
    }
    j["slots"] = sl;
  }
  return j;
}

Signature parse_signature(const Json& jin) {
  const Json& j = jin.contains("signature") ? jin.at("signature") : jin;
  int k = int(need_int(need(j, "k"), "k"));
  if (j.contains("moduli")) {
    std::vector<std::vector<long>> m;
    for (const auto& row : need_array(j.at("moduli"), "moduli")) {
      m.emplace_back();
      for (const auto& x : need_array(row, "moduli row")) m.back().push_back(need_int(x, "modulus"));
    }
    return Signature::finite(k, m);
  }
  if (j.contains("slots")) {
    std::vector<Slot> slots;
    for (const auto& x : need_array(j.at("slots"), "slots")) {
      Json spec = x;
      spec["rank"] = 1;
      slots.push_back({int(need_int(need(x, "degree"), "degree")), parse_spec(spec).front()});
    }
    return Signature::from_slots(k, slots);
  }
  std::vector<int> d, c;
  for (const auto& x : need_array(need(j, "discrete"), "discrete")) d.push_back(int(need_int(x, "rank")));
  for (const auto& x : need_array(need(j, "continuous"), "continuous")) c.push_back(int(need_int(x, "rank")));
  return Signature::free(k, d, c);
}

Json morphism_json(const PolyMorphism& phi) {
  Json j;
  j["source"] = signature_json(phi.source);
  j["target"] = {{"group", kinds_json(phi.target)}, {"degree", phi.degree}};
  auto names = slot_names(phi.source);
  Json cs = Json::array();
  for (const auto& [m, a] : phi.coeffs) {
    Json idx = Json::object();
    for (std::size_t s = 0; s < m.size(); ++s)
      if (m[s] != 0) idx[names[s]] = m[s];
    cs.push_back({{"index", idx}, {"value", element_json(a)}});
  }
  j["coeffs"] = cs;
  return j;
}

PolyMorphism parse_morphism(const Json& j) {
  PolyMorphism phi;
  phi.source = parse_signature(need(j, "source"));
  const Json& t = need(j, "target");
  phi.target = parse_kinds(need(t, "group"));
  phi.degree = int(need_int(need(t, "degree"), "degree"));
  auto names = slot_names(phi.source);
  static const std::regex key(R"(\(\s*(\d+)\s*,\s*(\d+)\s*\))");
  for (const auto& c : need_array(need(j, "coeffs"), "coeffs")) {
    MultiIndex m(phi.source.dim(), 0);
    for (const auto& [name, e] : need(c, "index").items()) {
      std::smatch mt;
      if (!std::regex_match(name, mt, key)) fail(ErrorKind::Parse, "bad exponent key \"" + name + "\"");
      std::string norm = "(" + mt[1].str() + "," + mt[2].str() + ")";
      auto it = std::find(names.begin(), names.end(), norm);
      if (it == names.end()) fail(ErrorKind::Parse, "no source coordinate " + norm);
      long v = need_int(e, "exponent");
      if (v < 0) fail(ErrorKind::Parse, "negative exponent");
      m[it - names.begin()] = int(v);
    }
    Element a = parse_element(need(c, "value"));
    if (a.size() != phi.target.size()) fail(ErrorKind::Parse, "coefficient has the wrong length");
    if (phi.coeffs.count(m)) fail(ErrorKind::Parse, "repeated exponent");
    phi.coeffs[m] = a;
  }
  phi.normalize();
  return phi;
}

Json translation_json(const Translation& t) {
  Json cs = Json::array();
  for (const auto& c : t.components) cs.push_back(morphism_json(c));
  return {{"height", t.height}, {"components", cs}};
}

Translation parse_translation(const Json& j, const Signature& space, bool validate) {
  Translation t;
  t.space = space;
  t.height = int(need_int(need(j, "height"), "height"));
  if (t.height < 1 || t.height > space.k) fail(ErrorKind::Parse, "height out of range");
  for (const auto& c : need_array(need(j, "components"), "components")) t.components.push_back(parse_morphism(c));
  if (int(t.components.size()) != space.k - t.height + 1)
    fail(ErrorKind::Parse, "expected " + std::to_string(space.k - t.height + 1) + " components");
  if (validate)
    if (auto why = translation_violation(t)) fail(ErrorKind::Parse, "invalid translation: " + *why);
  return t;
}

Json candidate_json(const CongruenceCandidate& c) {
  Json j;
  j["base"] = signature_json(c.base);
  Json g = Json::array();
  for (const auto& t : c.generators) g.push_back(translation_json(t));
  j["generators"] = g;
  if (!c.induced()) {
    Json f = Json::object();
    for (int i = 1; i <= c.base.k; ++i) {
      Json idx = Json::array();
      for (std::size_t a = 0; a < c.generators.size(); ++a)
        if (c.level(a) >= i) idx.push_back(a);
      f[std::to_string(i)] = idx;
    }
    j["filtration"] = f;
  }
  Json d = Json::array();
  for (std::size_t a = 0; a < c.generators.size(); ++a)
    if (c.is_divisible(a)) d.push_back(a);
  if (!d.empty()) j["divisible"] = d;
  return j;
}

CongruenceCandidate parse_candidate(const Json& j) {
  CongruenceCandidate c;
  c.base = parse_signature(need(j, "base"));
  for (const auto& t : need_array(need(j, "generators"), "generators"))
    c.generators.push_back(parse_translation(t, c.base));
  std::size_t n = c.generators.size();
  auto index = [&](const Json& x) {
    long a = need_int(x, "generator index");
    if (a < 0 || std::size_t(a) >= n) fail(ErrorKind::Parse, "generator index out of range");
    return std::size_t(a);
  };
  if (j.contains("filtration")) {
    c.levels.assign(n, 0);
    for (const auto& [key, list] : j.at("filtration").items()) {
      int i = 0;
      try {
        i = std::stoi(key);
      } catch (...) {
        fail(ErrorKind::Parse, "filtration keys are degrees");
      }
      if (i < 1 || i > c.base.k) fail(ErrorKind::Parse, "filtration degree out of range");
      for (const auto& x : need_array(list, "filtration level")) {
        auto a = index(x);
        c.levels[a] = std::max(c.levels[a], i);
      }
    }
    for (auto& l : c.levels)
      if (l == 0) fail(ErrorKind::Parse, "every generator must lie in level 1");
  }
  if (j.contains("divisible")) {
    c.divisible.assign(n, false);
    for (const auto& x : need_array(j.at("divisible"), "divisible")) c.divisible[index(x)] = true;
  }
  if (auto why = candidate_violation(c)) fail(ErrorKind::Parse, *why);
  return c;
}

FilteredGroup parse_filtered_group(const Json& j) {
  if (j.contains("unitriangular")) {
    const Json& u = j.at("unitriangular");
    int size = int(need_int(need(u, "size"), "size")), m = int(need_int(need(u, "modulus"), "modulus"));
    if (size != 3) fail(ErrorKind::Parse, "only 3x3 unitriangular groups are supported");
    if (m < 2 || m > 16) fail(ErrorKind::Parse, "modulus out of range");
    return FilteredGroup::unitriangular(size, m);
  }
  const Json& t = need(j, "table");
  std::vector<std::vector<GroupElem>> table;
  for (const auto& row : need_array(need(t, "mul"), "mul")) {
    table.emplace_back();
    for (const auto& x : need_array(row, "mul row")) table.back().push_back(GroupElem(need_int(x, "element")));
  }
  std::vector<std::vector<GroupElem>> layers;
  for (const auto& l : need_array(need(t, "filtration"), "filtration")) {
    layers.emplace_back();
    for (const auto& x : need_array(l, "layer")) layers.back().push_back(GroupElem(need_int(x, "element")));
  }
  std::vector<std::string> labels;
  if (t.contains("labels"))
    for (const auto& x : t.at("labels")) labels.push_back(x.get<std::string>());
  try {
    return FilteredGroup(table, layers, labels);
  } catch (const Error& e) {
    fail(ErrorKind::Parse, e.what());
  }
}

Subgroup parse_subgroup(const FilteredGroup& g, const Json& gens) {
  std::vector<GroupElem> v;
  for (const auto& x : need_array(gens, "subgroup generators")) {
    long a = need_int(x, "element");
    if (a < 0 || std::size_t(a) >= g.order()) fail(ErrorKind::Parse, "element out of range");
    v.push_back(GroupElem(a));
  }
  return generated_subgroup(g, v);
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Complex parse_complex(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ErrorKind::Parse, "complex values are [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json signal_json(const SignalTable& f) {
  Json v = Json::array();
  for (const auto& c : f.values) v.push_back(complex_json(c));
  return {{"group", f.group.factors()}, {"values", v}};
}

SignalTable parse_signal(const Json& j) {
  std::vector<long> k;
  for (const auto& x : need_array(need(j, "group"), "group")) k.push_back(need_int(x, "invariant factor"));
  SignalTable f;
  try {
    f.group = FiniteAbelianGroup(k);
  } catch (const Error& e) {
    fail(ErrorKind::Parse, e.what());
  }
  for (const auto& x : need_array(need(j, "values"), "values")) f.values.push_back(parse_complex(x));
  if (f.values.size() != f.group.size())
    fail(ErrorKind::Parse, "expected " + std::to_string(f.group.size()) + " values");
  f.check_bounded();
  return f;
}

Nilcharacter parse_nilcharacter(const Json& j, Budget& budget) {
  if (j.contains("quadratic")) {
    const Json& q = j.at("quadratic");
    long N = need_int(need(q, "N"), "N"), a = need_int(need(q, "a"), "a");
    if (N < 1) fail(ErrorKind::Parse, "N must be positive");
    return quadratic_nilcharacter(N, a, budget);
  }
  int n = int(need_int(need(j, "n"), "n"));
  Signature target = parse_signature(need(j, "target"));
  std::vector<PolyMorphism> g;
  for (const auto& c : need_array(need(j, "components"), "components")) g.push_back(parse_morphism(c));
  CongruenceCandidate gamma;
  gamma.base = target;
  for (const auto& t : need_array(need(j, "gamma"), "gamma")) gamma.generators.push_back(parse_translation(t, target));
  if (j.contains("divisible")) {
    gamma.divisible.assign(gamma.generators.size(), false);
    for (const auto& x : j.at("divisible")) {
      long a = need_int(x, "generator index");
      if (a < 0 || std::size_t(a) >= gamma.generators.size()) fail(ErrorKind::Parse, "generator index out of range");
      gamma.divisible[a] = true;
    }
  }
  const Json& w = need(j, "window");
  Window window;
  if (w.contains("phase")) {
    window = phase_window(parse_element(w.at("phase")));
  } else if (w.contains("constant")) {
    window = constant_window(parse_complex(w.at("constant")));
  } else if (w.contains("table")) {
    std::map<Point, Complex> table;
    for (const auto& e : need_array(w.at("table"), "window table"))
      table[parse_point(need(e, "point"))] = parse_complex(need(e, "value"));
    window = table_window(std::move(table));
  } else {
    fail(ErrorKind::Parse, "window must be phase, constant or table");
  }
  Nilcharacter chi(n, target, std::move(g), std::move(gamma), std::move(window), budget);
  if (j.contains("lipschitz")) {
    const Json& l = j.at("lipschitz");
    std::vector<Point> pts;
    for (const auto& p : need_array(need(l, "points"), "points")) pts.push_back(parse_point(p));
    std::vector<std::vector<double>> metric;
    for (const auto& row : need_array(need(l, "metric"), "metric")) metric.push_back(row.get<std::vector<double>>());
    chi.declare_lipschitz(need(l, "constant").get<double>(), pts, metric);
  }
  return chi;
}

Json point_json(const Point& p) { return element_json(p); }
Point parse_point(const Json& j) { return parse_element(j); }

Json ft_report_json(const FtReport& r) {
  Json w = nullptr;
  if (r.witness) w = {{"x", point_json(r.witness->x)}, {"y", point_json(r.witness->y)}, {"i", r.witness->i}};
  return {{"fiber_transitive", r.fiber_transitive}, {"witness", w}};
}

Json axiom_report_json(const AxiomReport& r, const FiniteCubespace& space) {
  auto one = [&](const AxiomCheck& c) {
    Json w = Json::array();
    for (auto p : c.witness) w.push_back(space.label(p));
    Json o = {{"ok", c.ok}};
    if (!c.ok) o["witness"] = w, o["detail"] = c.detail;
    return o;
  };
  return {{"ergodicity", one(r.ergodicity)},
          {"composition", one(r.composition)},
          {"corner_completion", one(r.corner_completion)},
          {"uniqueness", one(r.uniqueness)}};
}

Json invariants_json(const std::vector<AbelianInvariants>& groups) {
  Json j = Json::array();
  for (const auto& g : groups) j.push_back(g.to_string());
  return j;
}

}  // namespace nilspace

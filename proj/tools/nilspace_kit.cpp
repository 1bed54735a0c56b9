#include <CLI11.hpp>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nilspace/corpus.hpp"
#include "nilspace/error.hpp"
#include "nilspace/json_io.hpp"

using namespace nilspace;
namespace fs = std::filesystem;

#ifndef NSK_GOLDEN_DIR
#define NSK_GOLDEN_DIR "tests/golden"
#endif

namespace {

enum Exit { kPass = 0, kFail = 1, kUsage = 2, kBudget = 3 };

struct Options {
  bool json = false;
  std::uint64_t budget = kDefaultBudget;
  int dim_cap = -1;
  unsigned seed = 1;
  std::string out;
};

Json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Parse, "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::Parse, path + ": " + e.what());
  }
}

// Top-level fields in insertion order; nested values on one line.
void print_table(const Json& r, std::ostream& os) {
  std::size_t w = 0;
  for (const auto& [k, v] : r.items()) w = std::max(w, k.size());
  for (const auto& [k, v] : r.items()) {
    std::string s = v.is_string() ? v.get<std::string>() : v.dump();
    if (s.size() > 160) s = s.substr(0, 157) + "...";
    os << std::string(w - k.size(), ' ') << k << "  " << s << "\n";
  }
}

int emit(Json report, const Options& o, Budget& budget, double seconds) {
  report["budget"] = {{"limit", budget.limit}, {"used", budget.used}};
  report["timing"] = {{"seconds", seconds}};
  std::string status = report.value("status", "fail");
  if (!o.out.empty()) {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "cannot write " << o.out << "\n";
      return kUsage;
    }
    f << report.dump(2) << "\n";
  }
  if (o.json || !isatty(fileno(stdout)))
    std::cout << report.dump(2) << "\n";
  else
    print_table(report, std::cout);
  return status == "pass" ? kPass : kFail;
}

Json status(bool ok) { return ok ? "pass" : "fail"; }

Json labels(const FiniteCubespace& s, const std::vector<PointId>& q) {
  Json j = Json::array();
  for (auto p : q) j.push_back(s.label(p));
  return j;
}

Json points_json(const std::vector<Point>& ps) {
  Json j = Json::array();
  for (const auto& p : ps) j.push_back(point_json(p));
  return j;
}

// First failing axiom as the witness.
Json axiom_witness(const AxiomReport& r, const FiniteCubespace& s) {
  std::pair<const char*, const AxiomCheck*> order[] = {{"ergodicity", &r.ergodicity},
                                                        {"composition", &r.composition},
                                                        {"corner_completion", &r.corner_completion},
                                                        {"uniqueness", &r.uniqueness}};
  for (auto [name, c] : order)
    if (!c->ok) return {{"axiom", name}, {"cube", labels(s, c->witness)}, {"detail", c->detail}};
  return nullptr;
}

std::unique_ptr<FiniteCubespace> load_cubespace(const Json& j, Budget& budget, int dim_cap) {
  if (j.contains("candidate")) {
    auto c = parse_candidate(j.at("candidate"));
    auto img = orbit_image_cubespace(c, budget, dim_cap < 0 ? c.base.k + 1 : dim_cap);
    return std::make_unique<MaterializedCubespace>(*img);
  }
  if (j.contains("group")) return std::make_unique<GroupNilspace>(parse_filtered_group(j.at("group")));
  if (j.contains("cubes")) {
    const Json& p = j.at("points");
    std::vector<std::string> names;
    std::size_t n = 0;
    if (p.is_array()) {
      for (const auto& x : p) names.push_back(x.is_string() ? x.get<std::string>() : x.dump());
      n = names.size();
    } else {
      n = p.get<std::size_t>();
    }
    int cap = 0;
    for (const auto& [key, list] : j.at("cubes").items()) cap = std::max(cap, std::stoi(key));
    auto m = std::make_unique<MaterializedCubespace>(n, j.at("step").get<int>(), cap);
    for (const auto& [key, list] : j.at("cubes").items()) {
      std::size_t len = std::size_t(1) << std::stoi(key);
      for (const auto& q : list) {
        auto v = q.get<std::vector<PointId>>();
        if (v.size() != len) fail(ErrorKind::Parse, "cube of dimension " + key + " needs " + std::to_string(len) + " values");
        for (auto x : v)
          if (x >= n) fail(ErrorKind::Parse, "cube value out of range");
        m->add(v);
      }
    }
    if (!names.empty()) m->set_labels(names);
    return m;
  }
  Signature sig = parse_signature(j);
  if (j.contains("box")) return std::make_unique<ProductNilspace>(ProductNilspace::integer_box(sig, j.at("box").get<int>()));
  if (!sig.is_finite()) fail(ErrorKind::Parse, "verify-nilspace needs a finite space or a box");
  return std::make_unique<ProductNilspace>(sig);
}

Json cmd_verify_nilspace(const Json& in, const Options& o, Budget& budget) {
  auto s = load_cubespace(in, budget, o.dim_cap);
  int d = o.dim_cap >= 0 ? o.dim_cap : s->step() + 1;
  if (auto* m = dynamic_cast<MaterializedCubespace*>(s.get())) d = std::min(d, m->cap());
  auto r = verify_nilspace_axioms(*s, d, budget);
  return {{"command", "verify-nilspace"},
          {"status", status(r.ok())},
          {"witness", axiom_witness(r, *s)},
          {"points", s->size()},
          {"step", s->step()},
          {"dimension", d},
          {"axioms", axiom_report_json(r, *s)}};
}

Json cmd_verify_translation(const Json& in, const Options&, Budget& budget) {
  Signature space = parse_signature(in.at("space"));
  Json r = {{"command", "verify-translation"}};
  if (in.contains("map")) {
    if (!space.is_finite()) fail(ErrorKind::Parse, "a point map needs a finite space");
    ProductNilspace X(space);
    auto f = in.at("map").get<std::vector<PointId>>();
    if (f.size() != X.size()) fail(ErrorKind::Parse, "map must list one image per point");
    for (auto x : f)
      if (x >= X.size()) fail(ErrorKind::Parse, "map value out of range");
    int s = in.value("height", 1);
    auto a = is_translation_bruteforce(X, f, s, budget);
    r["status"] = status(a.ok);
    r["witness"] = a.ok ? Json(nullptr) : Json({{"cube", labels(X, a.witness_cube)}});
    if (a.ok)
      if (auto t = translation_from_map(X, f, s)) r["translation"] = translation_json(*t);
    r["height"] = s;
    return r;
  }
  Translation t = parse_translation(in.at("translation"), space, false);
  auto why = translation_violation(t);
  Json w = nullptr;
  if (why) {
    w = {{"reason", *why}};
    if (space.is_finite()) {
      ProductNilspace X(space);
      auto a = is_translation_bruteforce(X, permutation_of(t, X), t.height, budget);
      if (!a.ok) w["cube"] = labels(X, a.witness_cube);
    }
  }
  r["status"] = status(!why);
  r["witness"] = w;
  r["height"] = t.height;
  if (!why) r["natural_height"] = natural_height(t);
  return r;
}

Json cmd_taylor(const Json& in, const Options&, Budget&) {
  Signature src = parse_signature(in.at("source"));
  Kinds target = parse_kinds(in.at("target").at("group"));
  int t = in.at("target").at("degree").get<int>();
  int side = in.value("side", t + 2);
  auto box = box_points(src.dim(), side);
  const Json& vals = in.at("values");
  if (vals.size() != box.size())
    fail(ErrorKind::Parse, "expected " + std::to_string(box.size()) + " values over the box");
  std::map<Point, Element> table;
  for (std::size_t i = 0; i < box.size(); ++i) {
    Element e = parse_element(vals[i]);
    if (e.size() != target.size()) fail(ErrorKind::Parse, "value has the wrong length");
    table[box[i]] = e;
  }
  auto f = [&](const Point& x) {
    auto it = table.find(x);
    if (it == table.end()) fail(ErrorKind::Parse, "no value at " + point_to_string(x));
    return it->second;
  };
  auto r = taylor_decompose_checked(src, target, t, f, side);
  Json out = {{"command", "taylor"}, {"status", status(r.morphism.has_value())}};
  if (r.morphism) {
    out["witness"] = nullptr;
    out["morphism"] = morphism_json(*r.morphism);
  } else {
    out["witness"] = {{"point", point_json(r.mismatch)}, {"residual", element_json(r.residual)}};
  }
  return out;
}

Json cmd_lift(const Json& in, const Options&, Budget&) {
  auto phi = parse_morphism(in.contains("morphism") ? in.at("morphism") : in);
  if (auto why = morphism_violation(phi))
    return {{"command", "lift"}, {"status", "fail"}, {"witness", {{"reason", *why}}}};
  auto lifted = lift_morphism(phi);
  auto why = morphism_violation(lifted);
  Json r = {{"command", "lift"}, {"status", status(!why)}, {"witness", why ? Json({{"reason", *why}}) : Json(nullptr)}};
  r["morphism"] = morphism_json(lifted);
  return r;
}

Json cmd_quotient(const Json& in, const Options& o, Budget& budget) {
  auto c = parse_candidate(in.contains("candidate") ? in.at("candidate") : in);
  int cap = o.dim_cap >= 0 ? o.dim_cap : c.base.k + 1;
  auto ft = check_fiber_transitive(c, budget);
  Json r = {{"command", "quotient"}, {"status", status(ft.fiber_transitive)}};
  Json fj = ft_report_json(ft);
  r["fiber_transitive"] = fj["fiber_transitive"];
  r["witness"] = fj["witness"];
  if (!ft.fiber_transitive) return r;
  auto q = quotient(c, budget, cap);
  r["structure_groups"] = invariants_json(q.structure_groups);
  r["finite"] = q.finite;
  if (q.finite) {
    r["representatives"] = points_json(q.representatives);
    if (q.period) r["period"] = q.period;
  }
  if (in.contains("compare") && q.cubespace) {
    Signature other = parse_signature(in.at("compare"));
    ProductNilspace target(other);
    auto iso = find_isomorphism(*q.cubespace, target, cap, budget);
    r["compare"] = signature_json(other);
    r["isomorphic"] = iso.has_value();
    if (!iso) r["status"] = "fail", r["witness"] = {{"reason", "no isomorphism up to dimension " + std::to_string(cap)}};
  }
  return r;
}

Json cmd_closure(const Json& in, const Options& o, Budget& budget) {
  auto c = parse_candidate(in.contains("candidate") ? in.at("candidate") : in);
  Json r = {{"command", "closure"}};
  if (c.base.is_finite()) {
    auto ft = check_fiber_transitive(c, budget);
    if (!ft.fiber_transitive) {
      r["status"] = "fail";
      r["witness"] = ft_report_json(ft)["witness"];
      r["detail"] = "the closure is defined for fiber-transitive groups";
      return r;
    }
    auto cl = fiber_transitive_closure(c, budget);
    int cap = o.dim_cap >= 0 ? o.dim_cap : c.base.k;
    bool eq = filtrations_equivalent(c, cl, budget, cap);
    r["status"] = status(eq);
    r["witness"] = eq ? Json(nullptr) : Json({{"reason", "quotients differ up to dimension " + std::to_string(cap)}});
    r["closure"] = candidate_json(cl);
    r["closure_order"] = fiber_transitive_closure_elements(c, budget).size();
    r["equivalent"] = eq;
    return r;
  }
  auto e = continuous_closure_embed(c, budget);
  bool ok = e.injective && e.sample_agrees;
  r["status"] = status(ok);
  r["witness"] = ok ? Json(nullptr) : Json({{"injective", e.injective}, {"sample_agrees", e.sample_agrees}});
  r["closure_space"] = signature_json(e.closure);
  Json iota = Json::array();
  for (const auto& t : e.iota) iota.push_back(translation_json(t));
  r["iota"] = iota;
  r["representatives"] = points_json(e.representatives);
  r["images"] = points_json(e.images);
  return r;
}

struct PairInput {
  FilteredGroup g;
  Subgroup K, Gamma;
};

PairInput load_pair(const Json& in) {
  PairInput p;
  p.g = parse_filtered_group(in.at("group"));
  p.K = parse_subgroup(p.g, in.at("K"));
  p.Gamma = parse_subgroup(p.g, in.at("Gamma"));
  return p;
}

Json nilpair_json(const NilpairReport& r, const FilteredGroup& g) {
  Json w = nullptr;
  if (r.witness) w = {{"x", g.label(r.witness->x)}, {"i", r.witness->i}};
  return {{"holds", r.holds}, {"witness", w}};
}

Json cmd_nilpair(const Json& in, const Options&, Budget&) {
  auto p = load_pair(in);
  auto a = nilpair_condition(p.g, p.K, p.Gamma, 1), b = nilpair_condition(p.g, p.K, p.Gamma, 2);
  bool ok = a.holds && b.holds;
  Json j = nilpair_json(a, p.g), k = nilpair_json(b, p.g);
  return {{"command", "nilpair"},
          {"status", status(ok)},
          {"witness", !a.holds ? Json({{"condition", 1}, {"x", j["witness"]["x"]}, {"i", j["witness"]["i"]}})
                      : !b.holds ? Json({{"condition", 2}, {"x", k["witness"]["x"]}, {"i", k["witness"]["i"]}})
                                 : Json(nullptr)},
          {"K_order", p.K.size()},
          {"Gamma_order", p.Gamma.size()},
          {"condition_i", j},
          {"condition_ii", k},
          {"conditions_agree", a.holds == b.holds}};
}

Json cmd_doublecoset(const Json& in, const Options& o, Budget& budget) {
  auto p = load_pair(in);
  int cap = o.dim_cap >= 0 ? o.dim_cap : p.g.degree() + 1;
  DoubleCosetSpace D(p.g, p.K, p.Gamma, budget, cap);
  auto ax = verify_nilspace_axioms(D, cap, budget);
  Json reps = Json::array(), counts = Json::array();
  for (PointId x = 0; x < D.size(); ++x) reps.push_back(D.label(x));
  for (int n = 0; n <= cap; ++n) counts.push_back(enumerate_cubes(D, n, budget).count());
  return {{"command", "doublecoset"},
          {"status", status(ax.ok())},
          {"witness", axiom_witness(ax, D)},
          {"points", D.size()},
          {"representatives", reps},
          {"groupable", D.groupable()},
          {"cube_counts", counts},
          {"axioms", axiom_report_json(ax, D)}};
}

Json cmd_stabilizer(const Json& in, const Options& o, Budget& budget) {
  Signature sig = parse_signature(in);
  std::optional<Point> f0;
  if (in.contains("base_point")) f0 = parse_point(in.at("base_point"));
  auto r = stabilizer_representation(sig, budget, o.dim_cap, f0);
  Json w = nullptr;
  if (!r.ok()) {
    ProductNilspace X(sig);
    w = {{"bijective", r.bijective},
         {"cubes_forward", r.cubes_forward},
         {"cubes_backward", r.cubes_backward},
         {"equivariant", r.equivariant},
         {"cube", labels(X, r.witness)}};
  }
  return {{"command", "stabilizer"},
          {"status", status(r.ok())},
          {"witness", w},
          {"tran_order", r.tran_order},
          {"stabilizer_order", r.stabilizer_order},
          {"cosets", r.cosets},
          {"points", r.points},
          {"dim", r.dim},
          {"cube_counts", r.cube_counts}};
}

Json cmd_gowers(const Json& in, int d, const Options&, Budget& budget) {
  auto f = parse_signal(in);
  double n = gowers_norm(f, d, budget);
  return {{"command", "gowers"}, {"status", "pass"}, {"norm", n}, {"d", d}, {"bounded", f.bounded},
          {"kernel", kernel_name(active_kernel())}};
}

Json cmd_correlate(const Json& sig, const Json& chij, const Options&, Budget& budget) {
  auto f = parse_signal(sig);
  auto chi = parse_nilcharacter(chij, budget);
  auto s = natural_surjection(f.group);
  Json r = {{"command", "correlate"}, {"status", "pass"}, {"correlation", correlation(f, chi, s)}};
  if (auto why = chi.lipschitz_violation()) r["status"] = "fail", r["witness"] = {{"lipschitz", *why}};
  return r;
}

Json cmd_examples(const std::string& golden, const std::string& write_dir) {
  Json results = Json::object();
  bool all = true;
  Json first = nullptr;
  for (const auto& [name, j] : example_corpus()) {
    std::string text = j.dump(2) + "\n";
    if (!write_dir.empty()) {
      fs::create_directories(write_dir);
      std::ofstream(fs::path(write_dir) / (name + ".json")) << text;
    }
    std::ifstream g(fs::path(golden) / (name + ".json"));
    std::string want;
    bool found = static_cast<bool>(g);
    if (found) want.assign(std::istreambuf_iterator<char>(g), {});
    bool same = found && want == text;
    if (!same && first.is_null()) {
      first = {{"example", name}};
      if (!found) {
        first["reason"] = "missing golden file";
      } else {
        std::istringstream a(want), b(text);
        std::string la, lb;
        int line = 1;
        while (std::getline(a, la) && std::getline(b, lb) && la == lb) ++line;
        first["line"] = line;
        first["golden"] = la;
        first["regenerated"] = lb;
      }
    }
    all = all && same;
    results[name] = same ? "match" : (found ? "differs" : "missing");
  }
  return {{"command", "examples"}, {"status", status(all)}, {"witness", first}, {"golden", golden}, {"examples", results}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nilspace-kit: exact nilspace computations and Gowers-norm measurements"};
  app.require_subcommand(1, 1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.json, "JSON output even on a terminal");
  app.add_option("--budget", o.budget, "enumeration budget")->check(CLI::PositiveNumber);
  app.add_option("--dim-cap", o.dim_cap, "cube dimension cap")->check(CLI::NonNegativeNumber);
  app.add_option("--seed", o.seed, "seed for randomized runs");
  app.add_option("--out", o.out, "also write the JSON report here");

  std::string input, second, golden = NSK_GOLDEN_DIR, write_dir;
  int d = 2;
  auto single = [&](const char* name, const char* help) {
    auto* s = app.add_subcommand(name, help);
    s->add_option("input", input, "JSON input")->required()->check(CLI::ExistingFile);
    return s;
  };
  auto* vn = single("verify-nilspace", "check the nilspace axioms on a finite cubespace");
  auto* vt = single("verify-translation", "check a translation or a point map");
  auto* ty = single("taylor", "Taylor decomposition of a function table");
  auto* lf = single("lift", "lift a morphism to free coefficients");
  auto* qu = single("quotient", "quotient by a translation group");
  auto* cl = single("closure", "fiber-transitive or continuous closure");
  auto* np = single("nilpair", "nilpair conditions for K and Gamma");
  auto* dc = single("doublecoset", "double-coset nilspace K\\G/Gamma");
  auto* st = single("stabilizer", "stabilizer representation of a finite product nilspace");
  auto* gw = single("gowers", "Gowers uniformity norm of a signal");
  gw->add_option("-d", d, "norm degree")->check(CLI::PositiveNumber);
  auto* co = app.add_subcommand("correlate", "correlation of a signal with a nilcharacter");
  co->add_option("signal", input, "signal JSON")->required()->check(CLI::ExistingFile);
  co->add_option("nilcharacter", second, "nilcharacter JSON")->required()->check(CLI::ExistingFile);
  auto* ex = app.add_subcommand("examples", "regenerate the example corpus and diff against the goldens");
  ex->add_option("--golden", golden, "golden directory");
  ex->add_option("--write", write_dir, "write regenerated files here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kUsage;
  }

  Budget budget{o.budget};
  auto t0 = std::chrono::steady_clock::now();
  auto seconds = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };
  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    Json report;
    if (ex->parsed()) {
      report = cmd_examples(golden, write_dir);
    } else if (co->parsed()) {
      report = cmd_correlate(read_json(input), read_json(second), o, budget);
    } else {
      Json in = read_json(input);
      if (vn->parsed()) report = cmd_verify_nilspace(in, o, budget);
      else if (vt->parsed()) report = cmd_verify_translation(in, o, budget);
      else if (ty->parsed()) report = cmd_taylor(in, o, budget);
      else if (lf->parsed()) report = cmd_lift(in, o, budget);
      else if (qu->parsed()) report = cmd_quotient(in, o, budget);
      else if (cl->parsed()) report = cmd_closure(in, o, budget);
      else if (np->parsed()) report = cmd_nilpair(in, o, budget);
      else if (dc->parsed()) report = cmd_doublecoset(in, o, budget);
      else if (st->parsed()) report = cmd_stabilizer(in, o, budget);
      else if (gw->parsed()) report = cmd_gowers(in, d, o, budget);
    }
    return emit(std::move(report), o, budget, seconds());
  } catch (const Error& e) {
    int code = e.kind() == ErrorKind::BudgetExceeded ? kBudget : e.kind() == ErrorKind::Unsupported ? kFail : kUsage;
    Json r = {{"command", cmd},
              {"status", e.kind() == ErrorKind::Unsupported ? "unsupported" : "error"},
              {"error", {{"kind", error_kind_name(e.kind())}, {"message", e.what()}}}};
    emit(r, o, budget, seconds());
    return code;
  } catch (const Json::exception& e) {
    Json r = {{"command", cmd}, {"status", "error"}, {"error", {{"kind", "Parse"}, {"message", e.what()}}}};
    emit(r, o, budget, seconds());
    return kUsage;
  }
}

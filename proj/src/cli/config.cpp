#include "agebranch/cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

#include "agebranch/error.hpp"
#include "agebranch/format.hpp"

namespace agebranch::cli {

using nlohmann::json;
using namespace agebranch::model;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Config, (path.empty() ? std::string("<root>") : path) + ": " + what);
}

// Cursor into the document that remembers its dotted path.
class Node {
 public:
  Node(const json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return *j_; }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) const {
    if (!has(key)) fail(child(key), "missing");
    return Node((*j_)[key], child(key));
  }
  std::optional<Node> find(const std::string& key) const {
    if (!has(key)) return std::nullopt;
    return Node((*j_)[key], child(key));
  }
  Node item(std::size_t i) const { return Node((*j_)[i], path_ + "[" + std::to_string(i) + "]"); }

  void object(std::initializer_list<const char*> allowed) const {
    if (!j_->is_object()) fail(path_, "expected an object");
    for (auto it = j_->begin(); it != j_->end(); ++it) {
      if (std::none_of(allowed.begin(), allowed.end(),
                       [&](const char* k) { return it.key() == k; }))
        fail(child(it.key()), "unknown key");
    }
  }

  double number() const {
    if (!j_->is_number()) fail(path_, "expected a number");
    return j_->get<double>();
  }
  double positive() const {
    const double v = number();
    if (!(v > 0.0)) fail(path_, "must be positive, got " + fmt17(v));
    return v;
  }
  std::uint64_t count() const {
    if (j_->is_number_unsigned()) return j_->get<std::uint64_t>();
    if (j_->is_number_integer() && j_->get<std::int64_t>() >= 0) return j_->get<std::uint64_t>();
    fail(path_, "expected a nonnegative integer");
  }
  std::string string() const {
    if (!j_->is_string()) fail(path_, "expected a string");
    return j_->get<std::string>();
  }
  std::size_t size() const {
    if (!j_->is_array()) fail(path_, "expected an array");
    return j_->size();
  }
  std::vector<double> numbers() const {
    std::vector<double> out(size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = item(i).number();
    return out;
  }

 private:
  std::string child(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* j_;
  std::string path_;
};

// Runs a model constructor and re-labels its error with the config path.
template <class F>
auto build(const Node& n, F&& make) {
  try {
    return make();
  } catch (const Error& e) {
    fail(n.path(), e.what());
  }
}

ScalarField parse_field(const Node& n) {
  if (n.raw().is_number()) return ScalarField::constant(n.number());
  n.object({"type", "value", "knots"});
  const std::string type = n.at("type").string();
  if (type == "constant") {
    if (n.has("knots")) fail(n.path() + ".knots", "unknown key for a constant field");
    return ScalarField::constant(n.at("value").number());
  }
  if (type == "piecewise_linear") {
    if (n.has("value")) fail(n.path() + ".value", "unknown key for a piecewise_linear field");
    const Node k = n.at("knots");
    std::vector<Knot> knots;
    for (std::size_t i = 0; i < k.size(); ++i) {
      const auto xy = k.item(i).numbers();
      if (xy.size() != 2) fail(k.item(i).path(), "expected [x, value]");
      knots.push_back({xy[0], xy[1]});
    }
    if (knots.empty()) fail(k.path(), "needs at least one knot");
    return build(n, [&] { return ScalarField::piecewise_linear(knots); });
  }
  fail(n.path() + ".type", "unknown field type '" + type + "' (constant, piecewise_linear)");
}

json field_json(const ScalarField& f) {
  if (auto c = std::get_if<ScalarField::Constant>(&f.rep()))
    return {{"type", "constant"}, {"value", c->value}};
  json knots = json::array();
  for (const auto& k : std::get<ScalarField::PiecewiseLinear>(f.rep()).knots)
    knots.push_back({k.x, k.value});
  return {{"type", "piecewise_linear"}, {"knots", knots}};
}

LifespanLaw parse_lifespan(const Node& n) {
  n.object({"type", "rate", "shape", "scale", "lo", "hi"});
  const std::string type = n.at("type").string();
  auto only = [&](std::initializer_list<const char*> keys) {
    for (const char* k : {"rate", "shape", "scale", "lo", "hi"}) {
      if (n.has(k) && std::find_if(keys.begin(), keys.end(), [&](const char* a) {
                        return std::string(a) == k;
                      }) == keys.end())
        fail(n.path() + "." + k, "unknown key for a " + type + " lifespan");
    }
  };
  if (type == "exponential") {
    only({"rate"});
    return build(n, [&] { return LifespanLaw::exponential(n.at("rate").positive()); });
  }
  if (type == "gamma") {
    only({"shape", "scale"});
    return build(n, [&] {
      return LifespanLaw::gamma(n.at("shape").positive(), n.at("scale").positive());
    });
  }
  if (type == "uniform") {
    only({"lo", "hi"});
    return build(n, [&] { return LifespanLaw::uniform(n.at("lo").number(), n.at("hi").number()); });
  }
  fail(n.path() + ".type", "unknown lifespan type '" + type + "' (exponential, gamma, uniform)");
}

json lifespan_json(const LifespanLaw& g) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LifespanLaw::Exponential>)
          return {{"type", "exponential"}, {"rate", v.rate}};
        else if constexpr (std::is_same_v<T, LifespanLaw::Gamma>)
          return {{"type", "gamma"}, {"shape", v.shape}, {"scale", v.scale}};
        else
          return {{"type", "uniform"}, {"lo", v.lo}, {"hi", v.hi}};
      },
      g.rep());
}

OffspringLaw parse_offspring(const Node& n) {
  const std::string type = n.at("type").string();
  if (type == "zero_two") {
    n.object({"type", "p2"});
    return OffspringLaw::zero_two(parse_field(n.at("p2")));
  }
  if (type == "poisson") {
    n.object({"type", "mean"});
    return OffspringLaw::poisson(parse_field(n.at("mean")));
  }
  if (type == "table") {
    n.object({"type", "probabilities"});
    const auto p = n.at("probabilities").numbers();
    if (p.empty()) fail(n.path() + ".probabilities", "must not be empty");
    return build(n, [&] { return OffspringLaw::table(p); });
  }
  fail(n.path() + ".type", "unknown offspring type '" + type + "' (zero_two, poisson, table)");
}

json offspring_json(const OffspringLaw& o) {
  return std::visit(
      [](const auto& v) -> json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, OffspringLaw::ZeroTwo>)
          return {{"type", "zero_two"}, {"p2", field_json(v.p2)}};
        else if constexpr (std::is_same_v<T, OffspringLaw::PoissonCount>)
          return {{"type", "poisson"}, {"mean", field_json(v.mean)}};
        else
          return {{"type", "table"}, {"probabilities", v.probabilities}};
      },
      o.rep());
}

ImmigrationLaw parse_immigration(const Node& n) {
  n.object({"rate", "cluster"});
  const double rate = n.at("rate").positive();
  const Node c = n.at("cluster");
  const std::string type = c.at("type").string();
  if (type == "singleton") {
    c.object({"type", "lifespan"});
    return build(n, [&] {
      return ImmigrationLaw(rate, ImmigrationLaw::Singleton{parse_lifespan(c.at("lifespan"))});
    });
  }
  if (type == "iid") {
    c.object({"type", "size_probabilities", "lifespan"});
    const auto p = c.at("size_probabilities").numbers();
    if (p.empty()) fail(c.path() + ".size_probabilities", "must not be empty");
    return build(n, [&] {
      return ImmigrationLaw(rate, ImmigrationLaw::IIDCluster{p, parse_lifespan(c.at("lifespan"))});
    });
  }
  fail(c.path() + ".type", "unknown cluster type '" + type + "' (singleton, iid)");
}

json immigration_json(const ImmigrationLaw& L) {
  json cluster;
  if (auto s = std::get_if<ImmigrationLaw::Singleton>(&L.cluster())) {
    cluster = {{"type", "singleton"}, {"lifespan", lifespan_json(s->lifespan)}};
  } else {
    const auto& c = std::get<ImmigrationLaw::IIDCluster>(L.cluster());
    cluster = {{"type", "iid"},
               {"size_probabilities", c.size_probabilities},
               {"lifespan", lifespan_json(c.lifespan)}};
  }
  return {{"rate", L.rate()}, {"cluster", cluster}};
}

TestFunction parse_test_function(const Node& n) {
  if (n.raw().is_number()) return TestFunction::constant(n.number());
  n.object({"thresholds", "values"});
  const auto a = n.has("thresholds") ? n.at("thresholds").numbers() : std::vector<double>{};
  const auto v = n.at("values").numbers();
  return build(n, [&] { return TestFunction(a, v); });
}

json test_function_json(const TestFunction& f) {
  return {{"thresholds", f.thresholds()}, {"values", f.values()}};
}

ModelSpec parse_model(const Node& n) {
  n.object({"alpha", "offspring", "lifespan", "immigration"});
  ModelSpec spec{parse_field(n.at("alpha")), parse_offspring(n.at("offspring")),
                 parse_lifespan(n.at("lifespan")), std::nullopt};
  if (auto im = n.find("immigration")) spec.immigration = parse_immigration(*im);
  for (const auto& v : validate_model(spec)) {
    std::string where = "alpha";
    if (v.assumption.find("offspring") != std::string::npos) where = "offspring";
    if (v.assumption.find("immigration") != std::string::npos ||
        v.assumption.find("cluster") != std::string::npos)
      where = "immigration";
    fail(n.path() + "." + where, v.assumption + " (" + fmt17(v.value) + ")");
  }
  return spec;
}

const std::set<std::string>& check_kinds() {
  static const std::set<std::string> kinds = {
      "laplace", "moments", "occupation_transform", "ergodic", "lln", "clt",
      "selection", "lifespan_sampler", "offspring_sampler", "thinning"};
  return kinds;
}

CheckConfig parse_check(const Node& n) {
  CheckConfig c;
  c.kind = n.at("check").string();
  if (!check_kinds().count(c.kind)) fail(n.path() + ".check", "unknown check '" + c.kind + "'");
  const std::string& k = c.kind;
  if (k == "laplace" || k == "moments" || k == "occupation_transform")
    n.object({"check", "label", "sigma", "f", "t", "R", "h"});
  else if (k == "ergodic")
    n.object({"check", "label", "f", "t", "R", "h", "tail_tol", "min_decay"});
  else if (k == "lln")
    n.object({"check", "label", "f", "t", "R"});
  else if (k == "clt")
    n.object({"check", "label", "f", "t", "R", "h", "band"});
  else if (k == "selection")
    n.object({"check", "label", "alpha", "lifetimes", "R"});
  else if (k == "lifespan_sampler")
    n.object({"check", "label", "law", "R"});
  else if (k == "offspring_sampler")
    n.object({"check", "label", "x", "R"});
  else
    n.object({"check", "label", "rate", "n", "R"});

  c.label = n.has("label") ? n.at("label").string() : c.kind;
  if (c.label.empty() || c.label.find_first_of("/\\") != std::string::npos)
    fail(n.path() + ".label", "must be a nonempty file-name-safe string");
  if (auto v = n.find("sigma")) c.sigma = v->numbers();
  if (auto v = n.find("f")) c.f = parse_test_function(*v);
  if (auto v = n.find("t")) c.t = v->number();
  if (auto v = n.find("R")) c.R = v->count();
  if (auto v = n.find("h")) c.h = v->positive();
  if (auto v = n.find("tail_tol")) c.tail_tol = v->positive();
  if (auto v = n.find("min_decay")) c.min_decay = v->number();
  if (auto v = n.find("band")) c.band = v->positive();
  if (auto v = n.find("alpha")) c.alpha = parse_field(*v);
  if (auto v = n.find("lifetimes")) c.lifetimes = v->numbers();
  if (auto v = n.find("law")) c.law = parse_lifespan(*v);
  if (auto v = n.find("x")) c.x = v->positive();
  if (auto v = n.find("rate")) c.rate = v->positive();
  if (auto v = n.find("n")) c.n = v->count();
  if (k == "selection" && !c.lifetimes) fail(n.path() + ".lifetimes", "missing");
  if (k == "thinning" && !c.rate) fail(n.path() + ".rate", "missing");
  return c;
}

json check_json(const CheckConfig& c) {
  json j = {{"check", c.kind}, {"label", c.label}};
  if (c.sigma) j["sigma"] = *c.sigma;
  if (c.f) j["f"] = test_function_json(*c.f);
  if (c.t) j["t"] = *c.t;
  if (c.R) j["R"] = *c.R;
  if (c.h) j["h"] = *c.h;
  if (c.tail_tol) j["tail_tol"] = *c.tail_tol;
  if (c.min_decay) j["min_decay"] = *c.min_decay;
  if (c.band) j["band"] = *c.band;
  if (c.alpha) j["alpha"] = field_json(*c.alpha);
  if (c.lifetimes) j["lifetimes"] = *c.lifetimes;
  if (c.law) j["law"] = lifespan_json(*c.law);
  if (c.x) j["x"] = *c.x;
  if (c.rate) j["rate"] = *c.rate;
  if (c.n) j["n"] = *c.n;
  return j;
}

}  // namespace

ExperimentConfig parse_config(const json& doc) {
  const Node root(doc, "");
  root.object({"model", "grid", "run", "output"});
  ExperimentConfig c{parse_model(root.at("model")), {}, {}, {}};

  if (auto g = root.find("grid")) {
    g->object({"h", "T"});
    if (auto v = g->find("h")) c.grid.h = v->positive();
    if (auto v = g->find("T")) c.grid.T = v->positive();
  }
  if (auto r = root.find("run")) {
    r->object({"sigma", "f", "t", "R", "seed", "sigma_threshold", "alpha_level", "x", "checks"});
    if (auto v = r->find("sigma")) c.run.sigma = v->numbers();
    if (auto v = r->find("f")) c.run.f = parse_test_function(*v);
    if (auto v = r->find("t")) c.run.t = v->number();
    if (auto v = r->find("R")) c.run.R = v->count();
    if (auto v = r->find("seed")) c.run.seed = v->count();
    if (auto v = r->find("sigma_threshold")) c.run.sigma_threshold = v->positive();
    if (auto v = r->find("alpha_level")) c.run.alpha_level = v->positive();
    if (auto v = r->find("x")) c.run.x = v->numbers();
    if (auto v = r->find("checks")) {
      std::set<std::string> labels;
      for (std::size_t i = 0; i < v->size(); ++i) {
        c.run.checks.push_back(parse_check(v->item(i)));
        if (!labels.insert(c.run.checks.back().label).second)
          fail(v->item(i).path() + ".label", "duplicate label '" + c.run.checks.back().label + "'");
      }
    }
  }
  if (auto o = root.find("output")) {
    o->object({"directory", "stride"});
    if (auto v = o->find("directory")) c.output.directory = v->string();
    if (auto v = o->find("stride")) {
      c.output.stride = v->count();
      if (c.output.stride == 0) fail(v->path(), "must be at least 1");
    }
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Config, "cannot open config file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, path + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json model = {{"alpha", field_json(c.model.alpha)},
                {"offspring", offspring_json(c.model.offspring)},
                {"lifespan", lifespan_json(c.model.lifespan)}};
  if (c.model.immigration) model["immigration"] = immigration_json(*c.model.immigration);
  json checks = json::array();
  for (const auto& k : c.run.checks) checks.push_back(check_json(k));
  return {{"model", model},
          {"grid", {{"h", c.grid.h}, {"T", c.grid.T}}},
          {"run",
           {{"sigma", c.run.sigma},
            {"f", test_function_json(c.run.f)},
            {"t", c.run.t},
            {"R", c.run.R},
            {"seed", c.run.seed},
            {"sigma_threshold", c.run.sigma_threshold},
            {"alpha_level", c.run.alpha_level},
            {"x", c.run.x},
            {"checks", checks}}},
          {"output", {{"directory", c.output.directory}, {"stride", c.output.stride}}}};
}

std::string config_reference() {
  return R"(Configuration (one JSON document):

  model                      required
    alpha                    field: birth rate alpha(x) of a particle with remaining lifetime x
    offspring                {"type": "zero_two", "p2": field}
                             {"type": "poisson", "mean": field}
                             {"type": "table", "probabilities": [p0, p1, ...]}
    lifespan                 law G of newborn lifespans
    immigration              optional: {"rate": r, "cluster": cluster}
      cluster                {"type": "singleton", "lifespan": law}
                             {"type": "iid", "size_probabilities": [P(1), P(2), ...], "lifespan": law}
  grid
    h                        solver step (default 1e-3)
    T                        solve horizon (default 1)
  run
    sigma                    initial remaining lifetimes (default [])
    f                        test function: number, or {"thresholds": [a1, ...], "values": [v0, v1, ...]}
                             with value v_j on (a_j, a_j+1] (default 1)
    t                        time horizon for simulate and checks (default 1)
    R                        replicates (default 1000)
    seed                     master seed, overridden by --seed (default 1)
    sigma_threshold          |z| gate for analytic comparisons (default 4)
    alpha_level              p-value gate for goodness-of-fit checks (default 1e-3)
    x                        abscissae where `constants` tabulates the limit fields
    checks                   list of checks for `verify`; each entry has
      check                  laplace | moments | occupation_transform | ergodic | lln | clt |
                             selection | lifespan_sampler | offspring_sampler | thinning
      label                  output name (default: the check name; must be unique)
      sigma, f, t, R         override the run block (R is the draw count for samplers)
      h                      solver step (laplace, moments, occupation_transform, ergodic, clt)
      tail_tol, min_decay    ergodic: integrand cutoff (1e-10), required t * alpha1 (5)
      band                   clt: relative variance band (0.1)
      alpha, lifetimes       selection: rate field (default model.alpha) and atoms
      law                    lifespan_sampler: law (default model.lifespan)
      x                      offspring_sampler: parent remaining lifetime (default 1)
      rate, n                thinning: constant rate and frozen population size (default 1)
  output
    directory                output directory, overridden by --out (default "out")
    stride                   row stride of solve.csv (default 1)

  field: number, {"type": "constant", "value": v},
         or {"type": "piecewise_linear", "knots": [[x1, v1], [x2, v2], ...]}
  law:   {"type": "exponential", "rate": r}, {"type": "gamma", "shape": k, "scale": s},
         or {"type": "uniform", "lo": a, "hi": b}
)";
}

}  // namespace agebranch::cli

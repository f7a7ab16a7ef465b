#include "vigp/config.hpp"

#include <cmath>
#include <limits>
#include <set>

namespace vigp {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Read-only view of one JSON node that remembers its pointer path and the keys
// the schema has consumed, so leftovers can be reported as unknown.
class Node {
 public:
  Node(const json& value, std::string path) : value_(value), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const json& raw() const { return value_; }

  [[noreturn]] void fail(const std::string& message) const { throw ConfigError(path_, message); }

  void expect_object() const {
    if (!value_.is_object()) fail("expected an object");
  }

  bool has(const std::string& key) {
    known_.insert(key);
    return value_.contains(key) && !value_.at(key).is_null();
  }

  Node at(const std::string& key) {
    known_.insert(key);
    if (!value_.contains(key)) throw ConfigError(path_ + "/" + key, "missing required key");
    return Node(value_.at(key), path_ + "/" + key);
  }

  void reject_unknown() const {
    for (const auto& [key, _] : value_.items()) {
      if (!known_.count(key)) throw ConfigError(path_ + "/" + key, "unknown key \"" + key + "\"");
    }
  }

  double real() const {
    if (!value_.is_number()) fail("expected a number");
    return value_.get<double>();
  }

  // Numbers, or "inf" / "+inf" / "-inf".
  double extended_real() const {
    if (value_.is_string()) {
      const auto s = value_.get<std::string>();
      if (s == "inf" || s == "+inf") return kInf;
      if (s == "-inf") return -kInf;
      fail("expected a number or \"inf\"/\"-inf\"");
    }
    return real();
  }

  std::size_t count() const {
    if (!value_.is_number_unsigned() && !(value_.is_number_integer() && value_.get<long long>() >= 0)) {
      fail("expected a nonnegative integer");
    }
    return value_.get<std::size_t>();
  }

  std::uint64_t u64() const {
    if (!value_.is_number_integer() || value_.get<long long>() < 0) fail("expected a nonnegative integer");
    return value_.get<std::uint64_t>();
  }

  std::string str() const {
    if (!value_.is_string()) fail("expected a string");
    return value_.get<std::string>();
  }

  Vector vector(bool allow_infinite = false) const {
    if (!value_.is_array() || value_.empty()) fail("expected a nonempty array of numbers");
    Vector v(static_cast<Index>(value_.size()));
    for (std::size_t i = 0; i < value_.size(); ++i) {
      Node item(value_[i], path_ + "/" + std::to_string(i));
      v[static_cast<Index>(i)] = allow_infinite ? item.extended_real() : item.real();
    }
    return v;
  }

  Matrix matrix() const {
    if (!value_.is_array() || value_.empty()) fail("expected a nonempty array of rows");
    const std::size_t rows = value_.size();
    Matrix m;
    for (std::size_t r = 0; r < rows; ++r) {
      const Vector row = Node(value_[r], path_ + "/" + std::to_string(r)).vector();
      if (r == 0) m.resize(static_cast<Index>(rows), row.size());
      if (row.size() != m.cols()) throw ConfigError(path_ + "/" + std::to_string(r), "ragged matrix row");
      m.row(static_cast<Index>(r)) = row.transpose();
    }
    return m;
  }

 private:
  const json& value_;
  std::string path_;
  std::set<std::string> known_;
};

// Wraps factory validation errors with the node path.
template <class F>
auto guarded(const Node& node, F&& make) {
  try {
    return make();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    node.fail(e.what());
  }
}

ConvexSet parse_set(Node node) {
  node.expect_object();
  const std::string type = node.at("type").str();
  auto done = [&](ConvexSet s) {
    node.reject_unknown();
    return s;
  };
  if (type == "box") {
    const Vector lo = node.at("lower").vector(true);
    const Vector hi = node.at("upper").vector(true);
    return done(guarded(node, [&] { return ConvexSet::box(lo, hi); }));
  }
  if (type == "ball") {
    const Vector c = node.at("center").vector();
    const double r = node.at("radius").real();
    return done(guarded(node, [&] { return ConvexSet::ball(c, r); }));
  }
  if (type == "halfspace") {
    const Vector a = node.at("normal").vector();
    const double b = node.at("offset").real();
    return done(guarded(node, [&] { return ConvexSet::halfspace(a, b); }));
  }
  if (type == "simplex") {
    const auto n = static_cast<Index>(node.at("dim").count());
    return done(guarded(node, [&] { return ConvexSet::simplex(n); }));
  }
  if (type == "full_space") {
    const auto n = static_cast<Index>(node.at("dim").count());
    return done(guarded(node, [&] { return ConvexSet::full_space(n); }));
  }
  if (type == "intersection") {
    Node members = node.at("members");
    if (!members.raw().is_array()) members.fail("expected an array of sets");
    std::vector<ConvexSet> sets;
    for (std::size_t i = 0; i < members.raw().size(); ++i) {
      sets.push_back(parse_set(Node(members.raw()[i], members.path() + "/" + std::to_string(i))));
    }
    return done(guarded(node, [&] { return ConvexSet::intersection(std::move(sets)); }));
  }
  node.at("type").fail("unknown set type \"" + type + "\"");
}

Scaling parse_scaling(Node node) {
  node.expect_object();
  const std::string kind = node.at("kind").str();
  Scaling s;
  if (kind == "constant") {
    s.kind = ScalingKind::Constant;
    s.value = node.at("value").real();
  } else if (kind == "one_plus_norm_sq") {
    s.kind = ScalingKind::OnePlusNormSquared;
  } else if (kind == "two_plus_sin") {
    s.kind = ScalingKind::TwoPlusSinFirst;
  } else {
    node.at("kind").fail("unknown scaling kind \"" + kind + "\"");
  }
  node.reject_unknown();
  return s;
}

DeclaredConstants parse_constants(Node node) {
  node.expect_object();
  DeclaredConstants c;
  if (node.has("gamma")) c.gamma = node.at("gamma").real();
  if (node.has("lipschitz")) c.lipschitz = node.at("lipschitz").real();
  if (node.has("value_bound")) c.value_bound = node.at("value_bound").real();
  node.reject_unknown();
  return c;
}

OperatorSpec parse_operator(Node node, const DeclaredConstants& constants) {
  node.expect_object();
  const std::string type = node.at("type").str();
  const double scale = node.has("scale") ? node.at("scale").real() : 1.0;
  auto finish = [&](auto make) {
    node.reject_unknown();
    return guarded(node, [&] {
      OperatorSpec op = make();
      return scale == 1.0 ? op : op.with_scale(scale);
    });
  };
  if (type == "affine") {
    const Matrix A = node.at("A").matrix();
    const Vector b = node.at("b").vector();
    return finish([&] { return OperatorSpec::affine(A, b, constants); });
  }
  if (type == "scaled_affine") {
    const Matrix A = node.at("A").matrix();
    const Vector b = node.at("b").vector();
    const Scaling s = parse_scaling(node.at("scaling"));
    return finish([&] { return OperatorSpec::scaled_affine(A, b, s, constants); });
  }
  if (type == "sqrt_sign_1d") return finish([&] { return OperatorSpec::sqrt_sign_1d(constants); });
  if (type == "exp_growth_1d") return finish([&] { return OperatorSpec::exp_growth_1d(constants); });
  node.at("type").fail("unknown operator type \"" + type + "\"");
}

ProblemSpec parse_problem(Node node) {
  node.expect_object();
  ConvexSet set = parse_set(node.at("set"));
  const DeclaredConstants constants =
      node.has("constants") ? parse_constants(node.at("constants")) : DeclaredConstants{};
  OperatorSpec op = parse_operator(node.at("operator"), constants);
  std::optional<Vector> reference;
  if (node.has("reference_solution")) reference = node.at("reference_solution").vector();
  node.reject_unknown();
  ProblemSpec spec{std::move(set), std::move(op), std::move(reference)};
  guarded(node, [&] { return spec.build(); });
  return spec;
}

ScheduleSpec parse_schedule(Node node) {
  node.expect_object();
  const std::string type = node.at("type").str();
  ScheduleSpec s;
  if (type == "constant") {
    s.kind = ScheduleSpec::Kind::Constant;
    s.value = node.at("lambda").real();
  } else if (type == "pseries") {
    s.kind = ScheduleSpec::Kind::PSeries;
    s.value = node.at("p").real();
  } else if (type == "harmonic") {
    s.kind = ScheduleSpec::Kind::Harmonic;
    s.value = 1.0;
  } else {
    node.at("type").fail("unknown schedule type \"" + type + "\"");
  }
  node.reject_unknown();
  guarded(node, [&] { return s.build(); });
  return s;
}

Method parse_method(const Node& node) {
  const std::string m = node.str();
  if (m == "gpm_constant") return Method::GpmConstant;
  if (m == "gpm_variable") return Method::GpmVariable;
  if (m == "gpm_unbounded") return Method::GpmUnbounded;
  node.fail("unknown method \"" + m + "\"");
}

void parse_stop(Node node, StopCriteria& stop) {
  node.expect_object();
  if (node.has("step_tol")) stop.step_tol = node.at("step_tol").real();
  if (node.has("residual_tol")) stop.residual_tol = node.at("residual_tol").real();
  if (node.has("max_iters")) stop.max_iters = node.at("max_iters").count();
  if (node.has("divergence_radius")) stop.divergence_radius = node.at("divergence_radius").real();
  node.reject_unknown();
  guarded(node, [&] {
    stop.validate();
    return 0;
  });
}

void parse_output(Node node, OutputSpec& out) {
  node.expect_object();
  if (node.has("trace")) out.trace = node.at("trace").str();
  if (node.has("summary")) out.summary = node.at("summary").str();
  if (node.has("trace_stride")) {
    out.trace_stride = node.at("trace_stride").count();
    if (*out.trace_stride < 1) node.at("trace_stride").fail("trace_stride must be at least 1");
  }
  node.reject_unknown();
}

void parse_experiments(Node node, ExperimentSpec& e) {
  node.expect_object();
  if (node.has("samples")) e.samples = node.at("samples").count();
  if (node.has("example41")) {
    Node ex = node.at("example41");
    ex.expect_object();
    if (ex.has("lambda")) e.ex41_lambda = ex.at("lambda").real();
    if (ex.has("x1")) e.ex41_x1 = ex.at("x1").real();
    if (ex.has("iters")) e.ex41_iters = ex.at("iters").count();
    ex.reject_unknown();
  }
  if (node.has("example42")) {
    Node ex = node.at("example42");
    ex.expect_object();
    if (ex.has("iters")) e.ex42_iters = ex.at("iters").count();
    ex.reject_unknown();
  }
  if (node.has("rate_study")) {
    Node rs = node.at("rate_study");
    rs.expect_object();
    if (rs.has("p")) {
      const Vector ps = rs.at("p").vector();
      e.rate_p.assign(ps.data(), ps.data() + ps.size());
    }
    if (rs.has("iters")) e.rate_iters = rs.at("iters").count();
    if (rs.has("tail_fraction")) e.rate_tail_fraction = rs.at("tail_fraction").real();
    rs.reject_unknown();
  }
  if (node.has("verify_bounds")) {
    Node vb = node.at("verify_bounds");
    vb.expect_object();
    if (vb.has("points")) e.bound_points = vb.at("points").count();
    vb.reject_unknown();
  }
  node.reject_unknown();
}

void check_compatibility(const RunConfig& c) {
  using Kind = ScheduleSpec::Kind;
  if (c.method != Method::GpmConstant && c.schedule.kind == Kind::Constant) {
    throw ConfigError("/schedule",
                      "schedule violates diminishing condition (" + to_string(c.method) +
                          " needs non-summable diminishing stepsizes)");
  }
  if (c.method == Method::GpmConstant && c.schedule.kind != Kind::Constant) {
    throw ConfigError("/schedule", "gpm_constant needs a constant schedule");
  }
  if (c.method == Method::GpmUnbounded && c.problem && !c.problem->op.constants().gamma) {
    throw ConfigError("/problem/constants/gamma", "gpm_unbounded needs a declared gamma");
  }
  if (c.x1 && c.problem && c.x1->size() != c.problem->set.dim()) {
    throw ConfigError("/x1", "dimension does not match the problem");
  }
}

std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

json real_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json vector_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(real_json(v[i]));
  return arr;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) rows.push_back(vector_json(m.row(r).transpose()));
  return rows;
}

json set_json(const ConvexSet& set) {
  if (const auto* b = set.get_if<Box>()) {
    return {{"type", "box"}, {"lower", vector_json(b->lower)}, {"upper", vector_json(b->upper)}};
  }
  if (const auto* b = set.get_if<Ball>()) {
    return {{"type", "ball"}, {"center", vector_json(b->center)}, {"radius", b->radius}};
  }
  if (const auto* h = set.get_if<Halfspace>()) {
    return {{"type", "halfspace"}, {"normal", vector_json(h->normal)}, {"offset", h->offset}};
  }
  if (set.get_if<Simplex>()) return {{"type", "simplex"}, {"dim", set.dim()}};
  if (set.get_if<FullSpace>()) return {{"type", "full_space"}, {"dim", set.dim()}};
  json members = json::array();
  for (const auto& m : set.get_if<Intersection>()->members) members.push_back(set_json(m));
  return {{"type", "intersection"}, {"members", members}};
}

json operator_json(const OperatorSpec& op) {
  json j;
  if (const auto* a = std::get_if<Affine>(&op.family())) {
    j = {{"type", "affine"}, {"A", matrix_json(a->A)}, {"b", vector_json(a->b)}};
  } else if (const auto* s = std::get_if<ScaledAffine>(&op.family())) {
    json scaling;
    switch (s->scaling.kind) {
      case ScalingKind::Constant:
        scaling = {{"kind", "constant"}, {"value", s->scaling.value}};
        break;
      case ScalingKind::OnePlusNormSquared:
        scaling = {{"kind", "one_plus_norm_sq"}};
        break;
      case ScalingKind::TwoPlusSinFirst:
        scaling = {{"kind", "two_plus_sin"}};
        break;
    }
    j = {{"type", "scaled_affine"}, {"A", matrix_json(s->A)}, {"b", vector_json(s->b)}, {"scaling", scaling}};
  } else {
    j = {{"type", op.kind()}};
  }
  j["scale"] = op.scale();
  return j;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

StepsizeSchedule ScheduleSpec::build() const {
  switch (kind) {
    case Kind::Constant:
      return StepsizeSchedule::constant(value);
    case Kind::PSeries:
      return StepsizeSchedule::pseries(value);
    case Kind::Harmonic:
      return StepsizeSchedule::harmonic();
  }
  throw std::logic_error("unreachable schedule kind");
}

bool operator==(const ProblemSpec& a, const ProblemSpec& b) {
  if (!(a.set == b.set) || !(a.op == b.op)) return false;
  if (a.reference_solution.has_value() != b.reference_solution.has_value()) return false;
  return !a.reference_solution || same_vector(*a.reference_solution, *b.reference_solution);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  const bool same_x1 = a.x1.has_value() == b.x1.has_value() && (!a.x1 || same_vector(*a.x1, *b.x1));
  const bool same_stop = a.stop.step_tol == b.stop.step_tol &&
                         a.stop.residual_tol == b.stop.residual_tol &&
                         a.stop.max_iters == b.stop.max_iters &&
                         a.stop.divergence_radius == b.stop.divergence_radius;
  return a.problem == b.problem && a.method == b.method && same_x1 && a.schedule == b.schedule &&
         same_stop && a.output == b.output && a.seed == b.seed && a.experiments == b.experiments;
}

RunConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_and_column(text, e.byte == 0 ? 0 : e.byte - 1);
    throw ConfigError("", "syntax error at line " + std::to_string(line) + ", column " +
                              std::to_string(column) + ": " + e.what());
  }
  Node root(doc, "");
  root.expect_object();

  RunConfig c;
  if (root.has("problem")) c.problem = parse_problem(root.at("problem"));
  if (root.has("method")) c.method = parse_method(root.at("method"));
  if (root.has("x1")) c.x1 = root.at("x1").vector();
  if (root.has("schedule")) c.schedule = parse_schedule(root.at("schedule"));
  if (root.has("stop")) parse_stop(root.at("stop"), c.stop);
  if (root.has("output")) parse_output(root.at("output"), c.output);
  if (root.has("seed")) c.seed = root.at("seed").u64();
  if (root.has("experiments")) parse_experiments(root.at("experiments"), c.experiments);
  root.reject_unknown();
  c.stop.trace_stride = c.output.trace_stride;
  check_compatibility(c);
  return c;
}

json config_to_json(const RunConfig& c) {
  json j;
  if (c.problem) {
    const auto& k = c.problem->op.constants();
    j["problem"] = {{"set", set_json(c.problem->set)},
                    {"operator", operator_json(c.problem->op)},
                    {"constants",
                     {{"gamma", optional_json(k.gamma)},
                      {"lipschitz", optional_json(k.lipschitz)},
                      {"value_bound", optional_json(k.value_bound)}}}};
    j["problem"]["reference_solution"] =
        c.problem->reference_solution ? vector_json(*c.problem->reference_solution) : json(nullptr);
  }
  j["method"] = to_string(c.method);
  j["x1"] = c.x1 ? vector_json(*c.x1) : json(nullptr);
  switch (c.schedule.kind) {
    case ScheduleSpec::Kind::Constant:
      j["schedule"] = {{"type", "constant"}, {"lambda", c.schedule.value}};
      break;
    case ScheduleSpec::Kind::PSeries:
      j["schedule"] = {{"type", "pseries"}, {"p", c.schedule.value}};
      break;
    case ScheduleSpec::Kind::Harmonic:
      j["schedule"] = {{"type", "harmonic"}};
      break;
  }
  j["stop"] = {{"step_tol", c.stop.step_tol},
               {"residual_tol", optional_json(c.stop.residual_tol)},
               {"max_iters", c.stop.max_iters},
               {"divergence_radius", c.stop.divergence_radius}};
  j["output"] = {{"trace", c.output.trace}, {"summary", c.output.summary}};
  j["output"]["trace_stride"] = c.output.trace_stride ? json(*c.output.trace_stride) : json(nullptr);
  j["seed"] = c.seed;
  const auto& e = c.experiments;
  j["experiments"] = {
      {"samples", e.samples},
      {"example41", {{"lambda", e.ex41_lambda}, {"x1", e.ex41_x1}, {"iters", e.ex41_iters}}},
      {"example42", {{"iters", e.ex42_iters}}},
      {"rate_study",
       {{"p", e.rate_p}, {"iters", e.rate_iters}, {"tail_fraction", e.rate_tail_fraction}}},
      {"verify_bounds", {{"points", e.bound_points}}}};
  return j;
}

std::string serialize_config(const RunConfig& config) { return config_to_json(config).dump(2); }

std::string to_string(Method m) {
  switch (m) {
    case Method::GpmConstant:
      return "gpm_constant";
    case Method::GpmVariable:
      return "gpm_variable";
    case Method::GpmUnbounded:
      return "gpm_unbounded";
  }
  return "unknown";
}

}  // namespace vigp

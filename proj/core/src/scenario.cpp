#include "regulab/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "regulab/ekeland.hpp"
#include "regulab/errors.hpp"
#include "regulab/oracle.hpp"

namespace regulab {
namespace {

using json = nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw InputError("scenario field '" + path + "': " + msg);
}

void allow_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) fail(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
      fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field");
    }
  }
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf" || s == "infinity") return kInf;
  }
  fail(path, "expected a number or \"inf\"");
}

double finite_number(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (!std::isfinite(v)) fail(path, "must be finite");
  return v;
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

Vec vec(const json& j, const std::string& path) {
  if (j.is_number()) return Vec::Constant(1, j.get<double>());
  if (!j.is_array()) fail(path, "expected a list of numbers");
  Vec v(static_cast<int>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = finite_number(j[i], path + "[" + std::to_string(i) + "]");
  return v;
}

Mat mat(const json& j, const std::string& path, int cols_hint = -1) {
  if (!j.is_array()) fail(path, "expected a row-major list of rows");
  const int rows = static_cast<int>(j.size());
  int cols = cols_hint;
  if (rows > 0) {
    if (!j[0].is_array()) fail(path, "rows must be lists");
    cols = static_cast<int>(j[0].size());
  }
  if (cols < 0) cols = 0;
  Mat m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const std::string rp = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || static_cast<int>(j[r].size()) != cols) fail(rp, "rows must all have " + std::to_string(cols) + " entries");
    for (int c = 0; c < cols; ++c) m(r, c) = finite_number(j[r][c], rp + "[" + std::to_string(c) + "]");
  }
  return m;
}

Extent extent(const json& j, const std::string& path) {
  const double v = number(j, path);
  if (std::isinf(v)) return Extent::unbounded();
  if (!(v > 0)) fail(path, "must be positive");
  return Extent(v);
}

json extent_json(const Extent& e) { return e.is_unbounded() ? json("inf") : json(e.value()); }

json vec_json(const Vec& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json grid_json(const GridSpec& g) {
  return json{{"lower", vec_json(g.lower)}, {"upper", vec_json(g.upper)}, {"resolution", g.resolution}};
}

GridSpec grid(const json& j, const std::string& path) {
  allow_keys(j, path, {"lower", "upper", "resolution"});
  if (!j.contains("lower") || !j.contains("upper") || !j.contains("resolution")) {
    fail(path, "needs lower, upper and resolution");
  }
  GridSpec g(vec(j["lower"], join(path, "lower")), vec(j["upper"], join(path, "upper")),
             integer(j["resolution"], join(path, "resolution")));
  if (g.lower.size() != g.upper.size()) fail(path, "lower and upper differ in dimension");
  try {
    g.validate();
  } catch (const InputError& e) {
    fail(path, e.what());
  }
  return g;
}

ParameterCarrier carrier(const json& j, const std::string& path) {
  allow_keys(j, path, {"normed", "labels"});
  if (j.contains("normed") == j.contains("labels")) fail(path, "give exactly one of normed (dimension) or labels (count)");
  if (j.contains("normed")) {
    const int d = integer(j["normed"], join(path, "normed"));
    if (d < 0) fail(join(path, "normed"), "dimension must be nonnegative");
    return ParameterCarrier::normed(d);
  }
  const int n = integer(j["labels"], join(path, "labels"));
  if (n < 1) fail(join(path, "labels"), "needs at least one label");
  return ParameterCarrier::finite(n);
}

GraphPiece piece(const json& j, const std::string& path, int xdim, int ydim, int pdim) {
  allow_keys(j, path, {"A", "b", "B"});
  if (!j.contains("A") || !j.contains("b")) fail(path, "a graph piece needs A and b");
  GraphPiece g;
  g.A = mat(j["A"], join(path, "A"), xdim + ydim);
  g.b = vec(j["b"], join(path, "b"));
  if (g.A.cols() != xdim + ydim) fail(join(path, "A"), "needs dim X + dim Y = " + std::to_string(xdim + ydim) + " columns");
  if (g.b.size() != g.A.rows()) fail(join(path, "b"), "length must equal the number of rows of A");
  if (j.contains("B")) {
    g.B = mat(j["B"], join(path, "B"), pdim);
    if (g.B.rows() != g.A.rows() || g.B.cols() != pdim) {
      fail(join(path, "B"), "must be rows(A) x dim P = " + std::to_string(g.A.rows()) + "x" + std::to_string(pdim));
    }
  } else {
    g.B = Mat::Zero(g.A.rows(), pdim);
  }
  return g;
}

SetValuedMap mapping(const json& j, const std::string& path) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) fail(path, "needs a string field 'kind'");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "rule") {
    allow_keys(j, path, {"kind", "rule", "coefficients", "dim"});
    if (!j.contains("rule") || !j["rule"].is_string()) fail(join(path, "rule"), "missing rule name");
    const auto rule = j["rule"].get<std::string>();
    std::vector<double> coef;
    if (j.contains("coefficients")) {
      const Vec c = vec(j["coefficients"], join(path, "coefficients"));
      coef.assign(c.data(), c.data() + c.size());
    }
    const int dim = j.contains("dim") ? integer(j["dim"], join(path, "dim")) : 1;
    if (dim < 1) fail(join(path, "dim"), "must be positive");
    auto coef_or = [&](double d) { return coef.empty() ? d : coef[0]; };
    if (coef.size() > 1) fail(join(path, "coefficients"), "rule '" + rule + "' takes at most one coefficient");
    if (rule == "square_diff") {
      if (coef_or(1.0) == 0.0) fail(join(path, "coefficients"), "square_diff needs a nonzero coefficient");
      return SetValuedMap::square_diff(coef_or(1.0));
    }
    if (rule == "linear_diff") return SetValuedMap::linear_diff(dim);
    if (rule == "identity") return SetValuedMap::identity(dim);
    if (rule == "scaled") return SetValuedMap::scaled(dim, coef_or(1.0));
    fail(join(path, "rule"), "unknown rule '" + rule + "' (square_diff | linear_diff | identity | scaled)");
  }
  if (kind == "affine") {
    allow_keys(j, path, {"kind", "M", "N", "c"});
    if (!j.contains("M") || !j.contains("c")) fail(path, "affine mappings need M and c");
    const Mat m = mat(j["M"], join(path, "M"));
    const Vec c = vec(j["c"], join(path, "c"));
    const Mat n = j.contains("N") ? mat(j["N"], join(path, "N")) : Mat::Zero(m.rows(), 0);
    if (c.size() != m.rows() || n.rows() != m.rows()) fail(path, "M, N and c must have the same number of rows");
    return SetValuedMap::affine(m, n, c);
  }
  if (kind == "polyhedral") {
    allow_keys(j, path, {"kind", "parameter", "x_dim", "y_dim", "pieces"});
    for (const char* k : {"parameter", "x_dim", "y_dim", "pieces"}) {
      if (!j.contains(k)) fail(join(path, k), "missing");
    }
    const ParameterCarrier pc = carrier(j["parameter"], join(path, "parameter"));
    const int xd = integer(j["x_dim"], join(path, "x_dim"));
    const int yd = integer(j["y_dim"], join(path, "y_dim"));
    if (xd < 1 || yd < 1) fail(path, "x_dim and y_dim must be positive");
    const std::string pp = join(path, "pieces");
    if (!j["pieces"].is_array()) fail(pp, "expected a list");
    std::vector<std::vector<GraphPiece>> pieces;
    const int pdim = pc.kind == ParameterCarrier::Kind::Normed ? pc.dim : 0;
    if (pc.kind == ParameterCarrier::Kind::Labels) {
      if (static_cast<int>(j["pieces"].size()) != pc.labels) fail(pp, "needs one list of pieces per label");
      for (std::size_t l = 0; l < j["pieces"].size(); ++l) {
        const auto lp = pp + "[" + std::to_string(l) + "]";
        if (!j["pieces"][l].is_array()) fail(lp, "expected a list of pieces");
        std::vector<GraphPiece> list;
        for (std::size_t i = 0; i < j["pieces"][l].size(); ++i) {
          list.push_back(piece(j["pieces"][l][i], lp + "[" + std::to_string(i) + "]", xd, yd, 0));
        }
        pieces.push_back(std::move(list));
      }
    } else {
      std::vector<GraphPiece> list;
      for (std::size_t i = 0; i < j["pieces"].size(); ++i) {
        list.push_back(piece(j["pieces"][i], pp + "[" + std::to_string(i) + "]", xd, yd, pdim));
      }
      pieces.push_back(std::move(list));
    }
    return SetValuedMap::polyhedral(pc, xd, yd, std::move(pieces));
  }
  if (kind == "sampled") fail(join(path, "kind"), "sampled graph files are not supported; use a rule or polyhedral graph");
  fail(join(path, "kind"), "unknown mapping kind '" + kind + "' (rule | affine | polyhedral)");
}

const std::set<std::string>& known_checks() {
  static const std::set<std::string> k{"oracle", "geometric", "modulus", "P1",     "C22",    "P5",     "T2",
                                       "C33",    "C34",       "recede",  "aubin", "prop57", "prop58", "evp"};
  return k;
}

Verdict parse_verdict(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "HOLDS") return Verdict::Holds;
    if (s == "VIOLATED") return Verdict::Violated;
    if (s == "INCONCLUSIVE") return Verdict::Inconclusive;
  }
  fail(path, "expected HOLDS, VIOLATED or INCONCLUSIVE");
}

std::string one_of(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    for (const char* a : allowed) {
      if (s == a) return s;
    }
  }
  std::string list;
  for (const char* a : allowed) list += (list.empty() ? "" : " | ") + std::string(a);
  fail(path, "expected one of " + list);
}

CheckSpec check_spec(const json& j, const std::string& path) {
  CheckSpec c;
  if (j.is_string()) {
    c.name = j.get<std::string>();
  } else {
    allow_keys(j, path, {"check", "label", "mode", "scan_radius", "variant", "cone", "condition", "eta", "l", "l_prime",
                         "c7_epsilon", "start", "eps", "lambda", "expect"});
    if (!j.contains("check") || !j["check"].is_string()) fail(join(path, "check"), "missing check name");
    c.name = j["check"].get<std::string>();
  }
  if (!known_checks().count(c.name)) {
    fail(j.is_string() ? path : join(path, "check"), "unknown check '" + c.name + "'");
  }
  if (j.is_string()) return c;
  if (j.contains("label")) {
    if (!j["label"].is_string()) fail(join(path, "label"), "expected a string");
    c.label = j["label"].get<std::string>();
  }
  if (j.contains("mode")) {
    c.mode = one_of(j["mode"], join(path, "mode"), {"sufficient", "necessary"}) == "necessary" ? Mode::Necessary
                                                                                                : Mode::Sufficient;
  }
  if (j.contains("scan_radius")) c.scan_radius = finite_number(j["scan_radius"], join(path, "scan_radius"));
  if (j.contains("variant")) c.variant = one_of(j["variant"], join(path, "variant"), {"convex-normal", "frechet-cap"});
  if (j.contains("cone")) c.cone = one_of(j["cone"], join(path, "cone"), {"clarke", "frechet"});
  if (j.contains("condition")) {
    c.condition = one_of(j["condition"], join(path, "condition"),
                         {"slope", "normal-cone-convex", "normal-cone-frechet", "coderiv-clarke", "coderiv-frechet"});
  }
  if (j.contains("eta")) c.eta = number(j["eta"], join(path, "eta"));
  if (j.contains("l")) c.l = finite_number(j["l"], join(path, "l"));
  if (j.contains("l_prime")) c.l_prime = finite_number(j["l_prime"], join(path, "l_prime"));
  if (j.contains("c7_epsilon")) c.c7_epsilon = finite_number(j["c7_epsilon"], join(path, "c7_epsilon"));
  if (j.contains("start")) c.start = vec(j["start"], join(path, "start"));
  if (j.contains("eps")) c.eps = finite_number(j["eps"], join(path, "eps"));
  if (j.contains("lambda")) c.lambda = finite_number(j["lambda"], join(path, "lambda"));
  if (j.contains("expect")) c.expect = parse_verdict(j["expect"], join(path, "expect"));
  return c;
}

std::string default_label(const CheckSpec& c) {
  std::string l = c.name;
  std::vector<std::string> parts;
  if (c.mode == Mode::Necessary) parts.push_back("necessary");
  if (c.name == "T2" && c.variant != "convex-normal") parts.push_back(c.variant);
  if ((c.name == "P5" || c.name == "C33" || c.name == "C34") && c.cone != "clarke") parts.push_back(c.cone);
  if (c.name == "prop58") parts.push_back(c.condition);
  if (c.eta && (c.name == "C33" || c.name == "C34")) {
    std::ostringstream os;
    os << "eta=" << *c.eta;
    parts.push_back(os.str());
  }
  if (!parts.empty()) {
    l += "[";
    for (std::size_t i = 0; i < parts.size(); ++i) l += (i ? "," : "") + parts[i];
    l += "]";
  }
  return l;
}

// Per-check field manifest and hypotheses that can be decided before running.
void validate_check(const Scenario& s, const CheckSpec& c, const std::string& path) {
  const auto& f = *s.mapping;
  const bool metric = f.carrier().has_metric();
  const bool necessity_ok = c.name == "P1" || c.name == "C22" || c.name == "P5" || c.name == "T2" || c.name == "C33";
  if (c.mode == Mode::Necessary && !necessity_ok) fail(join(path, "mode"), "check '" + c.name + "' has no necessity mode");
  if ((c.name == "C33" || c.name == "C34") && !c.eta) fail(join(path, "eta"), "required by " + c.name);
  const bool needs_l = c.name == "recede" || c.name == "aubin" || c.name == "prop57" || c.name == "prop58";
  if (needs_l && !c.l && !s.l) fail(join(path, "l"), "required by " + c.name + " (here or in query.l)");
  if (c.name == "prop58" && !c.l_prime && !s.l_prime) fail(join(path, "l_prime"), "required by prop58 (here or in query.l_prime)");
  if (needs_l && !metric) fail(path, c.name + " needs a normed parameter space");
  if ((c.name == "aubin" || c.name == "prop57" || c.name == "prop58") && !s.query.pbar) {
    fail("query.pbar", "required by " + c.name);
  }
  if (c.name == "evp") {
    if (!c.start) fail(join(path, "start"), "required by evp");
    if (c.start->size() != f.xdim()) fail(join(path, "start"), "must have dim X entries");
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("scenario parse error at line " + std::to_string(line) + ", column " + std::to_string(col) + ": " +
                     e.what());
  }
  allow_keys(doc, "", {"name", "description", "spaces", "mapping", "query", "grids", "checks", "cross_validate", "output"});
  Scenario s;
  if (doc.contains("name")) s.name = doc["name"].is_string() ? doc["name"].get<std::string>() : (fail("name", "expected a string"), "");
  if (doc.contains("description") && doc["description"].is_string()) s.description = doc["description"].get<std::string>();
  for (const char* k : {"mapping", "query", "grids", "checks"}) {
    if (!doc.contains(k)) fail(k, "missing block");
  }
  s.mapping = mapping(doc["mapping"], "mapping");
  const auto& f = *s.mapping;

  if (doc.contains("spaces")) {
    const auto& sp = doc["spaces"];
    allow_keys(sp, "spaces", {"p", "x", "y", "labels"});
    if (sp.contains("x") && integer(sp["x"], "spaces.x") != f.xdim()) fail("spaces.x", "does not match the mapping");
    if (sp.contains("y") && integer(sp["y"], "spaces.y") != f.ydim()) fail("spaces.y", "does not match the mapping");
    if (sp.contains("p") && (!f.carrier().has_metric() || integer(sp["p"], "spaces.p") != f.carrier().dim)) {
      fail("spaces.p", "does not match the mapping");
    }
    if (sp.contains("labels") && (f.carrier().has_metric() || integer(sp["labels"], "spaces.labels") != f.carrier().labels)) {
      fail("spaces.labels", "does not match the mapping");
    }
  }

  const auto& q = doc["query"];
  allow_keys(q, "query", {"xbar", "ybar", "pbar", "alpha", "delta", "mu", "eta", "gamma", "tau", "l", "l_prime"});
  if (!q.contains("xbar")) fail("query.xbar", "missing");
  s.query.xbar = vec(q["xbar"], "query.xbar");
  s.query.ybar = q.contains("ybar") ? vec(q["ybar"], "query.ybar") : Vec::Zero(f.ydim());
  if (q.contains("pbar")) s.query.pbar = vec(q["pbar"], "query.pbar");
  if (q.contains("alpha")) s.query.alpha = finite_number(q["alpha"], "query.alpha");
  if (q.contains("delta")) s.query.delta = extent(q["delta"], "query.delta");
  if (q.contains("mu")) s.query.mu = extent(q["mu"], "query.mu");
  if (q.contains("eta")) s.query.eta = extent(q["eta"], "query.eta");
  if (q.contains("gamma")) s.query.gamma = finite_number(q["gamma"], "query.gamma");
  if (q.contains("tau")) s.query.tau = finite_number(q["tau"], "query.tau");
  if (q.contains("l")) s.l = finite_number(q["l"], "query.l");
  if (q.contains("l_prime")) s.l_prime = finite_number(q["l_prime"], "query.l_prime");
  if (f.carrier().has_metric() && f.carrier().dim == 0) s.query.pbar = Vec::Zero(0);
  if (f.carrier().kind == ParameterCarrier::Kind::Labels && s.query.pbar) {
    fail("query.pbar", "label parameter sets scan every label; drop pbar");
  }
  try {
    s.query.validate(f);
  } catch (const InputError& e) {
    fail("query", e.what());
  }

  const auto& g = doc["grids"];
  allow_keys(g, "grids", {"x", "p", "y", "max_points"});
  if (!g.contains("x")) fail("grids.x", "missing");
  s.grids.x = grid(g["x"], "grids.x");
  if (s.grids.x.dim() != f.xdim()) fail("grids.x", "dimension must equal dim X");
  if (g.contains("p")) {
    s.grids.p = grid(g["p"], "grids.p");
    if (!f.carrier().has_metric() || s.grids.p->dim() != f.carrier().dim) fail("grids.p", "dimension must equal dim P");
  }
  if (g.contains("y")) {
    s.grids.y = grid(g["y"], "grids.y");
    if (s.grids.y->dim() != f.ydim()) fail("grids.y", "dimension must equal dim Y");
  }
  if (g.contains("max_points")) {
    const double mp = finite_number(g["max_points"], "grids.max_points");
    if (!(mp >= 1)) fail("grids.max_points", "must be at least 1");
    s.grids.max_points = static_cast<std::size_t>(mp);
  }
  if (f.carrier().has_metric() && f.carrier().dim > 0 && !s.query.pbar && !s.grids.p) {
    fail("query.pbar", "a normed parameter space needs pbar or grids.p");
  }

  if (!doc["checks"].is_array() || doc["checks"].empty()) fail("checks", "expected a nonempty list");
  for (std::size_t i = 0; i < doc["checks"].size(); ++i) {
    const std::string path = "checks[" + std::to_string(i) + "]";
    CheckSpec c = check_spec(doc["checks"][i], path);
    if (c.label.empty()) c.label = default_label(c);
    validate_check(s, c, path);
    s.checks.push_back(std::move(c));
  }
  if (doc.contains("cross_validate")) {
    if (!doc["cross_validate"].is_boolean()) fail("cross_validate", "expected true or false");
    s.cross_validate = doc["cross_validate"].get<bool>();
  }
  if (doc.contains("output")) {
    allow_keys(doc["output"], "output", {"csv", "report"});
    if (doc["output"].contains("csv")) s.output.csv = doc["output"]["csv"].get<std::string>();
    if (doc["output"].contains("report")) s.output.report = doc["output"]["report"].get<std::string>();
  }

  // Echo with defaults filled in.
  json e = json::object();
  e["name"] = s.name;
  e["description"] = s.description;
  e["mapping"] = doc["mapping"];
  e["mapping_description"] = f.describe();
  json qe{{"xbar", vec_json(s.query.xbar)}, {"ybar", vec_json(s.query.ybar)}};
  if (s.query.pbar) qe["pbar"] = vec_json(*s.query.pbar);
  qe["alpha"] = s.query.alpha;
  qe["delta"] = extent_json(s.query.delta);
  qe["mu"] = extent_json(s.query.mu);
  qe["eta"] = extent_json(s.query.eta);
  qe["gamma"] = s.query.gamma;
  qe["tau"] = s.query.tau;
  if (s.l) qe["l"] = *s.l;
  if (s.l_prime) qe["l_prime"] = *s.l_prime;
  e["query"] = qe;
  json ge{{"x", grid_json(s.grids.x)}};
  if (s.grids.p) ge["p"] = grid_json(*s.grids.p);
  if (s.grids.y) ge["y"] = grid_json(*s.grids.y);
  ge["max_points"] = s.grids.max_points;
  e["grids"] = ge;
  json ce = json::array();
  for (const auto& c : s.checks) {
    json cj{{"check", c.name}, {"label", c.label}, {"mode", to_string(c.mode)}};
    if (c.name == "T2") cj["variant"] = c.variant;
    if (c.name == "P5" || c.name == "C33" || c.name == "C34") cj["cone"] = c.cone;
    if (c.name == "prop58") cj["condition"] = c.condition;
    if (c.eta) cj["eta"] = std::isinf(*c.eta) ? json("inf") : json(*c.eta);
    if (c.expect) cj["expect"] = to_string(*c.expect);
    ce.push_back(cj);
  }
  e["checks"] = ce;
  e["cross_validate"] = s.cross_validate;
  e["output"] = json{{"csv", s.output.csv}, {"report", s.output.report}};
  s.echo = e.dump(2);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open scenario file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

namespace {

Certificate run_modulus(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids) {
  const ModulusEstimate m = estimate_modulus(f, q, grids);
  Certificate c;
  c.check = "modulus";
  c.meta = m.meta;
  c.meta.threshold = q.alpha;
  c.meta.scanned = m.scanned;
  c.margin = m.value - q.alpha;
  c.verdict = m.value >= q.alpha * (1.0 - 1e-9) ? Verdict::Holds : Verdict::Violated;
  if (m.argmin) {
    c.witness = m.argmin;
    c.witness->value = m.value;
  }
  if (m.vacuous) c.flags.push_back("vacuous: no scanned point outside the solution set");
  if (c.violated()) c.failed = "modulus estimate >= alpha";
  return c;
}

Certificate run_evp(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids, const CheckSpec& spec) {
  const ScanSetup s = prepare_scan(f, q, grids);
  const Vec p = q.pbar ? *q.pbar : s.params.front();
  std::vector<double> values(s.xs.size());
  std::size_t start = 0;
  double best_d = kInf;
  for (std::size_t i = 0; i < s.xs.size(); ++i) {
    values[i] = f.residual(p, s.xs[i], s.ybar);
    const double d = (s.xs[i] - *spec.start).norm();
    if (d < best_d) {
      best_d = d;
      start = i;
    }
  }
  const double inf_f = *std::min_element(values.begin(), values.end());
  const double eps = spec.eps.value_or(values[start] - inf_f + 1e-9 * std::max(1.0, std::abs(values[start])));
  const double lambda = spec.lambda.value_or(s.delta);
  const EvpResult r = evp_search(s.xs, values, start, eps, lambda);
  Certificate c;
  c.check = "evp";
  c.meta = s.meta;
  c.meta.set("eps", eps);
  c.meta.set("lambda", lambda);
  c.meta.set("trace_length", static_cast<double>(r.trace.size()));
  c.meta.scanned = s.xs.size();
  c.verdict = r.ok() ? Verdict::Holds : Verdict::Violated;
  c.margin = values[start] - values[r.xhat_index];
  c.witness = Witness{p, r.xhat, Vec(), values[r.xhat_index]};
  c.meta.notes.push_back("f = d(ybar, F(pbar, .)) on the x grid, start snapped to the nearest grid point");
  if (!r.ok()) {
    std::string what;
    if (!r.within_lambda) what += " d(xhat,x) < lambda";
    if (!r.not_worse) what += " f(xhat) <= f(x)";
    if (!r.perturbed_minimum) what += " perturbed minimality";
    c.failed = "EVP conclusions failed:" + what;
  }
  return c;
}

Certificate run_prop57(const SetValuedMap& f, const RegularityQuery& q, const ScanGrids& grids, double l) {
  const Certificate sub = check_subreg_uniform(f, q, grids);
  RegularityQuery qr = q;
  qr.mu = Extent(q.alpha * sub.meta.mu / l);
  qr.delta = Extent(sub.meta.delta);
  if (std::isfinite(sub.meta.eta)) qr.eta = Extent(sub.meta.eta);
  const Certificate rec = check_recede(f, qr, l, grids);
  if (!sub.holds() || !rec.holds()) {
    Certificate c;
    c.check = "prop57";
    c.meta = sub.meta;
    c.verdict = Verdict::Inconclusive;
    c.meta.notes.push_back("premises not certified: subregularity " + to_string(sub.verdict) + ", recede " +
                           to_string(rec.verdict));
    return c;
  }
  ComposedAubin comp = compose_rate(f, sub, rec, *q.pbar, q.xbar, q.ybar, grids);
  Certificate c = comp.validation;
  c.check = "prop57";
  c.meta.set("rate", comp.claim.l);
  c.meta.set("mu_prime", comp.claim.mu.value());
  return c;
}

Certificate run_one(const Scenario& sc, const CheckSpec& c) {
  const auto& f = *sc.mapping;
  const auto& q = sc.query;
  const auto& g = sc.grids;
  const CheckOptions opt{c.mode, c.scan_radius};
  const ConeKind cone = c.cone == "frechet" ? ConeKind::Frechet : ConeKind::Clarke;
  const double l = c.l ? *c.l : (sc.l ? *sc.l : 1.0);
  if (c.name == "oracle") return check_subreg_uniform(f, q, g);
  if (c.name == "geometric") return check_geometric(f, q, g);
  if (c.name == "modulus") return run_modulus(f, q, g);
  if (c.name == "P1") return check_theorem_P1(f, q, g, opt);
  if (c.name == "C22") return check_corollary_C22(f, q, g, opt);
  if (c.name == "P5") return check_P5(f, q, g, opt, cone, c.c7_epsilon);
  if (c.name == "T2") {
    return check_T2(f, q, g, opt, c.variant == "frechet-cap" ? T2Variant::FrechetCap : T2Variant::ConvexNormal);
  }
  if (c.name == "C33") return check_C33_C34(f, q, g, CoderivativeForm::Ball, *c.eta, opt, cone);
  if (c.name == "C34") return check_C33_C34(f, q, g, CoderivativeForm::Normalized, *c.eta, opt, cone);
  if (c.name == "recede") return check_recede(f, q, l, g);
  if (c.name == "aubin") return check_aubin(f, AubinQuery{*q.pbar, q.xbar, q.ybar, l, q.eta, q.delta, q.mu}, g);
  if (c.name == "prop57") return run_prop57(f, q, g, l);
  if (c.name == "prop58") {
    const double lp = c.l_prime ? *c.l_prime : *sc.l_prime;
    return run_prop58_pipeline(f, q, l, lp, parse_prop58_condition(c.condition), g, c.eta).summary;
  }
  if (c.name == "evp") return run_evp(f, q, g, c);
  throw InputError("unknown check '" + c.name + "'");
}

bool is_sufficient_condition(const CheckSpec& c) {
  static const std::set<std::string> k{"P1", "C22", "P5", "T2", "C33", "C34"};
  return k.count(c.name) && c.mode == Mode::Sufficient;
}

}  // namespace

RunResult run_scenario(const Scenario& s) {
  std::vector<CheckSpec> order;
  for (const char* first : {"oracle", "geometric", "modulus"}) {
    for (const auto& c : s.checks) {
      if (c.name == first) order.push_back(c);
    }
  }
  if (s.cross_validate && std::none_of(order.begin(), order.end(), [](const CheckSpec& c) { return c.name == "oracle"; })) {
    CheckSpec o;
    o.name = "oracle";
    o.label = "oracle";
    order.insert(order.begin(), o);
  }
  for (const auto& c : s.checks) {
    if (c.name != "oracle" && c.name != "geometric" && c.name != "modulus") order.push_back(c);
  }
  RunResult r;
  for (const auto& c : order) {
    CheckOutcome o;
    o.label = c.label;
    o.expect = c.expect;
    const auto t0 = std::chrono::steady_clock::now();
    o.cert = run_one(s, c);
    o.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.matches = !c.expect || *c.expect == o.cert.verdict;
    r.all_expected = r.all_expected && o.matches;
    r.outcomes.push_back(std::move(o));
  }
  const CheckOutcome* oracle = nullptr;
  for (const auto& o : r.outcomes) {
    if (o.cert.check == "oracle") {
      oracle = &o;
      break;
    }
  }
  if (oracle) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto& c = order[i];
      const auto& cert = r.outcomes[i].cert;
      if (is_sufficient_condition(c) && cert.holds() && oracle->cert.violated()) {
        r.conflicts.push_back(r.outcomes[i].label + " HOLDS but the oracle is VIOLATED");
      }
      if (c.mode == Mode::Necessary && cert.violated() && oracle->cert.holds()) {
        r.conflicts.push_back(r.outcomes[i].label + " is VIOLATED but the oracle HOLDS");
      }
    }
  }
  return r;
}

std::string example_a_json() {
  return R"({
  "name": "example_a",
  "description": "F(p,x) = {(p-x)^2}, ybar = 0: not subregular in x uniformly in p",
  "spaces": {"p": 1, "x": 1, "y": 1},
  "mapping": {"kind": "rule", "rule": "square_diff", "coefficients": [1.0]},
  "query": {"xbar": [0], "ybar": [0], "pbar": [0], "alpha": 0.5, "delta": 0.5, "mu": 0.5, "eta": 0.1,
            "gamma": 1.0, "tau": 0.99, "l": 1.0, "l_prime": 1.0},
  "grids": {"x": {"lower": [-1], "upper": [1], "resolution": 201},
            "p": {"lower": [-1], "upper": [1], "resolution": 41}},
  "checks": [
    {"check": "oracle", "expect": "VIOLATED"},
    {"check": "geometric", "expect": "VIOLATED"},
    {"check": "modulus", "expect": "VIOLATED"},
    {"check": "P1", "expect": "VIOLATED"},
    {"check": "C22", "expect": "VIOLATED"},
    {"check": "P5", "cone": "frechet", "expect": "VIOLATED"},
    {"check": "T2", "expect": "VIOLATED"},
    {"check": "T2", "variant": "frechet-cap", "expect": "VIOLATED"},
    {"check": "C33", "eta": 0.5, "expect": "VIOLATED"},
    {"check": "C34", "eta": 0.5, "expect": "VIOLATED"},
    {"check": "recede", "l": 0.5, "expect": "HOLDS"},
    {"check": "aubin", "l": 1.0, "expect": "HOLDS"},
    {"check": "prop58", "condition": "slope", "expect": "VIOLATED"},
    {"check": "evp", "start": [0.4], "lambda": 1.0, "expect": "HOLDS"}
  ],
  "cross_validate": true,
  "output": {"csv": "example_a.csv", "report": "example_a.txt"}
}
)";
}

std::string example_b_json() {
  return R"({
  "name": "example_b",
  "description": "F(p,x) = {p-x}, ybar = 0: alpha-subregular in x uniformly in p for every alpha in ]0,1]",
  "spaces": {"p": 1, "x": 1, "y": 1},
  "mapping": {"kind": "rule", "rule": "linear_diff", "dim": 1},
  "query": {"xbar": [0], "ybar": [0], "pbar": [0], "alpha": 1.0, "delta": 0.5, "mu": 0.5, "eta": 0.5,
            "gamma": 1.0, "tau": 0.99, "l": 1.0, "l_prime": 1.0},
  "grids": {"x": {"lower": [-1], "upper": [1], "resolution": 201},
            "p": {"lower": [-1], "upper": [1], "resolution": 21}},
  "checks": [
    {"check": "oracle", "expect": "HOLDS"},
    {"check": "geometric", "expect": "HOLDS"},
    {"check": "modulus", "expect": "HOLDS"},
    {"check": "P1", "expect": "HOLDS"},
    {"check": "P1", "mode": "necessary", "expect": "HOLDS"},
    {"check": "C22", "expect": "HOLDS"},
    {"check": "C22", "mode": "necessary", "expect": "HOLDS"},
    {"check": "P5", "expect": "HOLDS"},
    {"check": "P5", "mode": "necessary", "expect": "HOLDS"},
    {"check": "T2", "expect": "HOLDS"},
    {"check": "T2", "variant": "frechet-cap", "expect": "HOLDS"},
    {"check": "T2", "mode": "necessary", "expect": "HOLDS"},
    {"check": "C33", "mode": "necessary", "eta": 0.5, "expect": "HOLDS"},
    {"check": "recede", "expect": "HOLDS"},
    {"check": "aubin", "expect": "HOLDS"},
    {"check": "prop57", "expect": "HOLDS"},
    {"check": "prop58", "condition": "normal-cone-convex", "expect": "HOLDS"},
    {"check": "evp", "start": [0.4], "lambda": 1.0, "expect": "HOLDS"}
  ],
  "cross_validate": true,
  "output": {"csv": "example_b.csv", "report": "example_b.txt"}
}
)";
}

}  // namespace regulab

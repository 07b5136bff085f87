#include "sbic/io.hpp"

#include <fstream>
#include <bit>
#include <iomanip>
#include <set>
#include <sstream>

#include "sbic/errors.hpp"

namespace sbic {

using nlohmann::ordered_json;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(s);
  while (std::getline(is, cell, sep)) out.push_back(trim(cell));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::vector<std::string> content_lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(line);
  }
  return out;
}

nlohmann::json parse_json(const std::string& text, const char* what) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InputError(std::string("malformed ") + what + " JSON: " + e.what());
  }
}

std::string node_id(const nlohmann::json& j) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw InputError("node ids must be strings or integers");
}

Rational json_rational(const nlohmann::json& j, const std::string& where) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (j.is_number()) {
    // Go through the shortest decimal text so 0.1 means 1/10.
    return parse_rational(j.dump());
  }
  throw InputError(where + " must be a number or a \"p/q\" string");
}

SubsetVector<Rational> parse_pattern_table(const std::string& csv_text, std::size_t n, const std::string& value_name) {
  const auto lines = content_lines(csv_text);
  if (lines.empty()) throw InputError("empty " + value_name + " file");
  const auto header = split(lines[0], ',');
  if (header.size() != 2 || header[0] != "pattern" || header[1] != value_name)
    throw InputError("expected header 'pattern," + value_name + "'");
  SubsetVector<Rational> values(std::size_t{1} << n, Rational(0));
  std::set<std::string> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto cells = split(lines[k], ',');
    const std::string where = "line " + std::to_string(k + 1);
    if (cells.size() != 2) throw InputError(where + ": expected two fields");
    const auto& pat = cells[0];
    if (pat.size() != n) throw InputError(where + ": pattern '" + pat + "' does not have " + std::to_string(n) + " digits");
    std::size_t alpha = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (pat[i] == '1')
        alpha |= std::size_t{1} << i;
      else if (pat[i] != '0')
        throw InputError(where + ": pattern '" + pat + "' is not binary");
    }
    if (!seen.insert(pat).second) throw InputError(where + ": duplicate pattern " + pat);
    Rational v;
    try {
      v = parse_rational(cells[1]);
    } catch (const InputError&) {
      throw InputError(where + ": malformed " + value_name + " '" + cells[1] + "'");
    }
    if (sgn(v) < 0) throw InputError(where + ": negative " + value_name);
    values[alpha] = v;
  }
  return values;
}

ordered_json names(const RootedTree& tree, const std::vector<NodeId>& nodes) {
  auto out = ordered_json::array();
  for (NodeId v : nodes) out.push_back(tree.name(v));
  return out;
}

ordered_json leaf_names(const RootedTree& tree, LeafSet s) {
  auto out = ordered_json::array();
  for (std::size_t i = 0; i < tree.leaf_count(); ++i)
    if (s >> i & 1u) out.push_back(tree.name(tree.leaf(i)));
  return out;
}

ordered_json edge_names(const RootedTree& tree, const std::vector<EdgeId>& edges) {
  auto out = ordered_json::array();
  for (EdgeId e : edges) out.push_back({tree.name(tree.edge(e).parent), tree.name(tree.edge(e).child)});
  return out;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
}

RootedTree parse_tree(const std::string& json_text) {
  const auto j = parse_json(json_text, "tree");
  if (!j.is_object() || !j.contains("root") || !j.contains("leaves") || !j.contains("edges"))
    throw InputError("tree document needs \"root\", \"leaves\" and \"edges\"");
  if (!j["leaves"].is_array() || !j["edges"].is_array()) throw InputError("\"leaves\" and \"edges\" must be arrays");
  std::vector<std::string> leaves;
  for (const auto& l : j["leaves"]) leaves.push_back(node_id(l));
  std::vector<std::pair<std::string, std::string>> edges;
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 2) throw InputError("each edge must be a [parent, child] pair");
    edges.emplace_back(node_id(e[0]), node_id(e[1]));
  }
  return RootedTree::build(node_id(j["root"]), leaves, edges);
}

RootedTree load_tree(const std::string& path) { return parse_tree(read_file(path)); }

CountTable parse_counts(const std::string& csv_text, std::size_t leaf_count) {
  return CountTable::from_counts(leaf_count, parse_pattern_table(csv_text, leaf_count, "count"));
}

SubsetVector<Rational> parse_probabilities(const std::string& csv_text, std::size_t leaf_count) {
  auto p = parse_pattern_table(csv_text, leaf_count, "probability");
  Rational total = 0;
  for (const auto& x : p) total += x;
  if (total != 1) throw InputError("probabilities sum to " + to_string(total) + ", not 1");
  return p;
}

ThetaPoint<Rational> parse_theta(const std::string& json_text, const RootedTree& tree) {
  const auto j = parse_json(json_text, "theta");
  if (!j.is_object() || !j.contains("root_p1") || !j.contains("edges") || !j["edges"].is_array())
    throw InputError("theta document needs \"root_p1\" and an \"edges\" array");
  ThetaPoint<Rational> th;
  th.root_p1 = json_rational(j["root_p1"], "root_p1");
  th.p1_given0.assign(tree.edge_count(), Rational(-1));
  th.p1_given1.assign(tree.edge_count(), Rational(-1));
  std::vector<char> seen(tree.edge_count(), 0);
  for (const auto& e : j["edges"]) {
    if (!e.is_array() || e.size() != 4) throw InputError("theta edges are [parent, child, p1_given0, p1_given1]");
    const NodeId parent = tree.node(node_id(e[0]));
    const NodeId child = tree.node(node_id(e[1]));
    if (child == tree.root() || tree.parent(child) != parent)
      throw InputError("theta lists " + tree.name(parent) + "->" + tree.name(child) + ", which is not a tree edge");
    const EdgeId id = tree.parent_edge(child);
    if (seen[id]++) throw InputError("theta lists edge " + tree.name(parent) + "->" + tree.name(child) + " twice");
    th.p1_given0[id] = json_rational(e[2], "p1_given0");
    th.p1_given1[id] = json_rational(e[3], "p1_given1");
  }
  for (EdgeId e = 0; e < tree.edge_count(); ++e)
    if (!seen[e])
      throw InputError("theta is missing edge " + tree.name(tree.edge(e).parent) + "->" + tree.name(tree.edge(e).child));
  check_theta(tree, th);
  return th;
}

std::vector<long> parse_long_list(const std::string& text) {
  std::vector<long> out;
  for (const auto& cell : split(text, ',')) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(cell, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (cell.empty() || used != cell.size()) throw InputError("'" + cell + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

ExponentSet parse_exponents(const std::string& csv_text) {
  ExponentSet es;
  std::size_t row = 0;
  for (const auto& line : content_lines(csv_text)) {
    ++row;
    std::vector<long> v;
    try {
      v = parse_long_list(line);
    } catch (const InputError& e) {
      throw InputError("row " + std::to_string(row) + ": " + e.what());
    }
    if (es.points.empty())
      es.dimension = v.size();
    else if (v.size() != es.dimension)
      throw InputError("row " + std::to_string(row) + " has " + std::to_string(v.size()) + " entries, expected " +
                       std::to_string(es.dimension));
    es.points.push_back(std::move(v));
  }
  if (es.points.empty()) throw InputError("no exponent vectors");
  es.validate();
  return es;
}

std::string leaf_set_names(const RootedTree& tree, LeafSet s) {
  std::string out;
  for (std::size_t i = 0; i < tree.leaf_count(); ++i)
    if (s >> i & 1u) {
      if (!out.empty()) out += ',';
      out += tree.name(tree.leaf(i));
    }
  return out;
}

ordered_json score_json(const RootedTree& tree, const ScoreReport& r) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["lambda"] = to_string(r.lambda);
  j["lambda_float"] = r.lambda.get_d();
  j["multiplicity"] = r.multiplicity ? ordered_json(*r.multiplicity) : ordered_json(nullptr);
  j["loglog_known"] = r.loglog_known;
  j["regime"] = regime_name(r.regime);
  j["l1"] = r.pattern.l1;
  j["l2"] = r.pattern.l2;
  j["l3"] = r.pattern.l3;
  j["degree_one"] = r.pattern.degree_one;
  j["isolated_edges"] = edge_names(tree, r.pattern.isolated_edges);
  j["degenerate_nodes"] = names(tree, r.pattern.degenerate);
  auto comps = ordered_json::array();
  for (const auto& c : r.components) {
    ordered_json o;
    o["kind"] = c.kind;
    o["value"] = to_string(c.value);
    if (c.kind == "smooth") o["leaves"] = leaf_names(tree, c.leaves);
    if (c.kind == "zero") o["terminals"] = names(tree, c.terminals);
    if (c.kind != "means") o["edges"] = edge_names(tree, c.edges);
    comps.push_back(std::move(o));
  }
  j["components"] = std::move(comps);
  j["max_loglik"] = r.max_loglik ? ordered_json(*r.max_loglik) : ordered_json(nullptr);
  j["log_evidence"] = r.log_evidence ? ordered_json(*r.log_evidence) : ordered_json(nullptr);
  j["sample_size"] = r.sample_size;
  j["tolerance"] = r.tolerance;
  j["fit_distance"] = r.fit_distance ? ordered_json(*r.fit_distance) : ordered_json(nullptr);
  j["warnings"] = r.warnings;
  return j;
}

ordered_json rlct_json(const RlctPair& p) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["threshold"] = p.infinite ? "inf" : to_string(p.threshold);
  j["multiplicity"] = p.multiplicity;
  return j;
}

ordered_json polytope_json(const RootedTree& tree, const PolytopeReport& r, const GammaReport* gamma) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  const bool pass = r.passed() && (gamma == nullptr || gamma->passed());
  j["verdict"] = pass ? "pass" : "fail";
  j["leaves"] = tree.leaf_count();
  j["vertices"] = r.vertices.size();
  j["dimension"] = r.dimension;
  j["expected_dimension"] = r.expected_dimension;
  j["hull_computed"] = r.hull_computed;
  j["facets"] = r.hull_computed ? ordered_json(r.facet_count) : ordered_json(nullptr);
  j["expected_facets"] = r.expected_facets;
  j["terminal_sum_ok"] = r.terminal_sum_ok;
  j["inequalities_valid"] = r.inequalities_valid;
  j["inequalities_facet_defining"] = r.inequalities_facets;
  j["facets_match"] = r.hull_computed ? ordered_json(r.facets_match) : ordered_json(nullptr);
  auto claimed = ordered_json::array();
  for (const auto& h : r.claimed) claimed.push_back(h.label);
  j["claimed_inequalities"] = std::move(claimed);
  if (gamma) j["structure_points_checked"] = gamma->points_checked;
  auto failures = r.failures;
  if (gamma) failures.insert(failures.end(), gamma->failures.begin(), gamma->failures.end());
  j["failures"] = failures;
  return j;
}

ordered_json validation_json(const ValidationReport& r, const ValidationConfig& c) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["slope"] = r.regression.slope;
  j["slope_se"] = r.regression.slope_se;
  j["intercept"] = r.regression.intercept;
  j["points_used"] = r.regression.points_used;
  j["expected_lambda"] = to_string(r.expected_lambda);
  j["expected_lambda_float"] = r.expected_lambda.get_d();
  j["regime"] = r.regime;
  j["tolerance"] = c.slope_tolerance;
  j["verdict"] = r.pass ? "pass" : "fail";
  j["estimator"] = estimator_name(c.estimator);
  j["prior"] = c.prior.describe();
  j["samples"] = c.samples;
  j["seed"] = c.seed;
  auto est = ordered_json::array();
  for (const auto& e : r.estimates) est.push_back({{"N", e.n}, {"logI", e.log_integral}, {"stderr", e.std_error}, {"ess", e.ess}});
  j["estimates"] = std::move(est);
  j["warnings"] = r.warnings;
  return j;
}

std::string validation_csv(const ValidationReport& r) {
  std::ostringstream os;
  os << "N,logI,stderr\n" << std::setprecision(17);
  for (const auto& e : r.estimates) os << e.n << ',' << e.log_integral << ',' << e.std_error << '\n';
  return os.str();
}

ordered_json cumulants_json(const RootedTree& tree, const CumulantVector<Rational>& c) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  auto means = ordered_json::object();
  for (std::size_t i = 0; i < tree.leaf_count(); ++i) means[tree.name(tree.leaf(i))] = to_string(c.means[i]);
  j["means"] = std::move(means);
  auto kappa = ordered_json::array();
  for (std::size_t I = 0; I < c.kappa.size(); ++I) {
    if (std::popcount(I) < 2) continue;
    kappa.push_back({{"leaves", leaf_names(tree, static_cast<LeafSet>(I))}, {"value", to_string(c.kappa[I])}});
  }
  j["cumulants"] = std::move(kappa);
  return j;
}

}  // namespace sbic

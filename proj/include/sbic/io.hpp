#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "sbic/covariance.hpp"
#include "sbic/laplace.hpp"
#include "sbic/moments.hpp"
#include "sbic/newton.hpp"
#include "sbic/polytope.hpp"
#include "sbic/score.hpp"
#include "sbic/tree.hpp"

namespace sbic {

inline constexpr int kSchemaVersion = 1;

std::string read_file(const std::string& path);  // InputError when unreadable
void write_file(const std::string& path, const std::string& text);

// {"root": id, "leaves": [id...], "edges": [[parent, child], ...]}
RootedTree parse_tree(const std::string& json_text);
RootedTree load_tree(const std::string& path);

// CSV with header "pattern,count". Character k of a pattern is leaf k in the
// declared leaf order. Counts may be fractional; missing patterns count zero.
CountTable parse_counts(const std::string& csv_text, std::size_t leaf_count);

// Same layout with header "pattern,probability"; entries must sum to one.
SubsetVector<Rational> parse_probabilities(const std::string& csv_text, std::size_t leaf_count);

// {"root_p1": x, "edges": [[parent, child, p1_given0, p1_given1], ...]} with
// numbers or "p/q" strings. Every edge of the tree must appear once.
ThetaPoint<Rational> parse_theta(const std::string& json_text, const RootedTree& tree);

// One nonnegative integer vector per line, comma separated. Blank lines and
// lines starting with '#' are skipped.
ExponentSet parse_exponents(const std::string& csv_text);
std::vector<long> parse_long_list(const std::string& text);  // "1,2,3"

std::string leaf_set_names(const RootedTree& tree, LeafSet s);

nlohmann::ordered_json score_json(const RootedTree& tree, const ScoreReport& report);
nlohmann::ordered_json rlct_json(const RlctPair& pair);
nlohmann::ordered_json polytope_json(const RootedTree& tree, const PolytopeReport& report, const GammaReport* gamma);
nlohmann::ordered_json validation_json(const ValidationReport& report, const ValidationConfig& config);
std::string validation_csv(const ValidationReport& report);
nlohmann::ordered_json cumulants_json(const RootedTree& tree, const CumulantVector<Rational>& c);

}  // namespace sbic

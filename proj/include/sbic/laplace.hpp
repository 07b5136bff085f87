#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "sbic/covariance.hpp"
#include "sbic/moments.hpp"
#include "sbic/tree.hpp"

namespace sbic {

// f(theta) >= 0 on the unit cube, zero on the fiber of the data.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t dimension() const = 0;
  // scratch must hold scratch_size() doubles.
  virtual double evaluate(const double* theta, double* scratch) const = 0;
  virtual std::size_t scratch_size() const { return 0; }
};

// Normalised log-likelihood of the tree model: sum_a p^_a (log p^_a - log p_a(theta)).
// theta = (root P(1), then per edge P(child=1 | parent=0), P(child=1 | parent=1)).
class TreeObjective final : public Objective {
 public:
  TreeObjective(const RootedTree& tree, const SubsetVector<double>& phat);
  std::size_t dimension() const override { return 1 + 2 * parent_pos_.size() - 2; }
  double evaluate(const double* theta, double* scratch) const override;
  std::size_t scratch_size() const override { return 2 * parent_pos_.size(); }

 private:
  std::vector<std::size_t> parent_pos_;  // postorder position of the parent (root: kNone)
  std::vector<std::size_t> edge_;        // edge id above each postorder node
  std::vector<int> leaf_bit_;            // leaf index or -1
  std::vector<std::size_t> support_;     // patterns with p^ > 0
  std::vector<double> weight_;           // p^ on the support
  double negentropy_ = 0.0;              // sum p^ log p^
};

// One Bernoulli variable: f(theta) = q log(q/theta) + (1-q) log((1-q)/(1-theta)).
class BernoulliObjective final : public Objective {
 public:
  explicit BernoulliObjective(double q);
  std::size_t dimension() const override { return 1; }
  double evaluate(const double* theta, double* scratch) const override;

 private:
  double q_;
};

// log of the exact integral of exp(-N f) over [0,1] for the Bernoulli objective
// with counts (N1, N0): log B(N1 + 1, N0 + 1) - N1 log q - N0 log(1 - q).
double bernoulli_log_integral(double n1, double n0);

// Independent Beta(a, b) on every coordinate; a = b = 1 is uniform.
struct Prior {
  double a = 1.0;
  double b = 1.0;
  bool uniform() const { return a == 1.0 && b == 1.0; }
  bool symmetric() const { return a == b; }
  static Prior parse(const std::string& text);  // "uniform" or "beta:a,b"
  std::string describe() const;
};

enum class Estimator { Annealed, PriorSampling };
Estimator parse_estimator(const std::string& text);
std::string estimator_name(Estimator e);

struct ValidationConfig {
  std::vector<double> grid;   // strictly increasing sample sizes
  std::size_t samples = 200'000;
  std::uint64_t seed = 42;
  Prior prior;
  Estimator estimator = Estimator::Annealed;
  std::size_t chunk_size = 1000;  // part of the determinism contract
  double ladder_ratio = 1.03;     // annealing ladder growth
  double ladder_start = 0.5;
  std::size_t moves_per_rung = 2;
  std::size_t drop_smallest = 2;  // regression window
  double slope_tolerance = 0.2;
  bool parallel = true;

  void validate() const;
  std::vector<std::string> warnings() const;
};

std::vector<double> parse_grid(const std::string& text);  // "lo:hi:factor"

struct GridEstimate {
  double n = 0.0;
  double log_integral = 0.0;
  double std_error = 0.0;
  double ess = 0.0;  // effective sample size of the weights
};

struct RegressionResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  std::size_t points_used = 0;
};

// Least squares of log I on log N. Needs at least four points.
RegressionResult slope_regression(const std::vector<double>& n, const std::vector<double>& log_integral);

// Monte Carlo estimates of log I(N) for every grid value. The serial and
// parallel paths run the same chunk kernel and merge chunks in order, so they
// agree bit for bit.
std::vector<GridEstimate> mc_laplace(const Objective& objective, const ValidationConfig& config);
std::vector<GridEstimate> mc_laplace_serial(const Objective& objective, const ValidationConfig& config);

// Fractional counts N p(theta0), exact.
CountTable make_fiber_data(const RootedTree& tree, const ThetaPoint<Rational>& theta0, const Rational& n);

struct ValidationReport {
  std::vector<GridEstimate> estimates;
  RegressionResult regression;
  Rational expected_lambda;
  std::string regime;
  bool pass = false;
  std::vector<std::string> warnings;
};

// Fiber data from theta0, expected coefficient from the score engine, Monte
// Carlo estimates and the slope verdict.
ValidationReport validate_tree(const RootedTree& tree, const ThetaPoint<Rational>& theta0,
                               const ValidationConfig& config);

}  // namespace sbic

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "sbic/errors.hpp"
#include "sbic/laplace.hpp"

namespace sbic {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-grid-point partial sums of one chunk, weights scaled by exp(-max).
struct ChunkSums {
  std::vector<double> max;
  std::vector<double> sum;
  std::vector<double> sum_sq;
  std::size_t count = 0;

  explicit ChunkSums(std::size_t grid) : max(grid, kNegInf), sum(grid, 0.0), sum_sq(grid, 0.0) {}
};

// Two passes would need the weights stored; a running rescale keeps one pass.
void accumulate(ChunkSums& c, std::size_t g, double logw) {
  if (logw == kNegInf) return;
  if (logw > c.max[g]) {
    const double s = std::exp(c.max[g] - logw);
    c.sum[g] *= s;
    c.sum_sq[g] *= s * s;
    c.max[g] = logw;
  }
  const double w = std::exp(logw - c.max[g]);
  c.sum[g] += w;
  c.sum_sq[g] += w * w;
}

std::mt19937_64 chunk_rng(std::uint64_t seed, std::size_t chunk) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(chunk), static_cast<std::uint32_t>(chunk >> 32)};
  return std::mt19937_64(seq);
}

class PriorSampler {
 public:
  explicit PriorSampler(const Prior& p) : prior_(p), ga_(p.a, 1.0), gb_(p.b, 1.0) {}

  double draw(std::mt19937_64& rng) {
    if (prior_.uniform()) return unit_(rng);
    const double x = ga_(rng);
    const double y = gb_(rng);
    return x / (x + y);
  }

  // log density up to a constant
  double log_density(const double* theta, std::size_t d) const {
    if (prior_.uniform()) return 0.0;
    double s = 0.0;
    for (std::size_t j = 0; j < d; ++j) {
      if (prior_.a != 1.0) s += (prior_.a - 1.0) * std::log(theta[j]);
      if (prior_.b != 1.0) s += (prior_.b - 1.0) * std::log1p(-theta[j]);
    }
    return s;
  }

 private:
  Prior prior_;
  std::uniform_real_distribution<double> unit_{0.0, 1.0};
  std::gamma_distribution<double> ga_, gb_;
};

struct Ladder {
  std::vector<double> beta;     // beta[0] = 0
  std::vector<long> grid_slot;  // index into the grid, or -1
};

Ladder make_ladder(const ValidationConfig& cfg) {
  std::vector<double> values;
  for (double b = cfg.ladder_start; b < cfg.grid.back(); b *= cfg.ladder_ratio) values.push_back(b);
  Ladder lad;
  lad.beta.push_back(0.0);
  lad.grid_slot.push_back(-1);
  std::size_t g = 0;
  for (double b : values) {
    while (g < cfg.grid.size() && cfg.grid[g] <= b * (1.0 + 1e-12)) {
      if (cfg.grid[g] > lad.beta.back()) {
        lad.beta.push_back(cfg.grid[g]);
        lad.grid_slot.push_back(static_cast<long>(g));
      }
      ++g;
    }
    if (b > lad.beta.back() * (1.0 + 1e-12)) {
      lad.beta.push_back(b);
      lad.grid_slot.push_back(-1);
    }
  }
  for (; g < cfg.grid.size(); ++g) {
    lad.beta.push_back(cfg.grid[g]);
    lad.grid_slot.push_back(static_cast<long>(g));
  }
  return lad;
}

double reflect(double x) {
  x = std::fmod(std::abs(x), 2.0);
  return x > 1.0 ? 2.0 - x : x;
}

// Annealed importance sampling: prior draws moved through exp(-beta f) for an
// increasing ladder of beta, with the weight read off at every grid value.
ChunkSums annealed_chunk(const Objective& obj, const ValidationConfig& cfg, const Ladder& lad, std::size_t chunk,
                         std::size_t particles) {
  ChunkSums out(cfg.grid.size());
  out.count = particles;
  auto rng = chunk_rng(cfg.seed, chunk);
  PriorSampler prior(cfg.prior);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t d = obj.dimension();
  std::vector<double> theta(d), proposal(d), scratch(obj.scratch_size() + 1);

  for (std::size_t p = 0; p < particles; ++p) {
    for (auto& t : theta) t = prior.draw(rng);
    double f = obj.evaluate(theta.data(), scratch.data());
    double lp = prior.log_density(theta.data(), d);
    double logw = 0.0;
    for (std::size_t k = 1; k < lad.beta.size(); ++k) {
      const double beta = lad.beta[k];
      logw -= (beta - lad.beta[k - 1]) * f;
      if (logw == kNegInf || std::isnan(logw)) {
        logw = kNegInf;
        break;
      }
      if (lad.grid_slot[k] >= 0) accumulate(out, static_cast<std::size_t>(lad.grid_slot[k]), logw);
      const double step = std::min(0.3, 1.0 / std::sqrt(beta));
      for (std::size_t m = 0; m < cfg.moves_per_rung; ++m) {
        for (std::size_t j = 0; j < d; ++j) proposal[j] = reflect(theta[j] + step * gauss(rng));
        const double fp = obj.evaluate(proposal.data(), scratch.data());
        const double lpp = prior.log_density(proposal.data(), d);
        const double log_accept = -beta * (fp - f) + (lpp - lp);
        if (std::log(unit(rng)) < log_accept) {
          theta.swap(proposal);
          f = fp;
          lp = lpp;
        }
      }
    }
  }
  return out;
}

double log_add(double a, double b) {
  if (a == kNegInf) return b;
  if (b == kNegInf) return a;
  const double m = std::max(a, b);
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// Plain prior sampling; for symmetric priors each draw is paired with its
// mirror image 1 - theta and the pair average is one sample.
ChunkSums prior_chunk(const Objective& obj, const ValidationConfig& cfg, std::size_t chunk, std::size_t draws) {
  ChunkSums out(cfg.grid.size());
  auto rng = chunk_rng(cfg.seed, chunk);
  PriorSampler prior(cfg.prior);
  const std::size_t d = obj.dimension();
  std::vector<double> theta(d), mirror(d), scratch(obj.scratch_size() + 1);
  const bool antithetic = cfg.prior.symmetric();
  const std::size_t units = antithetic ? draws / 2 : draws;
  out.count = units;
  for (std::size_t u = 0; u < units; ++u) {
    for (auto& t : theta) t = prior.draw(rng);
    const double f = obj.evaluate(theta.data(), scratch.data());
    double f2 = 0.0;
    if (antithetic) {
      for (std::size_t j = 0; j < d; ++j) mirror[j] = 1.0 - theta[j];
      f2 = obj.evaluate(mirror.data(), scratch.data());
    }
    for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
      const double a = std::isinf(f) ? kNegInf : -cfg.grid[g] * f;
      double logw = a;
      if (antithetic) logw = log_add(a, std::isinf(f2) ? kNegInf : -cfg.grid[g] * f2) - std::log(2.0);
      accumulate(out, g, logw);
    }
  }
  return out;
}

struct Layout {
  std::size_t chunks = 0;
  std::vector<std::size_t> sizes;
};

Layout layout(const ValidationConfig& cfg) {
  Layout l;
  for (std::size_t left = cfg.samples; left > 0;) {
    const std::size_t s = std::min(left, cfg.chunk_size);
    l.sizes.push_back(s);
    left -= s;
  }
  l.chunks = l.sizes.size();
  return l;
}

ChunkSums run_chunk(const Objective& obj, const ValidationConfig& cfg, const Ladder& lad, std::size_t chunk,
                    std::size_t size) {
  return cfg.estimator == Estimator::Annealed ? annealed_chunk(obj, cfg, lad, chunk, size)
                                              : prior_chunk(obj, cfg, chunk, size);
}

// Merges chunks in index order; the standard error comes from the spread of
// the per-chunk means (batch means) through the delta method.
std::vector<GridEstimate> merge(const ValidationConfig& cfg, const std::vector<ChunkSums>& parts) {
  std::vector<GridEstimate> out;
  for (std::size_t g = 0; g < cfg.grid.size(); ++g) {
    double top = kNegInf;
    for (const auto& c : parts) top = std::max(top, c.max[g]);
    if (top == kNegInf || top < std::log(DBL_MIN))
      throw EstimationError("every Monte Carlo weight underflows at N=" + std::to_string(cfg.grid[g]) +
                            "; use more samples or smaller sample sizes");
    double total = 0.0, total_sq = 0.0;
    std::size_t count = 0;
    std::vector<double> batch;
    for (const auto& c : parts) {
      const double scale = c.max[g] == kNegInf ? 0.0 : std::exp(c.max[g] - top);
      total += c.sum[g] * scale;
      total_sq += c.sum_sq[g] * scale * scale;
      count += c.count;
      if (c.count > 0) batch.push_back(c.sum[g] * scale / static_cast<double>(c.count));
    }
    const double mean = total / static_cast<double>(count);
    double rel_se = 0.0;
    if (batch.size() > 1) {
      double var = 0.0;
      double bm = 0.0;
      for (double b : batch) bm += b;
      bm /= static_cast<double>(batch.size());
      for (double b : batch) var += (b - bm) * (b - bm);
      var /= static_cast<double>(batch.size() - 1);
      rel_se = std::sqrt(var / static_cast<double>(batch.size())) / mean;
    } else {
      // One chunk: fall back to the iid formula.
      const double n = static_cast<double>(count);
      const double second = total_sq / n;
      rel_se = std::sqrt(std::max(0.0, second - mean * mean) / n) / mean;
    }
    GridEstimate e;
    e.n = cfg.grid[g];
    e.log_integral = top + std::log(mean);
    e.std_error = rel_se;
    e.ess = total * total / total_sq;
    out.push_back(e);
  }
  return out;
}

}  // namespace

std::vector<GridEstimate> mc_laplace_serial(const Objective& objective, const ValidationConfig& config) {
  config.validate();
  const Ladder lad = make_ladder(config);
  const Layout lay = layout(config);
  std::vector<ChunkSums> parts;
  parts.reserve(lay.chunks);
  for (std::size_t c = 0; c < lay.chunks; ++c) parts.push_back(run_chunk(objective, config, lad, c, lay.sizes[c]));
  return merge(config, parts);
}

std::vector<GridEstimate> mc_laplace(const Objective& objective, const ValidationConfig& config) {
  if (!config.parallel) return mc_laplace_serial(objective, config);
  config.validate();
  const Ladder lad = make_ladder(config);
  const Layout lay = layout(config);
  std::vector<ChunkSums> parts(lay.chunks, ChunkSums(config.grid.size()));
  const long chunks = static_cast<long>(lay.chunks);
#pragma omp parallel for schedule(dynamic, 1)
  for (long c = 0; c < chunks; ++c) {
    const auto k = static_cast<std::size_t>(c);
    parts[k] = run_chunk(objective, config, lad, k, lay.sizes[k]);
  }
  return merge(config, parts);
}

}  // namespace sbic

#pragma once

// Nearest-neighbour walk generators: i.i.d. step laws, the rotating-drift
// walk, its two-periodic-environment twin, a simple random walk with
// deterministic clockwise loops, and random walks in random environment
// with lazily sampled Dirichlet (or uniformly elliptic) site distributions.
//
// Determinism contract: a generator's output is a pure function of its
// parameters and seed. Each walk consumes exactly one uniform per step,
// and environment sites draw from streams keyed by (seed, coordinates), so
// revisits see identical transition probabilities without storing the
// environment up front.

#include "roughwalk/lift.hpp"
#include "roughwalk/rng.hpp"

#include <map>
#include <optional>
#include <vector>

namespace roughwalk {

// Direction order used everywhere a distribution over the 2d nearest
// neighbours appears: +e1, -e1, +e2, -e2, ...
inline Eigen::VectorXd neighbor_step(Index d, Index index) {
  detail::require(0 <= index && index < 2 * d, "neighbor_step: index out of range");
  Eigen::VectorXd dx = Eigen::VectorXd::Zero(d);
  dx[index / 2] = (index % 2 == 0) ? 1.0 : -1.0;
  return dx;
}

struct StepLaw {
  std::vector<Eigen::VectorXd> support;
  Eigen::VectorXd probabilities;

  StepLaw(std::vector<Eigen::VectorXd> sup, Eigen::VectorXd probs)
      : support(std::move(sup)), probabilities(std::move(probs)) {
    detail::require(!support.empty(), "StepLaw: empty support");
    detail::require(probabilities.size() == static_cast<Index>(support.size()),
                    "StepLaw: support/probability size mismatch");
    const Index d = support.front().size();
    for (const auto& v : support) detail::require(v.size() == d, "StepLaw: mixed dimensions");
    detail::require(probabilities.minCoeff() >= 0.0, "StepLaw: negative probability");
    detail::require(std::abs(probabilities.sum() - 1.0) <= 1e-12,
                    "StepLaw: probabilities must sum to 1");
    cumulative_.resize(support.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < support.size(); ++i) {
      acc += probabilities[static_cast<Index>(i)];
      cumulative_[i] = acc;
    }
    cumulative_.back() = 1.0;
  }

  Index dim() const { return support.front().size(); }

  double jump_bound() const {
    double b = 0.0;
    for (const auto& v : support) b = std::max(b, v.norm());
    return b;
  }

  const Eigen::VectorXd& sample(PhiloxEngine& eng) const {
    const double u = eng.next_double();
    for (std::size_t i = 0; i + 1 < cumulative_.size(); ++i) {
      if (u < cumulative_[i]) return support[i];
    }
    return support.back();
  }

 private:
  std::vector<double> cumulative_;
};

inline StepLaw uniform_nearest_neighbor_law(Index d) {
  std::vector<Eigen::VectorXd> support;
  for (Index i = 0; i < 2 * d; ++i) support.push_back(neighbor_step(d, i));
  return StepLaw(std::move(support),
                 Eigen::VectorXd::Constant(2 * d, 1.0 / static_cast<double>(2 * d)));
}

inline StepLaw point_mass_law(Eigen::VectorXd v) {
  std::vector<Eigen::VectorXd> support;
  support.push_back(std::move(v));
  return StepLaw(std::move(support), Eigen::VectorXd::Ones(1));
}

inline DiscretePath<double> gen_iid_walk(const StepLaw& law, Index n, std::uint64_t seed) {
  detail::require(n >= 1, "gen_iid_walk: need at least one step");
  PhiloxEngine eng(seed, stream::kWalk);
  Eigen::MatrixXd inc(law.dim(), n);
  for (Index k = 0; k < n; ++k) inc.col(k) = law.sample(eng);
  return DiscretePath<double>{std::move(inc), law.jump_bound()};
}

// Rotating drift on Z^2: step n is i^n zeta_n under the identification of
// R^2 with the complex plane, where the zeta_n are i.i.d. with
// P(zeta = 1) = p, P(zeta = -1) = 1 - p. Speed 0, covariance 2p(1-p) I,
// area anomaly ((2p-1)^2/4) [[0, 1], [-1, 0]] over the 4-step blocks.
inline DiscretePath<double> gen_rotating_drift(double p, Index n, std::uint64_t seed) {
  detail::require(p >= 0.0 && p <= 1.0, "gen_rotating_drift: p outside [0, 1]");
  detail::require(n >= 1, "gen_rotating_drift: need at least one step");
  PhiloxEngine eng(seed, stream::kWalk);
  Eigen::MatrixXd inc(2, n);
  static const double kDirs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};  // i^0..i^3
  for (Index k = 1; k <= n; ++k) {
    const double zeta = eng.next_double() < p ? 1.0 : -1.0;
    const double* dir = kDirs[k % 4];
    inc(0, k - 1) = zeta * dir[0];
    inc(1, k - 1) = zeta * dir[1];
  }
  return DiscretePath<double>{std::move(inc), 1.0};
}

// Markov chain on Z^2 in the two-periodic environment with parameter p:
// from a site of parity class (0,0) step +e1 with probability p (else -e1),
// from (1,0) step +e2 (else -e2), from (1,1) step -e1 (else +e1), from
// (0,1) step -e2 (else +e2). Started at the origin; the favoured cycle is
// the counterclockwise unit square 0, e1, e1+e2, e2. Path law equals the
// rotating drift's pushed through the rotation (x, y) -> (y, -x).
inline DiscretePath<double> gen_periodic_env_walk(double p, Index n, std::uint64_t seed) {
  detail::require(p >= 0.0 && p <= 1.0, "gen_periodic_env_walk: p outside [0, 1]");
  detail::require(n >= 1, "gen_periodic_env_walk: need at least one step");
  PhiloxEngine eng(seed, stream::kWalk);
  Eigen::MatrixXd inc(2, n);
  long x = 0;
  long y = 0;
  for (Index k = 0; k < n; ++k) {
    double fx = 0.0;
    double fy = 0.0;
    const int px = static_cast<int>(x & 1);
    const int py = static_cast<int>(y & 1);
    if (px == 0 && py == 0) fx = 1.0;
    else if (px == 1 && py == 0) fy = 1.0;
    else if (px == 1 && py == 1) fx = -1.0;
    else fy = -1.0;
    const double sign = eng.next_double() < p ? 1.0 : -1.0;
    inc(0, k) = sign * fx;
    inc(1, k) = sign * fy;
    x += static_cast<long>(inc(0, k));
    y += static_cast<long>(inc(1, k));
  }
  return DiscretePath<double>{std::move(inc), 1.0};
}

// Simple random walk on Z^2 interleaved with a deterministic clockwise unit
// loop: each period of six steps is two uniform nearest-neighbour steps
// followed by (+e1, -e2, -e1, +e2). The loop closes with signed area -1,
// so the anomaly over 6-step blocks is -1/6 per block step.
inline DiscretePath<double> gen_srw_loop_walk(Index n, std::uint64_t seed) {
  detail::require(n >= 1, "gen_srw_loop_walk: need at least one step");
  PhiloxEngine eng(seed, stream::kWalk);
  Eigen::MatrixXd inc(2, n);
  static const double kLoop[4][2] = {{1, 0}, {0, -1}, {-1, 0}, {0, 1}};
  for (Index k = 0; k < n; ++k) {
    const Index phase = k % 6;
    if (phase < 2) {
      const double u = eng.next_double();
      const Index idx = std::min<Index>(3, static_cast<Index>(u * 4.0));
      inc.col(k) = neighbor_step(2, idx);
    } else {
      inc(0, k) = kLoop[phase - 2][0];
      inc(1, k) = kLoop[phase - 2][1];
    }
  }
  return DiscretePath<double>{std::move(inc), 1.0};
}

struct SiteDistribution {
  Eigen::VectorXd probabilities;  // size 2d, direction order as neighbor_step

  explicit SiteDistribution(Eigen::VectorXd probs) : probabilities(std::move(probs)) {
    detail::require(probabilities.size() >= 2 && probabilities.size() % 2 == 0,
                    "SiteDistribution: needs 2d entries");
    detail::require(probabilities.minCoeff() >= 0.0, "SiteDistribution: negative probability");
    detail::require(std::abs(probabilities.sum() - 1.0) <= 1e-12,
                    "SiteDistribution: probabilities must sum to 1");
  }

  Index dim() const { return probabilities.size() / 2; }

  Index sample_index(PhiloxEngine& eng) const {
    const double u = eng.next_double();
    double acc = 0.0;
    for (Index i = 0; i + 1 < probabilities.size(); ++i) {
      acc += probabilities[i];
      if (u < acc) return i;
    }
    return probabilities.size() - 1;
  }
};

struct DirichletParams {
  Eigen::VectorXd alpha;  // size 2d, direction order as neighbor_step

  explicit DirichletParams(Eigen::VectorXd a) : alpha(std::move(a)) {
    detail::require(alpha.size() >= 2 && alpha.size() % 2 == 0,
                    "DirichletParams: needs 2d entries");
    detail::require(alpha.minCoeff() > 0.0, "alpha must be positive");
  }

  Index dim() const { return alpha.size() / 2; }
};

inline SiteDistribution sample_dirichlet_site(const DirichletParams& params, PhiloxEngine& eng) {
  return SiteDistribution(sample_dirichlet(eng, params.alpha));
}

// Tail exponent of regeneration durations for Dirichlet environments:
//   kappa = 2 sum_e alpha_e - max_axis (alpha_{+e} + alpha_{-e}).
// Duration moments of order p exist precisely for p < kappa.
inline double dirichlet_kappa(const DirichletParams& params) {
  const double total = params.alpha.sum();
  double worst = 0.0;
  for (Index i = 0; i < params.dim(); ++i) {
    worst = std::max(worst, params.alpha[2 * i] + params.alpha[2 * i + 1]);
  }
  return 2.0 * total - worst;
}

// Sum over axes of |alpha_{+e} - alpha_{-e}|; values above 1 guarantee
// ballistic behaviour.
inline double ballisticity_sum(const DirichletParams& params) {
  double s = 0.0;
  for (Index i = 0; i < params.dim(); ++i) {
    s += std::abs(params.alpha[2 * i] - params.alpha[2 * i + 1]);
  }
  return s;
}

inline bool satisfies_ballisticity(const DirichletParams& params) {
  return ballisticity_sum(params) > 1.0;
}

// Environment sampled lazily: the distribution at a site is a pure function
// of (environment seed, site coordinates), memoized per instance. Instances
// are meant to be owned by a single replica; the derivation, not the memo,
// is the reproducibility guarantee.
class LazyEnvironment {
 public:
  static LazyEnvironment dirichlet(std::uint64_t seed, DirichletParams params) {
    LazyEnvironment env;
    env.kind_ = Kind::dirichlet;
    env.seed_ = seed;
    env.d_ = params.dim();
    env.params_.emplace(std::move(params));
    return env;
  }

  // Dirichlet base law pushed into the uniformly elliptic set
  // {omega >= kappa_ell} by the affine mix omega -> (1 - 2d k) omega + k.
  static LazyEnvironment elliptic(std::uint64_t seed, DirichletParams base, double kappa_ell) {
    detail::require(kappa_ell > 0.0 && 2.0 * static_cast<double>(base.dim()) * kappa_ell < 1.0,
                    "LazyEnvironment: kappa_ell outside (0, 1/(2d))");
    LazyEnvironment env;
    env.kind_ = Kind::elliptic;
    env.seed_ = seed;
    env.d_ = base.dim();
    env.params_.emplace(std::move(base));
    env.kappa_ell_ = kappa_ell;
    return env;
  }

  // Same distribution at every site (deterministic environments in tests).
  static LazyEnvironment fixed(SiteDistribution site_law) {
    LazyEnvironment env;
    env.kind_ = Kind::fixed;
    env.d_ = site_law.dim();
    env.fixed_.emplace(std::move(site_law));
    return env;
  }

  Index dim() const { return d_; }

  const SiteDistribution& site(const std::vector<long>& x) const {
    detail::require(static_cast<Index>(x.size()) == d_, "LazyEnvironment: wrong coordinate size");
    if (kind_ == Kind::fixed) return *fixed_;
    auto it = memo_.find(x);
    if (it != memo_.end()) return it->second;
    PhiloxEngine eng(derive_seed(seed_, hash_coords(x)), stream::kSite);
    Eigen::VectorXd omega = sample_dirichlet(eng, params_->alpha);
    if (kind_ == Kind::elliptic) {
      omega = (1.0 - 2.0 * static_cast<double>(d_) * kappa_ell_) * omega +
              Eigen::VectorXd::Constant(2 * d_, kappa_ell_);
    }
    return memo_.emplace(x, SiteDistribution(std::move(omega))).first->second;
  }

 private:
  enum class Kind { dirichlet, elliptic, fixed };

  LazyEnvironment() = default;

  Kind kind_ = Kind::fixed;
  std::uint64_t seed_ = 0;
  Index d_ = 0;
  std::optional<DirichletParams> params_;
  double kappa_ell_ = 0.0;
  std::optional<SiteDistribution> fixed_;
  mutable std::map<std::vector<long>, SiteDistribution> memo_;
};

inline DiscretePath<double> gen_rwre_walk(const LazyEnvironment& env, Index n, std::uint64_t seed) {
  detail::require(n >= 1, "gen_rwre_walk: need at least one step");
  const Index d = env.dim();
  PhiloxEngine eng(seed, stream::kWalk);
  Eigen::MatrixXd inc(d, n);
  std::vector<long> pos(static_cast<std::size_t>(d), 0);
  for (Index k = 0; k < n; ++k) {
    const SiteDistribution& dist = env.site(pos);
    const Index idx = dist.sample_index(eng);
    inc.col(k) = neighbor_step(d, idx);
    pos[static_cast<std::size_t>(idx / 2)] += (idx % 2 == 0) ? 1 : -1;
  }
  return DiscretePath<double>{std::move(inc), 1.0};
}

}  // namespace roughwalk

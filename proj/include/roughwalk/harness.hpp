#pragma once

// Replica orchestration: deterministic per-replica seeding (base seed XOR
// replica index), optional thread pool, and ordered merging so results are
// identical for any worker count.

#include "roughwalk/config.hpp"
#include "roughwalk/estimators.hpp"
#include "roughwalk/walks.hpp"

#include <atomic>
#include <cstdint>
#include <thread>
#include <utility>
#include <vector>

namespace roughwalk {

// Replica r runs on base XOR r, with the user seed first spread over all 64
// bits; otherwise nearby user seeds would generate permutations of the same
// replica set (estimators are symmetric in replicas, so those would yield
// near-identical estimates).
inline std::uint64_t replica_seed(const ExperimentConfig& config, long replica) {
  return mix64(config.seed) ^ static_cast<std::uint64_t>(replica);
}

inline long resolve_workers(const ExperimentConfig& config) {
  long w = config.workers;
  if (w <= 0) w = static_cast<long>(std::thread::hardware_concurrency());
  if (w <= 0) w = 1;
  if (w > config.replicas) w = config.replicas;
  return w;
}

// Evaluate f(0..count-1) on `workers` threads; results returned in index
// order, so the merge is independent of scheduling.
template <typename T, typename F>
std::vector<T> parallel_map(long count, long workers, F f) {
  std::vector<T> results(static_cast<std::size_t>(count));
  if (workers <= 1 || count <= 1) {
    for (long i = 0; i < count; ++i) results[static_cast<std::size_t>(i)] = f(i);
    return results;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  const long nthreads = std::min(workers, count);
  pool.reserve(static_cast<std::size_t>(nthreads));
  for (long t = 0; t < nthreads; ++t) {
    pool.emplace_back([&]() {
      for (;;) {
        const long i = next.fetch_add(1);
        if (i >= count) return;
        results[static_cast<std::size_t>(i)] = f(i);
      }
    });
  }
  for (auto& th : pool) th.join();
  return results;
}

inline DiscretePath<double> generate_path(const ExperimentConfig& config, Index steps,
                                          std::uint64_t seed) {
  switch (config.model) {
    case ModelId::iid: {
      if (config.law.empty()) {
        return gen_iid_walk(uniform_nearest_neighbor_law(config.d), steps, seed);
      }
      std::vector<Eigen::VectorXd> support;
      support.reserve(config.law.size());
      for (Index i = 0; i < static_cast<Index>(config.law.size()); ++i) {
        support.push_back(neighbor_step(config.d, i));
      }
      const StepLaw law(std::move(support),
                        Eigen::Map<const Eigen::VectorXd>(config.law.data(),
                                                          static_cast<Index>(config.law.size())));
      return gen_iid_walk(law, steps, seed);
    }
    case ModelId::rotating:
      return gen_rotating_drift(config.p, steps, seed);
    case ModelId::periodic:
      return gen_periodic_env_walk(config.p, steps, seed);
    case ModelId::srw_loops:
      return gen_srw_loop_walk(steps, seed);
    case ModelId::rwre_dirichlet: {
      const Eigen::VectorXd alpha = Eigen::Map<const Eigen::VectorXd>(
          config.alpha.data(), static_cast<Index>(config.alpha.size()));
      const auto env = LazyEnvironment::dirichlet(seed, DirichletParams(alpha));
      return gen_rwre_walk(env, steps, seed);
    }
    case ModelId::rwre_elliptic: {
      const Eigen::VectorXd alpha = Eigen::Map<const Eigen::VectorXd>(
          config.alpha.data(), static_cast<Index>(config.alpha.size()));
      const auto env = LazyEnvironment::elliptic(seed, DirichletParams(alpha), config.kappa_ell);
      return gen_rwre_walk(env, steps, seed);
    }
  }
  detail::require(false, "generate_path: unknown model");
  return {};
}

inline RegenerationDecomposition make_decomposition(const ExperimentConfig& config,
                                                    const DiscretePath<double>& path) {
  const long period = effective_period(config);
  if (period > 0) return periodic_decomposition(period, path.steps(), config.direction);
  return detect_regenerations(path, config.direction, config.margin);
}

struct PooledBlocks {
  std::vector<Block<double>> blocks;  // replica order, first block of each replica dropped
  long censored_replicas = 0;
  long empty_replicas = 0;  // replicas contributing no usable block
};

// Full simulate -> decompose pipeline over all replicas. The first block of
// every replica is discarded (its law differs from the rest); survivors are
// concatenated in replica order, so downstream estimators should treat them
// as-is.
inline PooledBlocks pooled_blocks(const ExperimentConfig& config, long workers) {
  struct Piece {
    std::vector<Block<double>> blocks;
    bool censored = false;
  };
  auto run_replica = [&](long r) {
    const DiscretePath<double> path = generate_path(config, config.n, replica_seed(config, r));
    const RegenerationDecomposition dec = make_decomposition(config, path);
    Piece piece;
    piece.censored = dec.censored_tail;
    if (dec.block_count() >= 2) {
      auto blocks = decompose(path, dec);
      piece.blocks.assign(std::make_move_iterator(blocks.begin() + 1),
                          std::make_move_iterator(blocks.end()));
    }
    return piece;
  };
  auto pieces = parallel_map<Piece>(config.replicas, workers, run_replica);
  PooledBlocks pooled;
  for (auto& piece : pieces) {
    if (piece.censored) ++pooled.censored_replicas;
    if (piece.blocks.empty()) ++pooled.empty_replicas;
    pooled.blocks.insert(pooled.blocks.end(), std::make_move_iterator(piece.blocks.begin()),
                         std::make_move_iterator(piece.blocks.end()));
  }
  return pooled;
}

struct EstimateRun {
  PooledBlocks pooled;
  AnomalyEstimate estimate;
};

inline EstimateRun estimate_run(const ExperimentConfig& config, long workers) {
  EstimateRun run;
  run.pooled = pooled_blocks(config, workers);
  run.estimate = estimate_all(run.pooled.blocks, BlockPolicy::as_is);
  return run;
}

struct HolderRow {
  double alpha = 0.0;
  Index scale = 0;
  double mean_norm = 0.0;
};

struct DiagnosticsRun {
  int pstar_value = 0;
  double holder_bound = 0.0;
  std::vector<HolderRow> holder;          // alpha-major, scale-minor
  std::vector<KolmogorovRow> kolmogorov;  // one row per scale
  std::vector<std::pair<long, double>> duration_survival;
  MomentDiagnostic duration_moment;  // samples == 0 when too few blocks
  long duration_blocks = 0;
};

// Scale diagnostics run on per-replica empirically centered paths; all
// scales share the same replica paths (one long path per replica, prefixes
// reused), which removes most cross-scale Monte Carlo noise.
inline DiagnosticsRun diagnose_run(const ExperimentConfig& config, long workers) {
  DiagnosticsRun out;
  out.pstar_value = pstar(config.p_moment);
  out.holder_bound = holder_exponent_bound(out.pstar_value);

  Index max_scale = 0;
  for (long s : config.scales) max_scale = std::max<Index>(max_scale, s);
  detail::require(max_scale >= 2, "diagnose: no scales configured");
  auto paths = parallel_map<DiscretePath<double>>(
      config.replicas, workers, [&](long r) {
        DiscretePath<double> path = generate_path(config, max_scale, replica_seed(config, r));
        const Eigen::VectorXd mean = path.increments.rowwise().mean();
        return center(path, mean);
      });

  for (long scale : config.scales) {
    const auto pairs = dyadic_pairs(scale);
    for (double alpha : config.holder_alpha) {
      double acc = 0.0;
      for (const auto& path : paths) {
        DiscretePath<double> head{path.increments.leftCols(scale), path.jump_bound};
        acc += holder_norm(RescaledLift<double>(head, scale), alpha, pairs);
      }
      out.holder.push_back(HolderRow{alpha, scale, acc / static_cast<double>(paths.size())});
    }
    out.kolmogorov.push_back(
        kolmogorov_ratio(paths, scale, out.pstar_value, kolmogorov_grid(scale)));
  }
  // Re-order alpha-major for the per-alpha record files.
  std::vector<HolderRow> ordered;
  ordered.reserve(out.holder.size());
  for (double alpha : config.holder_alpha) {
    for (const auto& row : out.holder) {
      if (row.alpha == alpha) ordered.push_back(row);
    }
  }
  out.holder = std::move(ordered);

  const PooledBlocks pooled = pooled_blocks(config, workers);
  out.duration_blocks = static_cast<long>(pooled.blocks.size());
  if (pooled.blocks.size() >= 2) {
    out.duration_moment = block_moments(pooled.blocks, config.p_moment, BlockPolicy::as_is);
    std::vector<long> durations;
    durations.reserve(pooled.blocks.size());
    for (const auto& blk : pooled.blocks) durations.push_back(blk.duration);
    std::sort(durations.begin(), durations.end());
    const double total = static_cast<double>(durations.size());
    for (std::size_t i = 0; i < durations.size();) {
      std::size_t j = i;
      while (j < durations.size() && durations[j] == durations[i]) ++j;
      // survival P(L >= durations[i])
      out.duration_survival.emplace_back(durations[i],
                                         static_cast<double>(durations.size() - i) / total);
      i = j;
    }
  }
  return out;
}

}  // namespace roughwalk

#pragma once

// Replicate batches. Replicate i of a batch with base seed s is generated
// with seed RandomSource(s).fork(i).seed(); results are merged in replicate
// order, so the output does not depend on the number of worker threads.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "hiergen/generator.hpp"
#include "hiergen/metrics.hpp"
#include "hiergen/postprocess.hpp"

namespace hiergen {

struct ReplicateResult {
  HierarchyStats raw_stats;
  LevelHistogram raw_histogram;
  std::optional<HierarchyStats> reassigned_stats;
  std::optional<LevelHistogram> reassigned_histogram;
};

struct BatchOptions {
  std::size_t replicates = 100;
  std::size_t jobs = 1;
  bool prune = true;
  bool reassign = false;  // also measure the reassigned dataset
};

struct BatchResult {
  std::vector<ReplicateResult> replicates;
  BatchSummary raw;
  std::optional<BatchSummary> reassigned;
};

inline std::uint64_t replicate_seed(std::uint64_t base_seed, std::size_t replicate) {
  return RandomSource(base_seed).fork(replicate).seed();
}

inline ReplicateResult run_replicate(GeneratorParams params, std::size_t index, const BatchOptions& options) {
  params.seed = replicate_seed(params.seed, index);
  Dataset data = generate(params, {options.prune});
  ReplicateResult r;
  r.raw_stats = compute_stats(data.hierarchy);
  r.raw_histogram = compute_histograms(data.hierarchy);
  if (options.reassign) {
    Dataset moved = reassign(std::move(data));
    r.reassigned_stats = compute_stats(moved.hierarchy);
    r.reassigned_histogram = compute_histograms(moved.hierarchy);
  }
  return r;
}

/// Runs the replicates on `options.jobs` threads. The first exception thrown
/// by any replicate is rethrown after all workers stop.
inline BatchResult run_batch(const GeneratorParams& params, const BatchOptions& options) {
  if (options.replicates < 1) throw ParameterError("replicates", "must be >= 1");
  validate(params);

  BatchResult result;
  result.replicates.resize(options.replicates);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= options.replicates || failed.load()) return;
      try {
        result.replicates[i] = run_replicate(params, i, options);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };

  const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, options.replicates);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  std::vector<HierarchyStats> stats;
  std::vector<LevelHistogram> hists;
  for (const auto& r : result.replicates) {
    stats.push_back(r.raw_stats);
    hists.push_back(r.raw_histogram);
  }
  result.raw = aggregate(stats, hists);
  if (options.reassign) {
    stats.clear();
    hists.clear();
    for (const auto& r : result.replicates) {
      stats.push_back(*r.reassigned_stats);
      hists.push_back(*r.reassigned_histogram);
    }
    result.reassigned = aggregate(stats, hists);
  }
  return result;
}

}  // namespace hiergen

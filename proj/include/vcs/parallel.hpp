#pragma once

#include "vcs/types.hpp"

#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace vcs {

/// Worker count currently in effect (>= 1). Initialized from the
/// VCSAMPLE_THREADS environment variable, falling back to the hardware
/// concurrency.
int thread_count();

/// Overrides the worker count; 0 restores the environment default.
void set_thread_count(int count);

namespace detail {

// body(worker, begin, end) over contiguous chunks of [0, n).
template <class Body>
void run_chunked(Index n, int workers, Body&& body) {
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers - 1));
  const Index chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const Index begin = std::min<Index>(n, w * chunk);
    const Index end = std::min<Index>(n, begin + chunk);
    auto task = [&body, &errors, w, begin, end] {
      try {
        body(w, begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(w)] = std::current_exception();
      }
    };
    if (w + 1 < workers) {
      threads.emplace_back(task);
    } else {
      task();
    }
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace detail

/// Runs body(begin, end) over a partition of [0, n) into contiguous
/// chunks. The partition depends only on the worker count; all uses in
/// this library combine chunk results so that the outcome is identical
/// for any worker count.
template <class Body>
void parallel_for_ranges(Index n, Body&& body, Index serial_cutoff = 2048) {
  if (n <= 0) return;
  const int workers = std::min<int>(thread_count(), static_cast<int>(std::min<Index>(n, 64)));
  if (workers <= 1 || n < serial_cutoff) {
    body(Index(0), n);
    return;
  }
  detail::run_chunked(n, workers, [&body](int, Index begin, Index end) { body(begin, end); });
}

/// Element-wise convenience wrapper: body(i) for i in [0, n).
template <class Body>
void parallel_for(Index n, Body&& body, Index serial_cutoff = 2048) {
  parallel_for_ranges(
      n,
      [&body](Index begin, Index end) {
        for (Index i = begin; i < end; ++i) body(i);
      },
      serial_cutoff);
}

struct Extremum {
  double value = 0.0;
  Index index = -1;  // -1 when no element matched the filter
};

/// Index of the smallest (value, index) pair over the filtered range.
/// Lexicographic min is an exact commutative reduction, so the result does
/// not depend on chunking.
template <class ValueFn, class Filter>
Extremum argmin_filtered(Index n, ValueFn&& value_of, Filter&& include) {
  const int workers = std::min<int>(thread_count(), 64);
  std::vector<Extremum> partial(static_cast<std::size_t>(std::max(workers, 1)));
  auto scan = [&](Index begin, Index end, Extremum& best) {
    for (Index i = begin; i < end; ++i) {
      if (!include(i)) continue;
      const double v = value_of(i);
      if (best.index < 0 || v < best.value || (v == best.value && i < best.index)) {
        best.value = v;
        best.index = i;
      }
    }
  };
  if (workers <= 1 || n < 8192) {
    Extremum best;
    scan(0, n, best);
    return best;
  }
  detail::run_chunked(n, workers, [&](int w, Index begin, Index end) {
    scan(begin, end, partial[static_cast<std::size_t>(w)]);
  });
  Extremum best;
  for (const Extremum& e : partial) {
    if (e.index < 0) continue;
    if (best.index < 0 || e.value < best.value || (e.value == best.value && e.index < best.index)) {
      best = e;
    }
  }
  return best;
}

/// Index of the largest value; ties resolve to the lowest index.
template <class ValueFn, class Filter>
Extremum argmax_filtered(Index n, ValueFn&& value_of, Filter&& include) {
  auto negated = [&](Index i) { return -value_of(i); };
  Extremum e = argmin_filtered(n, negated, include);
  if (e.index >= 0) e.value = -e.value;
  return e;
}

}  // namespace vcs

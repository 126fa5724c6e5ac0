#include "vcs/baselines.hpp"

#include "vcs/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vcs {

namespace {

SampleResult make_baseline_result(std::vector<Index> picks, Array weights, double kernel_size) {
  SampleResult result;
  result.insertion_density = Array::Zero(static_cast<Index>(picks.size()));
  result.weights = std::move(weights);
  result.indices_by_rank = std::move(picks);
  result.kernel_size_used = kernel_size;
  return result;
}

}  // namespace

SampleResult random_sample(const PointCloud& cloud, Index count, const ImportancePmf* pmf,
                           Rng& rng) {
  const Index n = cloud.size();
  if (count < 0 || count > n) throw Error(ErrorCode::TooManySamples, "count exceeds point count");
  if (pmf && pmf->probabilities.size() != n) {
    throw Error(ErrorCode::ConfigMismatch, "PMF size does not match the cloud");
  }

  std::vector<Index> picks;
  picks.reserve(static_cast<std::size_t>(count));
  if (!pmf) {
    std::vector<Index> ids(static_cast<std::size_t>(n));
    std::iota(ids.begin(), ids.end(), Index(0));
    for (Index t = 0; t < count; ++t) {
      const Index j = t + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - t)));
      std::swap(ids[static_cast<std::size_t>(t)], ids[static_cast<std::size_t>(j)]);
      picks.push_back(ids[static_cast<std::size_t>(t)]);
    }
    return make_baseline_result(std::move(picks), Array::Ones(count), 0.0);
  }

  const Array& p = pmf->probabilities;
  Index support = 0;
  for (Index i = 0; i < n; ++i) {
    if (p[i] > 0.0) ++support;
  }
  if (count > support) {
    throw Error(ErrorCode::InsufficientSupport, "PMF support smaller than requested count");
  }

  // Exponential-key reservoir order: sorting by -log(u)/w ascending is
  // equivalent to sequential weighted draws without replacement.
  std::vector<std::pair<double, Index>> keys;
  keys.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    const double u = rng.next_double();
    if (p[i] > 0.0) {
      keys.emplace_back(-std::log1p(-u) / p[i], i);
    }
  }
  std::partial_sort(keys.begin(), keys.begin() + count, keys.end(),
                    [](const auto& a, const auto& b) {
                      return a.first != b.first ? a.first < b.first : a.second < b.second;
                    });

  const double floor = 1e-12 / static_cast<double>(n);
  Array weights(count);
  for (Index t = 0; t < count; ++t) {
    const Index id = keys[static_cast<std::size_t>(t)].second;
    picks.push_back(id);
    weights[t] = 1.0 / (static_cast<double>(n) * std::max(p[id], floor));
  }
  weights *= static_cast<double>(count) / weights.sum();
  return make_baseline_result(std::move(picks), std::move(weights), 0.0);
}

namespace {

struct KdNode {
  Index begin;
  Index end;
};

}  // namespace

SampleResult stratified_kdtree_sample(const PointCloud& cloud, Index count, Rng& rng,
                                      std::vector<Index>* leaf_of_sample) {
  const Index n = cloud.size();
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "count must be positive");
  if (count > n) throw Error(ErrorCode::TooManySamples, "count exceeds point count");
  const Index d = cloud.dim();
  const Index leaf_capacity = std::max<Index>(1, n / count);

  std::vector<Index> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), Index(0));

  // Depth-first median splits on the widest axis until every leaf holds at
  // most ~n/count points. Leaves come out in tree order.
  std::vector<KdNode> leaves;
  std::vector<KdNode> stack{{0, n}};
  while (!stack.empty()) {
    const KdNode node = stack.back();
    stack.pop_back();
    const Index size = node.end - node.begin;
    if (size <= leaf_capacity) {
      leaves.push_back(node);
      continue;
    }
    Index axis = 0;
    double widest = -1.0;
    for (Index a = 0; a < d; ++a) {
      double lo = cloud.positions(ids[static_cast<std::size_t>(node.begin)], a);
      double hi = lo;
      for (Index t = node.begin + 1; t < node.end; ++t) {
        const double x = cloud.positions(ids[static_cast<std::size_t>(t)], a);
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
      if (hi - lo > widest) {
        widest = hi - lo;
        axis = a;
      }
    }
    const Index mid = node.begin + size / 2;
    std::nth_element(ids.begin() + node.begin, ids.begin() + mid, ids.begin() + node.end,
                     [&](Index a, Index b) {
                       const double xa = cloud.positions(a, axis);
                       const double xb = cloud.positions(b, axis);
                       return xa != xb ? xa < xb : a < b;
                     });
    stack.push_back({mid, node.end});  // processed after the left child
    stack.push_back({node.begin, mid});
  }

  // One draw per leaf, then keep the draws from the `count` largest leaves.
  std::vector<Index> keep(leaves.size());
  std::iota(keep.begin(), keep.end(), Index(0));
  if (static_cast<Index>(leaves.size()) > count) {
    std::stable_sort(keep.begin(), keep.end(), [&leaves](Index a, Index b) {
      const Index sa = leaves[static_cast<std::size_t>(a)].end - leaves[static_cast<std::size_t>(a)].begin;
      const Index sb = leaves[static_cast<std::size_t>(b)].end - leaves[static_cast<std::size_t>(b)].begin;
      return sa > sb;
    });
    keep.resize(static_cast<std::size_t>(count));
    std::sort(keep.begin(), keep.end());
  }

  std::vector<Index> picks;
  picks.reserve(keep.size());
  if (leaf_of_sample) leaf_of_sample->clear();
  std::vector<char> selected(leaves.size(), 0);
  for (Index leaf : keep) selected[static_cast<std::size_t>(leaf)] = 1;
  for (std::size_t leaf = 0; leaf < leaves.size(); ++leaf) {
    const KdNode node = leaves[leaf];
    const Index size = node.end - node.begin;
    const Index offset = static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(size)));
    if (!selected[leaf]) continue;  // draw consumed to keep the stream stable
    picks.push_back(ids[static_cast<std::size_t>(node.begin + offset)]);
    if (leaf_of_sample) leaf_of_sample->push_back(static_cast<Index>(leaf));
  }
  return make_baseline_result(std::move(picks), Array::Ones(static_cast<Index>(picks.size())), 0.0);
}

SampleResult poisson_disk_subset(const PointCloud& cloud, double r_min, Rng& rng) {
  const Index n = cloud.size();
  if (!(r_min > 0.0) || !std::isfinite(r_min)) {
    throw Error(ErrorCode::InvalidArgument, "r_min must be positive and finite");
  }
  const Index d = cloud.dim();
  const UniformGrid grid = build_grid(cloud, r_min);

  std::vector<Index> visit(static_cast<std::size_t>(n));
  std::iota(visit.begin(), visit.end(), Index(0));
  for (Index t = 0; t < n - 1; ++t) {
    const Index j = t + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - t)));
    std::swap(visit[static_cast<std::size_t>(t)], visit[static_cast<std::size_t>(j)]);
  }

  std::vector<char> accepted(static_cast<std::size_t>(n), 0);
  std::vector<Index> picks;
  for (Index p : visit) {
    bool blocked = false;
    for_each_neighbor(grid, cloud.positions, cloud.positions.data() + p * d, r_min,
                      [&](Index q, double) {
                        if (accepted[static_cast<std::size_t>(q)]) blocked = true;
                      });
    if (!blocked) {
      accepted[static_cast<std::size_t>(p)] = 1;
      picks.push_back(p);
    }
  }
  return make_baseline_result(std::move(picks),
                              Array::Ones(static_cast<Index>(picks.size())), r_min);
}

}  // namespace vcs

#pragma once

#include <cstdint>
#include <vector>

namespace biasq {

/// Exact minimum-weight perfect matching on a dense even-order graph via the
/// primal-dual blossom method (maximum-weight formulation internally).
/// Weights must be nonnegative; missing edges are passed as kNoEdge.
class PerfectMatcher {
  public:
    static constexpr int64_t kNoEdge = -1;

    /// `w` is a flattened n x n symmetric matrix. Returns mate[i] for all i.
    /// Throws if no perfect matching exists.
    std::vector<int> solve(int n, const std::vector<int64_t>& w);

    /// Total weight of the found matching in input units.
    int64_t matching_weight() const { return total_weight_; }

  private:
    int64_t total_weight_ = 0;
};

}  // namespace biasq

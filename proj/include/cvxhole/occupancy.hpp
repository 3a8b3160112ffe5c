#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cvxhole/partition.hpp"
#include "cvxhole/sampling.hpp"

namespace cvxhole {

/// Moments of the number of empty bins when n balls land uniformly in k bins.
struct OccupancyMoments {
    std::uint64_t k = 0;
    std::uint64_t n = 0;
    double expected_empty = 0.0;
    double variance_empty = 0.0;
};

/// E = k(1-1/k)^n, Var = E + k(k-1)(1-2/k)^n - E^2, powers taken in log space.
OccupancyMoments empty_bin_moments(std::uint64_t k, std::uint64_t n);

/// Same quantities as exact fractions over the common denominator k^(2n).
/// Only for small inputs: throws PreconditionViolation when k^(2n) would not
/// fit in 128 bits.
struct ExactMoments {
    __int128 mean_num = 0;   // E = mean_num / k^n
    __int128 mean_den = 1;
    __int128 var_num = 0;    // Var = var_num / k^(2n)
    __int128 var_den = 1;
};
ExactMoments empty_bin_moments_exact(std::uint64_t k, std::uint64_t n);

struct ChebyshevBound {
    /// n^eps / (2(1-eps) log n): "too few empty regions" threshold.
    double threshold = 0.0;
    /// 4(1-eps) log n / n^eps, the asymptotic form of 4 / E.
    double prob_bound = 0.0;
    /// Region count round(n / ((1-eps) log n)) and its exact moments.
    std::uint64_t regions = 0;
    double expected_empty = 0.0;
    double variance_empty = 0.0;
    /// Chebyshev with exact moments: P(X <= E/2) <= 4 Var / E^2.
    double exact_bound = 0.0;
};

/// Throws PreconditionViolation unless n >= 3 and 0 < eps < 1.
ChebyshevBound chebyshev_empty_regions_bound(std::uint64_t n, double epsilon);

struct OccupancyResult {
    std::size_t empty_count = 0;
    std::vector<bool> empty_flags;
};

/// Validates the partition once (NotAPartition), then counts empty regions for
/// any number of samples. A point marks the lowest-index region whose closed
/// set contains it.
class OccupancyCounter {
public:
    OccupancyCounter(const ConvexBody& body, std::vector<Region> regions);
    OccupancyResult count(std::span<const Point> points) const;
    std::size_t size() const { return regions_.size(); }

private:
    std::vector<Region> regions_;
    RegionIndex index_;
};

OccupancyResult simulate_partition_occupancy(const ConvexBody& body, std::span<const Region> regions,
                                             const PointSample& sample);

/// Empirical moments of empty-region counts over `trials` samples.
struct OccupancyRow {
    std::uint64_t k = 0;
    std::uint64_t n = 0;
    double expected = 0.0;
    double variance = 0.0;
    double empirical_mean = 0.0;
    double empirical_var = 0.0;
    std::uint64_t trials = 0;
    /// Per-trial counts, in trial order.
    std::vector<std::size_t> counts;
};

/// Trial t uses stream (master_seed, first_stream + t).
OccupancyRow run_occupancy(const ConvexBody& body, std::span<const Region> regions, std::uint64_t n,
                           std::uint64_t trials, std::uint64_t master_seed, std::uint64_t first_stream = 0,
                           unsigned threads = 0);

void write_occupancy_csv(std::ostream& out, std::span<const OccupancyRow> rows);

}  // namespace cvxhole

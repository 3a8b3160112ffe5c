#include "cvxhole/occupancy.hpp"

#include <cmath>
#include <ostream>

#include "cvxhole/error.hpp"
#include "cvxhole/parallel.hpp"

namespace cvxhole {

namespace {

// base^n for base in [0, 1].
double unit_power(double log_base, std::uint64_t n) {
    if (n == 0) return 1.0;
    if (std::isinf(log_base)) return 0.0;
    return std::exp(static_cast<double>(n) * log_base);
}

__int128 ipow(__int128 base, std::uint64_t e) {
    __int128 r = 1;
    for (std::uint64_t i = 0; i < e; ++i) r *= base;
    return r;
}

}  // namespace

OccupancyMoments empty_bin_moments(std::uint64_t k, std::uint64_t n) {
    if (k == 0) throw Error(Errc::PreconditionViolation, "need at least one bin");
    const double kd = static_cast<double>(k);
    const double q1 = unit_power(std::log1p(-1.0 / kd), n);
    const double q2 = k >= 2 ? unit_power(std::log1p(-2.0 / kd), n) : 0.0;
    OccupancyMoments m{k, n, 0.0, 0.0};
    m.expected_empty = kd * q1;
    double var = m.expected_empty + kd * (kd - 1.0) * q2 - m.expected_empty * m.expected_empty;
    if (var < 0.0 && var > -1e-12) var = 0.0;
    m.variance_empty = var;
    return m;
}

ExactMoments empty_bin_moments_exact(std::uint64_t k, std::uint64_t n) {
    if (k == 0) throw Error(Errc::PreconditionViolation, "need at least one bin");
    if (2.0 * static_cast<double>(n) * std::log2(static_cast<double>(k)) + 2.0 * std::log2(static_cast<double>(k)) > 120.0) {
        throw Error(Errc::PreconditionViolation, "exact moments overflow 128-bit arithmetic");
    }
    const __int128 K = static_cast<__int128>(k);
    const __int128 kn = ipow(K, n);
    ExactMoments m;
    m.mean_num = K * ipow(K - 1, n);
    m.mean_den = kn;
    m.var_den = kn * kn;
    const __int128 second = k >= 2 ? K * (K - 1) * ipow(K - 2, n) : 0;
    m.var_num = m.mean_num * kn + second * kn - m.mean_num * m.mean_num;
    return m;
}

ChebyshevBound chebyshev_empty_regions_bound(std::uint64_t n, double epsilon) {
    if (n < 3 || !(epsilon > 0.0 && epsilon < 1.0)) {
        throw Error(Errc::PreconditionViolation, "need n >= 3 and 0 < eps < 1");
    }
    const double nd = static_cast<double>(n);
    const double logn = std::log(nd);
    const double ne = std::pow(nd, epsilon);
    ChebyshevBound b;
    b.threshold = ne / (2.0 * (1.0 - epsilon) * logn);
    b.prob_bound = 4.0 * (1.0 - epsilon) * logn / ne;
    b.regions = static_cast<std::uint64_t>(std::max(1.0, std::round(nd / ((1.0 - epsilon) * logn))));
    const auto m = empty_bin_moments(b.regions, n);
    b.expected_empty = m.expected_empty;
    b.variance_empty = m.variance_empty;
    b.exact_bound = m.expected_empty > 0.0 ? 4.0 * m.variance_empty / (m.expected_empty * m.expected_empty)
                                           : INFINITY;
    return b;
}

OccupancyCounter::OccupancyCounter(const ConvexBody& body, std::vector<Region> regions)
    : regions_((check_partition(body, regions), std::move(regions))), index_(regions_) {}

OccupancyResult OccupancyCounter::count(std::span<const Point> points) const {
    OccupancyResult r;
    r.empty_flags.assign(regions_.size(), true);
    for (const Point& p : points) r.empty_flags[index_.locate(p)] = false;
    for (bool e : r.empty_flags) r.empty_count += e ? 1 : 0;
    return r;
}

OccupancyResult simulate_partition_occupancy(const ConvexBody& body, std::span<const Region> regions,
                                             const PointSample& sample) {
    const OccupancyCounter counter(body, std::vector<Region>(regions.begin(), regions.end()));
    return counter.count(sample.points);
}

OccupancyRow run_occupancy(const ConvexBody& body, std::span<const Region> regions, std::uint64_t n,
                           std::uint64_t trials, std::uint64_t master_seed, std::uint64_t first_stream,
                           unsigned threads) {
    const OccupancyCounter counter(body, std::vector<Region>(regions.begin(), regions.end()));
    OccupancyRow row;
    row.k = regions.size();
    row.n = n;
    row.trials = trials;
    const auto m = empty_bin_moments(row.k, n);
    row.expected = m.expected_empty;
    row.variance = m.variance_empty;
    row.counts.assign(trials, 0);
    parallel_for(trials, threads, [&](std::size_t t) {
        const auto s = sample_uniform(body, n, {master_seed, first_stream + t});
        row.counts[t] = counter.count(s.points).empty_count;
    });
    double sum = 0.0;
    for (auto c : row.counts) sum += static_cast<double>(c);
    row.empirical_mean = trials ? sum / static_cast<double>(trials) : 0.0;
    double ss = 0.0;
    for (auto c : row.counts) ss += (static_cast<double>(c) - row.empirical_mean) * (static_cast<double>(c) - row.empirical_mean);
    row.empirical_var = trials > 1 ? ss / static_cast<double>(trials - 1) : 0.0;
    return row;
}

void write_occupancy_csv(std::ostream& out, std::span<const OccupancyRow> rows) {
    out << "k,n,expected,variance,empirical_mean,empirical_var,trials\n";
    const auto old = out.precision(17);
    for (const auto& r : rows) {
        out << r.k << ',' << r.n << ',' << r.expected << ',' << r.variance << ',' << r.empirical_mean << ','
            << r.empirical_var << ',' << r.trials << '\n';
    }
    out.precision(old);
}

}  // namespace cvxhole

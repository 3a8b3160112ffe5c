#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cvxhole/geometry.hpp"

namespace cvxhole {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// 64-bit finalizer of splitmix64.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based generator: output i is a pure function of
/// (master_seed, stream_index, i).
class CounterRng {
public:
    using result_type = std::uint64_t;

    explicit CounterRng(SeedSpec seed, std::uint64_t counter = 0);

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return ~result_type{0}; }

    result_type operator()();
    /// Uniform in [0, 1) with 53 random bits.
    double uniform();
    std::uint64_t counter() const { return counter_; }

private:
    std::uint64_t key_;
    std::uint64_t counter_;
};

struct PointSample {
    SeedSpec seed;
    std::size_t n = 0;
    std::vector<Point> points;
    std::string body_id;
};

/// n independent uniform points: a fan triangle from vertex 0 is chosen with
/// probability proportional to its area, then a point uniform in it.
PointSample sample_uniform(const ConvexBody& body, std::size_t n, SeedSpec seed,
                           std::string body_id = "body");

/// CSV: a `# seed=<master>:<stream> n=<n> body=<id>` line, an `x,y` header,
/// then one point per line.
void write_sample_csv(std::ostream& out, const PointSample& sample);
PointSample read_sample_csv(std::istream& in);
std::string sample_to_json(const PointSample& sample);
PointSample sample_from_json(const std::string& text);

}  // namespace cvxhole

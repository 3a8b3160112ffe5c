#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "cvxhole/geometry.hpp"
#include "cvxhole/homothet.hpp"
#include "json.hpp"

namespace cvxhole {

/// "unit_square" (or "square"), {"regular": k}, or {"vertices": [[x, y], ...]}.
/// Bodies are rescaled to unit area.
ConvexBody resolve_body(const nlohmann::json& spec);
/// "square", "disk", "disk64", "rect:<aspect>", {"vertices": ...}, or a path
/// to a JSON file holding {"vertices": ...}.
Shape resolve_shape(const nlohmann::json& spec);

struct ExperimentConfig {
    nlohmann::json body = "unit_square";
    std::vector<nlohmann::json> shapes{"square"};
    std::vector<std::uint64_t> n_values;
    double epsilon = 0.1;
    double delta = 0.2;
    std::uint64_t trials_per_n = 1;
    std::uint64_t master_seed = 0;
    /// Subset of max_l, maxrect, polymax, stripquad, occupancy, bounds.
    std::vector<std::string> which;
    /// Frame budget for rectangle-net scans (0 = full scan).
    std::uint64_t maxrect_frames = 0;
    std::size_t polymax_exact_limit = 2000;
    std::size_t polymax_window_points = 200;
    bool bounds_polymax = true;

    /// Throws PreconditionViolation unless n_values is strictly increasing,
    /// trials_per_n >= 1 and every statistic name is known.
    void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& c);

enum class Certificate { certified, lower_only, failed };
const char* certificate_name(Certificate c);
Certificate certificate_from_name(const std::string& s);

struct TrialRecord {
    std::string statistic;
    std::uint64_t n = 0;
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;  // stream index of the trial's sample
    double value = 0.0;
    double normalized = 0.0;  // value * n / log n
    Certificate certificate = Certificate::failed;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

/// Stream index for one (n, trial, statistic) under a master seed.
std::uint64_t trial_stream(std::uint64_t master_seed, std::uint64_t n, std::uint64_t trial,
                           const std::string& statistic);

struct StatSummary {
    std::string statistic;
    std::uint64_t n = 0;
    std::uint64_t count = 0;
    std::uint64_t failures = 0;
    /// Over rows that did not fail; NaN when every row failed.
    double mean = 0.0;
    double median = 0.0;
    double stddev = 0.0;
};

struct ScalingReport {
    std::vector<TrialRecord> rows;
    std::vector<StatSummary> summaries;  // ordered by statistic, then n
    /// Medians per statistic, one per n value in increasing n. Entries for an
    /// n where every trial failed are NaN and do not count against the trend.
    std::map<std::string, std::vector<double>> trend;
    std::map<std::string, bool> non_increasing;
};

/// Runs every (n, trial, statistic) task on `threads` workers (0 = all
/// cores). The rows and everything derived from them do not depend on the
/// thread count. Module errors mark the row failed.
ScalingReport run_experiment(const ExperimentConfig& config, unsigned threads = 0);

/// Aggregates rows (any order) into summaries and trends.
ScalingReport summarize(std::vector<TrialRecord> rows);

/// Header statistic,n,trial,seed,value,normalized,certificate.
void write_report_csv(std::ostream& out, const ScalingReport& report);
std::vector<TrialRecord> read_report_csv(std::istream& in);
nlohmann::json report_summary_json(const ScalingReport& report);

struct ScalingFit {
    std::string statistic;
    /// Median normalized value at the largest n.
    double c_hat = 0.0;
    /// Least-squares slope s of the median normalized value against 1/log n,
    /// reported as -s / log(n_max): the part of the normalized value still
    /// changing at the largest n, positive when it grows with n.
    double drift = 0.0;
    bool diverging = false;
};

/// Throws InsufficientData with fewer than three n values.
ScalingFit fit_scaling(const ScalingReport& report, const std::string& statistic);

}  // namespace cvxhole

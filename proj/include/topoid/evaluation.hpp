#ifndef TOPOID_EVALUATION_HPP
#define TOPOID_EVALUATION_HPP

#include <optional>
#include <string>
#include <vector>

#include "topoid/graph_model.hpp"
#include "topoid/trace.hpp"

namespace topoid {

/// Support threshold: absolute, or relative to the largest off-diagonal entry.
struct Threshold {
    enum class Kind { Absolute, Relative } kind = Kind::Relative;
    double value = 0.1;
    /// Floor applied to relative thresholds.
    double floor = 1e-4;

    static Threshold absolute(double v) { return {Kind::Absolute, v, 0.0}; }
    static Threshold relative(double v, double floor = 1e-4) { return {Kind::Relative, v, floor}; }

    double resolve(const Gso& estimate) const;
};

/// "rel:F" or "abs:F".
Threshold parse_threshold(const std::string& text);
std::string format_threshold(const Threshold& t);

struct RecoveryMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f_measure = 0.0;
    double threshold = 0.0;
    int true_edges = 0;
    int estimated_edges = 0;
    int correct_edges = 0;
};

/// Edge-support precision / recall / F. Throws Data when the truth has no edges.
RecoveryMetrics f_measure(const Gso& estimate, const GroundTruthGraph& truth, const Threshold& threshold);
RecoveryMetrics f_measure(const Gso& estimate, const GroundTruthGraph& truth, double absolute_threshold);

struct TrajectorySummary {
    std::vector<std::int64_t> steps;  ///< checkpoint steps
    std::vector<double> gaps;         ///< F_t(S_t) - F_t(S*_t)
    double mean_gap = 0.0;
    double max_gap = 0.0;
    std::int64_t max_gap_step = 0;
    /// Present when a change step was supplied.
    std::optional<double> pre_change_mean;
    std::optional<double> post_change_peak;
    std::optional<std::int64_t> recovery_steps;  ///< nullopt: never recovered
};

/**
 * Objective-gap statistics at checkpoints. With a change step, the
 * pre-change mean uses the last `window` checkpoints before the change and
 * recovery is the first post-change checkpoint (after the peak) whose gap
 * is within recovery_factor times that mean.
 */
TrajectorySummary trajectory_compare(const RunTrace& trace, std::optional<std::int64_t> change_step = std::nullopt,
                                     int window = 10, double recovery_factor = 1.5);

}  // namespace topoid

#endif  // TOPOID_EVALUATION_HPP

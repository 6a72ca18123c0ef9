#include "topoid/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace topoid {

double Threshold::resolve(const Gso& estimate) const {
    if (!(value >= 0.0)) throw Error(ErrorCode::Parameter, "threshold must be >= 0");
    if (kind == Kind::Absolute) return value;
    double largest = 0.0;
    for (int j = 0; j < estimate.n(); ++j)
        for (int i = 0; i < estimate.n(); ++i)
            if (i != j) largest = std::max(largest, estimate(i, j));
    return std::max(value * largest, floor);
}

Threshold parse_threshold(const std::string& text) {
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        const std::string kind = text.substr(0, colon);
        const std::string val = text.substr(colon + 1);
        char* end = nullptr;
        const double v = std::strtod(val.c_str(), &end);
        if (end != val.c_str() && *end == '\0' && v >= 0.0 && std::isfinite(v)) {
            if (kind == "rel") return Threshold::relative(v);
            if (kind == "abs") return Threshold::absolute(v);
        }
    }
    throw Error(ErrorCode::Parameter, "threshold: expected rel:F or abs:F, got '" + text + "'");
}

std::string format_threshold(const Threshold& t) {
    return std::string(t.kind == Threshold::Kind::Absolute ? "abs:" : "rel:") + format_double(t.value);
}

RecoveryMetrics f_measure(const Gso& estimate, const GroundTruthGraph& truth, const Threshold& threshold) {
    return f_measure(estimate, truth, threshold.resolve(estimate));
}

RecoveryMetrics f_measure(const Gso& estimate, const GroundTruthGraph& truth, double absolute_threshold) {
    if (estimate.n() != truth.n()) throw Error(ErrorCode::Dimension, "f_measure: graphs have different sizes");
    if (truth.edge_count() == 0) throw Error(ErrorCode::Data, "f_measure: ground truth has no edges; recall undefined");
    RecoveryMetrics m;
    m.threshold = absolute_threshold;
    const auto found = support(estimate, absolute_threshold);
    m.true_edges = static_cast<int>(truth.edge_count());
    m.estimated_edges = static_cast<int>(found.size());
    for (const auto& e : found) m.correct_edges += truth.has_edge(e.i, e.j) ? 1 : 0;
    m.precision = m.estimated_edges > 0 ? double(m.correct_edges) / m.estimated_edges : 0.0;
    m.recall = double(m.correct_edges) / m.true_edges;
    m.f_measure = m.precision + m.recall > 0.0 ? 2.0 * m.precision * m.recall / (m.precision + m.recall) : 0.0;
    return m;
}

TrajectorySummary trajectory_compare(const RunTrace& trace, std::optional<std::int64_t> change_step, int window,
                                     double recovery_factor) {
    if (trace.checkpoints.empty()) throw Error(ErrorCode::Data, "trajectory_compare: trace has no checkpoints");
    if (window < 1) throw Error(ErrorCode::Parameter, "trajectory_compare: window must be >= 1");
    TrajectorySummary s;
    for (const auto& cp : trace.checkpoints) {
        if (cp.t < 1 || static_cast<std::size_t>(cp.t) > trace.records.size()) continue;
        const auto& rec = trace.records[cp.t - 1];
        s.steps.push_back(cp.t);
        s.gaps.push_back(rec.objective - cp.optimum_objective);
    }
    if (s.gaps.empty()) throw Error(ErrorCode::Data, "trajectory_compare: no checkpoint matches a trace record");
    double sum = 0.0;
    s.max_gap = s.gaps.front();
    s.max_gap_step = s.steps.front();
    for (std::size_t k = 0; k < s.gaps.size(); ++k) {
        sum += s.gaps[k];
        if (s.gaps[k] > s.max_gap) {
            s.max_gap = s.gaps[k];
            s.max_gap_step = s.steps[k];
        }
    }
    s.mean_gap = sum / double(s.gaps.size());
    if (!change_step) return s;

    std::vector<double> before;
    std::size_t first_after = s.gaps.size();
    for (std::size_t k = 0; k < s.gaps.size(); ++k) {
        if (s.steps[k] <= *change_step) {
            before.push_back(s.gaps[k]);
        } else if (first_after == s.gaps.size()) {
            first_after = k;
        }
    }
    if (before.empty()) throw Error(ErrorCode::Data, "trajectory_compare: no checkpoint before the change");
    const std::size_t from = before.size() > std::size_t(window) ? before.size() - window : 0;
    double pre = 0.0;
    for (std::size_t k = from; k < before.size(); ++k) pre += before[k];
    s.pre_change_mean = pre / double(before.size() - from);
    if (first_after == s.gaps.size()) return s;

    std::size_t peak = first_after;
    for (std::size_t k = first_after; k < s.gaps.size(); ++k)
        if (s.gaps[k] > s.gaps[peak]) peak = k;
    s.post_change_peak = s.gaps[peak];
    for (std::size_t k = peak; k < s.gaps.size(); ++k) {
        if (s.gaps[k] <= recovery_factor * *s.pre_change_mean) {
            s.recovery_steps = s.steps[k] - *change_step;
            break;
        }
    }
    return s;
}

}  // namespace topoid

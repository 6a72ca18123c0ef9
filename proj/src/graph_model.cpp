#include "topoid/graph_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace topoid {

Gso::Gso(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        std::ostringstream os;
        os << "Gso: matrix must be square, got " << entries_.rows() << "x" << entries_.cols();
        throw Error(ErrorCode::Dimension, os.str());
    }
}

std::int64_t Gso::nonzeros() const {
    return static_cast<std::int64_t>((entries_.array() != 0.0).count());
}

void EdgeConstraints::add(int i, int j, double value) {
    if (i < 0 || j < 0) throw Error(ErrorCode::Parameter, "EdgeConstraints: negative vertex index");
    if (i == j) {
        throw Error(ErrorCode::Parameter,
                    "EdgeConstraints: self-loop (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (!std::isfinite(value) || value < 0.0) {
        throw Error(ErrorCode::Parameter, "EdgeConstraints: known value must be finite and >= 0");
    }
    const Edge key(i, j);
    auto it = known_.find(key);
    if (it != known_.end() && it->second != value) {
        throw Error(ErrorCode::Parameter, "EdgeConstraints: conflicting values for pair (" +
                                              std::to_string(key.i) + "," + std::to_string(key.j) + ")");
    }
    known_[key] = value;
}

std::optional<double> EdgeConstraints::value(int i, int j) const {
    if (i == j) return std::nullopt;
    auto it = known_.find(Edge(i, j));
    if (it == known_.end()) return std::nullopt;
    return it->second;
}

int EdgeConstraints::max_index() const {
    int m = -1;
    for (const auto& [e, v] : known_) m = std::max(m, e.j);
    return m;
}

GroundTruthGraph GroundTruthGraph::from_edges(int n, const std::vector<WeightedEdge>& edges) {
    if (n < 1) throw Error(ErrorCode::Parameter, "GroundTruthGraph: n must be >= 1");
    std::map<Edge, double> unique;
    for (const auto& we : edges) {
        const auto& e = we.edge;
        if (e.i < 0 || e.j >= n) {
            throw Error(ErrorCode::Data, "GroundTruthGraph: vertex index out of range (" +
                                             std::to_string(e.i) + "," + std::to_string(e.j) + ")");
        }
        if (e.i == e.j) throw Error(ErrorCode::Data, "GroundTruthGraph: self-loop at " + std::to_string(e.i));
        if (!std::isfinite(we.weight) || we.weight < 0.0) {
            throw Error(ErrorCode::Data, "GroundTruthGraph: weights must be finite and non-negative");
        }
        unique[e] = we.weight;
    }
    GroundTruthGraph g;
    Matrix a = Matrix::Zero(n, n);
    for (const auto& [e, w] : unique) {
        if (w == 0.0) continue;
        a(e.i, e.j) = w;
        a(e.j, e.i) = w;
        g.edges_.push_back({e, w});
    }
    g.gso_ = Gso(std::move(a));
    return g;
}

GroundTruthGraph GroundTruthGraph::from_gso(const Gso& gso) {
    const auto violations = validate(gso);
    if (!violations.empty()) {
        throw Error(ErrorCode::Data, "GroundTruthGraph: inadmissible matrix, " + violations.front().describe());
    }
    std::vector<WeightedEdge> edges;
    for (int j = 0; j < gso.n(); ++j) {
        for (int i = 0; i < j; ++i) {
            if (gso(i, j) != 0.0) edges.push_back({Edge(i, j), gso(i, j)});
        }
    }
    return from_edges(gso.n(), edges);
}

bool GroundTruthGraph::has_edge(int i, int j) const {
    if (i == j || i < 0 || j < 0 || i >= n() || j >= n()) return false;
    return gso_(i, j) != 0.0;
}

std::string Violation::describe() const {
    std::ostringstream os;
    switch (invariant) {
        case Invariant::Symmetry: os << "symmetry"; break;
        case Invariant::Hollowness: os << "hollowness"; break;
        case Invariant::NonNegativity: os << "non-negativity"; break;
    }
    os << " at (" << i << "," << j << ")";
    return os.str();
}

std::vector<Violation> validate(const Matrix& s, double tolerance) {
    if (s.rows() != s.cols()) {
        std::ostringstream os;
        os << "validate: matrix must be square, got " << s.rows() << "x" << s.cols();
        throw Error(ErrorCode::Dimension, os.str());
    }
    std::vector<Violation> out;
    const auto n = s.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(s(i, i)) > tolerance || !std::isfinite(s(i, i))) {
            out.push_back({Invariant::Hollowness, int(i), int(i), s(i, i)});
        }
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i < j && !(std::abs(s(i, j) - s(j, i)) <= tolerance)) {
                out.push_back({Invariant::Symmetry, int(i), int(j), s(i, j) - s(j, i)});
            }
            if (!(s(i, j) >= -tolerance)) out.push_back({Invariant::NonNegativity, int(i), int(j), s(i, j)});
        }
    }
    return out;
}

bool matches_constraints(const Gso& s, const EdgeConstraints& constraints) {
    for (const auto& [e, v] : constraints) {
        if (e.j >= s.n()) return false;
        if (s(e.i, e.j) != v || s(e.j, e.i) != v) return false;
    }
    return true;
}

Gso init_sparse_random(int n, double density, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::Parameter, "init_sparse_random: n must be >= 2");
    if (!(density > 0.0) || density > 1.0) {
        throw Error(ErrorCode::Parameter, "init_sparse_random: density must lie in (0, 1]");
    }
    Rng rng(seed);
    Matrix s = Matrix::Zero(n, n);
    bool any = false;
    for (int j = 1; j < n; ++j) {
        for (int i = 0; i < j; ++i) {
            // Both draws are always consumed so the layout of the stream is
            // independent of the density.
            const double coin = rng.uniform01();
            const double w = rng.uniform_open_closed();
            if (coin < density) {
                s(i, j) = w;
                s(j, i) = w;
                any = true;
            }
        }
    }
    if (!any) {
        const auto pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        auto k = static_cast<std::int64_t>(rng.below(pairs));
        int j = 1;
        while (k >= j) {
            k -= j;
            ++j;
        }
        const double w = rng.uniform_open_closed();
        s(int(k), j) = w;
        s(j, int(k)) = w;
    }
    return Gso(std::move(s));
}

std::vector<Edge> support(const Gso& s, double threshold) {
    if (!(threshold >= 0.0)) throw Error(ErrorCode::Parameter, "support: threshold must be >= 0");
    std::vector<Edge> out;
    for (int i = 0; i < s.n(); ++i) {
        for (int j = i + 1; j < s.n(); ++j) {
            if (s(i, j) > threshold) out.emplace_back(i, j);
        }
    }
    return out;
}

Gso path_graph(int n) {
    Matrix a = Matrix::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) {
        a(i, i + 1) = 1.0;
        a(i + 1, i) = 1.0;
    }
    return Gso(std::move(a));
}

GroundTruthGraph erdos_renyi(int n, double mean_degree, std::uint64_t seed) {
    if (n < 2) throw Error(ErrorCode::Parameter, "erdos_renyi: n must be >= 2");
    const double p = mean_degree / (n - 1);
    if (!(p > 0.0) || p > 1.0) throw Error(ErrorCode::Parameter, "erdos_renyi: mean degree out of range");
    Rng rng(seed);
    std::vector<WeightedEdge> edges;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            if (rng.uniform01() < p) edges.push_back({Edge(i, j), 1.0});
        }
    }
    return GroundTruthGraph::from_edges(n, edges);
}

EdgeConstraints sample_known_edges(const GroundTruthGraph& graph, int k, std::uint64_t seed) {
    const auto& edges = graph.edges();
    if (k < 0 || static_cast<std::size_t>(k) > edges.size()) {
        throw Error(ErrorCode::Parameter, "sample_known_edges: k exceeds the edge count");
    }
    std::vector<std::size_t> order(edges.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    EdgeConstraints out;
    for (int m = 0; m < k; ++m) {
        const std::size_t pick = m + rng.below(order.size() - m);
        std::swap(order[m], order[pick]);
        const auto& e = edges[order[m]];
        out.add(e.edge.i, e.edge.j, e.weight);
    }
    return out;
}

}  // namespace topoid

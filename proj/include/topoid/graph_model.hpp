#ifndef TOPOID_GRAPH_MODEL_HPP
#define TOPOID_GRAPH_MODEL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "topoid/common.hpp"

namespace topoid {

/// Unordered vertex pair, stored with i < j. Indices are 0-based.
struct Edge {
    int i = 0;
    int j = 0;

    Edge() = default;
    Edge(int a, int b) : i(a < b ? a : b), j(a < b ? b : a) {}

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct WeightedEdge {
    Edge edge;
    double weight = 1.0;
};

/**
 * Graph-shift operator estimate: a dense N x N adjacency matrix.
 *
 * The type only enforces squareness. Symmetry, hollowness and non-negativity
 * are checked by validate(), since solver internals and user input may
 * legitimately carry matrices that violate them.
 */
class Gso {
public:
    Gso() = default;
    explicit Gso(int n) : entries_(Matrix::Zero(n, n)) {}
    explicit Gso(Matrix entries);

    int n() const { return static_cast<int>(entries_.rows()); }
    const Matrix& matrix() const { return entries_; }
    double operator()(int i, int j) const { return entries_(i, j); }

    /// Number of nonzero entries (both orientations counted).
    std::int64_t nonzeros() const;

private:
    Matrix entries_;
};

/// The set of a-priori known entries S_ij = s_ij.
class EdgeConstraints {
public:
    using Map = std::map<Edge, double>;

    EdgeConstraints() = default;

    /// Throws on i == j, negative or non-finite values, and conflicting duplicates.
    void add(int i, int j, double value = 1.0);

    bool contains(int i, int j) const { return i != j && known_.count(Edge(i, j)) > 0; }
    std::optional<double> value(int i, int j) const;

    std::size_t size() const { return known_.size(); }
    bool empty() const { return known_.empty(); }
    Map::const_iterator begin() const { return known_.begin(); }
    Map::const_iterator end() const { return known_.end(); }

    /// Largest vertex index referenced, or -1 when empty.
    int max_index() const;

private:
    Map known_;
};

/// Reference graph with matching edge-list and matrix forms.
class GroundTruthGraph {
public:
    GroundTruthGraph() = default;

    /// Duplicate pairs keep the last weight; self-loops and negative weights throw.
    static GroundTruthGraph from_edges(int n, const std::vector<WeightedEdge>& edges);
    static GroundTruthGraph from_gso(const Gso& gso);

    int n() const { return gso_.n(); }
    const Gso& gso() const { return gso_; }
    const std::vector<WeightedEdge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }
    bool has_edge(int i, int j) const;

private:
    Gso gso_;
    std::vector<WeightedEdge> edges_;  // sorted by (i, j)
};

enum class Invariant { Symmetry, Hollowness, NonNegativity };

struct Violation {
    Invariant invariant;
    int i = 0;
    int j = 0;
    double value = 0.0;

    /// e.g. "symmetry at (0,1)"; indices printed 0-based.
    std::string describe() const;
};

inline constexpr double kValidationTolerance = 1e-12;

/// Checks the admissibility invariants. Throws ErrorCode::Dimension on non-square input.
std::vector<Violation> validate(const Matrix& s, double tolerance = kValidationTolerance);
inline std::vector<Violation> validate(const Gso& s, double tolerance = kValidationTolerance) {
    return validate(s.matrix(), tolerance);
}

/// True when every Ω entry of s matches its known value exactly (both orientations).
bool matches_constraints(const Gso& s, const EdgeConstraints& constraints);

/**
 * Sparse random symmetric start point. Each unordered pair is an edge with
 * probability `density`, with weight uniform on (0, 1]. At least one pair is
 * always set so the result is nonzero.
 */
Gso init_sparse_random(int n, double density, std::uint64_t seed);

/// {(i, j) : i < j, S_ij > threshold}, ordered lexicographically.
std::vector<Edge> support(const Gso& s, double threshold);

/// Path graph P_n with unit weights.
Gso path_graph(int n);

/// G(n, p) random graph with p = mean_degree / (n - 1), unit weights.
GroundTruthGraph erdos_renyi(int n, double mean_degree, std::uint64_t seed);

/// k distinct edges of `graph` drawn uniformly without replacement, with their weights.
EdgeConstraints sample_known_edges(const GroundTruthGraph& graph, int k, std::uint64_t seed);

}  // namespace topoid

#endif  // TOPOID_GRAPH_MODEL_HPP

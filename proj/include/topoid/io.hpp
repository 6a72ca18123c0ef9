#ifndef TOPOID_IO_HPP
#define TOPOID_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "topoid/graph_model.hpp"
#include "topoid/trace.hpp"

namespace topoid {

/// Zachary's karate club: 34 members, 78 unweighted friendships.
GroundTruthGraph karate_club();

/**
 * Edge-list text: one `i j [w]` per line, whitespace separated, `#` starts a
 * comment. Missing weights default to 1. Duplicate lines must agree.
 * When n is 0 it is inferred as max index + 1.
 */
std::vector<WeightedEdge> parse_edge_list(std::istream& in, int index_base = 0, const std::string& origin = "<stream>");
GroundTruthGraph read_edge_list(const std::string& path, int index_base = 0, int n = 0);
EdgeConstraints read_constraints(const std::string& path, int index_base = 0);
void write_edge_list(std::ostream& out, const std::vector<WeightedEdge>& edges, int index_base = 0);

/// Nonzero upper-triangle entries of an estimate.
std::vector<WeightedEdge> edges_of(const Gso& s, double threshold = 0.0);

/// Signal CSV: T rows of N doubles; a header row `y0,...` is skipped when present.
Matrix read_signals(const std::string& path);
void write_signals(std::ostream& out, const Matrix& rows, bool header = true);

inline constexpr const char* kTraceSchema = "# topoid-trace v1";

/// Trace CSV header (schema comment plus column names).
void write_trace_header(std::ostream& out);
void write_trace_row(std::ostream& out, const StepRecord& record);

/// Writes `content` to a sibling temp file, then renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// FNV-1a 64 of a byte string, as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace topoid

#endif  // TOPOID_IO_HPP

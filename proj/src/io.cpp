#include "topoid/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <sstream>

namespace topoid {

GroundTruthGraph karate_club() {
    static const std::vector<std::pair<int, std::vector<int>>> adjacency = {
        {0, {1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13, 17, 19, 21, 31}},
        {1, {2, 3, 7, 13, 17, 19, 21, 30}},
        {2, {3, 7, 8, 9, 13, 27, 28, 32}},
        {3, {7, 12, 13}},
        {4, {6, 10}},
        {5, {6, 10, 16}},
        {6, {16}},
        {8, {30, 32, 33}},
        {9, {33}},
        {13, {33}},
        {14, {32, 33}},
        {15, {32, 33}},
        {18, {32, 33}},
        {19, {33}},
        {20, {32, 33}},
        {22, {32, 33}},
        {23, {25, 27, 29, 32, 33}},
        {24, {25, 27, 31}},
        {25, {31}},
        {26, {29, 33}},
        {27, {33}},
        {28, {31, 33}},
        {29, {32, 33}},
        {30, {32, 33}},
        {31, {32, 33}},
        {32, {33}},
    };
    std::vector<WeightedEdge> edges;
    for (const auto& [i, row] : adjacency)
        for (int j : row) edges.push_back({Edge(i, j), 1.0});
    return GroundTruthGraph::from_edges(34, edges);
}

namespace {

double parse_number(const std::string& token, const std::string& origin, int line) {
    double v = 0.0;
    const char* first = token.data();
    const char* last = token.data() + token.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::Io, origin + ":" + std::to_string(line) + ": not a number: '" + token + "'");
    }
    return v;
}

int parse_index(const std::string& token, int base, const std::string& origin, int line) {
    const double v = parse_number(token, origin, line);
    if (v != std::floor(v)) throw Error(ErrorCode::Io, origin + ":" + std::to_string(line) + ": index is not an integer");
    const long long idx = static_cast<long long>(v) - base;
    if (idx < 0 || idx > 100000000) {
        throw Error(ErrorCode::Io, origin + ":" + std::to_string(line) + ": index out of range for base " +
                                       std::to_string(base));
    }
    return static_cast<int>(idx);
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    return in;
}

}  // namespace

std::vector<WeightedEdge> parse_edge_list(std::istream& in, int index_base, const std::string& origin) {
    if (index_base != 0 && index_base != 1) throw Error(ErrorCode::Parameter, "index base must be 0 or 1");
    std::map<Edge, double> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        std::istringstream fields(line);
        std::vector<std::string> tokens;
        for (std::string tok; fields >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens.size() < 2 || tokens.size() > 3) {
            throw Error(ErrorCode::Io, origin + ":" + std::to_string(line_no) + ": expected 'i j [w]'");
        }
        const int i = parse_index(tokens[0], index_base, origin, line_no);
        const int j = parse_index(tokens[1], index_base, origin, line_no);
        const double w = tokens.size() == 3 ? parse_number(tokens[2], origin, line_no) : 1.0;
        if (i == j) throw Error(ErrorCode::Data, origin + ":" + std::to_string(line_no) + ": self-loop");
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::Data, origin + ":" + std::to_string(line_no) + ": weight must be finite and >= 0");
        }
        auto [it, inserted] = seen.emplace(Edge(i, j), w);
        if (!inserted && it->second != w) {
            throw Error(ErrorCode::Data, origin + ":" + std::to_string(line_no) + ": conflicting duplicate edge");
        }
    }
    std::vector<WeightedEdge> out;
    out.reserve(seen.size());
    for (const auto& [e, w] : seen) out.push_back({e, w});
    return out;
}

GroundTruthGraph read_edge_list(const std::string& path, int index_base, int n) {
    auto in = open_in(path);
    const auto edges = parse_edge_list(in, index_base, path);
    int max_index = -1;
    for (const auto& e : edges) max_index = std::max(max_index, e.edge.j);
    if (n == 0) n = max_index + 1;
    if (max_index >= n) throw Error(ErrorCode::Dimension, path + ": vertex index exceeds node count");
    if (n < 2) throw Error(ErrorCode::Data, path + ": graph needs at least 2 nodes");
    return GroundTruthGraph::from_edges(n, edges);
}

EdgeConstraints read_constraints(const std::string& path, int index_base) {
    auto in = open_in(path);
    EdgeConstraints out;
    for (const auto& e : parse_edge_list(in, index_base, path)) out.add(e.edge.i, e.edge.j, e.weight);
    return out;
}

void write_edge_list(std::ostream& out, const std::vector<WeightedEdge>& edges, int index_base) {
    for (const auto& e : edges) {
        out << e.edge.i + index_base << ' ' << e.edge.j + index_base << ' ' << format_double(e.weight) << '\n';
    }
}

std::vector<WeightedEdge> edges_of(const Gso& s, double threshold) {
    std::vector<WeightedEdge> out;
    for (int i = 0; i < s.n(); ++i)
        for (int j = i + 1; j < s.n(); ++j)
            if (s(i, j) > threshold) out.push_back({Edge(i, j), s(i, j)});
    return out;
}

Matrix read_signals(const std::string& path) {
    auto in = open_in(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int line_no = 0;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (rows.empty() && width == 0 && line[0] == 'y') {
            width = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
            continue;
        }
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            std::string tok = line.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
            while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
            while (!tok.empty() && tok.back() == ' ') tok.pop_back();
            row.push_back(parse_number(tok, path, line_no));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (width == 0) width = row.size();
        if (row.size() != width) {
            throw Error(ErrorCode::Dimension, path + ":" + std::to_string(line_no) + ": expected " +
                                                  std::to_string(width) + " columns");
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error(ErrorCode::Data, path + ": no signal rows");
    Matrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(width));
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < width; ++c) out(Eigen::Index(r), Eigen::Index(c)) = rows[r][c];
    return out;
}

void write_signals(std::ostream& out, const Matrix& rows, bool header) {
    if (header) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) out << (c ? ",y" : "y") << c;
        out << '\n';
    }
    for (Eigen::Index r = 0; r < rows.rows(); ++r) {
        for (Eigen::Index c = 0; c < rows.cols(); ++c) {
            if (c) out << ',';
            out << format_double(rows(r, c));
        }
        out << '\n';
    }
}

void write_trace_header(std::ostream& out) {
    out << kTraceSchema << '\n' << "t,objective,gamma,lambda_max,tracking_error,bound,f_measure\n";
}

void write_trace_row(std::ostream& out, const StepRecord& r) {
    auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
    out << r.t << ',' << format_double(r.objective) << ',' << format_double(r.gamma) << ','
        << format_double(r.lambda_max) << ',' << opt(r.tracking_error) << ',' << opt(r.bound) << ','
        << opt(r.f_measure) << '\n';
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::Io, "cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw Error(ErrorCode::Io, "write failed for '" + tmp.string() + "'");
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot rename onto '" + path + "': " + ec.message());
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string content_hash(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace topoid

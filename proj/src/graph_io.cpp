#include "timp/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "timp/errors.hpp"

namespace timp {

namespace {

[[noreturn]] void bad_line(int lineno, const std::string& line, const std::string& why) {
    throw IoError("graph parse error at line " + std::to_string(lineno) + " (" + why +
                  "): " + line);
}

void check_endpoint(int v, int n, int lineno, const std::string& line) {
    if (v < 0 || v >= n) bad_line(lineno, line, "vertex out of range");
}

} // namespace

Graph read_graph(std::istream& in) {
    std::string line;
    int lineno = 0;
    bool dimacs = false;
    long long n = -1, m = -1;

    // Header: either "p edge n m" (DIMACS, possibly after comment lines) or "n m".
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue; // blank
        if (tok == "c") continue;   // DIMACS comment
        if (tok == "p") {
            std::string kind;
            if (!(ls >> kind >> n >> m) || kind != "edge")
                bad_line(lineno, line, "malformed DIMACS problem line");
            dimacs = true;
        } else {
            std::istringstream hs(line);
            if (!(hs >> n >> m)) bad_line(lineno, line, "malformed header");
        }
        break;
    }
    if (n < 0) throw IoError("graph input is empty");
    if (m < 0) bad_line(lineno, line, "negative edge count");

    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<std::size_t>(m));
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok)) continue;
        if (dimacs && tok == "c") continue;
        long long u, v;
        if (dimacs) {
            if (tok != "e") bad_line(lineno, line, "expected an e-line");
            if (!(ls >> u >> v)) bad_line(lineno, line, "malformed e-line");
            --u; --v; // 1-based on disk
        } else {
            std::istringstream es(line);
            if (!(es >> u >> v)) bad_line(lineno, line, "malformed edge line");
        }
        check_endpoint(static_cast<int>(u), static_cast<int>(n), lineno, line);
        check_endpoint(static_cast<int>(v), static_cast<int>(n), lineno, line);
        if (u == v) bad_line(lineno, line, "self-loop");
        edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    if (static_cast<long long>(edges.size()) != m)
        throw IoError("header promises " + std::to_string(m) + " edges, file has " +
                      std::to_string(edges.size()));
    return Graph(static_cast<int>(n), edges);
}

Graph read_graph_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open graph file: " + path);
    return read_graph(in);
}

void write_graph(std::ostream& out, const Graph& g, GraphFormat f) {
    long long m = g.edge_count();
    if (f == GraphFormat::dimacs)
        out << "p edge " << g.n() << ' ' << m << '\n';
    else
        out << g.n() << ' ' << m << '\n';
    for (int u = 0; u < g.n(); ++u)
        for (int v = g.neighbours(u).find_next(u); v >= 0; v = g.neighbours(u).find_next(v)) {
            if (f == GraphFormat::dimacs)
                out << "e " << (u + 1) << ' ' << (v + 1) << '\n';
            else
                out << u << ' ' << v << '\n';
        }
}

void write_graph_file(const std::string& path, const Graph& g, GraphFormat f) {
    std::ostringstream buf;
    write_graph(buf, g, f);
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open output file: " + path);
    out << buf.str();
    if (!out) throw IoError("write failed: " + path);
}

} // namespace timp

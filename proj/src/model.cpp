#include "trekcalc/model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "trekcalc/errors.hpp"

namespace trekcalc {

namespace {

int parse_vertex_id(const std::string& tok, int line) {
    if (tok.empty()) throw ParseError("missing vertex id", line);
    for (char c : tok)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            throw ParseError("bad vertex id '" + tok + "'", line);
    try {
        return std::stoi(tok);
    } catch (const std::exception&) {
        throw ParseError("bad vertex id '" + tok + "'", line);
    }
}

}  // namespace

ModelFile parse_model(const std::string& text) {
    std::vector<int> vertices;
    std::set<int> declared;
    std::vector<std::pair<int, int>> edges;
    std::set<std::pair<int, int>> edge_set;
    ParamPoint point;

    auto declare = [&](int v) {
        if (declared.insert(v).second) vertices.push_back(v);
    };

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.resize(hash);
        std::istringstream ls(raw);
        std::string kw;
        if (!(ls >> kw)) continue;
        std::vector<std::string> rest;
        std::string tok;
        while (ls >> tok) rest.push_back(tok);
        if (kw == "vertex") {
            if (rest.size() != 1) throw ParseError("vertex takes one id", line);
            int v = parse_vertex_id(rest[0], line);
            if (declared.count(v))
                throw ParseError("duplicate-vertex: " + rest[0], line);
            declare(v);
        } else if (kw == "edge") {
            if (rest.size() != 2) throw ParseError("edge takes two ids", line);
            int i = parse_vertex_id(rest[0], line);
            int j = parse_vertex_id(rest[1], line);
            if (i == j) throw ParseError("self-loop: " + rest[0], line);
            if (!edge_set.insert({i, j}).second)
                throw ParseError("duplicate-edge: " + rest[0] + "->" + rest[1], line);
            declare(i);
            declare(j);
            edges.push_back({i, j});
        } else if (kw == "param") {
            if (rest.size() != 3) throw ParseError("param takes two ids and a value", line);
            int i = parse_vertex_id(rest[0], line);
            int j = parse_vertex_id(rest[1], line);
            if (!edge_set.count({i, j}))
                throw ParseError("param for undeclared edge " + rest[0] + "->" + rest[1],
                                 line);
            Rat v;
            try {
                v = parse_rational(rest[2]);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line);
            }
            if (!point.edge.emplace(std::pair(i, j), v).second)
                throw ParseError("duplicate param for edge " + rest[0] + "->" + rest[1],
                                 line);
        } else if (kw == "omega") {
            if (rest.size() != 2) throw ParseError("omega takes an id and a value", line);
            int m = parse_vertex_id(rest[0], line);
            Rat v;
            try {
                v = parse_rational(rest[1]);
            } catch (const ParseError& e) {
                throw ParseError(e.what(), line);
            }
            if (v <= 0) throw ParseError("omega must be positive", line);
            if (!point.omega.emplace(m, v).second)
                throw ParseError("duplicate omega for vertex " + rest[0], line);
        } else {
            throw ParseError("unknown statement '" + kw + "'", line);
        }
    }
    for (const auto& [m, v] : point.omega) {
        (void)v;
        if (!declared.count(m))
            throw ParseError("omega for undeclared vertex " + std::to_string(m));
    }
    try {
        return {Dag(vertices, edges), point};
    } catch (const std::invalid_argument& e) {
        throw ParseError(e.what());
    }
}

ModelFile load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open model file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_model(buf.str());
}

}  // namespace trekcalc

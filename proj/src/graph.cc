#include "netrecon/graph.h"

#include <algorithm>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "netrecon/errors.h"
#include "netrecon/random.h"

namespace netrecon {

Graph::Graph(int n) : n_(n) {
  if (n < 1) throw ParameterError("graph needs at least one vertex");
  adj_.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0);
}

void Graph::CheckVertex(int v) const {
  if (v < 0 || v >= n_) {
    throw ParameterError("vertex " + std::to_string(v) + " out of range [0, " +
                         std::to_string(n_) + ")");
  }
}

void Graph::AddEdge(int i, int j) {
  CheckVertex(i);
  CheckVertex(j);
  if (i == j) throw InvalidLevelSetError("self-loop at vertex " + std::to_string(i));
  adj_[Index(i, j)] = 1;
}

void Graph::RemoveEdge(int i, int j) {
  CheckVertex(i);
  CheckVertex(j);
  adj_[Index(i, j)] = 0;
}

VertexSet Graph::LevelSet(int q) const {
  CheckVertex(q);
  VertexSet out;
  for (int i = 0; i < n_; ++i) {
    if (adj_[Index(i, q)]) out.push_back(i);
  }
  return out;
}

VertexSet Graph::InNeighbors(int i) const {
  CheckVertex(i);
  VertexSet out;
  for (int j = 0; j < n_; ++j) {
    if (adj_[Index(i, j)]) out.push_back(j);
  }
  return out;
}

int Graph::OutDegree(int q) const {
  CheckVertex(q);
  int d = 0;
  for (int i = 0; i < n_; ++i) d += adj_[Index(i, q)];
  return d;
}

int Graph::MaxOutDegree() const {
  int best = 0;
  for (int q = 0; q < n_; ++q) best = std::max(best, OutDegree(q));
  return best;
}

long Graph::EdgeCount() const {
  return static_cast<long>(std::count(adj_.begin(), adj_.end(), std::uint8_t{1}));
}

bool Graph::IsSymmetric() const {
  for (int i = 0; i < n_; ++i) {
    for (int j = i + 1; j < n_; ++j) {
      if (adj_[Index(i, j)] != adj_[Index(j, i)]) return false;
    }
  }
  return true;
}

Graph GenerateErdosRenyi(int n, double p, std::uint64_t seed, bool directed) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ParameterError("edge probability must lie in [0, 1]");
  }
  Graph g(n);
  Rng rng = MakeRng(seed);
  std::bernoulli_distribution coin(p);
  for (int i = 0; i < n; ++i) {
    for (int j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (coin(rng)) {
        g.AddEdge(i, j);
        if (!directed) g.AddEdge(j, i);
      }
    }
  }
  return g;
}

Graph AdjacencyFromLevelSets(std::span<const VertexSet> sets) {
  if (sets.empty()) throw ParameterError("need at least one level set");
  const int n = static_cast<int>(sets.size());
  Graph g(n);
  for (int q = 0; q < n; ++q) {
    for (int i : sets[q]) {
      if (i == q) {
        throw InvalidLevelSetError("level set of vertex " + std::to_string(q + 1) +
                                   " contains the vertex itself");
      }
      g.AddEdge(i, q);
    }
  }
  return g;
}

void WriteGraph(std::ostream& out, const Graph& g, bool directed) {
  if (!directed && !g.IsSymmetric()) {
    throw ParameterError("cannot write an asymmetric graph as undirected");
  }
  out << "n=" << g.size() << " directed=" << (directed ? 1 : 0) << "\n";
  for (int i = 0; i < g.size(); ++i) {
    for (int j = directed ? 0 : i + 1; j < g.size(); ++j) {
      if (g.HasEdge(i, j)) out << (i + 1) << " " << (j + 1) << "\n";
    }
  }
}

Graph ReadGraph(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw FormatError("empty graph file");
  int n = 0;
  int directed = 0;
  if (std::sscanf(header.c_str(), "n=%d directed=%d", &n, &directed) != 2 || n < 1 ||
      (directed != 0 && directed != 1)) {
    throw FormatError("bad graph header: '" + header + "'");
  }
  Graph g(n);
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    int i = 0;
    int j = 0;
    if (!(fields >> i >> j) || i < 1 || j < 1 || i > n || j > n) {
      throw FormatError("bad edge on line " + std::to_string(line_no));
    }
    g.AddEdge(i - 1, j - 1);
    if (!directed) g.AddEdge(j - 1, i - 1);
  }
  return g;
}

}  // namespace netrecon

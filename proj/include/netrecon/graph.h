#ifndef NETRECON_GRAPH_H_
#define NETRECON_GRAPH_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace netrecon {

// Sorted, duplicate-free list of 0-based vertex indices.
using VertexSet = std::vector<int>;

// Directed unweighted graph without self-loops, stored as a dense boolean
// adjacency matrix. HasEdge(i, j) means vertex i receives input from j, so
// column j lists the vertices influenced by j.
//
// Indices are 0-based in the API; files and the CLI use 1-based indices.
class Graph {
 public:
  explicit Graph(int n);

  int size() const { return n_; }
  bool HasEdge(int i, int j) const { return adj_[Index(i, j)] != 0; }

  // Throws InvalidLevelSetError for i == j.
  void AddEdge(int i, int j);
  void RemoveEdge(int i, int j);

  // L1(q) = { i : A[i][q] = 1 }.
  VertexSet LevelSet(int q) const;
  // Vertices j with A[i][j] = 1.
  VertexSet InNeighbors(int i) const;

  int OutDegree(int q) const;
  int MaxOutDegree() const;
  long EdgeCount() const;
  bool IsSymmetric() const;

  bool operator==(const Graph& other) const = default;

 private:
  std::size_t Index(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(j);
  }
  void CheckVertex(int v) const;

  int n_;
  std::vector<std::uint8_t> adj_;
};

// Undirected G(n, p): each unordered pair {i, j} is an edge with probability
// p, stored symmetrically. With directed = true every ordered pair (i, j),
// i != j, is drawn independently instead.
Graph GenerateErdosRenyi(int n, double p, std::uint64_t seed, bool directed = false);

// Inverse of Graph::LevelSet: A[i][q] = 1 iff i in sets[q].
Graph AdjacencyFromLevelSets(std::span<const VertexSet> sets);

// Edge-list text format: header "n=<N> directed=<0|1>" followed by one
// 1-based "i j" pair per line meaning A[i][j] = 1. Undirected graphs list each
// unordered pair once with i < j.
void WriteGraph(std::ostream& out, const Graph& g, bool directed);
Graph ReadGraph(std::istream& in);

}  // namespace netrecon

#endif  // NETRECON_GRAPH_H_

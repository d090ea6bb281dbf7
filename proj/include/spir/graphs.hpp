#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace spir {

/// Undirected edge {i, j}, 1-indexed vertices, i < j after normalization.
struct Edge {
  int a;
  int b;
  bool operator==(const Edge& o) const { return a == o.a && b == o.b; }
};

enum class GraphFamily { Path, Cycle, Complete, Star, Custom };

/// Simple connected graph: servers are vertices, messages are edges.
/// Edge order is the construction order and is part of the object identity
/// (answer tables and golden files depend on it).
class GraphSpec {
 public:
  GraphSpec(int n_servers, std::vector<Edge> edges, std::string name = "custom");

  int n_servers() const { return n_; }
  int n_edges() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int k) const { return edges_.at(k); }  // 0-based
  const std::string& name() const { return name_; }

  int degree(int vertex) const;  // 1-based vertex
  /// d if every vertex has degree d, otherwise nullopt.
  std::optional<int> regular_degree() const;

  /// 0-based edge indices incident to a 1-based vertex, ascending.
  std::vector<int> incident_edges(int vertex) const;

  bool operator==(const GraphSpec& o) const { return n_ == o.n_ && edges_ == o.edges_; }

 private:
  int n_;
  std::vector<Edge> edges_;
  std::string name_;
};

/// N x K matrix over {-1, 0, +1}: +1 at the lower-indexed endpoint of each
/// edge, -1 at the higher. Every column sums to zero.
struct SignedIncidence {
  int n_rows = 0;
  int n_cols = 0;
  std::vector<int8_t> m;

  int8_t at(int vertex, int edge) const { return m[static_cast<size_t>(vertex) * n_cols + edge]; }  // 0-based
};

GraphSpec build_family(GraphFamily kind, int n);
GraphSpec path_graph(int n);
GraphSpec cycle_graph(int n);
GraphSpec complete_graph(int n);
GraphSpec star_graph(int n);
/// Triangle {1,2},{1,3},{2,3} plus the pendant edge {3,4}.
GraphSpec m_graph();

SignedIncidence signed_incidence(const GraphSpec& g);

/// Plain-text edge list: first line N, then one "i j" pair per line.
GraphSpec load_edge_list(std::istream& in, const std::string& name = "custom");
GraphSpec load_edge_list_file(const std::string& path);

/// Uniform multigraph G^(r): every edge of the base graph carries r parallel
/// messages W_{k,t}. Messages are flattened t-major: id = (t-1)*K' + (k-1),
/// matching the per-server message-vector layout. r = 1 collapses to the base.
class MultiGraphSpec {
 public:
  MultiGraphSpec(GraphSpec base, int r);

  const GraphSpec& base() const { return base_; }
  int multiplicity() const { return r_; }
  int n_servers() const { return base_.n_servers(); }
  int n_bundles() const { return base_.n_edges(); }
  int n_messages() const { return base_.n_edges() * r_; }

  int message_id(int edge_k, int t) const { return t * base_.n_edges() + edge_k; }  // 0-based k, t
  int edge_of(int msg) const { return msg % base_.n_edges(); }
  int slice_of(int msg) const { return msg / base_.n_edges(); }

 private:
  GraphSpec base_;
  int r_;
};

MultiGraphSpec lift_multigraph(const GraphSpec& g, int r);

enum class RandMode { GraphReplicated, FullyReplicated };

/// Which messages and which randomness pools each server holds.
struct StorageMap {
  RandMode mode;
  std::vector<std::vector<int>> server_messages;  // per server (0-based), message ids
  std::vector<std::vector<int>> server_pools;     // per server, pool ids (GR: edge bundles; FR: {0})
};

StorageMap storage_map(const GraphSpec& g, RandMode mode);
StorageMap storage_map(const MultiGraphSpec& g, RandMode mode);

}  // namespace spir

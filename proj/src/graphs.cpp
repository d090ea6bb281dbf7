#include "spir/graphs.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spir {

namespace {

void check_connected(int n, const std::vector<Edge>& edges) {
  std::vector<std::vector<int>> adj(n + 1);
  for (const auto& e : edges) {
    adj[e.a].push_back(e.b);
    adj[e.b].push_back(e.a);
  }
  std::vector<bool> seen(n + 1, false);
  std::vector<int> stack{1};
  seen[1] = true;
  int count = 0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    ++count;
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        stack.push_back(w);
      }
  }
  if (count != n) throw std::invalid_argument("graph is not connected");
}

}  // namespace

GraphSpec::GraphSpec(int n_servers, std::vector<Edge> edges, std::string name)
    : n_(n_servers), edges_(std::move(edges)), name_(std::move(name)) {
  if (n_ < 2) throw std::invalid_argument("need at least 2 servers");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.a > e.b) std::swap(e.a, e.b);
    if (e.a < 1 || e.b > n_) throw std::invalid_argument("edge endpoint out of range");
    if (e.a == e.b) throw std::invalid_argument("self-loop not allowed in a simple graph");
    if (!seen.insert({e.a, e.b}).second)
      throw std::invalid_argument("repeated edge not allowed in a simple graph");
  }
  if (edges_.empty()) throw std::invalid_argument("graph has no edges");
  check_connected(n_, edges_);
}

int GraphSpec::degree(int vertex) const {
  int d = 0;
  for (const auto& e : edges_)
    if (e.a == vertex || e.b == vertex) ++d;
  return d;
}

std::optional<int> GraphSpec::regular_degree() const {
  int d = degree(1);
  for (int v = 2; v <= n_; ++v)
    if (degree(v) != d) return std::nullopt;
  return d;
}

std::vector<int> GraphSpec::incident_edges(int vertex) const {
  std::vector<int> out;
  for (int k = 0; k < n_edges(); ++k)
    if (edges_[k].a == vertex || edges_[k].b == vertex) out.push_back(k);
  return out;
}

GraphSpec path_graph(int n) {
  if (n < 2) throw std::invalid_argument("path needs N >= 2");
  std::vector<Edge> e;
  for (int k = 1; k < n; ++k) e.push_back({k, k + 1});
  return GraphSpec(n, e, "path" + std::to_string(n));
}

GraphSpec cycle_graph(int n) {
  if (n < 3) throw std::invalid_argument("cycle needs N >= 3");
  std::vector<Edge> e;
  for (int k = 1; k < n; ++k) e.push_back({k, k + 1});
  e.push_back({1, n});
  return GraphSpec(n, e, "cycle" + std::to_string(n));
}

GraphSpec complete_graph(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs N >= 2");
  std::vector<Edge> e;
  for (int i = 1; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j) e.push_back({i, j});
  return GraphSpec(n, e, "complete" + std::to_string(n));
}

GraphSpec star_graph(int n) {
  if (n < 3) throw std::invalid_argument("star needs N >= 3");
  std::vector<Edge> e;
  for (int k = 1; k < n; ++k) e.push_back({k, n});
  return GraphSpec(n, e, "star" + std::to_string(n));
}

GraphSpec m_graph() {
  return GraphSpec(4, {{1, 2}, {1, 3}, {2, 3}, {3, 4}}, "m");
}

GraphSpec build_family(GraphFamily kind, int n) {
  switch (kind) {
    case GraphFamily::Path: return path_graph(n);
    case GraphFamily::Cycle: return cycle_graph(n);
    case GraphFamily::Complete: return complete_graph(n);
    case GraphFamily::Star: return star_graph(n);
    case GraphFamily::Custom: break;
  }
  throw std::invalid_argument("custom graphs come from an edge list");
}

SignedIncidence signed_incidence(const GraphSpec& g) {
  SignedIncidence s;
  s.n_rows = g.n_servers();
  s.n_cols = g.n_edges();
  s.m.assign(static_cast<size_t>(s.n_rows) * s.n_cols, 0);
  for (int k = 0; k < g.n_edges(); ++k) {
    const Edge& e = g.edge(k);
    s.m[static_cast<size_t>(e.a - 1) * s.n_cols + k] = 1;
    s.m[static_cast<size_t>(e.b - 1) * s.n_cols + k] = -1;
  }
  return s;
}

GraphSpec load_edge_list(std::istream& in, const std::string& name) {
  int n = 0;
  if (!(in >> n)) throw std::invalid_argument("edge list: missing vertex count");
  std::vector<Edge> edges;
  int a, b;
  while (in >> a >> b) edges.push_back({a, b});
  return GraphSpec(n, edges, name);
}

GraphSpec load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open edge list: " + path);
  return load_edge_list(in, path);
}

MultiGraphSpec::MultiGraphSpec(GraphSpec base, int r) : base_(std::move(base)), r_(r) {
  if (r_ < 1) throw std::invalid_argument("multiplicity must be >= 1");
}

MultiGraphSpec lift_multigraph(const GraphSpec& g, int r) { return MultiGraphSpec(g, r); }

StorageMap storage_map(const GraphSpec& g, RandMode mode) {
  return storage_map(MultiGraphSpec(g, 1), mode);
}

StorageMap storage_map(const MultiGraphSpec& g, RandMode mode) {
  StorageMap sm;
  sm.mode = mode;
  int n = g.n_servers();
  sm.server_messages.assign(n, {});
  sm.server_pools.assign(n, {});
  for (int t = 0; t < g.multiplicity(); ++t)
    for (int k = 0; k < g.n_bundles(); ++k) {
      const Edge& e = g.base().edge(k);
      int id = g.message_id(k, t);
      sm.server_messages[e.a - 1].push_back(id);
      sm.server_messages[e.b - 1].push_back(id);
    }
  for (auto& v : sm.server_messages) std::sort(v.begin(), v.end());
  if (mode == RandMode::GraphReplicated) {
    for (int k = 0; k < g.n_bundles(); ++k) {
      const Edge& e = g.base().edge(k);
      sm.server_pools[e.a - 1].push_back(k);
      sm.server_pools[e.b - 1].push_back(k);
    }
  } else {
    for (int i = 0; i < n; ++i) sm.server_pools[i].push_back(0);
  }
  return sm;
}

}  // namespace spir

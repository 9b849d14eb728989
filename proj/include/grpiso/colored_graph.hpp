#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "grpiso/errors.hpp"

namespace grpiso {

// Node color roles shared by every graph builder, so that encodings of graphs
// built for different groups are directly comparable.
enum : int {
  kColorRoot = 0,
  kColorInternal = 1,
  kColorLeft = 2,
  kColorRight = 3,
  kColorEqual = 4,
  kColorNotIdentity = 5,
  kColorLeafPosBase = 6,  // leaf-position-k = kColorLeafPosBase + k, k = 0-based rank
};

inline std::string color_role_name(int color) {
  switch (color) {
    case kColorRoot: return "root";
    case kColorInternal: return "internal";
    case kColorLeft: return "left";
    case kColorRight: return "right";
    case kColorEqual: return "equal";
    case kColorNotIdentity: return "not-identity";
    default: return "leaf-position-" + std::to_string(color - kColorLeafPosBase + 1);
  }
}

// Undirected node-colored graph. No self-loops, no parallel edges.
struct ColoredGraph {
  int n = 0;
  std::vector<int> colors;
  std::vector<std::pair<int, int>> edges;
  std::vector<int> adj_off;  // CSR, built by finalize()
  std::vector<int> adj_dat;

  explicit ColoredGraph(int nodes = 0) : n(nodes), colors(nodes, kColorInternal) {}

  void add_edge(int u, int v) {
    if (u == v) throw Error("self-loop in graph construction");
    edges.emplace_back(std::min(u, v), std::max(u, v));
  }

  void finalize() {
    std::sort(edges.begin(), edges.end());
    for (size_t i = 1; i < edges.size(); ++i)
      if (edges[i] == edges[i - 1]) throw Error("parallel edge in graph construction");
    adj_off.assign(n + 1, 0);
    for (auto [u, v] : edges) {
      ++adj_off[u + 1];
      ++adj_off[v + 1];
    }
    for (int i = 0; i < n; ++i) adj_off[i + 1] += adj_off[i];
    adj_dat.assign(edges.size() * 2, 0);
    std::vector<int> fill(adj_off.begin(), adj_off.end() - 1);
    for (auto [u, v] : edges) {
      adj_dat[fill[u]++] = v;
      adj_dat[fill[v]++] = u;
    }
    for (int i = 0; i < n; ++i)
      std::sort(adj_dat.begin() + adj_off[i], adj_dat.begin() + adj_off[i + 1]);
  }

  int degree(int v) const { return adj_off[v + 1] - adj_off[v]; }

  int max_degree() const {
    int d = 0;
    for (int v = 0; v < n; ++v) d = std::max(d, degree(v));
    return d;
  }

  const int* nbr_begin(int v) const { return adj_dat.data() + adj_off[v]; }
  const int* nbr_end(int v) const { return adj_dat.data() + adj_off[v + 1]; }

  long long num_edges() const { return static_cast<long long>(edges.size()); }
};

// DIMACS-like export: "p edge N M", one "n <id> <color>" per node, one
// "e <u> <v>" per edge; 1-based ids, LF endings.
inline std::string to_dimacs(const ColoredGraph& g) {
  std::string out = "p edge " + std::to_string(g.n) + " " + std::to_string(g.edges.size()) + "\n";
  for (int v = 0; v < g.n; ++v)
    out += "n " + std::to_string(v + 1) + " " + std::to_string(g.colors[v]) + "\n";
  for (auto [u, v] : g.edges)
    out += "e " + std::to_string(u + 1) + " " + std::to_string(v + 1) + "\n";
  return out;
}

}  // namespace grpiso

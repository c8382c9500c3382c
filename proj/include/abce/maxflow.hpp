#pragma once

#include <vector>

namespace abce::flow {

/// Dinic max-flow on double capacities; residual amounts below 1e-12 are
/// treated as exhausted.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);

  /// Adds a directed edge and returns its id for later flow queries.
  int add_edge(int from, int to, double capacity);

  double run(int source, int sink);

  /// Flow pushed over the edge with the given id.
  double edge_flow(int id) const;

  /// Resets flows and updates one edge capacity (used by bisection loops).
  void set_capacity(int id, double capacity);
  void reset_flows();

 private:
  struct Edge {
    int to;
    int rev;
    double cap;
    double initial_cap;
  };
  bool bfs(int source, int sink);
  double dfs(int v, int sink, double limit);

  std::vector<std::vector<Edge>> graph_;
  std::vector<std::pair<int, int>> edge_ref_;  // id -> (node, offset)
  std::vector<int> level_;
  std::vector<int> iter_;
};

}  // namespace abce::flow

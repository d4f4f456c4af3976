#ifndef BALLOAD_MAXFLOW_HPP
#define BALLOAD_MAXFLOW_HPP

#include <cstdint>
#include <vector>

namespace balload {

// Highest-label push-relabel with the gap heuristic and periodic global
// relabelling. Integer capacities; run() computes a maximum flow (not just a
// preflow), so flow() is a valid flow decomposition input afterwards.
class MaxFlow {
 public:
  explicit MaxFlow(int num_nodes);

  int num_nodes() const noexcept { return n_; }
  // Returns an arc id usable with flow().
  int add_arc(int from, int to, std::int64_t capacity);

  std::int64_t run(int source, int sink);

  std::int64_t flow(int arc) const;
  // Nodes from which `sink` is reachable in the residual network. After run(),
  // the complement is the largest source side among all minimum cuts.
  std::vector<char> reaches_sink(int sink) const;
  // Nodes reachable from `source` in the residual network (smallest source side).
  std::vector<char> reachable_from(int source) const;

 private:
  struct Arc {
    int to;
    int rev;
    std::int64_t cap;
  };

  void global_relabel(int source, int sink);
  void push(int v, Arc& a);
  void relabel(int v);
  void gap(int height);
  void activate(int v);

  int n_;
  std::vector<std::vector<Arc>> adj_;
  std::vector<std::pair<int, int>> arc_pos_;
  std::vector<std::int64_t> arc_cap_;

  std::vector<int> height_;
  std::vector<std::int64_t> excess_;
  std::vector<std::size_t> current_;
  std::vector<std::vector<int>> active_;
  std::vector<int> count_;
  int highest_ = 0;
  int source_ = 0;
  int sink_ = 0;
  long long work_since_relabel_ = 0;
};

}  // namespace balload

#endif  // BALLOAD_MAXFLOW_HPP

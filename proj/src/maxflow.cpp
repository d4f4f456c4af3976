#include "balload/maxflow.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace balload {

MaxFlow::MaxFlow(int num_nodes) : n_(num_nodes), adj_(static_cast<std::size_t>(num_nodes)) {
  if (num_nodes < 2) throw std::invalid_argument("MaxFlow needs at least two nodes");
}

int MaxFlow::add_arc(int from, int to, std::int64_t capacity) {
  if (capacity < 0) throw std::invalid_argument("negative capacity");
  if (from == to) throw std::invalid_argument("self-arc in flow network");
  const int id = static_cast<int>(arc_pos_.size());
  auto& out = adj_[from];
  auto& in = adj_[to];
  arc_pos_.emplace_back(from, static_cast<int>(out.size()));
  arc_cap_.push_back(capacity);
  out.push_back({to, static_cast<int>(in.size()), capacity});
  in.push_back({from, static_cast<int>(out.size()) - 1, 0});
  return id;
}

std::int64_t MaxFlow::flow(int arc) const {
  const auto [node, idx] = arc_pos_[static_cast<std::size_t>(arc)];
  return arc_cap_[static_cast<std::size_t>(arc)] - adj_[node][idx].cap;
}

void MaxFlow::activate(int v) {
  active_[height_[v]].push_back(v);
  highest_ = std::max(highest_, height_[v]);
}

void MaxFlow::push(int v, Arc& a) {
  const std::int64_t amount = std::min(excess_[v], a.cap);
  a.cap -= amount;
  adj_[a.to][a.rev].cap += amount;
  excess_[v] -= amount;
  if (excess_[a.to] == 0 && a.to != source_ && a.to != sink_) {
    excess_[a.to] += amount;
    activate(a.to);
  } else {
    excess_[a.to] += amount;
  }
}

void MaxFlow::gap(int height) {
  // Nodes strictly between the empty level and n can no longer reach the sink.
  for (int u = 0; u < n_; ++u) {
    if (u == source_ || height_[u] <= height || height_[u] >= n_) continue;
    --count_[height_[u]];
    height_[u] = n_ + 1;
    ++count_[height_[u]];
    current_[u] = 0;
    if (excess_[u] > 0 && u != sink_) activate(u);
  }
}

void MaxFlow::relabel(int v) {
  const int old = height_[v];
  int lowest = 2 * n_ - 1;
  for (const Arc& a : adj_[v]) {
    if (a.cap > 0) lowest = std::min(lowest, height_[a.to] + 1);
  }
  --count_[old];
  height_[v] = lowest;
  ++count_[lowest];
  current_[v] = 0;
  work_since_relabel_ += static_cast<long long>(adj_[v].size()) + 12;
  if (old < n_ && count_[old] == 0) gap(old);
}

void MaxFlow::global_relabel(int source, int sink) {
  const int unset = 2 * n_;
  std::fill(height_.begin(), height_.end(), unset);
  std::queue<int> queue;
  auto bfs = [&](int root, int base) {
    height_[root] = base;
    queue.push(root);
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop();
      for (const Arc& a : adj_[u]) {
        if (height_[a.to] != unset || a.to == source || a.to == sink) continue;
        if (adj_[a.to][a.rev].cap > 0) {
          height_[a.to] = height_[u] + 1;
          queue.push(a.to);
        }
      }
    }
  };
  bfs(sink, 0);
  bfs(source, n_);
  for (auto& h : height_) {
    if (h == unset) h = 2 * n_ - 1;
  }
  std::fill(count_.begin(), count_.end(), 0);
  for (auto& bucket : active_) bucket.clear();
  highest_ = -1;
  for (int v = 0; v < n_; ++v) {
    ++count_[height_[v]];
    current_[v] = 0;
    if (v != source && v != sink && excess_[v] > 0) activate(v);
  }
  work_since_relabel_ = 0;
}

std::int64_t MaxFlow::run(int source, int sink) {
  if (source == sink) throw std::invalid_argument("source equals sink");
  source_ = source;
  sink_ = sink;
  height_.assign(static_cast<std::size_t>(n_), 0);
  excess_.assign(static_cast<std::size_t>(n_), 0);
  current_.assign(static_cast<std::size_t>(n_), 0);
  active_.assign(static_cast<std::size_t>(2 * n_ + 1), {});
  count_.assign(static_cast<std::size_t>(2 * n_ + 1), 0);

  for (Arc& a : adj_[source]) {
    if (a.cap == 0) continue;
    const std::int64_t amount = a.cap;
    a.cap = 0;
    adj_[a.to][a.rev].cap += amount;
    excess_[a.to] += amount;
    excess_[source] -= amount;
  }
  global_relabel(source, sink);

  std::size_t total_arcs = 0;
  for (const auto& out : adj_) total_arcs += out.size();
  const long long relabel_period = 4LL * (n_ + static_cast<long long>(total_arcs));

  while (highest_ >= 0) {
    if (active_[highest_].empty()) {
      --highest_;
      continue;
    }
    const int v = active_[highest_].back();
    active_[highest_].pop_back();
    if (height_[v] != highest_ || excess_[v] == 0) continue;

    while (excess_[v] > 0) {
      if (current_[v] == adj_[v].size()) {
        relabel(v);
        if (height_[v] >= 2 * n_ - 1) break;
        continue;
      }
      Arc& a = adj_[v][current_[v]];
      if (a.cap > 0 && height_[v] == height_[a.to] + 1) {
        push(v, a);
      } else {
        ++current_[v];
      }
    }
    if (excess_[v] > 0) activate(v);
    if (work_since_relabel_ > relabel_period) global_relabel(source, sink);
  }
  return excess_[sink];
}

std::vector<char> MaxFlow::reaches_sink(int sink) const {
  std::vector<char> mark(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{sink};
  mark[sink] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Arc& a : adj_[u]) {
      if (!mark[a.to] && adj_[a.to][a.rev].cap > 0) {
        mark[a.to] = 1;
        stack.push_back(a.to);
      }
    }
  }
  return mark;
}

std::vector<char> MaxFlow::reachable_from(int source) const {
  std::vector<char> mark(static_cast<std::size_t>(n_), 0);
  std::vector<int> stack{source};
  mark[source] = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Arc& a : adj_[u]) {
      if (!mark[a.to] && a.cap > 0) {
        mark[a.to] = 1;
        stack.push_back(a.to);
      }
    }
  }
  return mark;
}

}  // namespace balload

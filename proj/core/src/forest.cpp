#include "congest/forest.hpp"

#include <algorithm>
#include <functional>

#include "congest/errors.hpp"

namespace congest {

ClusterForest ClusterForest::from_parents(const std::vector<std::int64_t>& parent,
                                          const std::vector<std::uint8_t>* member) {
  const std::size_t n = parent.size();
  ClusterForest f;
  f.parent = parent;
  f.center.assign(n, -1);
  f.depth.assign(n, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (member && !(*member)[v]) {
      f.parent[v] = -1;
      continue;
    }
    // Walk up to a node whose center is known or to the root.
    std::vector<NodeId> chain;
    NodeId x = v;
    while (f.center[x] < 0) {
      chain.push_back(x);
      if (chain.size() > n) throw PreconditionError("cycle in parent pointers");
      if (parent[x] < 0) break;
      x = static_cast<NodeId>(parent[x]);
    }
    std::int64_t c;
    std::uint32_t d;
    if (f.center[x] >= 0) {
      c = f.center[x];
      d = f.depth[x];
    } else {
      c = x;
      d = 0;
      f.center[x] = x;
      f.depth[x] = 0;
      chain.pop_back();
    }
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      f.center[*it] = c;
      f.depth[*it] = ++d;
    }
  }
  return f;
}

std::uint32_t ClusterForest::max_depth() const {
  std::uint32_t d = 0;
  for (NodeId v = 0; v < n(); ++v)
    if (contains(v)) d = std::max(d, depth[v]);
  return d;
}

std::map<NodeId, std::vector<NodeId>> ClusterForest::clusters() const {
  std::map<NodeId, std::vector<NodeId>> out;
  for (NodeId v = 0; v < n(); ++v)
    if (contains(v)) out[static_cast<NodeId>(center[v])].push_back(v);
  return out;
}

void ClusterForest::validate(const Graph& g) const {
  if (parent.size() != g.n() || center.size() != g.n() || depth.size() != g.n())
    throw PreconditionError("forest size mismatch");
  for (NodeId v = 0; v < g.n(); ++v) {
    if (!contains(v)) continue;
    if (parent[v] < 0) {
      if (center[v] != v || depth[v] != 0) throw PreconditionError("root must be its own center at depth 0");
      continue;
    }
    NodeId p = static_cast<NodeId>(parent[v]);
    if (!g.adjacent(v, p)) throw PreconditionError("parent link is not a graph edge");
    if (center[p] != center[v] || depth[p] + 1 != depth[v]) throw PreconditionError("inconsistent forest");
  }
}

std::vector<std::vector<NodeId>> ClusterForest::children() const {
  std::vector<std::vector<NodeId>> ch(n());
  for (NodeId v = 0; v < n(); ++v)
    if (contains(v) && parent[v] >= 0) ch[static_cast<NodeId>(parent[v])].push_back(v);
  return ch;
}

std::vector<DirEdge> ClusterForest::up_path(const Graph& g, NodeId v) const {
  std::vector<DirEdge> hops;
  while (parent[v] >= 0) {
    NodeId p = static_cast<NodeId>(parent[v]);
    hops.push_back(g.dir_edge(v, p));
    v = p;
  }
  return hops;
}

Router::Router(const Graph& g) : g_(g), queues_(2 * g.m()), active_flag_(2 * g.m(), 0) {}

void Router::add(std::span<const DirEdge> hops, std::uint32_t copies, std::uint32_t priority) {
  if (hops.empty() || copies == 0) return;
  const auto b = static_cast<std::uint32_t>(hopbuf_.size());
  hopbuf_.insert(hopbuf_.end(), hops.begin(), hops.end());
  const auto e = static_cast<std::uint32_t>(hopbuf_.size());
  for (std::uint32_t c = 0; c < copies; ++c) packets_.push_back({b, e, b, priority});
  hop_total_ += static_cast<std::uint64_t>(copies) * hops.size();
}

void Router::add_up(const ClusterForest& f, NodeId v, std::uint32_t copies, std::uint32_t priority) {
  auto p = f.up_path(g_, v);
  add(p, copies, priority);
}

void Router::add_down(const ClusterForest& f, NodeId v, std::uint32_t copies, std::uint32_t priority) {
  std::vector<DirEdge> hops;
  NodeId x = v;
  while (f.parent[x] >= 0) {
    NodeId p = static_cast<NodeId>(f.parent[x]);
    hops.push_back(g_.dir_edge(p, x));
    x = p;
  }
  std::reverse(hops.begin(), hops.end());
  add(hops, copies, priority);
}

void Router::add_edge(NodeId from, NodeId to, std::uint32_t copies, std::uint32_t priority) {
  DirEdge d = g_.dir_edge(from, to);
  add(std::span<const DirEdge>(&d, 1), copies, priority);
}

std::uint64_t Router::run(SimMetrics& m) {
  std::vector<DirEdge> active;
  auto enqueue = [&](std::uint32_t id, std::uint64_t arrival) {
    const Packet& p = packets_[id];
    DirEdge d = hopbuf_[p.cur];
    auto& q = queues_[d];
    q.push_back({p.prio, arrival, id});
    std::push_heap(q.begin(), q.end(), std::greater<Key>());
    if (!active_flag_[d]) {
      active_flag_[d] = 1;
      active.push_back(d);
    }
  };
  for (std::uint32_t id = 0; id < packets_.size(); ++id) enqueue(id, 0);
  std::uint64_t t = 0;
  std::vector<std::uint32_t> moved;
  std::vector<DirEdge> next_active;
  while (!active.empty()) {
    ++t;
    moved.clear();
    next_active.clear();
    for (DirEdge d : active) {
      auto& q = queues_[d];
      std::pop_heap(q.begin(), q.end(), std::greater<Key>());
      std::uint32_t id = q.back().id;
      q.pop_back();
      m.charge(d, t);
      Packet& p = packets_[id];
      ++p.cur;
      if (p.cur < p.end) moved.push_back(id);
      if (q.empty())
        active_flag_[d] = 0;
      else
        next_active.push_back(d);
    }
    active.swap(next_active);
    for (std::uint32_t id : moved) enqueue(id, t);
  }
  m.rounds += t;
  m.dilation = m.rounds;
  hopbuf_.clear();
  packets_.clear();
  hop_total_ = 0;
  return t;
}

UpcastResult upcast(const Graph& g, const ClusterForest& f, const std::vector<std::vector<Message>>& inputs,
                    const SimMetrics* parent) {
  UpcastResult res;
  res.metrics = parent ? parent->child() : SimMetrics(g.m());
  Router r(g);
  for (NodeId v = 0; v < g.n(); ++v) {
    if (v >= inputs.size() || inputs[v].empty() || !f.contains(v)) continue;
    auto& bucket = res.collected[static_cast<NodeId>(f.center[v])];
    for (const auto& w : inputs[v]) bucket.push_back({v, w});
    r.add_up(f, v, static_cast<std::uint32_t>(inputs[v].size()));
  }
  r.run(res.metrics);
  return res;
}

DowncastResult downcast(const Graph& g, const ClusterForest& f,
                        const std::map<NodeId, std::vector<std::pair<NodeId, Message>>>& root_messages,
                        const SimMetrics* parent) {
  DowncastResult res;
  res.metrics = parent ? parent->child() : SimMetrics(g.m());
  res.delivered.resize(g.n());
  Router r(g);
  for (const auto& [c, msgs] : root_messages) {
    for (const auto& [dest, m] : msgs) {
      if (dest >= g.n() || f.center[dest] != static_cast<std::int64_t>(c))
        throw PreconditionError("destination " + std::to_string(dest) + " outside the cluster of center " +
                                std::to_string(c));
      r.add_down(f, dest);
      res.delivered[dest].push_back(m);
    }
  }
  r.run(res.metrics);
  return res;
}

}  // namespace congest

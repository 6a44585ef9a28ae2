#include "congest/oracles.hpp"

#include <cstdio>
#include <deque>
#include <queue>
#include <sstream>

#include "congest/errors.hpp"

namespace congest {

void DistanceMatrix::relax(NodeId u, NodeId v, std::int64_t d) {
  auto& x = d_[static_cast<std::size_t>(u) * n_ + v];
  if (d < x) x = d;
}

std::size_t DistanceMatrix::infinite_count() const {
  std::size_t k = 0;
  for (auto x : d_) k += x == kInfinity;
  return k;
}

std::vector<std::string> DistanceMatrix::validate(bool symmetric) const {
  std::vector<std::string> out;
  for (NodeId u = 0; u < n_; ++u)
    if (at(u, u) != 0) {
      out.push_back("nonzero diagonal at " + std::to_string(u));
      break;
    }
  if (symmetric) {
    bool bad = false;
    for (NodeId u = 0; u < n_ && !bad; ++u)
      for (NodeId v = u + 1; v < n_; ++v)
        if (at(u, v) != at(v, u)) {
          out.push_back("asymmetric at " + std::to_string(u) + "," + std::to_string(v));
          bad = true;
          break;
        }
  }
  for (NodeId u = 0; u < n_; ++u)
    for (NodeId w = 0; w < n_; ++w) {
      const std::int64_t a = at(u, w);
      if (a == kInfinity) continue;
      for (NodeId v = 0; v < n_; ++v) {
        const std::int64_t b = at(w, v);
        if (b == kInfinity) continue;
        if (at(u, v) > a + b) {
          out.push_back("triangle inequality fails for " + std::to_string(u) + "," + std::to_string(w) + "," +
                        std::to_string(v));
          return out;
        }
      }
    }
  return out;
}

std::string DistanceMatrix::to_binary() const {
  std::string s;
  s.reserve(d_.size() * 8);
  for (std::int64_t x : d_) {
    auto u = static_cast<std::uint64_t>(x);
    for (int i = 0; i < 8; ++i) s.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
  }
  return s;
}

DistanceMatrix DistanceMatrix::from_binary(const std::string& bytes, std::size_t n) {
  if (bytes.size() != n * n * 8) throw ParseError(0, "distance matrix size mismatch");
  DistanceMatrix m(n);
  for (std::size_t k = 0; k < n * n; ++k) {
    std::uint64_t u = 0;
    for (int i = 0; i < 8; ++i) u |= static_cast<std::uint64_t>(static_cast<unsigned char>(bytes[k * 8 + i])) << (8 * i);
    m.d_[k] = static_cast<std::int64_t>(u);
  }
  return m;
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string DistanceMatrix::summary_json() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_binary())));
  std::ostringstream o;
  o << "{\"n\":" << n_ << ",\"checksum\":\"" << buf << "\",\"infinite\":" << infinite_count() << "}";
  return o.str();
}

DistanceMatrix DistanceMatrix::from_rows(const std::vector<std::vector<std::int64_t>>& rows) {
  DistanceMatrix m(rows.size());
  for (NodeId u = 0; u < rows.size(); ++u) {
    if (rows[u].size() < rows.size()) throw InvalidArgument("short distance row");
    for (NodeId v = 0; v < rows.size(); ++v)
      if (rows[u][v] >= 0) m.set(u, v, rows[u][v]);
  }
  return m;
}

DistanceMatrix bfs_apsp(const Graph& g) {
  DistanceMatrix m(g.n());
  for (NodeId s = 0; s < g.n(); ++s) {
    auto d = bfs_distances(g, s);
    for (NodeId v = 0; v < g.n(); ++v)
      if (d[v] >= 0) m.set(s, v, d[v]);
  }
  return m;
}

DistanceMatrix dijkstra_apsp(const Graph& g) {
  const std::size_t n = g.n();
  DistanceMatrix m(n);
  using Item = std::pair<std::int64_t, NodeId>;
  for (NodeId s = 0; s < n; ++s) {
    std::vector<std::int64_t> d(n, DistanceMatrix::kInfinity);
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    d[s] = 0;
    pq.push({0, s});
    while (!pq.empty()) {
      auto [du, u] = pq.top();
      pq.pop();
      if (du != d[u]) continue;
      auto nb = g.neighbors(u);
      auto w = g.neighbor_weights(u);
      for (std::size_t i = 0; i < nb.size(); ++i) {
        if (w[i] < 0) throw PreconditionError("negative edge weight");
        if (du + w[i] < d[nb[i]]) {
          d[nb[i]] = du + w[i];
          pq.push({d[nb[i]], nb[i]});
        }
      }
    }
    for (NodeId v = 0; v < n; ++v) m.set(s, v, d[v]);
  }
  return m;
}

std::vector<NodeId> hopcroft_karp(const Graph& g) {
  auto sides = bipartition(g);
  if (!sides) throw PreconditionError("graph is not bipartite");
  const auto& side = *sides;
  const std::size_t n = g.n();
  const std::int64_t inf = std::numeric_limits<std::int64_t>::max();
  std::vector<NodeId> mate(n, kNoNode);
  std::vector<std::int64_t> layer(n);
  std::vector<std::size_t> it(n);

  auto bfs = [&] {
    std::deque<NodeId> q;
    bool found = false;
    for (NodeId v = 0; v < n; ++v) {
      layer[v] = inf;
      if (side[v] == 0 && mate[v] == kNoNode) {
        layer[v] = 0;
        q.push_back(v);
      }
    }
    while (!q.empty()) {
      NodeId u = q.front();
      q.pop_front();
      for (NodeId r : g.neighbors(u)) {
        NodeId l = mate[r];
        if (l == kNoNode) {
          found = true;
        } else if (layer[l] == inf) {
          layer[l] = layer[u] + 1;
          q.push_back(l);
        }
      }
    }
    return found;
  };
  // Iterative DFS along layered alternating paths.
  auto dfs = [&](NodeId root) {
    std::vector<NodeId> stack{root};
    std::vector<NodeId> via;
    while (!stack.empty()) {
      NodeId u = stack.back();
      auto nb = g.neighbors(u);
      bool advanced = false;
      while (it[u] < nb.size()) {
        NodeId r = nb[it[u]++];
        NodeId l = mate[r];
        if (l == kNoNode) {
          via.push_back(r);
          for (std::size_t k = 0; k < stack.size(); ++k) {
            mate[stack[k]] = via[k];
            mate[via[k]] = stack[k];
          }
          return true;
        }
        if (layer[l] == layer[u] + 1) {
          via.push_back(r);
          stack.push_back(l);
          advanced = true;
          break;
        }
      }
      if (!advanced) {
        layer[u] = inf;
        stack.pop_back();
        if (!via.empty()) via.pop_back();
      }
    }
    return false;
  };
  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (NodeId v = 0; v < n; ++v)
      if (side[v] == 0 && mate[v] == kNoNode) dfs(v);
  }
  return mate;
}

std::size_t matching_size(const std::vector<NodeId>& mate) {
  std::size_t k = 0;
  for (NodeId v = 0; v < mate.size(); ++v) k += mate[v] != kNoNode && v < mate[v];
  return k;
}

bool is_matching(const Graph& g, const std::vector<NodeId>& mate) {
  if (mate.size() != g.n()) return false;
  for (NodeId v = 0; v < mate.size(); ++v) {
    if (mate[v] == kNoNode) continue;
    if (mate[v] >= g.n() || mate[mate[v]] != v || !g.adjacent(v, mate[v])) return false;
  }
  return true;
}

std::string matching_edge_list(const std::vector<NodeId>& mate) {
  std::ostringstream o;
  for (NodeId v = 0; v < mate.size(); ++v)
    if (mate[v] != kNoNode && v < mate[v]) o << v << ' ' << mate[v] << '\n';
  return o.str();
}

}  // namespace congest

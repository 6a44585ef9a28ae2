#include "congest/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <sstream>

#include "congest/errors.hpp"
#include "congest/random.hpp"

namespace congest {

namespace {

std::size_t count_components(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<NodeId> parent(n);
  std::iota(parent.begin(), parent.end(), NodeId{0});
  auto find = [&](NodeId x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  std::size_t comps = n;
  for (const auto& e : edges) {
    NodeId a = find(e.u), b = find(e.v);
    if (a != b) {
      parent[a] = b;
      --comps;
    }
  }
  return comps;
}

}  // namespace

Graph::Graph(std::size_t n, std::vector<Edge> edges, bool directed, bool weighted)
    : n_(n), directed_(directed), weighted_(weighted), edges_(std::move(edges)) {
  if (n_ > std::numeric_limits<NodeId>::max() - 1) throw InvalidArgument("too many nodes");
  for (auto& e : edges_) {
    if (e.u >= n_ || e.v >= n_) throw InvalidArgument("edge endpoint out of range");
    if (e.u == e.v) throw InvalidArgument("self-loop at node " + std::to_string(e.u));
    if (!weighted_) e.w = 1;
    if (e.w < 0) throw InvalidArgument("negative weight");
    if (!directed_ && e.u > e.v) std::swap(e.u, e.v);
  }
  std::sort(edges_.begin(), edges_.end(),
            [](const Edge& a, const Edge& b) { return a.u != b.u ? a.u < b.u : a.v < b.v; });
  for (std::size_t i = 1; i < edges_.size(); ++i) {
    if (edges_[i].u == edges_[i - 1].u && edges_[i].v == edges_[i - 1].v)
      throw InvalidArgument("duplicate edge " + std::to_string(edges_[i].u) + " " +
                            std::to_string(edges_[i].v));
  }
  std::vector<std::size_t> deg(n_ + 1, 0);
  for (const auto& e : edges_) {
    ++deg[e.u];
    if (!directed_) ++deg[e.v];
  }
  offs_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offs_[v + 1] = offs_[v] + deg[v];
  adj_.resize(offs_[n_]);
  adj_edge_.resize(offs_[n_]);
  adj_w_.resize(offs_[n_]);
  std::vector<std::size_t> fill(offs_.begin(), offs_.end() - 1);
  for (EdgeId id = 0; id < edges_.size(); ++id) {
    const auto& e = edges_[id];
    auto put = [&](NodeId a, NodeId b) {
      adj_[fill[a]] = b;
      adj_edge_[fill[a]] = id;
      adj_w_[fill[a]] = e.w;
      ++fill[a];
    };
    put(e.u, e.v);
    if (!directed_) put(e.v, e.u);
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::vector<std::size_t> idx(deg[v]);
    std::iota(idx.begin(), idx.end(), offs_[v]);
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return adj_[a] < adj_[b]; });
    std::vector<NodeId> a2;
    std::vector<EdgeId> e2;
    std::vector<std::int64_t> w2;
    for (auto i : idx) {
      a2.push_back(adj_[i]);
      e2.push_back(adj_edge_[i]);
      w2.push_back(adj_w_[i]);
    }
    std::copy(a2.begin(), a2.end(), adj_.begin() + offs_[v]);
    std::copy(e2.begin(), e2.end(), adj_edge_.begin() + offs_[v]);
    std::copy(w2.begin(), w2.end(), adj_w_.begin() + offs_[v]);
  }
  components_ = count_components(n_, edges_);
}

std::optional<EdgeId> Graph::find_edge(NodeId u, NodeId v) const {
  if (u >= n_ || v >= n_) return std::nullopt;
  auto nb = neighbors(u);
  auto it = std::lower_bound(nb.begin(), nb.end(), v);
  if (it == nb.end() || *it != v) return std::nullopt;
  return incident(u)[it - nb.begin()];
}

DirEdge Graph::dir_edge(NodeId u, NodeId v) const {
  auto e = find_edge(u, v);
  if (!e) throw PreconditionError("nodes " + std::to_string(u) + " and " + std::to_string(v) + " are not adjacent");
  return 2 * *e + (u > v ? 1 : 0);
}

GraphKind parse_graph_kind(std::string_view s) {
  if (s == "path") return GraphKind::Path;
  if (s == "cycle") return GraphKind::Cycle;
  if (s == "grid") return GraphKind::Grid;
  if (s == "clique") return GraphKind::Clique;
  if (s == "star") return GraphKind::Star;
  if (s == "gnp") return GraphKind::Gnp;
  if (s == "bipartite_gnp") return GraphKind::BipartiteGnp;
  throw InvalidArgument("unknown graph kind '" + std::string(s) + "'");
}

std::string to_string(GraphKind k) {
  switch (k) {
    case GraphKind::Path: return "path";
    case GraphKind::Cycle: return "cycle";
    case GraphKind::Grid: return "grid";
    case GraphKind::Clique: return "clique";
    case GraphKind::Star: return "star";
    case GraphKind::Gnp: return "gnp";
    case GraphKind::BipartiteGnp: return "bipartite_gnp";
  }
  return "unknown";
}

Graph generate(const GenSpec& spec, std::uint64_t seed) {
  const std::size_t n = spec.n;
  if (n == 0) throw InvalidArgument("n must be at least 1");
  if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw InvalidArgument("p must lie in [0,1]");
  RandomStream rs = RandomStream(seed).child("generate", static_cast<std::uint64_t>(spec.kind));
  std::vector<Edge> edges;
  auto add = [&](std::size_t a, std::size_t b) { edges.push_back({NodeId(a), NodeId(b), 1}); };
  switch (spec.kind) {
    case GraphKind::Path:
      for (std::size_t i = 1; i < n; ++i) add(i - 1, i);
      break;
    case GraphKind::Cycle:
      for (std::size_t i = 1; i < n; ++i) add(i - 1, i);
      if (n >= 3) add(n - 1, 0);
      break;
    case GraphKind::Grid: {
      std::size_t w = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n)) - 1e-9));
      if (w == 0) w = 1;
      for (std::size_t i = 0; i < n; ++i) {
        if ((i % w) + 1 < w && i + 1 < n) add(i, i + 1);
        if (i + w < n) add(i, i + w);
      }
      break;
    }
    case GraphKind::Clique:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) add(i, j);
      break;
    case GraphKind::Star:
      for (std::size_t i = 1; i < n; ++i) add(0, i);
      break;
    case GraphKind::Gnp:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
          if (rs.bernoulli(spec.p)) add(i, j);
      break;
    case GraphKind::BipartiteGnp: {
      std::size_t left = spec.left ? spec.left : n / 2;
      if (left > n) throw InvalidArgument("left part larger than n");
      for (std::size_t i = 0; i < left; ++i)
        for (std::size_t j = left; j < n; ++j)
          if (rs.bernoulli(spec.p)) add(i, j);
      break;
    }
  }
  if (spec.weighted) {
    std::int64_t wmax = spec.max_weight ? spec.max_weight : static_cast<std::int64_t>(n * n);
    if (wmax < 1) wmax = 1;
    RandomStream ws = RandomStream(seed).child("weights", 0);
    for (auto& e : edges) e.w = static_cast<std::int64_t>(ws.uniform_int(1, static_cast<std::uint64_t>(wmax)));
  }
  return Graph(n, std::move(edges), false, spec.weighted);
}

Graph generate(GraphKind kind, std::size_t n, std::uint64_t seed, double p) {
  GenSpec s;
  s.kind = kind;
  s.n = n;
  s.p = p;
  return generate(s, seed);
}

Graph generate_connected(const GenSpec& spec, std::uint64_t seed, unsigned max_attempts) {
  for (unsigned a = 0; a < max_attempts; ++a) {
    std::uint64_t s = a == 0 ? seed : RandomStream(seed).child("connected-retry", a).key();
    Graph g = generate(spec, s);
    if (g.connected()) return g;
  }
  throw InvalidArgument("no connected instance after " + std::to_string(max_attempts) + " attempts");
}

Graph load_edge_list(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_line()) throw ParseError(lineno + 1, "missing header");
  long long n = -1, m = -1;
  int directed = -1, weighted = -1;
  {
    std::istringstream h(line);
    std::string extra;
    if (!(h >> n >> m >> directed >> weighted) || (h >> extra) || n < 0 || m < 0 ||
        (directed != 0 && directed != 1) || (weighted != 0 && weighted != 1))
      throw ParseError(lineno, "malformed header, expected 'n m directed weighted'");
  }
  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::vector<std::pair<NodeId, NodeId>> seen;
  std::vector<std::size_t> lines;
  for (long long i = 0; i < m; ++i) {
    if (!next_line()) throw ParseError(lineno + 1, "expected " + std::to_string(m) + " edges, got " + std::to_string(i));
    std::istringstream l(line);
    long long u, v, w = 1;
    std::string extra;
    if (!(l >> u >> v)) throw ParseError(lineno, "malformed edge line");
    if (weighted && !(l >> w)) throw ParseError(lineno, "missing weight");
    if (l >> extra) throw ParseError(lineno, "trailing tokens");
    if (u < 0 || v < 0 || u >= n || v >= n) throw ParseError(lineno, "node id out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (w < 0) throw ParseError(lineno, "negative weight");
    NodeId a = NodeId(u), b = NodeId(v);
    if (!directed && a > b) std::swap(a, b);
    seen.push_back({a, b});
    lines.push_back(lineno);
    edges.push_back({NodeId(u), NodeId(v), w});
  }
  if (next_line()) throw ParseError(lineno, "more edge lines than declared");
  std::vector<std::size_t> order(seen.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return seen[x] < seen[y]; });
  for (std::size_t i = 1; i < order.size(); ++i)
    if (seen[order[i]] == seen[order[i - 1]])
      throw ParseError(lines[std::max(order[i], order[i - 1])], "duplicate edge");
  return Graph(static_cast<std::size_t>(n), std::move(edges), directed == 1, weighted == 1);
}

std::string save_edge_list(const Graph& g) {
  std::ostringstream out;
  out << g.n() << ' ' << g.m() << ' ' << (g.directed() ? 1 : 0) << ' ' << (g.weighted() ? 1 : 0) << '\n';
  for (const auto& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (g.weighted()) out << ' ' << e.w;
    out << '\n';
  }
  return out.str();
}

std::optional<std::vector<std::uint8_t>> bipartition(const Graph& g) {
  std::vector<std::uint8_t> side(g.n(), 2);
  for (NodeId s = 0; s < g.n(); ++s) {
    if (side[s] != 2) continue;
    side[s] = 0;
    std::deque<NodeId> q{s};
    while (!q.empty()) {
      NodeId x = q.front();
      q.pop_front();
      for (NodeId y : g.neighbors(x)) {
        if (side[y] == 2) {
          side[y] = side[x] ^ 1;
          q.push_back(y);
        } else if (side[y] == side[x]) {
          return std::nullopt;
        }
      }
    }
  }
  return side;
}

std::vector<std::int64_t> bfs_distances(const Graph& g, NodeId src) {
  std::vector<std::int64_t> d(g.n(), -1);
  std::vector<NodeId> q;
  q.reserve(g.n());
  d[src] = 0;
  q.push_back(src);
  for (std::size_t h = 0; h < q.size(); ++h) {
    NodeId x = q[h];
    for (NodeId y : g.neighbors(x))
      if (d[y] < 0) {
        d[y] = d[x] + 1;
        q.push_back(y);
      }
  }
  return d;
}

void require_connected(const Graph& g) {
  if (!g.connected()) throw DisconnectedGraph(g.component_count());
}

void require_undirected(const Graph& g) {
  if (g.directed()) throw InvalidArgument("undirected graph required");
}

std::uint32_t ceil_log2(std::uint64_t n) {
  if (n < 2) n = 2;
  std::uint32_t k = 0;
  while ((std::uint64_t{1} << k) < n) ++k;
  return k;
}

double log2n(std::size_t n) { return std::log2(static_cast<double>(std::max<std::size_t>(n, 2))); }

std::uint64_t ceil_pow(std::size_t n, double e) {
  double x = std::pow(static_cast<double>(n), e);
  double r = std::round(x);
  if (std::fabs(x - r) < 1e-9 * std::max(1.0, r)) return static_cast<std::uint64_t>(r);
  return static_cast<std::uint64_t>(std::ceil(x));
}

}  // namespace congest

// Finite graphs serving as cone bases, points on them, PL functions over
// them, and PL isomorphisms between them.
#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "conetop/errors.hpp"
#include "conetop/pl_homeo.hpp"
#include "conetop/rational.hpp"

namespace conetop {

struct BaseGraph {
  int n = 0;                               // vertices are 0..n-1
  std::vector<std::pair<int, int>> edges;  // each (a, b) with a < b, sorted, unique
};

inline BaseGraph make_base_graph(int n, std::vector<std::pair<int, int>> edges) {
  if (n <= 0) fail(errc::wrong_graph, "graph needs at least one vertex");
  for (auto& e : edges) {
    if (e.first > e.second) std::swap(e.first, e.second);
    if (e.first == e.second || e.first < 0 || e.second >= n)
      fail(errc::wrong_graph, "bad edge endpoints");
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    fail(errc::wrong_graph, "duplicate edge");
  return BaseGraph{n, std::move(edges)};
}

inline bool operator==(const BaseGraph& a, const BaseGraph& b) {
  return a.n == b.n && a.edges == b.edges;
}
inline bool operator!=(const BaseGraph& a, const BaseGraph& b) { return !(a == b); }

inline int graph_degree(const BaseGraph& g, int v) {
  int d = 0;
  for (const auto& e : g.edges) d += (e.first == v) + (e.second == v);
  return d;
}

inline std::optional<int> graph_edge_index(const BaseGraph& g, int a, int b) {
  if (a > b) std::swap(a, b);
  for (std::size_t i = 0; i < g.edges.size(); ++i)
    if (g.edges[i] == std::make_pair(a, b)) return int(i);
  return std::nullopt;
}

inline std::vector<int> graph_component_of(const BaseGraph& g, int start) {
  std::vector<char> seen(g.n, 0);
  std::vector<int> stack{start}, out;
  seen[start] = 1;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    out.push_back(v);
    for (const auto& e : g.edges) {
      int w = -1;
      if (e.first == v) w = e.second;
      else if (e.second == v) w = e.first;
      if (w >= 0 && !seen[w]) { seen[w] = 1; stack.push_back(w); }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline bool graph_connected(const BaseGraph& g) {
  return int(graph_component_of(g, 0).size()) == g.n;
}

inline bool graph_is_cycle(const BaseGraph& g) {
  if (g.n < 3 || int(g.edges.size()) != g.n) return false;
  for (int v = 0; v < g.n; ++v)
    if (graph_degree(g, v) != 2) return false;
  return graph_connected(g);
}

// Vertices of a cycle graph in cyclic order, starting at 0 and stepping to
// its smaller-numbered neighbour first, so the order is deterministic.
inline std::vector<int> graph_cycle_order(const BaseGraph& g) {
  if (!graph_is_cycle(g)) fail(errc::wrong_graph, "not a cycle graph");
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& a : adj) std::sort(a.begin(), a.end());
  std::vector<int> order{0, adj[0][0]};
  while (int(order.size()) < g.n) {
    int v = order.back(), prev = order[order.size() - 2];
    order.push_back(adj[v][0] == prev ? adj[v][1] : adj[v][0]);
  }
  return order;
}

enum class BaseCard { one, two, many };

// A base with any edge carries an arc and therefore infinitely many points.
inline BaseCard base_cardinality(const BaseGraph& g) {
  if (!g.edges.empty() || g.n >= 3) return BaseCard::many;
  return g.n == 1 ? BaseCard::one : BaseCard::two;
}

// A point of the base: either a vertex, or an interior point of an edge at
// parameter u in (0, 1) measured from the smaller-numbered endpoint.
struct BasePoint {
  int v = -1;
  int e = -1;
  Rat u;

  bool is_vertex() const { return e < 0; }
};

inline BasePoint base_vertex(const BaseGraph& g, int v) {
  if (v < 0 || v >= g.n) fail(errc::wrong_base, "vertex out of range");
  return BasePoint{v, -1, Rat(0)};
}

inline BasePoint base_edge_point(const BaseGraph& g, int e, const Rat& u) {
  if (e < 0 || e >= int(g.edges.size())) fail(errc::wrong_base, "edge out of range");
  if (u < 0 || u > 1) fail(errc::wrong_base, "edge parameter outside [0, 1]");
  if (u == 0) return base_vertex(g, g.edges[e].first);
  if (u == 1) return base_vertex(g, g.edges[e].second);
  return BasePoint{-1, e, u};
}

inline bool operator==(const BasePoint& a, const BasePoint& b) {
  if (a.is_vertex() != b.is_vertex()) return false;
  if (a.is_vertex()) return a.v == b.v;
  return a.e == b.e && a.u == b.u;
}
inline bool operator!=(const BasePoint& a, const BasePoint& b) { return !(a == b); }

inline std::string base_point_str(const BasePoint& p) {
  if (p.is_vertex()) return "v" + std::to_string(p.v);
  return "e" + std::to_string(p.e) + ":" + rat_str(p.u);
}

namespace detail {

inline std::vector<std::vector<int>> adjacency(const BaseGraph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (const auto& e : g.edges) {
    adj[e.first].push_back(e.second);
    adj[e.second].push_back(e.first);
  }
  for (auto& nb : adj) std::sort(nb.begin(), nb.end());
  return adj;
}

// Anchor vertices of a point with the cost of reaching each along its edge.
inline std::vector<std::pair<int, Rat>> base_anchors(const BaseGraph& g, const BasePoint& p) {
  if (p.is_vertex()) return {{p.v, Rat(0)}};
  const auto& e = g.edges[p.e];
  return {{e.first, p.u}, {e.second, Rat(1) - p.u}};
}

} // namespace detail

// Hop counts from v0 to every vertex; -1 marks unreachable vertices.
inline std::vector<int> graph_vertex_distances(const BaseGraph& g, int v0) {
  if (v0 < 0 || v0 >= g.n) fail(errc::wrong_base, "vertex out of range");
  auto adj = detail::adjacency(g);
  std::vector<int> dist(g.n, -1);
  std::vector<int> queue{v0};
  dist[v0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int w : adj[v])
      if (dist[w] < 0) {
        dist[w] = dist[v] + 1;
        queue.push_back(w);
      }
  }
  return dist;
}

// Shortest vertex walk from a to b, preferring lower-numbered vertices on
// ties; nullopt when the vertices sit in different components.
inline std::optional<std::vector<int>> graph_shortest_path(const BaseGraph& g, int a, int b) {
  if (a < 0 || a >= g.n || b < 0 || b >= g.n) fail(errc::wrong_base, "vertex out of range");
  auto adj = detail::adjacency(g);
  std::vector<int> parent(g.n, -2);
  std::vector<int> queue{a};
  parent[a] = -1;
  for (std::size_t head = 0; head < queue.size() && parent[b] == -2; ++head) {
    int v = queue[head];
    for (int w : adj[v])
      if (parent[w] == -2) {
        parent[w] = v;
        queue.push_back(w);
      }
  }
  if (parent[b] == -2) return std::nullopt;
  std::vector<int> path{b};
  while (path.back() != a) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

// Path-metric distance between base points with every edge of length one;
// nullopt when they sit in different components.
inline std::optional<Rat> base_distance(const BaseGraph& g, const BasePoint& p, const BasePoint& q) {
  if (p == q) return Rat(0);
  std::optional<Rat> best;
  if (!p.is_vertex() && !q.is_vertex() && p.e == q.e) best = rat_abs(p.u - q.u);
  for (const auto& [va, ca] : detail::base_anchors(g, p)) {
    auto dist = graph_vertex_distances(g, va);
    for (const auto& [vb, cb] : detail::base_anchors(g, q)) {
      if (dist[vb] < 0) continue;
      Rat cand = ca + dist[vb] + cb;
      if (!best || cand < *best) best = cand;
    }
  }
  return best;
}

// Walk from p to q in which consecutive entries are joined by an edge arc:
// both on one edge, or a vertex and an incident point, or adjacent vertices.
inline std::optional<std::vector<BasePoint>> base_walk(const BaseGraph& g, const BasePoint& p,
                                                       const BasePoint& q) {
  if (p == q) return std::vector<BasePoint>{p};
  if (!p.is_vertex() && !q.is_vertex() && p.e == q.e) return std::vector<BasePoint>{p, q};
  std::optional<Rat> best;
  std::optional<std::vector<int>> route;
  for (const auto& [va, ca] : detail::base_anchors(g, p))
    for (const auto& [vb, cb] : detail::base_anchors(g, q)) {
      auto path = graph_shortest_path(g, va, vb);
      if (!path) continue;
      Rat cand = ca + Rat(int(path->size()) - 1) + cb;
      if (!best || cand < *best) {
        best = cand;
        route = std::move(path);
      }
    }
  if (!route) return std::nullopt;
  std::vector<BasePoint> out;
  if (!p.is_vertex()) out.push_back(p);
  for (int v : *route) out.push_back(base_vertex(g, v));
  if (!q.is_vertex()) out.push_back(q);
  return out;
}

// Vertices first, then m evenly spaced interior points per edge.
inline std::vector<BasePoint> enumerate_sample_points(const BaseGraph& g, int m) {
  std::vector<BasePoint> out;
  for (int v = 0; v < g.n; ++v) out.push_back(base_vertex(g, v));
  for (int e = 0; e < int(g.edges.size()); ++e)
    for (int i = 1; i <= m; ++i)
      out.push_back(BasePoint{-1, e, rat_frac(i, m + 1)});
  return out;
}

// Piecewise-linear rational function on a base graph: values at vertices and
// interior breakpoints per edge (parameters strictly increasing in (0, 1)).
struct BaseFunc {
  std::vector<Rat> at_vertex;
  std::vector<std::vector<std::pair<Rat, Rat>>> mids;
};

inline BaseFunc make_base_func(const BaseGraph& g, std::vector<Rat> at_vertex,
                               std::vector<std::vector<std::pair<Rat, Rat>>> mids = {}) {
  if (int(at_vertex.size()) != g.n) fail(errc::wrong_graph, "vertex value count mismatch");
  if (mids.empty()) mids.assign(g.edges.size(), {});
  if (mids.size() != g.edges.size()) fail(errc::wrong_graph, "edge value count mismatch");
  for (const auto& seg : mids) {
    for (std::size_t i = 0; i < seg.size(); ++i) {
      if (seg[i].first <= 0 || seg[i].first >= 1)
        fail(errc::non_pl, "edge breakpoint parameter outside (0, 1)");
      if (i && seg[i - 1].first >= seg[i].first)
        fail(errc::non_pl, "edge breakpoints must increase");
    }
  }
  return BaseFunc{std::move(at_vertex), std::move(mids)};
}

inline BaseFunc base_func_const(const BaseGraph& g, const Rat& c) {
  return make_base_func(g, std::vector<Rat>(g.n, c));
}

inline Rat base_func_eval(const BaseGraph& g, const BaseFunc& f, const BasePoint& p) {
  if (p.is_vertex()) {
    if (p.v < 0 || p.v >= g.n) fail(errc::wrong_base, "vertex out of range");
    return f.at_vertex[p.v];
  }
  if (p.e < 0 || p.e >= int(g.edges.size())) fail(errc::wrong_base, "edge out of range");
  const auto [a, b] = g.edges[p.e];
  std::pair<Rat, Rat> lo{Rat(0), f.at_vertex[a]}, hi{Rat(1), f.at_vertex[b]};
  for (const auto& q : f.mids[p.e]) {
    if (q.first <= p.u && q.first >= lo.first) lo = q;
    if (q.first >= p.u && q.first < hi.first) hi = q;
  }
  if (lo.first == hi.first) return lo.second;
  return lo.second + (p.u - lo.first) * (hi.second - lo.second) / (hi.first - lo.first);
}

// Extremes of a PL function sit at vertices or edge breakpoints.
inline Rat base_func_min(const BaseGraph& g, const BaseFunc& f) {
  Rat m = f.at_vertex.front();
  for (const Rat& v : f.at_vertex) m = rat_min(m, v);
  for (const auto& seg : f.mids)
    for (const auto& q : seg) m = rat_min(m, q.second);
  return m;
}
inline Rat base_func_max(const BaseGraph& g, const BaseFunc& f) {
  Rat m = f.at_vertex.front();
  for (const Rat& v : f.at_vertex) m = rat_max(m, v);
  for (const auto& seg : f.mids)
    for (const auto& q : seg) m = rat_max(m, q.second);
  return m;
}

// Pointwise combination with exact PL structure: breakpoints are merged.
template <typename Op>
inline BaseFunc base_func_combine(const BaseGraph& g, const BaseFunc& f1,
                                  const BaseFunc& f2, Op op) {
  BaseFunc out;
  out.at_vertex.reserve(g.n);
  for (int v = 0; v < g.n; ++v)
    out.at_vertex.push_back(op(f1.at_vertex[v], f2.at_vertex[v]));
  out.mids.resize(g.edges.size());
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    std::vector<Rat> params;
    for (const auto& q : f1.mids[e]) params.push_back(q.first);
    for (const auto& q : f2.mids[e]) params.push_back(q.first);
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    for (const Rat& u : params) {
      BasePoint p{-1, int(e), u};
      out.mids[e].emplace_back(u, op(base_func_eval(g, f1, p), base_func_eval(g, f2, p)));
    }
  }
  return out;
}

inline BaseFunc base_func_add(const BaseGraph& g, const BaseFunc& a, const BaseFunc& b) {
  return base_func_combine(g, a, b, [](const Rat& x, const Rat& y) { return Rat(x + y); });
}
inline BaseFunc base_func_sub(const BaseGraph& g, const BaseFunc& a, const BaseFunc& b) {
  return base_func_combine(g, a, b, [](const Rat& x, const Rat& y) { return Rat(x - y); });
}

// u -> 1 - f(1 - u): the same reparametrization seen from the other end.
inline PLHomeo pl_flip_conj01(const PLHomeo& f) {
  std::vector<std::pair<Rat, Rat>> pts;
  for (auto it = f.pts.rbegin(); it != f.pts.rend(); ++it)
    pts.emplace_back(Rat(1) - it->first, Rat(1) - it->second);
  return pl_make(std::move(pts));
}

// PL isomorphism between base graphs. Each source edge maps onto a target
// edge through an increasing reparametrization rho of [0, 1]; `rev` flips
// the result when the target edge is traversed backwards.
struct BaseIso {
  std::vector<int> vmap;
  struct EdgeMap {
    int e = -1;
    bool rev = false;
    PLHomeo rho;
  };
  std::vector<EdgeMap> emap;
};

inline bool pl_is_unit_reparam(const PLHomeo& f) {
  return !f.below && !f.above && f.pts.front() == std::make_pair(Rat(0), Rat(0)) &&
         f.pts.back() == std::make_pair(Rat(1), Rat(1));
}

inline BaseIso make_base_iso(const BaseGraph& src, const BaseGraph& dst,
                             std::vector<int> vmap,
                             std::vector<PLHomeo> reparams = {}) {
  if (src.n != dst.n || src.edges.size() != dst.edges.size())
    fail(errc::wrong_graph, "graphs have different size");
  if (int(vmap.size()) != src.n) fail(errc::wrong_graph, "vertex map size mismatch");
  std::vector<char> hit(dst.n, 0);
  for (int v : vmap) {
    if (v < 0 || v >= dst.n || hit[v]) fail(errc::wrong_graph, "vertex map not a bijection");
    hit[v] = 1;
  }
  if (reparams.empty())
    reparams.assign(src.edges.size(), pl_identity(Rat(0), Rat(1)));
  if (reparams.size() != src.edges.size())
    fail(errc::wrong_graph, "edge reparametrization count mismatch");
  BaseIso iso;
  iso.vmap = std::move(vmap);
  std::vector<char> ehit(dst.edges.size(), 0);
  for (std::size_t i = 0; i < src.edges.size(); ++i) {
    if (!pl_is_unit_reparam(reparams[i]))
      fail(errc::non_pl, "edge reparametrization must fix 0 and 1");
    int a = iso.vmap[src.edges[i].first], b = iso.vmap[src.edges[i].second];
    auto idx = graph_edge_index(dst, a, b);
    if (!idx) fail(errc::wrong_graph, "vertex map does not preserve adjacency");
    if (ehit[*idx]) fail(errc::wrong_graph, "two edges map to one");
    ehit[*idx] = 1;
    iso.emap.push_back({*idx, a > b, std::move(reparams[i])});
  }
  return iso;
}

inline BaseIso base_iso_identity(const BaseGraph& g) {
  std::vector<int> vmap(g.n);
  for (int v = 0; v < g.n; ++v) vmap[v] = v;
  return make_base_iso(g, g, std::move(vmap));
}

inline BasePoint base_iso_apply(const BaseGraph& src, const BaseGraph& dst,
                                const BaseIso& iso, const BasePoint& p) {
  if (p.is_vertex()) {
    if (p.v < 0 || p.v >= src.n) fail(errc::wrong_base, "vertex out of range");
    return base_vertex(dst, iso.vmap[p.v]);
  }
  if (p.e < 0 || p.e >= int(src.edges.size())) fail(errc::wrong_base, "edge out of range");
  const auto& em = iso.emap[p.e];
  Rat t = pl_eval(em.rho, p.u);
  if (em.rev) t = Rat(1) - t;
  return base_edge_point(dst, em.e, t);
}

inline BaseIso base_iso_invert(const BaseGraph& src, const BaseGraph& dst,
                               const BaseIso& iso) {
  BaseIso out;
  out.vmap.assign(dst.n, -1);
  for (int v = 0; v < src.n; ++v) out.vmap[iso.vmap[v]] = v;
  out.emap.resize(dst.edges.size());
  for (std::size_t i = 0; i < src.edges.size(); ++i) {
    const auto& em = iso.emap[i];
    PLHomeo rho = pl_invert(em.rho);
    if (em.rev) rho = pl_flip_conj01(rho);
    out.emap[em.e] = {int(i), em.rev, std::move(rho)};
  }
  return out;
}

// g after f, with f: A -> B and g: B -> C.
inline BaseIso base_iso_compose(const BaseGraph& A, const BaseIso& f,
                                const BaseGraph& B, const BaseIso& g) {
  BaseIso out;
  out.vmap.reserve(A.n);
  for (int v = 0; v < A.n; ++v) out.vmap.push_back(g.vmap[f.vmap[v]]);
  for (std::size_t i = 0; i < A.edges.size(); ++i) {
    const auto& fe = f.emap[i];
    const auto& ge = g.emap[fe.e];
    PLHomeo mid = fe.rev ? pl_flip_conj01(ge.rho) : ge.rho;
    out.emap.push_back({ge.e, fe.rev != ge.rev, pl_compose(mid, fe.rho)});
  }
  return out;
}

// Transport f along iso: the function on dst whose value at iso(p) is f(p).
inline BaseFunc push_base_func(const BaseGraph& src, const BaseGraph& dst,
                               const BaseIso& iso, const BaseFunc& f) {
  BaseFunc out;
  out.at_vertex.assign(dst.n, Rat(0));
  for (int v = 0; v < src.n; ++v) out.at_vertex[iso.vmap[v]] = f.at_vertex[v];
  out.mids.resize(dst.edges.size());
  for (std::size_t i = 0; i < src.edges.size(); ++i) {
    const auto& em = iso.emap[i];
    // Kinks come from both f's breakpoints and the reparametrization's.
    std::vector<Rat> params;
    for (const auto& q : f.mids[i]) params.push_back(q.first);
    for (const auto& p : em.rho.pts)
      if (p.first > 0 && p.first < 1) params.push_back(p.first);
    std::sort(params.begin(), params.end());
    params.erase(std::unique(params.begin(), params.end()), params.end());
    std::vector<std::pair<Rat, Rat>> mids;
    for (const Rat& u : params) {
      Rat w = pl_eval(em.rho, u);
      if (em.rev) w = Rat(1) - w;
      mids.emplace_back(w, base_func_eval(src, f, BasePoint{-1, int(i), u}));
    }
    if (em.rev) std::reverse(mids.begin(), mids.end());
    out.mids[em.e] = std::move(mids);
  }
  return out;
}

} // namespace conetop

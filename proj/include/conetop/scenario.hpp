// Scenario files: strict JSON whose rational leaves are "p/q" strings, a
// named store of charts and maps, and the command interpreter behind the
// command line tool. Commands are validated before any of them runs; every
// verification outcome is recorded and the run passes only if all of them do.
#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "conetop/moves.hpp"
#include "conetop/promotion.hpp"
#include "conetop/verify.hpp"
#include "conetop/vertex_swap.hpp"

namespace conetop {

using Json = nlohmann::json;

// --- strict JSON access -----------------------------------------------------

inline Json scenario_parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // nlohmann's message carries the line/column position; keep it.
    fail(errc::parse_error, e.what());
  }
}

inline const Json& jget(const Json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) fail(errc::parse_error, at + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(errc::parse_error, at + ": missing field '" + key + "'");
  return *it;
}

inline const Json* jopt(const Json& j, const std::string& key) {
  if (!j.is_object()) return nullptr;
  auto it = j.find(key);
  return it == j.end() ? nullptr : &*it;
}

inline Rat jrat(const Json& j, const std::string& at) {
  if (!j.is_string())
    fail(errc::parse_error,
         at + ": rationals are written as strings like \"3/4\", got " + j.dump());
  try {
    return rat_parse(j.get<std::string>());
  } catch (const error& e) {
    fail(errc::parse_error, at + ": " + e.what());
  }
}

inline long jint(const Json& j, const std::string& at) {
  if (!j.is_number_integer())
    fail(errc::parse_error, at + ": expected an integer, got " + j.dump());
  return j.get<long>();
}

inline std::string jstr(const Json& j, const std::string& at) {
  if (!j.is_string())
    fail(errc::parse_error, at + ": expected a string, got " + j.dump());
  return j.get<std::string>();
}

inline std::string jname(const Json& j, const std::string& at) {
  std::string s = jstr(j, at);
  if (s.empty()) fail(errc::parse_error, at + ": names must not be empty");
  for (char c : s) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
              (c >= '0' && c <= '9') || c == '-' || c == '_';
    if (!ok)
      fail(errc::parse_error,
           at + ": names use letters, digits, '-' and '_' only, got '" + s + "'");
  }
  return s;
}

// --- descriptor parsing -------------------------------------------------------

// Base points use the same text the library prints: "v<i>" for a vertex,
// "e<i>:<p/q>" for the point of edge i at coordinate p/q from its first end.
inline BasePoint parse_base_point(const BaseGraph& g, const std::string& s,
                                  const std::string& at) {
  auto bad = [&]() -> BasePoint {
    fail(errc::parse_error, at + ": base points look like \"v0\" or \"e1:1/3\", got '" + s + "'");
  };
  if (s.size() < 2 || (s[0] != 'v' && s[0] != 'e')) return bad();
  if (s[0] == 'v') {
    for (std::size_t i = 1; i < s.size(); ++i)
      if (s[i] < '0' || s[i] > '9') return bad();
    long v = std::stol(s.substr(1));
    if (v < 0 || v >= g.n) fail(errc::parse_error, at + ": no vertex " + s);
    return base_vertex(g, int(v));
  }
  std::size_t sep = s.find(':');
  if (sep == std::string::npos || sep < 2) return bad();
  for (std::size_t i = 1; i < sep; ++i)
    if (s[i] < '0' || s[i] > '9') return bad();
  long e = std::stol(s.substr(1, sep - 1));
  if (e < 0 || std::size_t(e) >= g.edges.size())
    fail(errc::parse_error, at + ": no edge " + s.substr(0, sep));
  Rat u;
  try {
    u = rat_parse(s.substr(sep + 1));
  } catch (const error& err) {
    fail(errc::parse_error, at + ": " + err.what());
  }
  return base_edge_point(g, int(e), u);
}

// Ambient points: a two element array ["x","y"] in the plane, the strings
// "apex" / "north" / "south" for cone and suspension tips, or an object
// {"at": "<base point>", "s": "<p/q>"} on a ray.
inline AmbientPoint parse_point(const Ambient& amb, const Json& j, const std::string& at) {
  AmbientPoint p;
  if (j.is_array()) {
    if (j.size() != 2)
      fail(errc::parse_error, at + ": plane points are [\"x\",\"y\"]");
    p = plane_point(jrat(j[0], at + "[0]"), jrat(j[1], at + "[1]"));
  } else if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "apex") p = apex_point();
    else if (s == "north") p = north_point();
    else if (s == "south") p = south_point();
    else fail(errc::parse_error, at + ": unknown point '" + s + "'");
  } else if (j.is_object()) {
    BasePoint b = parse_base_point(amb.base, jstr(jget(j, "at", at), at + ".at"), at + ".at");
    p = ray_point(b, jrat(jget(j, "s", at), at + ".s"));
  } else {
    fail(errc::parse_error, at + ": expected a point");
  }
  if (!point_in_ambient(amb, p))
    fail(errc::parse_error, at + ": point " + ambient_point_str(p) + " lies outside the ambient");
  return p;
}

inline std::vector<AmbientPoint> parse_points(const Ambient& amb, const Json& j,
                                              const std::string& at) {
  if (!j.is_array()) fail(errc::parse_error, at + ": expected an array of points");
  std::vector<AmbientPoint> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(parse_point(amb, j[i], at + "[" + std::to_string(i) + "]"));
  return out;
}

inline Ambient parse_ambient(const Json& j) {
  std::string kind = jstr(jget(j, "kind", "ambient"), "ambient.kind");
  if (kind == "plane")
    return make_plane(jrat(jget(j, "halfwidth", "ambient"), "ambient.halfwidth"));
  if (kind != "graph-cone" && kind != "suspension")
    fail(errc::unsupported_ambient, "ambient kind '" + kind + "'");
  long n = jint(jget(j, "vertices", "ambient"), "ambient.vertices");
  if (n < 1) fail(errc::parse_error, "ambient.vertices: need at least one vertex");
  std::vector<std::pair<int, int>> edges;
  if (const Json* je = jopt(j, "edges")) {
    if (!je->is_array()) fail(errc::parse_error, "ambient.edges: expected an array");
    for (std::size_t i = 0; i < je->size(); ++i) {
      const Json& e = (*je)[i];
      std::string at = "ambient.edges[" + std::to_string(i) + "]";
      if (!e.is_array() || e.size() != 2) fail(errc::parse_error, at + ": edges are [a,b]");
      edges.emplace_back(int(jint(e[0], at)), int(jint(e[1], at)));
    }
  }
  BaseGraph g = make_base_graph(int(n), std::move(edges));
  return kind == "graph-cone" ? make_graph_cone(std::move(g)) : make_suspension(std::move(g));
}

// Chart descriptors.
//   {"kind":"radial", "offsets":["0","1/2",...], "edge-offsets":[[["1/3","1/4"],...],...],
//    "south": false}
//   {"kind":"square", "center":["0","0"], "width":"6", "knots":[["1/2","4"],...]}
inline ConeChart parse_chart(const Ambient& amb, const Json& j, const std::string& at) {
  std::string kind = jstr(jget(j, "kind", at), at + ".kind");
  if (kind == "radial") {
    if (amb.kind == AmbientKind::plane)
      fail(errc::parse_error, at + ": radial charts need a cone or suspension ambient");
    const Json& off = jget(j, "offsets", at);
    if (!off.is_array() || int(off.size()) != amb.base.n)
      fail(errc::parse_error, at + ".offsets: need one rational per vertex");
    std::vector<Rat> at_vertex;
    for (std::size_t i = 0; i < off.size(); ++i)
      at_vertex.push_back(jrat(off[i], at + ".offsets[" + std::to_string(i) + "]"));
    std::vector<std::vector<std::pair<Rat, Rat>>> mids(amb.base.edges.size());
    if (const Json* jm = jopt(j, "edge-offsets")) {
      if (!jm->is_array() || jm->size() != amb.base.edges.size())
        fail(errc::parse_error, at + ".edge-offsets: need one list per edge");
      for (std::size_t e = 0; e < jm->size(); ++e) {
        const Json& lst = (*jm)[e];
        std::string ate = at + ".edge-offsets[" + std::to_string(e) + "]";
        if (!lst.is_array()) fail(errc::parse_error, ate + ": expected an array");
        for (std::size_t i = 0; i < lst.size(); ++i) {
          const Json& kv = lst[i];
          if (!kv.is_array() || kv.size() != 2)
            fail(errc::parse_error, ate + ": entries are [\"u\",\"value\"]");
          mids[e].emplace_back(jrat(kv[0], ate), jrat(kv[1], ate));
        }
      }
    }
    bool south = false;
    if (const Json* js = jopt(j, "south")) {
      if (!js->is_boolean()) fail(errc::parse_error, at + ".south: expected true or false");
      south = js->get<bool>();
    }
    BaseFunc f = make_base_func(amb.base, std::move(at_vertex), std::move(mids));
    return make_radial_chart(amb, amb.base, base_iso_identity(amb.base), std::move(f), south);
  }
  if (kind == "square") {
    if (amb.kind != AmbientKind::plane)
      fail(errc::parse_error, at + ": square charts need a plane ambient");
    const Json& c = jget(j, "center", at);
    if (!c.is_array() || c.size() != 2)
      fail(errc::parse_error, at + ".center: expected [\"x\",\"y\"]");
    Vec2 center{jrat(c[0], at + ".center[0]"), jrat(c[1], at + ".center[1]")};
    Rat width = jrat(jget(j, "width", at), at + ".width");
    const Json& jk = jget(j, "knots", at);
    if (!jk.is_array() || jk.empty())
      fail(errc::parse_error, at + ".knots: expected [[\"level\",\"width\"],...]");
    std::vector<std::pair<Rat, Rat>> knots;
    for (std::size_t i = 0; i < jk.size(); ++i) {
      const Json& kv = jk[i];
      std::string atk = at + ".knots[" + std::to_string(i) + "]";
      if (!kv.is_array() || kv.size() != 2)
        fail(errc::parse_error, atk + ": knots are [\"level\",\"width\"]");
      knots.emplace_back(jrat(kv[0], atk), jrat(kv[1], atk));
    }
    BaseGraph g = make_base_graph(4, {{0, 1}, {1, 2}, {2, 3}, {0, 3}});
    std::vector<Vec2> dirs{{Rat(1), Rat(1)},
                           {Rat(-1), Rat(1)},
                           {Rat(-1), Rat(-1)},
                           {Rat(1), Rat(-1)}};
    return make_planar_chart(amb, std::move(g), std::move(dirs), center,
                             make_width_profile(width, std::move(knots)));
  }
  fail(errc::parse_error, at + ".kind: unknown chart kind '" + kind + "'");
}

// --- the named store and outcomes --------------------------------------------

struct ScenarioOutcome {
  std::string label;
  bool pass = false;
  std::string text;  // stable multi-line detail, already newline-terminated
};

struct ScenarioRun {
  int commands = 0;
  std::vector<ScenarioOutcome> outcomes;
  bool pass() const {
    for (const ScenarioOutcome& o : outcomes)
      if (!o.pass) return false;
    return true;
  }
};

namespace detail {

struct StoredSwap {
  InterlacedPair pair;
  SwapHomeo h;
  PiecewiseHomeo ph;
};

struct StoredAlt {
  InterlacedPair pair;
  std::shared_ptr<ChartTower> tower;
  PiecewiseHomeo ph;
};

struct StoredPromotion {
  ConeChart phi, psi;
  int k = 0;
  ConeChart out;
};

struct StoredMap {
  PiecewiseHomeo ph;
  std::vector<AmbientPoint> sources, targets;
};

struct StoredRoute {
  PLPath before, after;
  std::vector<AmbientPoint> forbidden;
};

struct ScenarioState {
  Ambient amb;
  std::map<std::string, ConeChart> charts;
  std::map<std::string, StoredSwap> swaps;
  std::map<std::string, StoredAlt> alts;
  std::map<std::string, StoredPromotion> promotions;
  std::map<std::string, StoredMap> maps;
  std::map<std::string, StoredRoute> routes;
  std::uint64_t seed = 0;
  std::filesystem::path outdir;
  bool verbose = false;
  std::ostream* log = nullptr;
  ScenarioRun run;
};

template <class M>
const typename M::mapped_type& lookup(const M& m, const std::string& name) {
  auto it = m.find(name);
  if (it == m.end()) fail(errc::unknown_reference, name);
  return it->second;
}

inline const ConeChart& chart_ref(const ScenarioState& st, const std::string& name) {
  return lookup(st.charts, name);
}

// The map any stored subject applies to sample points.
inline const PiecewiseHomeo& subject_map(const ScenarioState& st, const std::string& name) {
  if (auto it = st.swaps.find(name); it != st.swaps.end()) return it->second.ph;
  if (auto it = st.alts.find(name); it != st.alts.end()) return it->second.ph;
  if (auto it = st.maps.find(name); it != st.maps.end()) return it->second.ph;
  fail(errc::unknown_reference, name);
}

// The interlaced pair whose region decomposition labels sample rows, if the
// subject has one.
inline const InterlacedPair* subject_pair(const ScenarioState& st, const std::string& name) {
  if (auto it = st.swaps.find(name); it != st.swaps.end()) return &it->second.pair;
  if (auto it = st.alts.find(name); it != st.alts.end()) return &it->second.pair;
  return nullptr;
}

inline void note_outcome(ScenarioState& st, std::string label, bool pass, std::string text) {
  if (st.log) {
    *st.log << (pass ? "pass  " : "FAIL  ") << label << "\n";
    if (st.verbose || !pass) *st.log << text;
  }
  st.run.outcomes.push_back({std::move(label), pass, std::move(text)});
}

inline void write_file(const std::filesystem::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) fail(errc::command_failed, "cannot write " + p.string());
  os << text;
  if (!os.flush()) fail(errc::command_failed, "cannot write " + p.string());
}

inline Json report_json(const VerificationReport& r) {
  Json checks = Json::array();
  for (const CheckResult& c : r.checks) {
    Json jc;
    jc["name"] = c.name;
    jc["pass"] = c.pass;
    jc["samples"] = c.samples;
    if (!c.pass) {
      jc["counterexample"] = c.counterexample;
      jc["detail"] = c.detail;
    }
    checks.push_back(std::move(jc));
  }
  Json out;
  out["subject"] = r.subject;
  out["seed"] = r.seed;
  out["pass"] = r.pass();
  out["checks"] = std::move(checks);
  out["notes"] = r.notes;
  return out;
}

// Record a report as an outcome and write its text and JSON artifacts.
inline void note_report(ScenarioState& st, const std::string& name,
                        const std::string& tag, const VerificationReport& rep) {
  std::string stem = name + (tag.empty() ? "" : "-" + tag);
  write_file(st.outdir / (stem + "-report.txt"), report_text(rep, false));
  write_file(st.outdir / (stem + "-report.json"), report_json(rep).dump(2) + "\n");
  note_outcome(st, "verify " + stem + " (" + rep.subject + ")", rep.pass(),
               report_text(rep, false));
}

// --- sampling -----------------------------------------------------------------

inline std::string csv_point(const Ambient& amb, const AmbientPoint& p) {
  if (amb.kind == AmbientKind::plane) {
    if (p.tag != AmbientPoint::Tag::plane)
      fail(errc::internal, "plane map produced a non-plane point");
    return rat_str(p.x) + "," + rat_str(p.y);
  }
  switch (p.tag) {
    case AmbientPoint::Tag::apex: return "apex,inf";
    case AmbientPoint::Tag::north: return "north,inf";
    case AmbientPoint::Tag::south: return "south,inf";
    case AmbientPoint::Tag::ray: return base_point_str(p.at) + "," + rat_str(p.s);
    default: fail(errc::internal, "ray map produced a plane point");
  }
}

inline std::vector<AmbientPoint> sample_grid(const ScenarioState& st, const Json& grid,
                                             const std::string& at) {
  std::string kind = jstr(jget(grid, "kind", at), at + ".kind");
  std::vector<AmbientPoint> pts;
  if (kind == "plane") {
    if (st.amb.kind != AmbientKind::plane)
      fail(errc::parse_error, at + ": plane grids need a plane ambient");
    long n = jint(jget(grid, "n", at), at + ".n");
    if (n < 1 || n > 512) fail(errc::parse_error, at + ".n: expected 1..512");
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j) {
        Rat x = Rat(st.amb.halfwidth) * rat_frac(2 * i + 1 - n, n);
        Rat y = Rat(st.amb.halfwidth) * rat_frac(2 * j + 1 - n, n);
        pts.push_back(plane_point(x, y));
      }
    return pts;
  }
  if (kind == "levels") {
    const ConeChart& c = chart_ref(st, jstr(jget(grid, "chart", at), at + ".chart"));
    const Json& jl = jget(grid, "levels", at);
    if (!jl.is_array() || jl.empty())
      fail(errc::parse_error, at + ".levels: expected [\"p/q\",...]");
    long m = 3;
    if (const Json* jm = jopt(grid, "base-samples")) m = jint(*jm, at + ".base-samples");
    if (m < 1 || m > 64) fail(errc::parse_error, at + ".base-samples: expected 1..64");
    std::vector<BasePoint> ys = enumerate_sample_points(chart_base(c), int(m));
    for (std::size_t i = 0; i < jl.size(); ++i) {
      Rat t = jrat(jl[i], at + ".levels[" + std::to_string(i) + "]");
      if (t <= 0) fail(errc::parse_error, at + ".levels: levels are positive");
      for (const BasePoint& y : ys) pts.push_back(chart_eval(c, y, level(t)));
    }
    return pts;
  }
  fail(errc::parse_error, at + ".kind: unknown grid kind '" + kind + "'");
}

inline void run_sample(ScenarioState& st, const Json& cmd, const std::string& at) {
  std::string subject = jname(jget(cmd, "subject", at), at + ".subject");
  const PiecewiseHomeo& h = subject_map(st, subject);
  const InterlacedPair* pair = subject_pair(st, subject);
  std::vector<AmbientPoint> pts = sample_grid(st, jget(cmd, "grid", at), at + ".grid");
  std::string file = jstr(jget(cmd, "out", at), at + ".out");
  if (file.empty() || file.find('/') != std::string::npos || file.front() == '.')
    fail(errc::parse_error, at + ".out: plain file names only");
  std::ostringstream os;
  bool plane = st.amb.kind == AmbientKind::plane;
  os << (plane ? "in_x,in_y" : "in_base,in_s") << ",region,"
     << (plane ? "out_x,out_y" : "out_base,out_s") << "\n";
  for (const AmbientPoint& p : pts) {
    std::string label = "-";
    if (pair) {
      std::vector<SwapRegion> rs = classify_swap(*pair, p);
      if (!rs.empty()) label = rs.front().str();
    }
    os << csv_point(st.amb, p) << "," << label << ","
       << csv_point(st.amb, ph_apply(h, p)) << "\n";
  }
  write_file(st.outdir / file, os.str());
  if (st.log && st.verbose)
    *st.log << "sample " << subject << ": " << pts.size() << " rows -> " << file << "\n";
}

// --- command execution ----------------------------------------------------------

inline void run_command(ScenarioState& st, const Json& cmd, const std::string& at) {
  std::string op = jstr(jget(cmd, "op", at), at + ".op");
  if (op == "check-interlace") {
    const ConeChart& phi = chart_ref(st, jname(jget(cmd, "phi", at), at + ".phi"));
    const ConeChart& psi = chart_ref(st, jname(jget(cmd, "psi", at), at + ".psi"));
    long k = jint(jget(cmd, "k", at), at + ".k");
    bool expect = true;
    if (const Json* je = jopt(cmd, "expect")) {
      if (!je->is_boolean()) fail(errc::parse_error, at + ".expect: expected true or false");
      expect = je->get<bool>();
    }
    bool got = is_k_interlaced(phi, psi, int(k));
    std::ostringstream os;
    os << "interlaced at depth " << k << ": " << (got ? "yes" : "no")
       << " (expected " << (expect ? "yes" : "no") << ")\n";
    note_outcome(st, "check-interlace k=" + std::to_string(k), got == expect, os.str());
    return;
  }
  if (op == "build-h") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    const ConeChart& phi = chart_ref(st, jname(jget(cmd, "phi", at), at + ".phi"));
    const ConeChart& psi = chart_ref(st, jname(jget(cmd, "psi", at), at + ".psi"));
    InterlacedPair pair = make_interlaced_pair(phi, psi);
    SwapHomeo h = build_vertex_swap(pair);
    PiecewiseHomeo ph = swap_as_piecewise(h, name);
    st.swaps.emplace(name, StoredSwap{std::move(pair), std::move(h), std::move(ph)});
    return;
  }
  if (op == "build-h-alt") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    const ConeChart& phi = chart_ref(st, jname(jget(cmd, "phi", at), at + ".phi"));
    const ConeChart& psi = chart_ref(st, jname(jget(cmd, "psi", at), at + ".psi"));
    InterlacedPair pair = make_interlaced_pair(phi, psi);
    auto tower = std::make_shared<ChartTower>(make_chart_tower(phi, psi));
    PiecewiseHomeo ph = build_vertex_swap_via_tower(tower, name);
    st.alts.emplace(name, StoredAlt{std::move(pair), std::move(tower), std::move(ph)});
    return;
  }
  if (op == "promote") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    const ConeChart& phi = chart_ref(st, jname(jget(cmd, "phi", at), at + ".phi"));
    const ConeChart& psi = chart_ref(st, jname(jget(cmd, "psi", at), at + ".psi"));
    long k = jint(jget(cmd, "k", at), at + ".k");
    ConeChart out = promote(phi, psi, int(k));
    st.promotions.emplace(name, StoredPromotion{phi, psi, int(k), out});
    st.charts.emplace(name, std::move(out));
    return;
  }
  if (op == "vertex-swap") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    const ConeChart& phi = chart_ref(st, jname(jget(cmd, "chart", at), at + ".chart"));
    AmbientPoint target = parse_point(st.amb, jget(cmd, "target", at), at + ".target");
    ConeChart psi = recenter_chart(phi, target);
    InterlacedPair pair = make_interlaced_pair(phi, psi);
    SwapHomeo h = build_vertex_swap(pair);
    PiecewiseHomeo ph = swap_as_piecewise(h, name);
    st.swaps.emplace(name, StoredSwap{std::move(pair), std::move(h), std::move(ph)});
    return;
  }
  if (op == "move") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    AmbientPoint from = parse_point(st.amb, jget(cmd, "from", at), at + ".from");
    AmbientPoint to = parse_point(st.amb, jget(cmd, "to", at), at + ".to");
    PiecewiseHomeo h;
    if (const Json* jc = jopt(cmd, "chart")) {
      if (jopt(cmd, "avoid"))
        fail(errc::parse_error, at + ": moves inside one chart take no avoid set");
      h = move_in_cone(chart_ref(st, jname(*jc, at + ".chart")), from, to);
    } else {
      if (st.amb.kind != AmbientKind::plane)
        fail(errc::parse_error, at + ": moves outside the plane name a chart");
      std::vector<AmbientPoint> avoid;
      if (const Json* ja = jopt(cmd, "avoid")) avoid = parse_points(st.amb, *ja, at + ".avoid");
      PLPath path = make_pl_path(st.amb, {from, to});
      if (!avoid.empty()) path = reroute_path(path, avoid);
      ChartChain chain = build_chart_chain(st.amb, path, avoid);
      h = chain_move(st.amb, from, to, avoid, chain);
    }
    h.name = name;
    bool hit = ph_apply(h, from) == to;
    note_outcome(st, "move " + name, hit,
                 "moves " + ambient_point_str(from) + " to " + ambient_point_str(to) +
                     (hit ? "\n" : ": endpoint missed\n"));
    st.maps.emplace(name, StoredMap{std::move(h), {from}, {to}});
    return;
  }
  if (op == "reroute") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    std::vector<AmbientPoint> pts = parse_points(st.amb, jget(cmd, "points", at), at + ".points");
    std::vector<AmbientPoint> forbid =
        parse_points(st.amb, jget(cmd, "forbid", at), at + ".forbid");
    PLPath before = make_pl_path(st.amb, pts);
    PLPath after = reroute_path(before, forbid);
    bool ok = after.pts.front() == before.pts.front() && after.pts.back() == before.pts.back();
    std::size_t hits = 0;
    for (const AmbientPoint& f : forbid)
      if (point_on_path(after, f)) ++hits;
    ok = ok && hits == 0;
    std::ostringstream os;
    os << "segments " << (before.pts.size() - 1) << " -> " << (after.pts.size() - 1)
       << ", forbidden points on result: " << hits << "\n";
    note_outcome(st, "reroute " + name, ok, os.str());
    st.routes.emplace(name, StoredRoute{std::move(before), std::move(after), std::move(forbid)});
    return;
  }
  if (op == "strong-n") {
    std::string name = jname(jget(cmd, "name", at), at + ".name");
    std::vector<AmbientPoint> srcs =
        parse_points(st.amb, jget(cmd, "sources", at), at + ".sources");
    std::vector<AmbientPoint> tgts =
        parse_points(st.amb, jget(cmd, "targets", at), at + ".targets");
    PiecewiseHomeo h = strong_n_extend(st.amb, srcs, tgts);
    h.name = name;
    std::size_t placed = 0;
    for (std::size_t i = 0; i < srcs.size(); ++i)
      if (ph_apply(h, srcs[i]) == tgts[i]) ++placed;
    note_outcome(st, "strong-n " + name, placed == srcs.size(),
                 "placed " + std::to_string(placed) + " of " + std::to_string(srcs.size()) +
                     " points\n");
    st.maps.emplace(name, StoredMap{std::move(h), std::move(srcs), std::move(tgts)});
    return;
  }
  if (op == "verify") {
    std::string name = jname(jget(cmd, "subject", at), at + ".subject");
    if (auto it = st.swaps.find(name); it != st.swaps.end()) {
      note_report(st, name, "", verify_vertex_swap(it->second.pair, it->second.h, st.seed));
      return;
    }
    if (auto it = st.alts.find(name); it != st.alts.end()) {
      note_report(st, name, "contract",
                  verify_swap_contract(it->second.pair, it->second.ph, st.seed));
      note_report(st, name, "limit",
                  verify_limit_chart(it->second.pair, limit_view(it->second.tower), st.seed));
      return;
    }
    if (auto it = st.promotions.find(name); it != st.promotions.end()) {
      const StoredPromotion& pr = it->second;
      note_report(st, name, "", verify_promotion(pr.phi, pr.psi, pr.k, pr.out, st.seed));
      return;
    }
    if (auto it = st.maps.find(name); it != st.maps.end()) {
      std::vector<AmbientPoint> samples = probe_points(st.amb);
      for (const AmbientPoint& p : it->second.sources) samples.push_back(p);
      for (const AmbientPoint& p : it->second.targets) samples.push_back(p);
      note_report(st, name, "", verify_generic_homeo(it->second.ph, samples, st.seed));
      return;
    }
    if (auto it = st.routes.find(name); it != st.routes.end()) {
      const StoredRoute& r = it->second;
      std::size_t hits = 0;
      for (const AmbientPoint& f : r.forbidden)
        if (point_on_path(r.after, f)) ++hits;
      note_outcome(st, "verify " + name + " (reroute)", hits == 0,
                   "forbidden points on path: " + std::to_string(hits) + "\n");
      return;
    }
    fail(errc::unknown_reference, name);
  }
  if (op == "sample") {
    run_sample(st, cmd, at);
    return;
  }
  fail(errc::parse_error, at + ".op: unknown command '" + op + "'");
}

// --- validation before execution -------------------------------------------------

// Checks command shape and that every reference names something defined by
// then, without running anything.
inline void validate_commands(const Json& cmds, const std::map<std::string, ConeChart>& charts) {
  std::map<std::string, char> defined;  // c chart, s swap, a alt, m map, r route, p promotion
  for (const auto& [name, c] : charts) defined[name] = 'c';
  auto need = [&](const Json& cmd, const std::string& key, const std::string& at) -> const Json& {
    return jget(cmd, key, at);
  };
  auto ref = [&](const Json& j, const std::string& at, const std::string& kinds) {
    std::string name = jname(j, at);
    auto it = defined.find(name);
    if (it == defined.end()) fail(errc::unknown_reference, name);
    if (kinds.find(it->second) == std::string::npos)
      fail(errc::parse_error, at + ": '" + name + "' is not usable here");
  };
  auto define = [&](const Json& j, const std::string& at, char kind) {
    std::string name = jname(j, at);
    if (defined.count(name))
      fail(errc::parse_error, at + ": name '" + name + "' is already defined");
    defined[name] = kind;
  };
  for (std::size_t i = 0; i < cmds.size(); ++i) {
    const Json& cmd = cmds[i];
    std::string at = "commands[" + std::to_string(i) + "]";
    std::string op = jstr(jget(cmd, "op", at), at + ".op");
    if (op == "check-interlace") {
      ref(need(cmd, "phi", at), at + ".phi", "cp");
      ref(need(cmd, "psi", at), at + ".psi", "cp");
      jint(need(cmd, "k", at), at + ".k");
    } else if (op == "build-h" || op == "build-h-alt") {
      ref(need(cmd, "phi", at), at + ".phi", "cp");
      ref(need(cmd, "psi", at), at + ".psi", "cp");
      define(need(cmd, "name", at), at + ".name", op == "build-h" ? 's' : 'a');
    } else if (op == "promote") {
      ref(need(cmd, "phi", at), at + ".phi", "cp");
      ref(need(cmd, "psi", at), at + ".psi", "cp");
      jint(need(cmd, "k", at), at + ".k");
      // the output is a chart and a verifiable promotion record at once
      define(need(cmd, "name", at), at + ".name", 'p');
    } else if (op == "vertex-swap") {
      ref(need(cmd, "chart", at), at + ".chart", "cp");
      need(cmd, "target", at);
      define(need(cmd, "name", at), at + ".name", 's');
    } else if (op == "move") {
      need(cmd, "from", at);
      need(cmd, "to", at);
      if (const Json* jc = jopt(cmd, "chart")) ref(*jc, at + ".chart", "cp");
      define(need(cmd, "name", at), at + ".name", 'm');
    } else if (op == "reroute") {
      need(cmd, "points", at);
      need(cmd, "forbid", at);
      define(need(cmd, "name", at), at + ".name", 'r');
    } else if (op == "strong-n") {
      need(cmd, "sources", at);
      need(cmd, "targets", at);
      define(need(cmd, "name", at), at + ".name", 'm');
    } else if (op == "verify") {
      ref(need(cmd, "subject", at), at + ".subject", "samrp");
    } else if (op == "sample") {
      ref(need(cmd, "subject", at), at + ".subject", "sam");
      const Json& grid = need(cmd, "grid", at);
      std::string kind = jstr(jget(grid, "kind", at + ".grid"), at + ".grid.kind");
      if (kind == "levels") ref(jget(grid, "chart", at + ".grid"), at + ".grid.chart", "cp");
      else if (kind != "plane")
        fail(errc::parse_error, at + ".grid.kind: unknown grid kind '" + kind + "'");
      jstr(need(cmd, "out", at), at + ".out");
    } else {
      fail(errc::parse_error, at + ".op: unknown command '" + op + "'");
    }
  }
}

} // namespace detail

// --- entry points ------------------------------------------------------------------

inline ScenarioRun run_scenario_json(const Json& doc, std::uint64_t seed,
                                     const std::string& outdir, bool verbose,
                                     std::ostream& log) {
  detail::ScenarioState st;
  st.amb = parse_ambient(jget(doc, "ambient", "scenario"));
  const Json& jcharts = jget(doc, "charts", "scenario");
  if (!jcharts.is_object()) fail(errc::parse_error, "charts: expected an object");
  for (const auto& [name, desc] : jcharts.items()) {
    jname(Json(name), "charts");
    st.charts.emplace(name, parse_chart(st.amb, desc, "charts." + name));
  }
  const Json& cmds = jget(doc, "commands", "scenario");
  if (!cmds.is_array()) fail(errc::parse_error, "commands: expected an array");
  detail::validate_commands(cmds, st.charts);

  st.seed = seed;
  st.outdir = outdir;
  st.verbose = verbose;
  st.log = &log;
  std::filesystem::create_directories(st.outdir);

  for (std::size_t i = 0; i < cmds.size(); ++i) {
    std::string at = "commands[" + std::to_string(i) + "]";
    if (verbose) log << "-- " << at << " " << jstr(jget(cmds[i], "op", at), at) << "\n";
    try {
      detail::run_command(st, cmds[i], at);
    } catch (const error& e) {
      if (e.code() == errc::unknown_reference || e.code() == errc::parse_error) throw;
      fail(errc::command_failed, at + ": " + e.what());
    }
    ++st.run.commands;
  }

  std::ostringstream summary;
  for (const ScenarioOutcome& o : st.run.outcomes)
    summary << (o.pass ? "pass  " : "FAIL  ") << o.label << "\n";
  summary << (st.run.pass() ? "all passed" : "failures above") << " ("
          << st.run.outcomes.size() << " outcomes)\n";
  detail::write_file(st.outdir / "summary.txt", summary.str());
  log << "scenario: " << st.run.commands << " commands, " << st.run.outcomes.size()
      << " outcomes, " << (st.run.pass() ? "all passed" : "FAILURES") << "\n";
  return st.run;
}

inline ScenarioRun run_scenario(const std::string& file, std::uint64_t seed,
                                const std::string& outdir, bool verbose,
                                std::ostream& log) {
  std::ifstream is(file, std::ios::binary);
  if (!is) fail(errc::command_failed, "cannot read scenario file " + file);
  std::ostringstream buf;
  buf << is.rdbuf();
  return run_scenario_json(scenario_parse_text(buf.str()), seed, outdir, verbose, log);
}

} // namespace conetop

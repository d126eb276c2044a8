#include "enriched/ggraph.hpp"

#include <algorithm>
#include <sstream>

namespace enriched {

GrothendieckGraph::GrothendieckGraph(std::vector<std::string> vertices, std::vector<std::string> colors)
    : vertices_(std::move(vertices)), colors_(std::move(colors)), slots_(vertices_.size() * colors_.size()) {
  auto check_unique = [](std::vector<std::string> names, const char* what) {
    std::sort(names.begin(), names.end());
    if (auto it = std::adjacent_find(names.begin(), names.end()); it != names.end()) {
      throw InputError(std::string("duplicate ") + what + " '" + *it + "'");
    }
  };
  check_unique(vertices_, "vertex");
  check_unique(colors_, "color");
}

std::size_t GrothendieckGraph::edge_count() const {
  std::size_t n = 0;
  for (const auto& s : slots_) n += s.size();
  return n;
}

std::optional<std::size_t> GrothendieckGraph::find_vertex(std::string_view name) const {
  auto it = std::find(vertices_.begin(), vertices_.end(), name);
  if (it == vertices_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - vertices_.begin());
}

std::optional<std::size_t> GrothendieckGraph::find_color(std::string_view name) const {
  auto it = std::find(colors_.begin(), colors_.end(), name);
  if (it == colors_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - colors_.begin());
}

void GrothendieckGraph::add_edge(std::size_t v, std::size_t g, std::size_t w) {
  if (v >= vertices_.size() || w >= vertices_.size() || g >= colors_.size()) {
    throw InputError("edge endpoint or color out of range");
  }
  auto& slot = slots_[v * colors_.size() + g];
  if (std::find(slot.begin(), slot.end(), w) == slot.end()) {
    slot.insert(std::upper_bound(slot.begin(), slot.end(), w), w);
  }
}

bool GrothendieckGraph::remove_edge(std::size_t v, std::size_t g, std::size_t w) {
  auto& slot = slots_[v * colors_.size() + g];
  auto it = std::find(slot.begin(), slot.end(), w);
  if (it == slot.end()) return false;
  slot.erase(it);
  return true;
}

bool GrothendieckGraph::has_edge(std::size_t v, std::size_t g, std::size_t w) const {
  const auto& slot = targets(v, g);
  return std::find(slot.begin(), slot.end(), w) != slot.end();
}

std::size_t GrothendieckGraph::target(std::size_t v, std::size_t g) const {
  const auto& slot = targets(v, g);
  if (slot.size() != 1) {
    throw InputError("vertex '" + vertices_[v] + "' has " + std::to_string(slot.size()) + " edges of color '" +
                     colors_[g] + "'");
  }
  return slot.front();
}

std::vector<Edge> GrothendieckGraph::edges() const {
  std::vector<Edge> out;
  for (std::size_t v = 0; v < vertices_.size(); ++v) {
    for (std::size_t g = 0; g < colors_.size(); ++g) {
      for (auto w : targets(v, g)) out.push_back({v, g, w});
    }
  }
  return out;
}

GrothendieckGraph build_graph(const Incarnation& inc) {
  std::vector<std::string> vertices, colors;
  for (const auto& m : inc.data().measurements()) vertices.push_back(m.name());
  for (const auto& op : inc.ops()) colors.push_back(op.name);
  GrothendieckGraph g(std::move(vertices), std::move(colors));
  for (std::size_t phi = 0; phi < inc.size(); ++phi) {
    for (std::size_t op = 0; op < inc.op_count(); ++op) g.add_edge(phi, op, inc.act(phi, op));
  }
  if (auto ok = validate_graph(g); !ok) throw InternalError("incarnation graph is malformed: " + ok.message, ok.witness);
  return g;
}

GraphCheck validate_graph(const GrothendieckGraph& g) {
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (std::size_t c = 0; c < g.color_count(); ++c) {
      const auto n = g.targets(v, c).size();
      if (n != 1) {
        return GraphCheck::fail("vertex has " + std::to_string(n) + " outgoing edges of one color",
                                {{"vertex", g.vertices()[v]}, {"color", g.colors()[c]}});
      }
    }
  }
  return GraphCheck::pass();
}

GraphCheck validate_morphism(const GrothendieckGraph& g, const GrothendieckGraph& h, const SetMap& alpha,
                             const SetMap& T) {
  if (alpha.size() != g.vertex_count() || T.size() != g.color_count()) {
    return GraphCheck::fail("morphism maps have the wrong size");
  }
  for (auto a : alpha) {
    if (a >= h.vertex_count()) return GraphCheck::fail("vertex map leaves the target graph");
  }
  for (auto t : T) {
    if (t >= h.color_count()) return GraphCheck::fail("color map leaves the target graph");
  }
  for (const auto& e : g.edges()) {
    if (!h.has_edge(alpha[e.source], T[e.color], alpha[e.target])) {
      return GraphCheck::fail("edge image is not an edge",
                              {{"vertex", g.vertices()[e.source]},
                               {"color", g.colors()[e.color]},
                               {"target", g.vertices()[e.target]}});
    }
  }
  return GraphCheck::pass();
}

MonoidStructure monoid_structure(const Incarnation& inc) {
  if (!inc.is_monoid()) throw HypothesisViolation("operations do not form a monoid");
  MonoidStructure m{inc.op_count(), *inc.identity_index(), {}};
  m.table.resize(m.size * m.size);
  for (std::size_t a = 0; a < m.size; ++a) {
    for (std::size_t b = 0; b < m.size; ++b) m.table[a * m.size + b] = *inc.product(a, b);
  }
  return m;
}

GraphCheck validate_monoid(const MonoidStructure& monoid) {
  const std::size_t n = monoid.size;
  if (monoid.table.size() != n * n || (n > 0 && monoid.identity >= n)) {
    return GraphCheck::fail("monoid table has the wrong shape");
  }
  for (auto c : monoid.table) {
    if (c >= n) return GraphCheck::fail("monoid table entry out of range");
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (monoid.mul(a, monoid.identity) != a || monoid.mul(monoid.identity, a) != a) {
      return GraphCheck::fail("identity is not a unit", {{"element", std::to_string(a)}});
    }
    for (std::size_t b = 0; b < n; ++b) {
      for (std::size_t c = 0; c < n; ++c) {
        if (monoid.mul(monoid.mul(a, b), c) != monoid.mul(a, monoid.mul(b, c))) {
          return GraphCheck::fail("multiplication is not associative",
                                  {{"a", std::to_string(a)}, {"b", std::to_string(b)}, {"c", std::to_string(c)}});
        }
      }
    }
  }
  return GraphCheck::pass();
}

GraphCheck is_monoid_compatible(const GrothendieckGraph& g, const MonoidStructure& monoid) {
  if (monoid.size != g.color_count()) return GraphCheck::fail("monoid size differs from the number of colors");
  if (auto ok = validate_monoid(monoid); !ok) return ok;
  if (g.color_count() == 0) {
    return g.vertex_count() == 0 ? GraphCheck::pass() : GraphCheck::fail("no identity color");
  }
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    if (!g.has_edge(v, monoid.identity, v)) {
      return GraphCheck::fail("identity edge missing", {{"vertex", g.vertices()[v]}});
    }
  }
  for (const auto& e0 : g.edges()) {
    for (std::size_t g1 = 0; g1 < g.color_count(); ++g1) {
      for (auto v2 : g.targets(e0.target, g1)) {
        const std::size_t h = monoid.mul(e0.color, g1);
        if (!g.has_edge(e0.source, h, v2)) {
          return GraphCheck::fail("composite edge missing",
                                  {{"first", g.vertices()[e0.source] + " " + g.colors()[e0.color] + " " +
                                                 g.vertices()[e0.target]},
                                   {"second", g.vertices()[e0.target] + " " + g.colors()[g1] + " " +
                                                  g.vertices()[v2]}});
        }
      }
    }
  }
  return GraphCheck::pass();
}

GraphCategory::GraphCategory(GrothendieckGraph graph, MonoidStructure monoid)
    : graph_(std::move(graph)), monoid_(std::move(monoid)) {
  if (auto ok = is_monoid_compatible(graph_, monoid_); !ok) {
    throw HypothesisViolation("graph is not compatible with the monoid: " + ok.message, ok.witness);
  }
}

Edge GraphCategory::compose(const Edge& first, const Edge& second) const {
  if (first.target != second.source) throw InputError("edges are not composable");
  return {first.source, monoid_.mul(first.color, second.color), second.target};
}

GraphCheck GraphCategory::verify_laws() const {
  const auto edges = graph_.edges();
  for (const auto& e : edges) {
    if (!(compose(identity(e.source), e) == e) || !(compose(e, identity(e.target)) == e)) {
      return GraphCheck::fail("unit law fails", {{"vertex", graph_.vertices()[e.source]},
                                                 {"color", graph_.colors()[e.color]}});
    }
    for (const auto& f : edges) {
      if (f.source != e.target) continue;
      const Edge ef = compose(e, f);
      if (!graph_.has_edge(ef.source, ef.color, ef.target)) return GraphCheck::fail("composite is not an arrow");
      for (const auto& k : edges) {
        if (k.source != f.target) continue;
        if (!(compose(ef, k) == compose(e, compose(f, k)))) {
          return GraphCheck::fail("associativity fails", {{"vertex", graph_.vertices()[e.source]}});
        }
      }
    }
  }
  return GraphCheck::pass();
}

GraphCheck validate_pseudometric(const GrothendieckGraph& g, const PseudometricMatrix& d) {
  const std::size_t n = g.vertex_count();
  if (d.size() != n) return GraphCheck::fail("matrix size differs from the number of vertices");
  for (std::size_t v = 0; v < n; ++v) {
    if (!d(v, v).is_zero()) return GraphCheck::fail("nonzero diagonal", {{"vertex", g.vertices()[v]}});
    for (std::size_t w = 0; w < n; ++w) {
      if (d(v, w).sign() < 0 || !(d(v, w) == d(w, v))) {
        return GraphCheck::fail("not a pseudometric", {{"v", g.vertices()[v]}, {"w", g.vertices()[w]}});
      }
      for (std::size_t u = 0; u < n; ++u) {
        if (d(v, u) + d(u, w) < d(v, w)) {
          return GraphCheck::fail("triangle inequality fails",
                                  {{"v", g.vertices()[v]}, {"u", g.vertices()[u]}, {"w", g.vertices()[w]}});
        }
      }
    }
  }
  if (auto ok = validate_graph(g); !ok) return ok;
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t w = 0; w < n; ++w) {
      for (std::size_t c = 0; c < g.color_count(); ++c) {
        if (d(v, w) < d(g.target(v, c), g.target(w, c))) {
          return GraphCheck::fail("operation expands the pseudometric",
                                  {{"v", g.vertices()[v]}, {"w", g.vertices()[w]}, {"color", g.colors()[c]}});
        }
      }
    }
  }
  return GraphCheck::pass();
}

PseudometricMatrix sup_distance_matrix(const DataSet& data) {
  PseudometricMatrix d(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = 0; j < data.size(); ++j) d(i, j) = sup_distance(data.values(i), data.values(j));
  }
  return d;
}

std::string to_dot(const GrothendieckGraph& g) {
  static const char* const palette[] = {"black", "red", "blue", "darkgreen", "orange", "purple", "brown", "cyan4"};
  auto quote = [](const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
      if (c == '"' || c == '\\') out += '\\';
      out += c;
    }
    return out + "\"";
  };
  std::ostringstream out;
  out << "digraph G {\n";
  for (const auto& v : g.vertices()) out << "  " << quote(v) << ";\n";
  for (const auto& e : g.edges()) {
    out << "  " << quote(g.vertices()[e.source]) << " -> " << quote(g.vertices()[e.target])
        << " [label=" << quote(g.colors()[e.color]) << ", color=" << palette[e.color % 8] << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace enriched

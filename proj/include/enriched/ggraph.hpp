#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "enriched/actions.hpp"
#include "enriched/constructions.hpp"
#include "enriched/errors.hpp"
#include "enriched/linalg.hpp"

namespace enriched {

struct Edge {
  std::size_t source;
  std::size_t color;
  std::size_t target;

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

// Outcome of an exhaustive check; on failure the first violation is reported.
struct GraphCheck {
  bool ok = true;
  std::string message;
  Witness witness;

  explicit operator bool() const { return ok; }
  static GraphCheck pass() { return {}; }
  static GraphCheck fail(std::string message, Witness witness = {}) {
    return {false, std::move(message), std::move(witness)};
  }
};

// (V, M, E). Edges are indexed by (vertex, color); a well-formed graph has
// exactly one target per slot, but arbitrary edge sets can be represented so
// that they can be validated.
class GrothendieckGraph {
 public:
  GrothendieckGraph() = default;
  GrothendieckGraph(std::vector<std::string> vertices, std::vector<std::string> colors);

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<std::string>& colors() const { return colors_; }
  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t color_count() const { return colors_.size(); }
  std::size_t edge_count() const;

  std::optional<std::size_t> find_vertex(std::string_view name) const;
  std::optional<std::size_t> find_color(std::string_view name) const;

  void add_edge(std::size_t v, std::size_t g, std::size_t w);
  bool remove_edge(std::size_t v, std::size_t g, std::size_t w);
  bool has_edge(std::size_t v, std::size_t g, std::size_t w) const;
  const std::vector<std::size_t>& targets(std::size_t v, std::size_t g) const { return slots_[v * colors_.size() + g]; }
  // vg; throws InputError unless the slot holds exactly one edge.
  std::size_t target(std::size_t v, std::size_t g) const;

  // All edges sorted by (source, color, target).
  std::vector<Edge> edges() const;

  friend bool operator==(const GrothendieckGraph&, const GrothendieckGraph&) = default;

 private:
  std::vector<std::string> vertices_;
  std::vector<std::string> colors_;
  std::vector<std::vector<std::size_t>> slots_;
};

// E_{Φ,M} = {(φ, g, φg)} with vertices named by measurements and colors by operations.
GrothendieckGraph build_graph(const Incarnation& inc);

// Exactly one outgoing edge per (vertex, color).
GraphCheck validate_graph(const GrothendieckGraph& g);

// (α, T): G → H with (α(v), T(g), α(w)) ∈ F for every (v, g, w) ∈ E.
GraphCheck validate_morphism(const GrothendieckGraph& g, const GrothendieckGraph& h, const SetMap& alpha,
                             const SetMap& T);

// A monoid structure on the colors. mul(a, b) is the color c with
// v·c = (v·a)·b, i.e. "apply a, then b".
struct MonoidStructure {
  std::size_t size = 0;
  std::size_t identity = 0;
  std::vector<std::size_t> table;

  std::size_t mul(std::size_t a, std::size_t b) const { return table[a * size + b]; }
};

// The composition table of M (requires a monoid incarnation).
MonoidStructure monoid_structure(const Incarnation& inc);
// Checks unit, associativity and range of a table.
GraphCheck validate_monoid(const MonoidStructure& monoid);

// (v, 1, v) ∈ E and, for (v0, g0, v1), (v1, g1, v2) ∈ E, (v0, mul(g0, g1), v2) ∈ E.
GraphCheck is_monoid_compatible(const GrothendieckGraph& g, const MonoidStructure& monoid);

// Gr_M V: objects are vertices, arrows are edges.
class GraphCategory {
 public:
  // Throws HypothesisViolation when the graph is not monoid compatible.
  GraphCategory(GrothendieckGraph graph, MonoidStructure monoid);

  const GrothendieckGraph& graph() const { return graph_; }
  const MonoidStructure& monoid() const { return monoid_; }

  Edge identity(std::size_t v) const { return {v, monoid_.identity, v}; }
  // (v0, g0, v1)(v1, g1, v2) = (v0, mul(g0, g1), v2). Throws InputError if not composable.
  Edge compose(const Edge& first, const Edge& second) const;

  // Unit and associativity laws over all composable arrows.
  GraphCheck verify_laws() const;

 private:
  GrothendieckGraph graph_;
  MonoidStructure monoid_;
};

// d(v, w) ≥ d(vg, wg) for all v, w, g; also checks that d is a pseudometric.
GraphCheck validate_pseudometric(const GrothendieckGraph& g, const PseudometricMatrix& d);

// ∥φ − ψ∥∞ on Φ, indexed like the measurements.
PseudometricMatrix sup_distance_matrix(const DataSet& data);

// Graphviz rendering, one color attribute per operation.
std::string to_dot(const GrothendieckGraph& g);

// Contravariant functor over a Grothendieck graph: one object per vertex, one
// arrow P(w) → P(v) per edge (v, g, w).
template <class Object, class Arrow>
struct GraphFunctor {
  GrothendieckGraph base;
  std::vector<Object> objects;
  std::map<Edge, Arrow> arrows;

  const Arrow& arrow(const Edge& e) const {
    auto it = arrows.find(e);
    if (it == arrows.end()) throw InputError("functor has no arrow for edge (" + base.vertices()[e.source] + ", " +
                                             base.colors()[e.color] + ", " + base.vertices()[e.target] + ")");
    return it->second;
  }

  friend bool operator==(const GraphFunctor&, const GraphFunctor&) = default;
};

// Arrow algebra for F_p matrix payloads: object = dimension.
struct MatrixArrows {
  // outer ∘ inner
  static FpMatrix compose(const FpMatrix& outer, const FpMatrix& inner) { return outer * inner; }
  static bool equal(const FpMatrix& a, const FpMatrix& b) { return a == b; }
};

// Functoriality: for composable (v0, g0, v1), (v1, g1, v2) and a composite edge
// (v0, h, v2), P(v0, h, v2) = P(v0, g0, v1) P(v1, g1, v2). With a monoid table
// the composite is h = mul(g0, g1); without one every h with v0·h = v2 is
// required to satisfy the equation.
template <class Object, class Arrow, class Ops = MatrixArrows>
GraphCheck check_functoriality(const GraphFunctor<Object, Arrow>& p, const MonoidStructure* monoid = nullptr) {
  const auto& g = p.base;
  if (auto valid = validate_graph(g); !valid) return valid;
  if (p.objects.size() != g.vertex_count()) return GraphCheck::fail("functor: one object per vertex is required");
  for (const auto& e : g.edges()) {
    if (!p.arrows.count(e)) {
      return GraphCheck::fail("functor: missing arrow",
                              {{"edge", g.vertices()[e.source] + " " + g.colors()[e.color] + " " + g.vertices()[e.target]}});
    }
  }
  for (std::size_t v0 = 0; v0 < g.vertex_count(); ++v0) {
    for (std::size_t g0 = 0; g0 < g.color_count(); ++g0) {
      const std::size_t v1 = g.target(v0, g0);
      for (std::size_t g1 = 0; g1 < g.color_count(); ++g1) {
        const std::size_t v2 = g.target(v1, g1);
        const Arrow composite = Ops::compose(p.arrow({v0, g0, v1}), p.arrow({v1, g1, v2}));
        for (std::size_t h = 0; h < g.color_count(); ++h) {
          if (monoid ? h != monoid->mul(g0, g1) : g.target(v0, h) != v2) continue;
          if (g.target(v0, h) != v2) {
            return GraphCheck::fail("functor: composite edge missing from the graph",
                                    {{"vertex", g.vertices()[v0]}, {"color", g.colors()[h]}});
          }
          if (!Ops::equal(p.arrow({v0, h, v2}), composite)) {
            return GraphCheck::fail("functoriality fails",
                                    {{"vertex", g.vertices()[v0]},
                                     {"first", g.colors()[g0]},
                                     {"second", g.colors()[g1]},
                                     {"composite", g.colors()[h]}});
          }
        }
      }
    }
  }
  return GraphCheck::pass();
}

// P∘(α, T) on H: objects P(α(v)), arrows P(α(v), T(g), α(w)).
template <class Object, class Arrow>
GraphFunctor<Object, Arrow> compose_functor(const GraphFunctor<Object, Arrow>& p, const GrothendieckGraph& h,
                                            const SetMap& alpha, const SetMap& T) {
  if (auto ok = validate_morphism(h, p.base, alpha, T); !ok) {
    throw HypothesisViolation("compose_functor: not a graph morphism: " + ok.message, ok.witness);
  }
  GraphFunctor<Object, Arrow> out{h, {}, {}};
  for (std::size_t v = 0; v < h.vertex_count(); ++v) out.objects.push_back(p.objects[alpha[v]]);
  for (const auto& e : h.edges()) out.arrows.emplace(e, p.arrow({alpha[e.source], T[e.color], alpha[e.target]}));
  return out;
}

// Edge-indexed family η_v: P(v) → Q(v) with Q(e) η_w = η_v P(e) for every edge e = (v, g, w).
template <class Object, class Arrow, class Ops = MatrixArrows>
GraphCheck check_natural_transformation(const GraphFunctor<Object, Arrow>& p, const GraphFunctor<Object, Arrow>& q,
                                        const std::vector<Arrow>& eta) {
  if (!(p.base == q.base)) return GraphCheck::fail("natural transformation: functors on different graphs");
  if (eta.size() != p.base.vertex_count()) return GraphCheck::fail("natural transformation: one component per vertex");
  for (const auto& e : p.base.edges()) {
    if (!Ops::equal(Ops::compose(q.arrow(e), eta[e.target]), Ops::compose(eta[e.source], p.arrow(e)))) {
      return GraphCheck::fail("naturality square fails", {{"vertex", p.base.vertices()[e.source]},
                                                          {"color", p.base.colors()[e.color]},
                                                          {"target", p.base.vertices()[e.target]}});
    }
  }
  return GraphCheck::pass();
}

}  // namespace enriched

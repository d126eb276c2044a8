#pragma once

// Fixtures, random instance generators and brute-force oracles shared by the
// unit tests and the acceptance binary. Nothing here calls into the library's
// algorithms; only its value types are used to build inputs.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "enriched/actions.hpp"
#include "enriched/dataset.hpp"

namespace testing_support {

using enriched::DataSet;
using enriched::Domain;
using enriched::Incarnation;
using enriched::Measurement;
using enriched::Operation;
using enriched::PointMap;
using enriched::Rational;
using enriched::Values;

using Rng = std::mt19937_64;

inline Values ints(std::initializer_list<int> xs) {
  Values out;
  for (int x : xs) out.emplace_back(x);
  return out;
}

inline Domain points(std::size_t n, const std::string& prefix = "x") {
  std::vector<std::string> ids;
  for (std::size_t i = 1; i <= n; ++i) ids.push_back(prefix + std::to_string(i));
  return Domain(ids);
}

inline DataSet named(const Domain& domain, const std::vector<std::pair<std::string, Values>>& entries) {
  std::vector<Measurement> ms;
  for (const auto& [name, v] : entries) ms.push_back({v, {name}});
  return DataSet(domain, ms);
}

// Four points, φ = (−1,0,0,1), ψ = (0,1,−1,0).
inline DataSet fixture_a_phi() { return named(points(4), {{"phi", ints({-1, 0, 0, 1})}}); }
inline DataSet fixture_a_psi() {
  return named(points(4), {{"phi", ints({-1, 0, 0, 1})}, {"psi", ints({0, 1, -1, 0})}});
}

inline PointMap table_map(const Domain& d, std::initializer_list<std::size_t> image) {
  return PointMap(d, d, std::vector<std::size_t>(image));
}

// Three points, three measurements, M = {id, g1, g2, g3}.
inline DataSet fixture_b_data() {
  return named(points(3), {{"phi1", ints({2, 2, 3})}, {"phi2", ints({2, 2, 2})}, {"phi3", ints({1, 2, 2})}});
}
inline Incarnation fixture_b() {
  const auto data = fixture_b_data();
  const auto& d = data.domain();
  return Incarnation(data, {{PointMap::identity(d), "id"},
                            {table_map(d, {1, 1, 2}), "g1"},
                            {table_map(d, {1, 1, 1}), "g2"},
                            {table_map(d, {0, 1, 1}), "g3"}});
}

// Constants {1,2} and {−1,1} on two points.
inline DataSet fixture_c_source() { return named(points(2), {{"one", ints({1, 1})}, {"two", ints({2, 2})}}); }
inline DataSet fixture_c_target() { return named(points(2), {{"minus_one", ints({-1, -1})}, {"one", ints({1, 1})}}); }

// ---------------------------------------------------------------- generators

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// A value in [−3, 3] ∩ ½Z.
inline Rational half_lattice(Rng& rng) {
  const auto k = std::uniform_int_distribution<int>(-6, 6)(rng);
  return Rational(k, 2);
}

inline Values random_values(Rng& rng, std::size_t n) {
  Values v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(half_lattice(rng));
  return v;
}

inline DataSet random_dataset(Rng& rng, std::size_t max_points = 6, std::size_t max_measurements = 4) {
  const std::size_t n = uniform(rng, 1, max_points);
  const std::size_t m = uniform(rng, 1, max_measurements);
  std::vector<Values> vs;
  for (std::size_t i = 0; i < m; ++i) vs.push_back(random_values(rng, n));
  return DataSet::from_values(points(n), vs, "m");
}

inline std::vector<std::size_t> random_image(Rng& rng, std::size_t from, std::size_t to) {
  std::vector<std::size_t> image(from);
  for (auto& y : image) y = uniform(rng, 0, to - 1);
  return image;
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

inline Values pullback(const Values& phi, const std::vector<std::size_t>& g) {
  Values out;
  for (auto x : g) out.push_back(phi[x]);
  return out;
}

// Closure of seed measurements under right action by the maps, or nullopt if
// it exceeds the cap.
inline std::optional<std::vector<Values>> closure(std::vector<Values> seeds,
                                                  const std::vector<std::vector<std::size_t>>& maps,
                                                  std::size_t cap) {
  std::vector<Values> out;
  std::set<Values> seen;
  for (auto& s : seeds) {
    if (seen.insert(s).second) out.push_back(s);
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : maps) {
      auto v = pullback(out[i], g);
      if (seen.insert(v).second) {
        out.push_back(v);
        if (out.size() > cap) return std::nullopt;
      }
    }
  }
  return out;
}

// A random incarnation with |Φ| ≤ max_measurements and |M| ≤ max_ops, built by
// closing random seeds under random maps. Values are drawn from a small range
// so that maps have a chance to act nontrivially.
inline Incarnation random_incarnation(Rng& rng, std::size_t max_points = 4, std::size_t max_measurements = 8,
                                      std::size_t max_ops = 4, bool with_identity = false) {
  for (;;) {
    const std::size_t n = uniform(rng, 1, max_points);
    const std::size_t ops = uniform(rng, 0, max_ops - (with_identity ? 1 : 0));
    std::vector<std::vector<std::size_t>> maps;
    for (std::size_t k = 0; k < ops; ++k) maps.push_back(random_image(rng, n, n));
    std::vector<Values> seeds;
    const std::size_t m = uniform(rng, 1, 3);
    for (std::size_t k = 0; k < m; ++k) {
      Values v;
      for (std::size_t i = 0; i < n; ++i) v.emplace_back(static_cast<std::int64_t>(uniform(rng, 0, 2)));
      seeds.push_back(v);
    }
    auto phi = closure(seeds, maps, max_measurements);
    if (!phi) continue;
    const auto domain = points(n);
    const auto data = DataSet::from_values(domain, *phi, "m");
    std::vector<Operation> list;
    if (with_identity) list.push_back({PointMap::identity(domain), "id"});
    for (std::size_t k = 0; k < maps.size(); ++k) list.push_back({PointMap(domain, domain, maps[k]), "g" + std::to_string(k + 1)});
    return Incarnation(data, list);
  }
}

inline std::vector<std::size_t> compose_maps(const std::vector<std::size_t>& outer, const std::vector<std::size_t>& inner) {
  std::vector<std::size_t> out(inner.size());
  for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
  return out;
}

// All elements of the group generated by the permutations, identity first.
inline std::vector<std::vector<std::size_t>> group_closure(std::size_t n, const std::vector<std::vector<std::size_t>>& gens) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  std::vector<std::vector<std::size_t>> out{id};
  std::set<std::vector<std::size_t>> seen{id};
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& g : gens) {
      auto h = compose_maps(g, out[i]);
      if (seen.insert(h).second) out.push_back(h);
    }
  }
  return out;
}

inline std::vector<std::size_t> rotation(std::size_t n) {
  std::vector<std::size_t> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = (i + 1) % n;
  return g;
}

inline std::vector<std::size_t> transposition(std::size_t n, std::size_t a, std::size_t b) {
  std::vector<std::size_t> g(n);
  std::iota(g.begin(), g.end(), 0);
  std::swap(g[a], g[b]);
  return g;
}

// Group incarnation: the orbit of one measurement under a full group of
// permutations, with M the whole group.
inline Incarnation orbit_incarnation(const Values& seed, const std::vector<std::vector<std::size_t>>& group,
                                     const std::string& prefix = "m") {
  const std::size_t n = seed.size();
  auto phi = closure({seed}, group, 1000);
  const auto domain = points(n);
  std::vector<Operation> ops;
  for (std::size_t k = 0; k < group.size(); ++k) ops.push_back({PointMap(domain, domain, group[k]), "h" + std::to_string(k)});
  return Incarnation(DataSet::from_values(domain, *phi, prefix), ops);
}

// --------------------------------------------------------------- oracles

// max over measurements of |φ(x) − φ(y)|.
inline Rational oracle_distance(const DataSet& data, std::size_t x, std::size_t y) {
  Rational best = 0;
  for (const auto& m : data.measurements()) best = enriched::max(best, (m.values[x] - m.values[y]).abs());
  return best;
}

inline Rational oracle_sup(const Values& a, const Values& b) {
  Rational best = 0;
  for (std::size_t i = 0; i < a.size(); ++i) best = enriched::max(best, (a[i] - b[i]).abs());
  return best;
}

// Rank over F_p by plain elimination on a copy.
inline std::size_t oracle_rank(std::vector<std::vector<std::int64_t>> a, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  auto inv = [p](std::int64_t x) {
    std::int64_t r = 1, b = x % p, e = p - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p;
      b = b * b % p;
      e >>= 1;
    }
    return r;
  };
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && a[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[rank]);
    const std::int64_t k = inv(((a[rank][c] % p) + p) % p);
    for (auto& v : a[rank]) v = ((v * k) % p + p) % p;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::int64_t f = ((a[r][c] % p) + p) % p;
      if (!f) continue;
      for (std::size_t j = 0; j < cols; ++j) a[r][j] = ((a[r][j] - f * a[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// dim H_d of the VR complex on the given points at scale r, from boundary
// matrices over every subset of the points.
inline std::size_t oracle_homology(const std::vector<std::size_t>& pts,
                                   const std::vector<std::vector<Rational>>& dist, const Rational& r,
                                   std::size_t degree, std::int64_t p) {
  const std::size_t n = pts.size();
  auto simplices = [&](std::size_t size) {
    std::vector<std::vector<std::size_t>> out;
    if (size == 0 || size > n) return out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
      if (static_cast<std::size_t>(__builtin_popcount(mask)) != size) continue;
      std::vector<std::size_t> s;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask & (1u << i)) s.push_back(pts[i]);
      }
      bool ok = true;
      for (std::size_t a = 0; a < s.size() && ok; ++a) {
        for (std::size_t b = a + 1; b < s.size() && ok; ++b) ok = dist[s[a]][s[b]] <= r;
      }
      if (ok) {
        std::sort(s.begin(), s.end());
        out.push_back(s);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  auto boundary_rank = [&](const std::vector<std::vector<std::size_t>>& hi,
                           const std::vector<std::vector<std::size_t>>& lo) -> std::size_t {
    if (hi.empty() || lo.empty()) return 0;
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t i = 0; i < lo.size(); ++i) index[lo[i]] = i;
    std::vector<std::vector<std::int64_t>> m(lo.size(), std::vector<std::int64_t>(hi.size(), 0));
    for (std::size_t c = 0; c < hi.size(); ++c) {
      for (std::size_t k = 0; k < hi[c].size(); ++k) {
        auto face = hi[c];
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(k));
        m[index.at(face)][c] = (k % 2 == 0) ? 1 : p - 1;
      }
    }
    return oracle_rank(m, p);
  };
  const auto cells = simplices(degree + 1);
  const auto faces = degree == 0 ? std::vector<std::vector<std::size_t>>{} : simplices(degree);
  const auto cofaces = simplices(degree + 2);
  const std::size_t kernel = cells.size() - boundary_rank(cells, faces);
  return kernel - boundary_rank(cofaces, cells);
}

inline std::vector<std::vector<Rational>> oracle_metric(const DataSet& data) {
  const std::size_t n = data.domain().size();
  std::vector<std::vector<Rational>> d(n, std::vector<Rational>(n));
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) d[x][y] = oracle_distance(data, x, y);
  }
  return d;
}

// dim H_d(VR_r({φ ≤ s}, d_Φ)).
inline std::size_t oracle_ph(const DataSet& data, const Values& phi, const Rational& r, const Rational& s,
                             std::size_t degree, std::int64_t p = 2) {
  std::vector<std::size_t> pts;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    if (phi[x] <= s) pts.push_back(x);
  }
  return oracle_homology(pts, oracle_metric(data), r, degree, p);
}

// Closure ΩM by breadth-first search over single steps.
inline std::set<std::size_t> oracle_closure(const Incarnation& inc, const std::vector<std::size_t>& omega) {
  std::set<std::size_t> seen(omega.begin(), omega.end());
  std::vector<std::size_t> queue(omega.begin(), omega.end());
  while (!queue.empty()) {
    const auto phi = queue.back();
    queue.pop_back();
    const auto& v = inc.data().values(phi);
    for (const auto& op : inc.ops()) {
      const auto w = pullback(v, op.map.image());
      const auto idx = *inc.data().find(w);
      if (seen.insert(idx).second) queue.push_back(idx);
    }
  }
  return seen;
}

inline bool oracle_is_basis(const Incarnation& inc, const std::vector<std::size_t>& omega) {
  for (auto w : omega) {
    for (auto w2 : omega) {
      if (w != w2 && oracle_closure(inc, {w2}).count(w)) return false;
    }
  }
  return oracle_closure(inc, omega).size() == inc.size();
}

// Perfect matching in a bipartite graph given as adjacency lists.
inline bool has_perfect_matching(const std::vector<std::vector<std::size_t>>& adj, std::size_t right) {
  std::vector<std::optional<std::size_t>> match(right);
  std::vector<bool> used;
  std::function<bool(std::size_t)> augment = [&](std::size_t u) {
    for (auto v : adj[u]) {
      if (used[v]) continue;
      used[v] = true;
      if (!match[v] || augment(*match[v])) {
        match[v] = u;
        return true;
      }
    }
    return false;
  };
  for (std::size_t u = 0; u < adj.size(); ++u) {
    used.assign(right, false);
    if (!augment(u)) return false;
  }
  return true;
}

// Calls visit on every function {0..from-1} → {0..to-1}.
template <class F>
void for_each_function(std::size_t from, std::size_t to, F&& visit) {
  std::vector<std::size_t> f(from, 0);
  if (to == 0) {
    if (from == 0) visit(f);
    return;
  }
  for (;;) {
    visit(f);
    std::size_t i = 0;
    while (i < from && ++f[i] == to) f[i++] = 0;
    if (i == from) return;
  }
}

}  // namespace testing_support

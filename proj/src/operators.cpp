#include "enriched/operators.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <set>

#include "enriched/errors.hpp"

namespace enriched {

namespace {

void check_index_map(const SetMap& map, std::size_t source_size, std::size_t target_size, const char* what) {
  if (map.size() != source_size) {
    throw InputError(std::string(what) + " must assign exactly " + std::to_string(source_size) + " elements, got " +
                     std::to_string(map.size()));
  }
  for (std::size_t i = 0; i < map.size(); ++i) {
    if (map[i] >= target_size) {
      throw HypothesisViolation(std::string(what) + " sends element " + std::to_string(i) + " outside its codomain",
                                {{"element", std::to_string(i)}});
    }
  }
}

bool is_bijection(const SetMap& map, std::size_t target_size) {
  if (map.size() != target_size) return false;
  std::vector<bool> hit(target_size, false);
  for (auto v : map) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

// Candidate images f(y) for a realization of α, point by point.
std::vector<std::vector<std::size_t>> realization_candidates(const DataSet& source, const DataSet& target,
                                                             const SetMap& alpha) {
  check_index_map(alpha, source.size(), target.size(), "alpha");
  const std::size_t nx = source.domain().size();
  const std::size_t ny = target.domain().size();
  std::vector<std::vector<std::size_t>> candidates(ny);
  for (std::size_t y = 0; y < ny; ++y) {
    for (std::size_t x = 0; x < nx; ++x) {
      bool ok = true;
      for (std::size_t phi = 0; phi < source.size() && ok; ++phi) {
        ok = source.values(phi)[x] == target.values(alpha[phi])[y];
      }
      if (ok) candidates[y].push_back(x);
    }
  }
  return candidates;
}

bool is_seo_realization(const Seo& seo, const PointMap& f) {
  const auto& X = seo.source.domain();
  const auto& Y = seo.target.domain();
  if (!(f.source() == Y) || !(f.target() == X)) return false;
  for (std::size_t phi = 0; phi < seo.source.size(); ++phi) {
    if (precompose(seo.source.data().values(phi), f) != seo.target.data().values(seo.alpha[phi])) return false;
  }
  for (std::size_t g = 0; g < seo.source.op_count(); ++g) {
    const auto& gx = seo.source.op(g);
    const auto& ty = seo.target.op(seo.T[g]);
    for (std::size_t y = 0; y < Y.size(); ++y) {
      if (gx(f(y)) != f(ty(y))) return false;
    }
  }
  return true;
}

// Equivariance, flags and realization for a pair already known to be total.
Seo finish_seo(const Incarnation& source, const Incarnation& target, const SetMap& alpha, const SetMap& T,
               std::optional<PointMap> known_realization) {
  check_index_map(alpha, source.size(), target.size(), "alpha");
  check_index_map(T, source.op_count(), target.op_count(), "T");
  if (auto bad = equivariance_failure(source, target, alpha, T)) {
    const auto [phi, g] = *bad;
    throw HypothesisViolation(
        "equivariance fails at (" + source.data()[phi].name() + ", " + source.ops()[g].name + ")",
        {{"measurement", source.data()[phi].name()},
         {"operation", source.ops()[g].name},
         {"alpha(phi g)", target.data()[alpha[source.act(phi, g)]].name()},
         {"alpha(phi) T(g)", target.data()[target.act(alpha[phi], T[g])].name()}});
  }
  Seo seo{source, target, alpha, T, false, false, std::nullopt};
  seo.is_meo = is_monoid_hom(source, target, T);
  seo.is_geo = seo.is_meo && source.is_group() && target.is_group();
  if (known_realization) {
    if (!is_seo_realization(seo, *known_realization)) {
      throw InternalError("constructed map is not a realization of the operator");
    }
    seo.realization = std::move(known_realization);
  } else {
    seo.realization = find_seo_realization(seo).realization;
  }
  return seo;
}

std::string word_name(const Incarnation& inc, const std::vector<std::size_t>& word) {
  if (word.empty()) return "()";
  std::string out = "(";
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) out += " ";
    out += inc.ops()[word[i]].name;
  }
  return out + ")";
}

}  // namespace

bool Seo::is_isomorphism() const {
  return is_bijection(alpha, target.size()) && is_bijection(T, target.op_count());
}

bool same_seo(const Seo& a, const Seo& b) {
  return a.source == b.source && a.target == b.target && a.alpha == b.alpha && a.T == b.T;
}

std::optional<std::pair<std::size_t, std::size_t>> equivariance_failure(const Incarnation& source,
                                                                       const Incarnation& target,
                                                                       const SetMap& alpha, const SetMap& T) {
  for (std::size_t phi = 0; phi < source.size(); ++phi) {
    for (std::size_t g = 0; g < source.op_count(); ++g) {
      if (alpha[source.act(phi, g)] != target.act(alpha[phi], T[g])) return std::pair{phi, g};
    }
  }
  return std::nullopt;
}

Seo validate_seo(const Incarnation& source, const Incarnation& target, const SetMap& alpha, const SetMap& T) {
  return finish_seo(source, target, alpha, T, std::nullopt);
}

Seo validate_seo(const Incarnation& source, const Incarnation& target, const SetMap& alpha,
                 const std::vector<PointMap>& T) {
  SetMap indices;
  for (std::size_t g = 0; g < T.size(); ++g) {
    auto h = target.find_op(T[g]);
    if (!h) {
      const std::string name = g < source.op_count() ? source.ops()[g].name : std::to_string(g);
      throw HypothesisViolation("T sends '" + name + "' outside the target operations", {{"operation", name}});
    }
    indices.push_back(*h);
  }
  return validate_seo(source, target, alpha, indices);
}

Seo identity_seo(const Incarnation& inc) {
  SetMap alpha(inc.size()), T(inc.op_count());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = i;
  for (std::size_t g = 0; g < T.size(); ++g) T[g] = g;
  return finish_seo(inc, inc, alpha, T, PointMap::identity(inc.domain()));
}

Seo canonical_seo(const Incarnation& inc, const Incarnation& universal) {
  if (!(inc.data() == universal.data())) throw InputError("canonical SEO: data sets differ");
  SetMap alpha(inc.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = i;
  std::vector<PointMap> T;
  for (const auto& op : inc.ops()) T.push_back(op.map);
  SetMap indices;
  for (const auto& g : T) {
    auto h = universal.find_op(g);
    if (!h) throw InputError("canonical SEO: target is not universal for the data set");
    indices.push_back(*h);
  }
  return finish_seo(inc, universal, alpha, indices, PointMap::identity(inc.domain()));
}

Seo compose_seo(const Seo& first, const Seo& second) {
  if (!(first.target == second.source)) throw InputError("cannot compose SEOs: endpoints do not match");
  SetMap alpha(first.alpha.size()), T(first.T.size());
  for (std::size_t i = 0; i < alpha.size(); ++i) alpha[i] = second.alpha[first.alpha[i]];
  for (std::size_t g = 0; g < T.size(); ++g) T[g] = second.T[first.T[g]];
  std::optional<PointMap> realization;
  if (first.realization && second.realization) realization = compose(*first.realization, *second.realization);
  try {
    return finish_seo(first.source, second.target, alpha, T, std::move(realization));
  } catch (const HypothesisViolation& e) {
    throw InternalError(std::string("composite of SEOs is not equivariant: ") + e.what(), e.witness());
  }
}

RealizationSearch find_realization(const DataSet& source, const DataSet& target, const SetMap& alpha) {
  const auto candidates = realization_candidates(source, target, alpha);
  std::vector<std::size_t> image;
  for (std::size_t y = 0; y < candidates.size(); ++y) {
    if (candidates[y].empty()) return {std::nullopt, y};
    image.push_back(candidates[y].front());
  }
  return {PointMap(target.domain(), source.domain(), std::move(image)), std::nullopt};
}

std::vector<PointMap> all_realizations(const DataSet& source, const DataSet& target, const SetMap& alpha) {
  const auto candidates = realization_candidates(source, target, alpha);
  for (const auto& c : candidates) {
    if (c.empty()) return {};
  }
  std::vector<PointMap> out;
  std::vector<std::size_t> choice(candidates.size(), 0);
  while (true) {
    std::vector<std::size_t> image;
    for (std::size_t y = 0; y < candidates.size(); ++y) image.push_back(candidates[y][choice[y]]);
    out.emplace_back(target.domain(), source.domain(), std::move(image));
    std::size_t pos = candidates.size();
    while (pos > 0) {
      --pos;
      if (++choice[pos] < candidates[pos].size()) break;
      choice[pos] = 0;
      if (pos == 0) return out;
    }
    if (candidates.empty()) return out;
  }
}

RealizationSearch find_seo_realization(const Seo& seo) {
  const auto candidates = realization_candidates(seo.source.data(), seo.target.data(), seo.alpha);
  const std::size_t ny = candidates.size();
  for (std::size_t y = 0; y < ny; ++y) {
    if (candidates[y].empty()) return {std::nullopt, y};
  }
  const std::size_t m = seo.source.op_count();
  std::vector<std::vector<bool>> allowed(ny, std::vector<bool>(seo.source.domain().size(), false));
  for (std::size_t y = 0; y < ny; ++y) {
    for (auto x : candidates[y]) allowed[y][x] = true;
  }
  // preimages[y] lists (y', g) with T(g)(y') = y.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> preimages(ny);
  for (std::size_t g = 0; g < m; ++g) {
    const auto& tg = seo.target.op(seo.T[g]);
    for (std::size_t y = 0; y < ny; ++y) preimages[tg(y)].emplace_back(y, g);
  }

  constexpr std::size_t kUnset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> f(ny, kUnset);
  std::vector<std::size_t> trail;

  // Assigns f(y) = x and everything it forces; false on conflict.
  auto propagate = [&](std::size_t y0, std::size_t x0) {
    std::vector<std::pair<std::size_t, std::size_t>> stack{{y0, x0}};
    while (!stack.empty()) {
      auto [y, x] = stack.back();
      stack.pop_back();
      if (f[y] != kUnset) {
        if (f[y] != x) return false;
        continue;
      }
      if (!allowed[y][x]) return false;
      f[y] = x;
      trail.push_back(y);
      for (std::size_t g = 0; g < m; ++g) {
        // g(f(y)) = f(T(g)(y))
        stack.emplace_back(seo.target.op(seo.T[g])(y), seo.source.op(g)(x));
      }
      for (const auto& [yp, g] : preimages[y]) {
        if (f[yp] != kUnset && seo.source.op(g)(f[yp]) != x) return false;
      }
    }
    return true;
  };

  std::function<bool(std::size_t)> search = [&](std::size_t y) -> bool {
    while (y < ny && f[y] != kUnset) ++y;
    if (y == ny) return true;
    for (auto x : candidates[y]) {
      const std::size_t mark = trail.size();
      if (propagate(y, x) && search(y + 1)) return true;
      while (trail.size() > mark) {
        f[trail.back()] = kUnset;
        trail.pop_back();
      }
    }
    return false;
  };

  if (!search(0)) return {std::nullopt, std::nullopt};
  return {PointMap(seo.target.domain(), seo.source.domain(), f), std::nullopt};
}

OperatorResult restriction(const Incarnation& inc, const std::vector<std::string>& subset) {
  const auto& X = inc.domain();
  std::vector<bool> in_subset(X.size(), false);
  for (const auto& id : subset) in_subset[X.index_of(id)] = true;
  std::vector<std::string> ids;
  std::vector<std::size_t> inclusion;
  for (std::size_t x = 0; x < X.size(); ++x) {
    if (in_subset[x]) {
      ids.push_back(X.id(x));
      inclusion.push_back(x);
    }
  }
  for (std::size_t g = 0; g < inc.op_count(); ++g) {
    for (auto y : inclusion) {
      const auto gy = inc.op(g)(y);
      if (!in_subset[gy]) {
        throw HypothesisViolation("subset is not invariant: " + inc.ops()[g].name + " sends " + X.id(y) + " to " +
                                      X.id(gy),
                                  {{"point", X.id(y)}, {"operation", inc.ops()[g].name}, {"image", X.id(gy)}});
      }
    }
  }
  const Domain Y(std::move(ids));
  const PointMap i_Y(Y, X, inclusion);
  auto restricted = domain_change(inc.data(), i_Y, "Y");

  std::vector<std::size_t> position(X.size(), 0);
  for (std::size_t k = 0; k < inclusion.size(); ++k) position[inclusion[k]] = k;
  std::vector<Operation> ops;
  std::vector<PointMap> restricted_maps;
  for (const auto& op : inc.ops()) {
    std::vector<std::size_t> image;
    for (auto y : inclusion) image.push_back(position[op.map(y)]);
    restricted_maps.emplace_back(Y, Y, image);
    ops.push_back({restricted_maps.back(), op.name});
  }
  Incarnation target(std::move(restricted.data), std::move(ops));
  SetMap T;
  for (const auto& g : restricted_maps) T.push_back(*target.find_op(g));
  Seo seo = finish_seo(inc, target, restricted.transport, T, i_Y);
  return {std::move(target), std::move(seo)};
}

OperatorResult domain_change_incarnation(const Incarnation& inc, const PointMap& f) {
  if (!(f.target() == inc.domain())) throw DomainMismatch("domain change: map target is not the incarnation domain");
  auto inverse = f.inverse();
  if (!inverse) throw HypothesisViolation("domain change of an incarnation needs a bijection");
  auto changed = domain_change(inc.data(), f);
  std::vector<Operation> ops;
  std::vector<PointMap> conjugates;
  for (const auto& op : inc.ops()) {
    conjugates.push_back(compose(*inverse, compose(op.map, f)));
    ops.push_back({conjugates.back(), op.name});
  }
  Incarnation target(std::move(changed.data), std::move(ops));
  SetMap T;
  for (const auto& g : conjugates) T.push_back(*target.find_op(g));
  Seo seo = finish_seo(inc, target, changed.transport, T, f);
  return {std::move(target), std::move(seo)};
}

OperatorResult change_units_seo(const ValueMap& f, const Incarnation& inc) {
  auto changed = change_units(f, inc.data());
  Incarnation target;
  try {
    target = Incarnation(std::move(changed.data), inc.ops());
  } catch (const InvalidIncarnation& e) {
    throw InternalError(std::string("operation lost under change of units: ") + e.what(), e.witness());
  }
  SetMap T(inc.op_count());
  for (std::size_t g = 0; g < T.size(); ++g) T[g] = g;
  Seo seo = finish_seo(inc, target, changed.transport, T, std::nullopt);
  return {std::move(target), std::move(seo)};
}

Seo change_units_functor(const ValueMap& f, const Seo& seo) {
  if (!f.is_invertible()) {
    throw HypothesisViolation("change-of-units functor needs an invertible value map, got " + f.describe());
  }
  auto source = change_units_seo(f, seo.source);
  auto target = change_units_seo(f, seo.target);
  // f− is a bijection Φ → fΦ; invert it.
  SetMap back(source.incarnation.size());
  for (std::size_t phi = 0; phi < seo.source.size(); ++phi) back[source.seo.alpha[phi]] = phi;
  SetMap alpha(back.size());
  for (std::size_t i = 0; i < back.size(); ++i) alpha[i] = target.seo.alpha[seo.alpha[back[i]]];
  return finish_seo(source.incarnation, target.incarnation, alpha, seo.T, std::nullopt);
}

std::string to_string(ExtensionVariant variant) {
  switch (variant) {
    case ExtensionVariant::seo:
      return "seo";
    case ExtensionVariant::meo:
      return "meo";
    case ExtensionVariant::geo:
      return "geo";
  }
  return "seo";
}

bool is_monoid_hom(const Incarnation& source, const Incarnation& target, const SetMap& T) {
  if (!source.is_monoid() || !target.is_monoid()) return false;
  if (T.size() != source.op_count()) return false;
  if (T[*source.identity_index()] != *target.identity_index()) return false;
  for (std::size_t g = 0; g < source.op_count(); ++g) {
    for (std::size_t h = 0; h < source.op_count(); ++h) {
      if (target.product(T[g], T[h]) != T[*source.product(g, h)]) return false;
    }
  }
  return true;
}

std::vector<std::size_t> isotropy(const Incarnation& inc, std::size_t omega) {
  std::vector<std::size_t> out;
  for (std::size_t g = 0; g < inc.op_count(); ++g) {
    if (inc.act(omega, g) == omega) out.push_back(g);
  }
  return out;
}

Seo extend_from_basis(const Incarnation& source, const Incarnation& target, const MeasurementSet& basis,
                      const SetMap& basis_images, const SetMap& T, ExtensionVariant variant,
                      const ExtensionOptions& options) {
  if (basis_images.size() != basis.size()) throw InputError("extension: one image per basis element is required");
  for (auto w : basis) {
    if (w >= source.size()) throw InputError("extension: basis index out of range");
  }
  if (!is_basis(basis, source)) throw HypothesisViolation("extension: the given set is not a basis of the source");
  check_index_map(basis_images, basis.size(), target.size(), "basis images");
  check_index_map(T, source.op_count(), target.op_count(), "T");

  const std::size_t n = source.size();
  const std::size_t m = source.op_count();
  std::vector<std::optional<std::size_t>> alpha(n);

  if (variant == ExtensionVariant::seo) {
    // Breadth-first search over pairs (ωw, ᾱ(ω)T(w)). Two pairs with the same
    // first component and different second components are a relation whose
    // image is not a relation.
    const std::size_t np = target.size();
    struct Visit {
      std::size_t parent;
      std::size_t op;
      std::size_t depth;
    };
    constexpr std::size_t kRoot = static_cast<std::size_t>(-1);
    std::vector<std::optional<Visit>> visited(n * np);
    std::vector<std::size_t> first_state(n, kRoot);
    std::deque<std::size_t> queue;

    auto path = [&](std::size_t state) {
      std::vector<std::size_t> word;
      while (visited[state]->parent != kRoot) {
        word.push_back(visited[state]->op);
        state = visited[state]->parent;
      }
      std::reverse(word.begin(), word.end());
      return std::pair{state / np, word};
    };
    auto record = [&](std::size_t state) {
      const std::size_t phi = state / np;
      if (first_state[phi] == kRoot) {
        first_state[phi] = state;
        return;
      }
      if (first_state[phi] == state) return;
      const auto [w1, word1] = path(first_state[phi]);
      const auto [w2, word2] = path(state);
      throw HypothesisViolation(
          "relation between " + source.data()[w1].name() + " and " + source.data()[w2].name() +
              " is not preserved",
          {{"measurement", source.data()[w1].name()},
           {"word", word_name(source, word1)},
           {"other_measurement", source.data()[w2].name()},
           {"other_word", word_name(source, word2)},
           {"common_value", source.data()[phi].name()},
           {"image", target.data()[first_state[phi] % np].name()},
           {"other_image", target.data()[state % np].name()}});
    };

    for (std::size_t k = 0; k < basis.size(); ++k) {
      const std::size_t state = basis[k] * np + basis_images[k];
      if (visited[state]) continue;
      visited[state] = Visit{kRoot, 0, 0};
      record(state);
      queue.push_back(state);
    }
    while (!queue.empty()) {
      const std::size_t state = queue.front();
      queue.pop_front();
      const std::size_t depth = visited[state]->depth;
      if (options.max_word_length && depth >= *options.max_word_length) continue;
      for (std::size_t g = 0; g < m; ++g) {
        const std::size_t next = source.act(state / np, g) * np + target.act(state % np, T[g]);
        if (visited[next]) continue;
        visited[next] = Visit{state, g, depth + 1};
        record(next);
        queue.push_back(next);
      }
    }
    for (std::size_t phi = 0; phi < n; ++phi) {
      if (first_state[phi] == kRoot) {
        throw HypothesisViolation("extension: word-length bound too small to reach " + source.data()[phi].name(),
                                  {{"measurement", source.data()[phi].name()}});
      }
      alpha[phi] = first_state[phi] % np;
    }
  } else {
    if (variant == ExtensionVariant::meo && (!source.is_monoid() || !target.is_monoid())) {
      throw HypothesisViolation("MEO extension needs monoid incarnations");
    }
    if (variant == ExtensionVariant::geo && (!source.is_group() || !target.is_group())) {
      throw HypothesisViolation("GEO extension needs group incarnations");
    }
    if (!is_monoid_hom(source, target, T)) {
      throw HypothesisViolation(variant == ExtensionVariant::geo ? "T is not a group homomorphism"
                                                                 : "T is not a monoid homomorphism");
    }
    if (variant == ExtensionVariant::geo) {
      for (std::size_t k = 0; k < basis.size(); ++k) {
        for (auto g : isotropy(source, basis[k])) {
          if (target.act(basis_images[k], T[g]) != basis_images[k]) {
            throw HypothesisViolation("T(g) does not fix the image of " + source.data()[basis[k]].name() +
                                          " although g fixes it",
                                      {{"measurement", source.data()[basis[k]].name()},
                                       {"operation", source.ops()[g].name},
                                       {"image", target.data()[basis_images[k]].name()}});
          }
        }
      }
    }
    // α(ωg) := ᾱ(ω)T(g), checked over every coincidence ωg = ω′h.
    std::vector<std::pair<std::size_t, std::size_t>> origin(n, {0, 0});
    for (std::size_t k = 0; k < basis.size(); ++k) {
      for (std::size_t g = 0; g < m; ++g) {
        const std::size_t phi = source.act(basis[k], g);
        const std::size_t value = target.act(basis_images[k], T[g]);
        if (!alpha[phi]) {
          alpha[phi] = value;
          origin[phi] = {k, g};
          continue;
        }
        if (*alpha[phi] != value) {
          const auto [k0, g0] = origin[phi];
          Witness witness{{"measurement", source.data()[basis[k0]].name()},
                          {"operation", source.ops()[g0].name},
                          {"other_measurement", source.data()[basis[k]].name()},
                          {"other_operation", source.ops()[g].name},
                          {"common_value", source.data()[phi].name()}};
          if (variant == ExtensionVariant::geo) {
            throw InternalError("GEO extension is not well defined", std::move(witness));
          }
          throw HypothesisViolation("coincidence " + source.data()[basis[k0]].name() + " " + source.ops()[g0].name +
                                        " = " + source.data()[basis[k]].name() + " " + source.ops()[g].name +
                                        " is not preserved",
                                    std::move(witness));
        }
      }
    }
    for (std::size_t k = 0; k < basis.size(); ++k) {
      if (alpha[basis[k]] != basis_images[k]) {
        throw HypothesisViolation("extension does not restrict to the prescribed basis images",
                                  {{"measurement", source.data()[basis[k]].name()}});
      }
    }
  }

  SetMap total;
  for (std::size_t phi = 0; phi < n; ++phi) {
    if (!alpha[phi]) throw InternalError("extension left a measurement unassigned");
    total.push_back(*alpha[phi]);
  }
  try {
    return finish_seo(source, target, total, T, std::nullopt);
  } catch (const HypothesisViolation& e) {
    throw InternalError(std::string("extension is not equivariant: ") + e.what(), e.witness());
  }
}

std::vector<Seo> enumerate_geos(const Incarnation& source, std::size_t omega, const Incarnation& target,
                                const SetMap& T) {
  if (!source.is_group() || blocks(source).size() != 1) {
    throw HypothesisViolation("GEO enumeration needs a transitive group incarnation as source");
  }
  if (!target.is_group()) throw HypothesisViolation("GEO enumeration needs a group incarnation as target");
  check_index_map(T, source.op_count(), target.op_count(), "T");
  if (!is_monoid_hom(source, target, T)) throw HypothesisViolation("T is not a group homomorphism");
  if (omega >= source.size()) throw InputError("basis element out of range");

  const auto stabilizer = isotropy(source, omega);
  std::vector<Seo> out;
  for (std::size_t psi = 0; psi < target.size(); ++psi) {
    const bool fixed = std::all_of(stabilizer.begin(), stabilizer.end(),
                                   [&](std::size_t g) { return target.act(psi, T[g]) == psi; });
    if (fixed) out.push_back(extend_from_basis(source, target, {omega}, {psi}, T, ExtensionVariant::geo));
  }
  return out;
}

OperatorResult decompose(const Incarnation& inc) {
  const auto partition = blocks(inc);
  const auto& X = inc.domain();
  const std::size_t k = partition.size();
  const std::size_t nx = X.size();
  std::vector<std::string> ids;
  for (std::size_t b = 0; b < k; ++b) {
    for (const auto& id : X.ids()) ids.push_back(std::to_string(b) + ":" + id);
  }
  const Domain diagonal(std::move(ids));

  std::vector<Measurement> ms;
  for (std::size_t phi = 0; phi < inc.size(); ++phi) {
    const std::size_t b = block_of(partition, phi);
    Values v(k * nx, Rational(0));
    std::copy(inc.data().values(phi).begin(), inc.data().values(phi).end(), v.begin() + b * nx);
    ms.push_back({std::move(v), inc.data()[phi].aliases});
  }
  DataSet data(diagonal, std::move(ms), inc.data().allows_empty());

  std::vector<Operation> ops;
  std::vector<PointMap> summed;
  for (const auto& op : inc.ops()) {
    std::vector<std::size_t> image(k * nx);
    for (std::size_t b = 0; b < k; ++b) {
      for (std::size_t x = 0; x < nx; ++x) image[b * nx + x] = b * nx + op.map(x);
    }
    summed.emplace_back(diagonal, diagonal, std::move(image));
    ops.push_back({summed.back(), op.name});
  }
  Incarnation target;
  try {
    target = Incarnation(std::move(data), std::move(ops));
  } catch (const InvalidIncarnation& e) {
    throw InternalError(std::string("diagonal operations do not act: ") + e.what(), e.witness());
  }

  SetMap alpha;
  for (std::size_t phi = 0; phi < inc.size(); ++phi) {
    const std::size_t b = block_of(partition, phi);
    Values v(k * nx, Rational(0));
    std::copy(inc.data().values(phi).begin(), inc.data().values(phi).end(), v.begin() + b * nx);
    alpha.push_back(*target.data().find(v));
  }
  SetMap T;
  for (const auto& g : summed) T.push_back(*target.find_op(g));

  Seo seo = finish_seo(inc, target, alpha, T, std::nullopt);
  if (!seo.is_isomorphism()) throw InternalError("decomposition SEO is not an isomorphism");
  return {std::move(target), std::move(seo)};
}

}  // namespace enriched

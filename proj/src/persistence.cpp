#include "enriched/persistence.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "enriched/errors.hpp"

namespace enriched {

namespace {

std::vector<std::size_t> identity_vertex_map(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

// Echelon basis of a subspace of F_p^n, grown one vector at a time.
class IncrementalSpan {
 public:
  explicit IncrementalSpan(std::uint32_t p) : p_(p) {}

  // Adds v unless it lies in the span; returns whether it was added.
  bool add(FpVector v) {
    for (std::size_t k = 0; k < rows_.size(); ++k) {
      const std::uint64_t c = v[pivots_[k]];
      if (c == 0) continue;
      for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = static_cast<std::uint32_t>((v[j] + (p_ - c) * rows_[k][j]) % p_);
      }
    }
    std::size_t pivot = 0;
    while (pivot < v.size() && v[pivot] == 0) ++pivot;
    if (pivot == v.size()) return false;
    const std::uint64_t inv = inverse_mod(v[pivot], p_);
    for (auto& e : v) e = static_cast<std::uint32_t>(e * inv % p_);
    // Keep earlier rows reduced at the new pivot.
    for (auto& row : rows_) {
      const std::uint64_t c = row[pivot];
      if (c == 0) continue;
      for (std::size_t j = 0; j < row.size(); ++j) row[j] = static_cast<std::uint32_t>((row[j] + (p_ - c) * v[j]) % p_);
    }
    rows_.push_back(std::move(v));
    pivots_.push_back(pivot);
    return true;
  }

 private:
  std::uint32_t p_;
  std::vector<FpVector> rows_;
  std::vector<std::size_t> pivots_;
};

// Sign of the permutation sorting a sequence of distinct values.
int sorting_sign(const std::vector<std::size_t>& seq) {
  int sign = 1;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    for (std::size_t j = i + 1; j < seq.size(); ++j) {
      if (seq[i] > seq[j]) sign = -sign;
    }
  }
  return sign;
}

std::vector<Rational> union_sorted(const std::vector<Rational>& a, const std::vector<Rational>& b) {
  std::vector<Rational> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

std::size_t floor_index(const std::vector<Rational>& grid, const Rational& value) {
  auto it = std::upper_bound(grid.begin(), grid.end(), value);
  if (it == grid.begin()) throw InputError("parameter " + value.to_string() + " lies below the grid");
  return static_cast<std::size_t>(it - grid.begin()) - 1;
}

std::shared_ptr<const HomologyData> empty_homology(std::size_t degree, std::uint32_t p) {
  return std::make_shared<const HomologyData>(SimplicialComplex({}, degree + 1), degree, p);
}

// Homology of a module at (r, s), or the empty complex below the s-grid.
std::shared_ptr<const HomologyData> module_at(const BigradedPersistence& m, const Rational& r, const Rational& s) {
  const auto j = m.grid.s_cell(s);
  if (!j) return empty_homology(m.degree, m.prime);
  return m.cells[m.index(m.grid.r_cell(r), *j)];
}

std::vector<std::size_t> level_set(const Values& phi, const Rational& s, LevelKind kind) {
  return kind == LevelKind::sublevel ? sublevel(phi, s) : superlevel(phi, -s);
}

}  // namespace

std::vector<std::size_t> sublevel(const Values& phi, const Rational& s) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    if (phi[x] <= s) out.push_back(x);
  }
  return out;
}

std::vector<std::size_t> superlevel(const Values& phi, const Rational& s) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; x < phi.size(); ++x) {
    if (phi[x] >= s) out.push_back(x);
  }
  return out;
}

std::uint64_t simplex_mask(const Simplex& s) {
  std::uint64_t mask = 0;
  for (auto v : s) {
    if (v >= 64) throw InputError("simplicial complexes support at most 64 points");
    mask |= std::uint64_t{1} << v;
  }
  return mask;
}

std::uint64_t point_mask(const std::vector<std::size_t>& points) { return simplex_mask(points); }

SimplicialComplex::SimplicialComplex(std::vector<std::size_t> vertices, std::size_t dim_cap)
    : vertices_(std::move(vertices)), dim_cap_(dim_cap), by_dim_(dim_cap + 1) {
  std::sort(vertices_.begin(), vertices_.end());
}

const std::vector<Simplex>& SimplicialComplex::simplices(std::size_t k) const {
  static const std::vector<Simplex> none;
  return k < by_dim_.size() ? by_dim_[k] : none;
}

std::optional<std::size_t> SimplicialComplex::index_of(const Simplex& s) const {
  if (s.empty() || s.size() > by_dim_.size()) return std::nullopt;
  auto it = index_.find(simplex_mask(s));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void SimplicialComplex::add(Simplex s) {
  if (s.empty() || s.size() > by_dim_.size()) throw InternalError("simplex dimension outside the cap");
  auto& group = by_dim_[s.size() - 1];
  index_.emplace(simplex_mask(s), group.size());
  group.push_back(std::move(s));
}

SimplicialComplex vr_complex(const std::vector<std::size_t>& points, const PseudometricMatrix& d, const Rational& r,
                             std::size_t dim_cap) {
  if (r.sign() < 0) throw InputError("Vietoris-Rips scale must be non-negative, got " + r.to_string());
  std::vector<std::size_t> sorted(points);
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  SimplicialComplex complex(sorted, dim_cap);

  // Cliques by depth-first extension; each dimension comes out lexicographic.
  std::vector<std::vector<Simplex>> found(dim_cap + 1);
  Simplex current;
  std::function<void(std::size_t)> extend = [&](std::size_t start) {
    for (std::size_t k = start; k < sorted.size(); ++k) {
      const std::size_t v = sorted[k];
      bool close = true;
      for (auto u : current) {
        if (d(u, v) > r) {
          close = false;
          break;
        }
      }
      if (!close) continue;
      current.push_back(v);
      found[current.size() - 1].push_back(current);
      if (current.size() <= dim_cap) extend(k + 1);
      current.pop_back();
    }
  };
  extend(0);
  for (auto& group : found) {
    for (auto& s : group) complex.add(std::move(s));
  }
  return complex;
}

FpMatrix boundary_matrix(const SimplicialComplex& complex, std::size_t k, std::uint32_t p) {
  const auto& cols = complex.simplices(k);
  if (k == 0) return FpMatrix(0, cols.size(), p);
  FpMatrix m(complex.count(k - 1), cols.size(), p);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    for (std::size_t i = 0; i < cols[j].size(); ++i) {
      Simplex face;
      for (std::size_t t = 0; t < cols[j].size(); ++t) {
        if (t != i) face.push_back(cols[j][t]);
      }
      const auto row = complex.index_of(face);
      if (!row) throw InternalError("complex is not closed under faces");
      m.set(*row, j, i % 2 == 0 ? 1 : -1);
    }
  }
  return m;
}

HomologyData::HomologyData(SimplicialComplex complex, std::size_t degree, std::uint32_t p)
    : complex_(std::move(complex)) {
  require_prime(p);
  if (complex_.dim_cap() < degree + 1) {
    throw InputError("homology in degree " + std::to_string(degree) + " needs simplices up to dimension " +
                     std::to_string(degree + 1));
  }
  space_.degree = degree;
  space_.prime = p;
  const FpMatrix boundary = boundary_matrix(complex_, degree, p);
  const FpMatrix next = boundary_matrix(complex_, degree + 1, p);
  const std::size_t n = complex_.count(degree);

  IncrementalSpan span(p);
  for (std::size_t j = 0; j < next.cols(); ++j) span.add(next.column(j));
  for (auto& z : boundary.kernel_basis()) {
    if (span.add(z)) space_.representatives.push_back(std::move(z));
  }
  space_.dimension = space_.representatives.size();

  boundary_rank_cols_ = next.cols();
  FpMatrix combined(n, next.cols() + space_.dimension, p);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < next.cols(); ++j) combined.set(i, j, next(i, j));
    for (std::size_t k = 0; k < space_.dimension; ++k) combined.set(i, next.cols() + k, space_.representatives[k][i]);
  }
  solver_.emplace(combined);
}

FpVector HomologyData::coordinates(const FpVector& cycle) const {
  auto x = solver_->solve(cycle);
  if (!x) throw InternalError("chain is not a cycle of the target complex");
  return FpVector(x->begin() + static_cast<std::ptrdiff_t>(boundary_rank_cols_), x->end());
}

HomologySpace homology(const SimplicialComplex& complex, std::size_t degree, std::uint32_t p) {
  return HomologyData(complex, degree, p).space();
}

FpMatrix chain_map(const SimplicialComplex& source, const SimplicialComplex& target,
                   const std::vector<std::size_t>& vertex_map, std::size_t k, std::uint32_t p) {
  const auto& cols = source.simplices(k);
  FpMatrix m(target.count(k), cols.size(), p);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    std::vector<std::size_t> image;
    for (auto v : cols[j]) {
      if (v >= vertex_map.size()) throw InputError("vertex map does not cover the source complex");
      image.push_back(vertex_map[v]);
    }
    Simplex sorted(image);
    std::sort(sorted.begin(), sorted.end());
    const bool degenerate = std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end();
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    const auto row = target.index_of(sorted);
    if (!row) {
      std::string simplex;
      for (auto v : cols[j]) simplex += (simplex.empty() ? "" : ",") + std::to_string(v);
      throw HypothesisViolation("vertex map is not simplicial: the image of {" + simplex + "} is not a simplex",
                                {{"simplex", simplex}});
    }
    if (!degenerate) m.set(*row, j, sorting_sign(image));
  }
  return m;
}

FpMatrix induced_map(const HomologyData& source, const HomologyData& target,
                     const std::vector<std::size_t>& vertex_map) {
  const std::size_t d = source.space().degree;
  const std::uint32_t p = source.space().prime;
  if (target.space().degree != d || target.space().prime != p) {
    throw InternalError("induced map between homologies of different degree or field");
  }
  const FpMatrix chains = chain_map(source.complex(), target.complex(), vertex_map, d, p);
  chain_map(source.complex(), target.complex(), vertex_map, d + 1, p);
  FpMatrix out(target.dimension(), source.dimension(), p);
  for (std::size_t j = 0; j < source.dimension(); ++j) {
    const FpVector coords = target.coordinates(chains.apply(source.space().representatives[j]));
    for (std::size_t i = 0; i < coords.size(); ++i) out.set(i, j, coords[i]);
  }
  return out;
}

VrHomologyCache::VrHomologyCache(PseudometricMatrix d, std::size_t degree, std::uint32_t p)
    : d_(std::move(d)), degree_(degree), p_(p), r_values_(d_.distinct_values()) {
  require_prime(p);
  if (d_.size() > 64) throw InputError("persistence supports domains of at most 64 points");
}

std::size_t VrHomologyCache::r_index(const Rational& r) const {
  if (r.sign() < 0) throw InputError("Vietoris-Rips scale must be non-negative, got " + r.to_string());
  return floor_index(r_values_, r);
}

std::shared_ptr<const HomologyData> VrHomologyCache::at(std::size_t r_index, std::uint64_t mask) {
  const auto key = std::pair{r_index, mask};
  auto it = cells_.find(key);
  if (it != cells_.end()) return it->second;
  std::vector<std::size_t> points;
  for (std::size_t x = 0; x < d_.size(); ++x) {
    if (mask >> x & 1) points.push_back(x);
  }
  auto data = std::make_shared<const HomologyData>(vr_complex(points, d_, r_values_.at(r_index), degree_ + 1),
                                                   degree_, p_);
  cells_.emplace(key, data);
  return data;
}

const FpMatrix& VrHomologyCache::inclusion(std::size_t r_a, std::uint64_t a, std::size_t r_b, std::uint64_t b) {
  if (r_a > r_b || (a & ~b) != 0) throw InternalError("inclusion between non-nested complexes");
  const auto key = std::tuple{r_a, a, r_b, b};
  auto it = maps_.find(key);
  if (it != maps_.end()) return it->second;
  const auto source = at(r_a, a);
  const auto target = at(r_b, b);
  return maps_.emplace(key, induced_map(*source, *target, identity_vertex_map(d_.size()))).first->second;
}

std::size_t CriticalGrid::r_cell(const Rational& value) const {
  if (value.sign() < 0) throw InputError("Vietoris-Rips scale must be non-negative, got " + value.to_string());
  return floor_index(r, value);
}

std::optional<std::size_t> CriticalGrid::s_cell(const Rational& value) const {
  auto it = std::upper_bound(s.begin(), s.end(), value);
  if (it == s.begin()) return std::nullopt;
  return static_cast<std::size_t>(it - s.begin()) - 1;
}

CriticalGrid critical_grid(const PseudometricMatrix& d, const Values& phi) {
  CriticalGrid grid{d.distinct_values(), {}};
  std::set<Rational> values(phi.begin(), phi.end());
  grid.s.push_back(values.empty() ? Rational(-1) : *values.begin() - Rational(1));
  grid.s.insert(grid.s.end(), values.begin(), values.end());
  return grid;
}

CriticalGrid critical_grid(const DataSet& data, std::size_t phi) {
  return critical_grid(pseudometric(data), data.values(phi));
}

std::size_t BigradedPersistence::dimension_at(const Rational& r, const Rational& s) const {
  const auto j = grid.s_cell(s);
  if (!j) return 0;
  return dimension(grid.r_cell(r), *j);
}

FpMatrix BigradedPersistence::structure_map(std::size_t i, std::size_t j, std::size_t i2, std::size_t j2) const {
  if (i2 < i || j2 < j) throw InputError("structure maps go up in both parameters");
  FpMatrix m = FpMatrix::identity(dimension(i, j), prime);
  for (std::size_t a = i; a < i2; ++a) m = r_steps[index(a, j)] * m;
  for (std::size_t b = j; b < j2; ++b) m = s_steps[index(i2, b)] * m;
  return m;
}

std::vector<std::vector<std::size_t>> BigradedPersistence::dimensions() const {
  std::vector<std::vector<std::size_t>> out(grid.r.size(), std::vector<std::size_t>(grid.s.size()));
  for (std::size_t i = 0; i < grid.r.size(); ++i) {
    for (std::size_t j = 0; j < grid.s.size(); ++j) out[i][j] = dimension(i, j);
  }
  return out;
}

BigradedPersistence ph_grid(const DataSet& data, std::size_t phi, std::size_t degree, std::uint32_t p) {
  return ph_grid(pseudometric(data), data.values(phi), degree, p);
}

BigradedPersistence ph_grid(const PseudometricMatrix& d, const Values& phi, std::size_t degree, std::uint32_t p,
                            LevelKind kind) {
  if (d.size() != phi.size()) throw DomainMismatch("measurement and pseudometric live on different domains");
  Values grid_values(phi);
  if (kind == LevelKind::superlevel_negated) {
    for (auto& v : grid_values) v = -v;
  }
  VrHomologyCache cache(d, degree, p);
  BigradedPersistence out{critical_grid(d, grid_values), degree, p, {}, {}, {}};
  const std::size_t nr = out.grid.r.size();
  const std::size_t ns = out.grid.s.size();
  std::vector<std::uint64_t> masks;
  for (const auto& s : out.grid.s) masks.push_back(point_mask(level_set(phi, s, kind)));

  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < ns; ++j) out.cells.push_back(cache.at(i, masks[j]));
  }
  out.r_steps.resize(nr * ns);
  out.s_steps.resize(nr * ns);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < ns; ++j) {
      if (i + 1 < nr) out.r_steps[out.index(i, j)] = cache.inclusion(i, masks[j], i + 1, masks[j]);
      if (j + 1 < ns) out.s_steps[out.index(i, j)] = cache.inclusion(i, masks[j], i, masks[j + 1]);
    }
  }
  for (std::size_t i = 0; i + 1 < nr; ++i) {
    for (std::size_t j = 0; j + 1 < ns; ++j) {
      const FpMatrix right_up = out.s_steps[out.index(i + 1, j)] * out.r_steps[out.index(i, j)];
      const FpMatrix up_right = out.r_steps[out.index(i, j + 1)] * out.s_steps[out.index(i, j)];
      if (!(right_up == up_right)) {
        throw InternalError("persistence grid square does not commute",
                            {{"r", out.grid.r[i].to_string()}, {"s", out.grid.s[j].to_string()}});
      }
    }
  }
  return out;
}

HomologyData homology_at(const PseudometricMatrix& d, const Values& phi, const Rational& r, const Rational& s,
                         std::size_t degree, std::uint32_t p) {
  return HomologyData(vr_complex(sublevel(phi, s), d, r, degree + 1), degree, p);
}

FpMatrix GridMorphism::evaluate(const Rational& r_value, const Rational& s_value) const {
  auto it = std::upper_bound(s.begin(), s.end(), s_value);
  if (it == s.begin()) return FpMatrix(0, 0, prime);
  const std::size_t j = static_cast<std::size_t>(it - s.begin()) - 1;
  return maps[floor_index(r, r_value) * s.size() + j];
}

GridMorphism induced_persistence_map(const BigradedPersistence& source, const BigradedPersistence& target,
                                     const std::vector<std::size_t>& vertex_map) {
  if (source.degree != target.degree || source.prime != target.prime) {
    throw InputError("persistence modules differ in degree or field");
  }
  GridMorphism out{union_sorted(source.grid.r, target.grid.r), union_sorted(source.grid.s, target.grid.s), {},
                   source.prime};
  for (const auto& r : out.r) {
    for (const auto& s : out.s) {
      out.maps.push_back(induced_map(*module_at(source, r, s), *module_at(target, r, s), vertex_map));
    }
  }
  return out;
}

GridMorphism GridArrows::compose(const GridMorphism& outer, const GridMorphism& inner) {
  GridMorphism out{union_sorted(outer.r, inner.r), union_sorted(outer.s, inner.s), {}, outer.prime};
  for (const auto& r : out.r) {
    for (const auto& s : out.s) {
      const FpMatrix a = outer.evaluate(r, s);
      const FpMatrix b = inner.evaluate(r, s);
      if (a.cols() != b.rows()) throw InternalError("composed persistence maps do not match at a grid point");
      out.maps.push_back(a * b);
    }
  }
  return out;
}

bool GridArrows::equal(const GridMorphism& a, const GridMorphism& b) {
  for (const auto& r : union_sorted(a.r, b.r)) {
    for (const auto& s : union_sorted(a.s, b.s)) {
      if (!(a.evaluate(r, s) == b.evaluate(r, s))) return false;
    }
  }
  return true;
}

GridMorphism identity_morphism(const BigradedPersistence& module) {
  GridMorphism out{module.grid.r, module.grid.s, {}, module.prime};
  for (std::size_t i = 0; i < module.grid.r.size(); ++i) {
    for (std::size_t j = 0; j < module.grid.s.size(); ++j) {
      out.maps.push_back(FpMatrix::identity(module.dimension(i, j), module.prime));
    }
  }
  return out;
}

PhFunctor ph_functor(const Incarnation& inc, std::size_t degree, std::uint32_t p) {
  PhFunctor out{build_graph(inc), {}, {}};
  for (std::size_t phi = 0; phi < inc.size(); ++phi) out.objects.push_back(ph_grid(inc.data(), phi, degree, p));
  for (const auto& e : out.base.edges()) {
    out.arrows.emplace(e, induced_persistence_map(out.objects[e.target], out.objects[e.source], inc.op(e.color).image()));
  }
  if (inc.is_monoid()) {
    const auto monoid = monoid_structure(inc);
    if (auto ok = check_functoriality<BigradedPersistence, GridMorphism, GridArrows>(out, &monoid); !ok) {
      throw InternalError("persistence functor is not functorial: " + ok.message, ok.witness);
    }
  }
  return out;
}

GridMorphism geometric_ph_map(const DataSet& source, const DataSet& target, const SetMap& alpha, const PointMap& f,
                              std::size_t phi, std::size_t degree, std::uint32_t p) {
  if (!(f.source() == target.domain()) || !(f.target() == source.domain())) {
    throw DomainMismatch("realization must map the target domain into the source domain");
  }
  if (alpha.size() != source.size()) throw InputError("alpha must assign every source measurement");
  for (std::size_t k = 0; k < source.size(); ++k) {
    if (precompose(source.values(k), f) != target.values(alpha[k])) {
      throw HypothesisViolation("map is not a realization of alpha", {{"measurement", source[k].name()}});
    }
  }
  const auto from = ph_grid(target, alpha[phi], degree, p);
  const auto to = ph_grid(source, phi, degree, p);
  return induced_persistence_map(from, to, f.image());
}

Barcode slice_barcode(const PseudometricMatrix& d, const Values& phi, std::size_t degree, std::uint32_t p,
                      const Rational& r) {
  require_prime(p);
  if (d.size() != phi.size()) throw DomainMismatch("measurement and pseudometric live on different domains");
  const auto complex = vr_complex(identity_vertex_map(phi.size()), d, r, degree + 1);

  struct Entry {
    Rational value;
    std::size_t dim;
    std::size_t index;
  };
  std::vector<Entry> order;
  for (std::size_t k = 0; k <= degree + 1; ++k) {
    for (std::size_t i = 0; i < complex.count(k); ++i) {
      Rational value = phi[complex.simplices(k)[i].front()];
      for (auto v : complex.simplices(k)[i]) value = max(value, phi[v]);
      order.push_back({std::move(value), k, i});
    }
  }
  std::stable_sort(order.begin(), order.end(), [](const Entry& a, const Entry& b) {
    if (a.value != b.value) return a.value < b.value;
    return a.dim < b.dim;
  });
  const std::size_t n = order.size();
  std::vector<std::vector<std::size_t>> position(degree + 2);
  for (std::size_t k = 0; k <= degree + 1; ++k) position[k].resize(complex.count(k));
  for (std::size_t t = 0; t < n; ++t) position[order[t].dim][order[t].index] = t;

  // Columns of the filtered boundary matrix, reduced left to right.
  std::vector<FpVector> columns(n, FpVector(n, 0));
  for (std::size_t t = 0; t < n; ++t) {
    const auto k = order[t].dim;
    if (k == 0) continue;
    const auto& s = complex.simplices(k)[order[t].index];
    for (std::size_t i = 0; i < s.size(); ++i) {
      Simplex face;
      for (std::size_t u = 0; u < s.size(); ++u) {
        if (u != i) face.push_back(s[u]);
      }
      columns[t][position[k - 1][*complex.index_of(face)]] = i % 2 == 0 ? 1 : p - 1;
    }
  }
  auto low = [&](const FpVector& c) -> std::optional<std::size_t> {
    for (std::size_t i = n; i-- > 0;) {
      if (c[i] != 0) return i;
    }
    return std::nullopt;
  };
  std::vector<std::optional<std::size_t>> owner(n);  // row -> column with that low
  std::vector<bool> paired(n, false);
  Barcode out;
  for (std::size_t t = 0; t < n; ++t) {
    auto& c = columns[t];
    auto l = low(c);
    while (l && owner[*l]) {
      const auto& pivot = columns[*owner[*l]];
      const std::uint64_t factor = static_cast<std::uint64_t>(c[*l]) * inverse_mod(pivot[*l], p) % p;
      for (std::size_t i = 0; i < n; ++i) c[i] = static_cast<std::uint32_t>((c[i] + (p - factor) * pivot[i]) % p);
      l = low(c);
    }
    if (!l) continue;
    owner[*l] = t;
    paired[*l] = true;
    if (order[t].dim == degree + 1 && order[*l].value < order[t].value) {
      out.push_back({order[*l].value, order[t].value});
    }
  }
  for (std::size_t t = 0; t < n; ++t) {
    if (order[t].dim == degree && !paired[t] && !low(columns[t])) out.push_back({order[t].value, std::nullopt});
  }
  std::sort(out.begin(), out.end(), [](const Interval& a, const Interval& b) {
    if (a.birth != b.birth) return a.birth < b.birth;
    if (!a.death || !b.death) return a.death.has_value() && !b.death.has_value();
    return *a.death < *b.death;
  });
  return out;
}

Barcode slice_barcode(const DataSet& data, std::size_t phi, std::size_t degree, std::uint32_t p, const Rational& r) {
  return slice_barcode(pseudometric(data), data.values(phi), degree, p, r);
}

namespace {

// Kuhn's augmenting paths on a dense bipartite graph.
bool has_perfect_matching(const std::vector<std::vector<bool>>& adj) {
  const std::size_t n = adj.size();
  std::vector<std::size_t> match(n, n);
  for (std::size_t u = 0; u < n; ++u) {
    std::vector<bool> seen(n, false);
    std::function<bool(std::size_t)> augment = [&](std::size_t a) {
      for (std::size_t b = 0; b < n; ++b) {
        if (!adj[a][b] || seen[b]) continue;
        seen[b] = true;
        if (match[b] == n || augment(match[b])) {
          match[b] = a;
          return true;
        }
      }
      return false;
    };
    if (!augment(u)) return false;
  }
  return true;
}

}  // namespace

std::optional<Rational> bottleneck_distance(const Barcode& a, const Barcode& b) {
  std::vector<Rational> inf_a, inf_b;
  std::vector<const Interval*> fin_a, fin_b;
  for (const auto& i : a) i.death ? fin_a.push_back(&i) : inf_a.push_back(i.birth);
  for (const auto& i : b) i.death ? fin_b.push_back(&i) : inf_b.push_back(i.birth);
  if (inf_a.size() != inf_b.size()) return std::nullopt;
  std::sort(inf_a.begin(), inf_a.end());
  std::sort(inf_b.begin(), inf_b.end());
  Rational infinite_cost(0);
  for (std::size_t k = 0; k < inf_a.size(); ++k) infinite_cost = max(infinite_cost, (inf_a[k] - inf_b[k]).abs());

  auto half_length = [](const Interval* i) { return (*i->death - i->birth) / Rational(2); };
  auto cost = [](const Interval* x, const Interval* y) {
    return max((x->birth - y->birth).abs(), (*x->death - *y->death).abs());
  };
  std::set<Rational> candidates{Rational(0)};
  for (auto x : fin_a) candidates.insert(half_length(x));
  for (auto y : fin_b) candidates.insert(half_length(y));
  for (auto x : fin_a) {
    for (auto y : fin_b) candidates.insert(cost(x, y));
  }
  const std::vector<Rational> sorted(candidates.begin(), candidates.end());

  const std::size_t na = fin_a.size(), nb = fin_b.size(), n = na + nb;
  auto feasible = [&](const Rational& t) {
    // Rows: A points, then diagonal slots for B. Columns: B points, then diagonal slots for A.
    std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < na; ++i) {
      for (std::size_t j = 0; j < nb; ++j) adj[i][j] = cost(fin_a[i], fin_b[j]) <= t;
      adj[i][nb + i] = half_length(fin_a[i]) <= t;
    }
    for (std::size_t j = 0; j < nb; ++j) {
      adj[na + j][j] = half_length(fin_b[j]) <= t;
      for (std::size_t i = 0; i < na; ++i) adj[na + j][nb + i] = true;
    }
    return has_perfect_matching(adj);
  };
  std::size_t lo = 0, hi = sorted.size() - 1;
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (feasible(sorted[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return max(sorted[lo], infinite_cost);
}

Rational bottleneck_lower(const DataSet& data, std::size_t phi, std::size_t psi, std::size_t degree, std::uint32_t p) {
  const auto d = pseudometric(data);
  Rational best(0);
  for (const auto& r : d.distinct_values()) {
    const auto distance = bottleneck_distance(slice_barcode(d, data.values(phi), degree, p, r),
                                              slice_barcode(d, data.values(psi), degree, p, r));
    if (!distance) throw InternalError("slices over the same complex have different numbers of essential bars");
    best = max(best, *distance);
  }
  return best;
}

InterleavingResult interleave_upper(const DataSet& data, std::size_t phi, std::size_t psi, std::size_t degree,
                                    std::uint32_t p) {
  const Values& f = data.values(phi);
  const Values& g = data.values(psi);
  const Rational eps = sup_distance(f, g);
  VrHomologyCache cache(pseudometric(data), degree, p);
  const std::size_t nr = cache.r_values().size();

  std::set<Rational> shifts;
  Rational floor_value(0);
  for (const auto* v : {&f, &g}) {
    for (const auto& x : *v) {
      for (int k = 0; k <= 2; ++k) shifts.insert(x - eps * Rational(k));
    }
  }
  if (!shifts.empty()) floor_value = *shifts.begin() - Rational(1);
  shifts.insert(floor_value);

  auto mask = [](const Values& v, const Rational& s) { return point_mask(sublevel(v, s)); };
  InterleavingResult result{eps, Rational(0), 0, 0};
  std::set<std::tuple<std::size_t, std::uint64_t, std::uint64_t, std::uint64_t>> triangles;
  std::set<std::tuple<std::size_t, std::uint64_t, std::uint64_t>> squares;

  for (const auto& s : shifts) {
    for (const auto* pair : {&f, &g}) {
      const Values& first = *pair;
      const Values& second = pair == &f ? g : f;
      const auto a = mask(first, s);
      const auto b = mask(second, s + eps);
      const auto c = mask(first, s + eps + eps);
      if ((a & ~b) != 0 || (b & ~c) != 0) {
        throw InternalError("sublevel sets are not nested under the shift", {{"s", s.to_string()}});
      }
      for (std::size_t i = 0; i < nr; ++i) {
        if (triangles.insert({i, a, b, c}).second) {
          const FpMatrix composite = cache.inclusion(i, b, i, c) * cache.inclusion(i, a, i, b);
          if (!(composite == cache.inclusion(i, a, i, c))) {
            throw InternalError("interleaving triangle fails",
                                {{"r", cache.r_values()[i].to_string()}, {"s", s.to_string()}});
          }
          ++result.triangles_checked;
        }
        if (i + 1 < nr && squares.insert({i, a, b}).second) {
          const FpMatrix shift_then_grow = cache.inclusion(i, b, i + 1, b) * cache.inclusion(i, a, i, b);
          const FpMatrix grow_then_shift = cache.inclusion(i + 1, a, i + 1, b) * cache.inclusion(i, a, i + 1, a);
          if (!(shift_then_grow == grow_then_shift)) {
            throw InternalError("shift maps are not natural in r",
                                {{"r", cache.r_values()[i].to_string()}, {"s", s.to_string()}});
          }
          ++result.naturality_squares_checked;
        }
      }
    }
  }
  result.lower = bottleneck_lower(data, phi, psi, degree, p);
  if (result.upper < result.lower) {
    throw InternalError("slice bottleneck bound exceeds the sup distance",
                        {{"lower", result.lower.to_string()}, {"upper", result.upper.to_string()}});
  }
  return result;
}

GraphCheck superlevel_duality_check(const DataSet& data, std::size_t phi, std::size_t degree, std::uint32_t p) {
  const auto negated = change_units(ValueMap::negate(), data, "-");
  const auto lhs = ph_grid(negated.data, negated.transport[phi], degree, p);
  const auto rhs = ph_grid(pseudometric(data), data.values(phi), degree, p, LevelKind::superlevel_negated);
  if (!(lhs.grid == rhs.grid)) return GraphCheck::fail("critical grids differ");
  for (std::size_t i = 0; i < lhs.grid.r.size(); ++i) {
    for (std::size_t j = 0; j < lhs.grid.s.size(); ++j) {
      const Witness where{{"r", lhs.grid.r[i].to_string()}, {"s", lhs.grid.s[j].to_string()}};
      if (lhs.dimension(i, j) != rhs.dimension(i, j)) return GraphCheck::fail("dimensions differ", where);
      const auto k = lhs.index(i, j);
      if (i + 1 < lhs.grid.r.size() && lhs.r_steps[k].rank() != rhs.r_steps[k].rank()) {
        return GraphCheck::fail("ranks of r-maps differ", where);
      }
      if (j + 1 < lhs.grid.s.size() && lhs.s_steps[k].rank() != rhs.s_steps[k].rank()) {
        return GraphCheck::fail("ranks of s-maps differ", where);
      }
    }
  }
  return GraphCheck::pass();
}

}  // namespace enriched

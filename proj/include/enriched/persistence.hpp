#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "enriched/actions.hpp"
#include "enriched/constructions.hpp"
#include "enriched/ggraph.hpp"
#include "enriched/linalg.hpp"

namespace enriched {

inline constexpr std::uint32_t kDefaultPrime = 2;

// {x | φ(x) ≤ s}, as sorted indices.
std::vector<std::size_t> sublevel(const Values& phi, const Rational& s);
// {x | φ(x) ≥ s}.
std::vector<std::size_t> superlevel(const Values& phi, const Rational& s);

using Simplex = std::vector<std::size_t>;  // sorted point indices

// Simplices up to a dimension cap, grouped by dimension, each group in
// lexicographic order. Points are indices into a domain of at most 64 points.
class SimplicialComplex {
 public:
  SimplicialComplex() = default;
  SimplicialComplex(std::vector<std::size_t> vertices, std::size_t dim_cap);

  std::size_t dim_cap() const { return dim_cap_; }
  const std::vector<std::size_t>& vertices() const { return vertices_; }
  // k-simplices; empty for k > dim_cap.
  const std::vector<Simplex>& simplices(std::size_t k) const;
  std::size_t count(std::size_t k) const { return simplices(k).size(); }
  std::optional<std::size_t> index_of(const Simplex& s) const;
  bool contains(const Simplex& s) const { return index_of(s).has_value(); }

  // Adds a simplex whose faces are already present. Used by builders only.
  void add(Simplex s);

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.vertices_ == b.vertices_ && a.by_dim_ == b.by_dim_;
  }

 private:
  std::vector<std::size_t> vertices_;
  std::size_t dim_cap_ = 0;
  std::vector<std::vector<Simplex>> by_dim_;
  std::map<std::uint64_t, std::size_t> index_;
};

std::uint64_t simplex_mask(const Simplex& s);

// VR_r(points, d): subsets of at most dim_cap+1 points with pairwise distance ≤ r.
// Throws InputError for r < 0.
SimplicialComplex vr_complex(const std::vector<std::size_t>& points, const PseudometricMatrix& d, const Rational& r,
                             std::size_t dim_cap);

// ∂_k as a matrix from k-chains to (k−1)-chains; ∂_0 has no rows.
FpMatrix boundary_matrix(const SimplicialComplex& complex, std::size_t k, std::uint32_t p);

struct HomologySpace {
  std::size_t degree = 0;
  std::uint32_t prime = kDefaultPrime;
  std::size_t dimension = 0;
  std::vector<FpVector> representatives;  // cycles on the degree-simplices
};

// A complex with its homology in one degree, able to express cycles in the
// chosen basis.
class HomologyData {
 public:
  // Throws InputError when the complex's cap is below degree + 1.
  HomologyData(SimplicialComplex complex, std::size_t degree, std::uint32_t p);

  const SimplicialComplex& complex() const { return complex_; }
  const HomologySpace& space() const { return space_; }
  std::size_t dimension() const { return space_.dimension; }
  // Coordinates of the class of a cycle; throws InternalError for non-cycles.
  FpVector coordinates(const FpVector& cycle) const;

 private:
  SimplicialComplex complex_;
  HomologySpace space_;
  std::optional<ColumnSpaceSolver> solver_;  // over [∂_{d+1} | representatives]
  std::size_t boundary_rank_cols_ = 0;
};

HomologySpace homology(const SimplicialComplex& complex, std::size_t degree, std::uint32_t p = kDefaultPrime);

// Chain map in degree k: σ ↦ ±f(σ) with the sorting sign, 0 when vertices
// collide. Throws HypothesisViolation when some image is not a simplex.
FpMatrix chain_map(const SimplicialComplex& source, const SimplicialComplex& target,
                   const std::vector<std::size_t>& vertex_map, std::size_t k, std::uint32_t p);

// H_d of a simplicial map, in the representative bases.
FpMatrix induced_map(const HomologyData& source, const HomologyData& target, const std::vector<std::size_t>& vertex_map);

// Memoized H_d(VR_r(S, d)) for point subsets S, keyed by the r-cell and the
// subset bitmask. Complexes only change at the distinct distances of d.
class VrHomologyCache {
 public:
  VrHomologyCache(PseudometricMatrix d, std::size_t degree, std::uint32_t p);

  const PseudometricMatrix& metric() const { return d_; }
  std::size_t degree() const { return degree_; }
  std::uint32_t prime() const { return p_; }
  // Distinct distances, starting at 0.
  const std::vector<Rational>& r_values() const { return r_values_; }
  // Index of the largest r-value ≤ r. Throws InputError for r < 0.
  std::size_t r_index(const Rational& r) const;

  std::shared_ptr<const HomologyData> at(std::size_t r_index, std::uint64_t mask);
  // Inclusion-induced map H(r_a, a) → H(r_b, b); requires r_a ≤ r_b and a ⊆ b.
  const FpMatrix& inclusion(std::size_t r_a, std::uint64_t a, std::size_t r_b, std::uint64_t b);

 private:
  PseudometricMatrix d_;
  std::size_t degree_;
  std::uint32_t p_;
  std::vector<Rational> r_values_;
  std::map<std::pair<std::size_t, std::uint64_t>, std::shared_ptr<const HomologyData>> cells_;
  std::map<std::tuple<std::size_t, std::uint64_t, std::size_t, std::uint64_t>, FpMatrix> maps_;
};

std::uint64_t point_mask(const std::vector<std::size_t>& points);

// r-values: 0 and the distinct distances. s-values: one sentinel below min φ,
// then the distinct values of φ. A cell is [r_i, r_{i+1}) × [s_j, s_{j+1}).
struct CriticalGrid {
  std::vector<Rational> r;
  std::vector<Rational> s;

  std::size_t r_cell(const Rational& value) const;
  // nullopt below s_0.
  std::optional<std::size_t> s_cell(const Rational& value) const;

  friend bool operator==(const CriticalGrid&, const CriticalGrid&) = default;
};

CriticalGrid critical_grid(const PseudometricMatrix& d, const Values& phi);
CriticalGrid critical_grid(const DataSet& data, std::size_t phi);

// PH_d(φ) on its critical grid: the homology at each cell corner, with the
// internal maps for unit steps in r and in s.
struct BigradedPersistence {
  CriticalGrid grid;
  std::size_t degree = 0;
  std::uint32_t prime = kDefaultPrime;
  std::vector<std::shared_ptr<const HomologyData>> cells;  // row-major, r outer
  std::vector<FpMatrix> r_steps;  // (i, j) → (i+1, j), index i * |s| + j
  std::vector<FpMatrix> s_steps;  // (i, j) → (i, j+1), index i * |s| + j

  std::size_t index(std::size_t i, std::size_t j) const { return i * grid.s.size() + j; }
  const HomologyData& cell(std::size_t i, std::size_t j) const { return *cells[index(i, j)]; }
  std::size_t dimension(std::size_t i, std::size_t j) const { return cell(i, j).dimension(); }
  // dim PH at an arbitrary (r, s); 0 below the s-grid.
  std::size_t dimension_at(const Rational& r, const Rational& s) const;
  // Structure map (i, j) → (i2, j2) for i ≤ i2, j ≤ j2.
  FpMatrix structure_map(std::size_t i, std::size_t j, std::size_t i2, std::size_t j2) const;
  // Dimension table, rows indexed by r.
  std::vector<std::vector<std::size_t>> dimensions() const;
};

// Point selector for a filtration: the vertex set at parameter s.
enum class LevelKind { sublevel, superlevel_negated };

// Throws InternalError if a grid square fails to commute.
BigradedPersistence ph_grid(const DataSet& data, std::size_t phi, std::size_t degree, std::uint32_t p = kDefaultPrime);
BigradedPersistence ph_grid(const PseudometricMatrix& d, const Values& phi, std::size_t degree, std::uint32_t p,
                            LevelKind kind = LevelKind::sublevel);

// H_d(VR_r(φ≤s, d)) computed from scratch.
HomologyData homology_at(const PseudometricMatrix& d, const Values& phi, const Rational& r, const Rational& s,
                         std::size_t degree, std::uint32_t p = kDefaultPrime);

// A persistence-module map given cell by cell on a common refinement of the
// source and target grids. Below the s-grid both spaces are zero.
struct GridMorphism {
  std::vector<Rational> r;
  std::vector<Rational> s;
  std::vector<FpMatrix> maps;  // index i * |s| + j
  std::uint32_t prime = kDefaultPrime;

  // Matrix at (r, s) by floor lookup; 0×0 below the grid.
  FpMatrix evaluate(const Rational& r_value, const Rational& s_value) const;

  friend bool operator==(const GridMorphism&, const GridMorphism&) = default;
};

// Map PH(source) → PH(target) induced at every (r, s) by a vertex map that
// sends VR_r(source≤s) into VR_r(target≤s).
GridMorphism induced_persistence_map(const BigradedPersistence& source, const BigradedPersistence& target,
                                     const std::vector<std::size_t>& vertex_map);

// Arrow algebra for functors with persistence-map arrows.
struct GridArrows {
  static GridMorphism compose(const GridMorphism& outer, const GridMorphism& inner);
  static bool equal(const GridMorphism& a, const GridMorphism& b);
};

GridMorphism identity_morphism(const BigradedPersistence& module);

using PhFunctor = GraphFunctor<BigradedPersistence, GridMorphism>;

// Objects PH_d(φ); the arrow of (φ, g, φg) is PH(φg) → PH(φ) induced by g.
// Functoriality is verified against the composition table when M is a monoid.
PhFunctor ph_functor(const Incarnation& inc, std::size_t degree, std::uint32_t p = kDefaultPrime);

// PH^α(φ): PH^Ψ(α(φ)) → PH^Φ(φ) induced by a realization f: Y → X of α.
GridMorphism geometric_ph_map(const DataSet& source, const DataSet& target, const SetMap& alpha, const PointMap& f,
                              std::size_t phi, std::size_t degree, std::uint32_t p = kDefaultPrime);

struct Interval {
  Rational birth;
  std::optional<Rational> death;  // nullopt = ∞

  friend bool operator==(const Interval&, const Interval&) = default;
};
using Barcode = std::vector<Interval>;

// Persistence of s ↦ H_d(VR_r(φ≤s)) at fixed r, by column reduction. Sorted by
// (birth, death) with infinite deaths last.
Barcode slice_barcode(const PseudometricMatrix& d, const Values& phi, std::size_t degree, std::uint32_t p,
                      const Rational& r);
Barcode slice_barcode(const DataSet& data, std::size_t phi, std::size_t degree, std::uint32_t p, const Rational& r);

// Bottleneck distance; nullopt when the numbers of infinite bars differ.
std::optional<Rational> bottleneck_distance(const Barcode& a, const Barcode& b);

// max over r-values of the slice bottleneck distance.
Rational bottleneck_lower(const DataSet& data, std::size_t phi, std::size_t psi, std::size_t degree,
                          std::uint32_t p = kDefaultPrime);

struct InterleavingResult {
  Rational upper;
  Rational lower;
  std::size_t triangles_checked = 0;
  std::size_t naturality_squares_checked = 0;
};

// ε = ∥φ−ψ∥∞ with the canonical inclusion-induced shift maps checked on every
// configuration of the grid, in both the s- and the r-direction. A failed
// check is an InternalError.
InterleavingResult interleave_upper(const DataSet& data, std::size_t phi, std::size_t psi, std::size_t degree,
                                    std::uint32_t p = kDefaultPrime);

// PH grid of −φ in −Φ against superlevel-set persistence of φ in Φ, cell by
// cell (dimensions and ranks of the internal maps).
GraphCheck superlevel_duality_check(const DataSet& data, std::size_t phi, std::size_t degree,
                                    std::uint32_t p = kDefaultPrime);

}  // namespace enriched

#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "enriched/dataset.hpp"

namespace enriched {

// Symmetric matrix of rationals indexed by domain positions.
class PseudometricMatrix {
 public:
  PseudometricMatrix() = default;
  explicit PseudometricMatrix(std::size_t n) : n_(n), entries_(n * n) {}

  std::size_t size() const { return n_; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return entries_[i * n_ + j]; }
  Rational& operator()(std::size_t i, std::size_t j) { return entries_[i * n_ + j]; }

  // Distinct entries in increasing order, always including 0.
  std::vector<Rational> distinct_values() const;

  friend bool operator==(const PseudometricMatrix&, const PseudometricMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Rational> entries_;
};

// max_x |phi(x) - psi(x)|. Throws DomainMismatch on length mismatch.
Rational sup_distance(const Values& phi, const Values& psi);

// d(x,y) = max over measurements of |phi(x) - phi(y)|; zero matrix for an empty family.
PseudometricMatrix pseudometric(const DataSet& data);

// Result of a coproduct: the data set plus the canonical injections as index maps.
struct Coproduct {
  DataSet data;
  std::vector<std::size_t> in_left;   // Φ index -> index of φ+0
  std::vector<std::size_t> in_right;  // Ψ index -> index of 0+ψ
};

struct Product {
  DataSet data;
  std::vector<std::size_t> pr_left;   // index of φ+ψ -> Φ index
  std::vector<std::size_t> pr_right;  // index of φ+ψ -> Ψ index
};

// Disjoint union X∐Y with identifiers tagged "L:<id>" and "R:<id>".
Domain disjoint_union(const Domain& left, const Domain& right);
// f1∐f2 on tagged disjoint unions.
PointMap disjoint_union(const PointMap& left, const PointMap& right);

Coproduct coproduct(const DataSet& left, const DataSet& right);
Product product(const DataSet& left, const DataSet& right);

// A function between finite measurement sets, as an index table.
using SetMap = std::vector<std::size_t>;

// The unique μ: Φ∐Ψ → Π with μ∘in_Φ = α and μ∘in_Ψ = β. When the zero
// measurement lies in both Φ and Ψ the injections meet, and μ exists only if
// α and β agree there; otherwise HypothesisViolation is thrown.
SetMap copair(const Coproduct& coproduct, const SetMap& alpha, const SetMap& beta);

// The unique μ: Π → Φ×Ψ with pr_Φ∘μ = α and pr_Ψ∘μ = β.
SetMap pair(const Product& product, const SetMap& alpha, const SetMap& beta);

struct UnitsChange {
  DataSet data;      // fΦ
  SetMap transport;  // f−: Φ index -> fΦ index
};

// Change of units along f. Throws InputError on a table miss.
UnitsChange change_units(const ValueMap& f, const DataSet& data, std::string_view label = "f");

struct DomainChange {
  DataSet data;      // Φf
  SetMap transport;  // −f: Φ index -> Φf index
};

// Domain change along f: Y → X. Requires f.target() == data.domain().
DomainChange domain_change(const DataSet& data, const PointMap& f, std::string_view label = "f");

}  // namespace enriched

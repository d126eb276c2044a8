#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "enriched/rational.hpp"

namespace enriched {

using Values = std::vector<Rational>;

// Finite ordered set of point identifiers. The order fixes matrix indexing.
class Domain {
 public:
  Domain() = default;
  explicit Domain(std::vector<std::string> ids);

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  const std::string& id(std::size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }

  std::optional<std::size_t> find(std::string_view id) const;
  // Throws InputError for unknown identifiers.
  std::size_t index_of(std::string_view id) const;

  friend bool operator==(const Domain& a, const Domain& b) { return a.ids_ == b.ids_; }

 private:
  std::vector<std::string> ids_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// A measurement is identified by its value vector; names are aliases only.
struct Measurement {
  Values values;
  std::vector<std::string> aliases;

  const std::string& name() const { return aliases.front(); }
};

// A finite set of measurements on a common domain. Measurements with equal
// value vectors are merged (their aliases are concatenated). Insertion order
// of first occurrence is the canonical order.
class DataSet {
 public:
  DataSet() = default;
  DataSet(Domain domain, std::vector<Measurement> measurements, bool allow_empty = false);

  // Names measurements "<prefix><k>" in order.
  static DataSet from_values(Domain domain, const std::vector<Values>& values,
                             std::string_view prefix = "m", bool allow_empty = false);

  const Domain& domain() const { return domain_; }
  std::size_t size() const { return measurements_.size(); }
  bool empty() const { return measurements_.empty(); }
  bool allows_empty() const { return allow_empty_; }
  const Measurement& operator[](std::size_t i) const { return measurements_.at(i); }
  const std::vector<Measurement>& measurements() const { return measurements_; }
  const Values& values(std::size_t i) const { return measurements_.at(i).values; }

  std::optional<std::size_t> find(const Values& values) const;
  std::optional<std::size_t> find_name(std::string_view name) const;
  // Throws InputError for unknown names.
  std::size_t index_of(std::string_view name) const;

  // Extensional equality: same domain and the same set of value vectors.
  bool same_set(const DataSet& other) const;

  // Same domain, same measurement order and same value vectors.
  friend bool operator==(const DataSet& a, const DataSet& b);

 private:
  Domain domain_;
  std::vector<Measurement> measurements_;
  std::map<Values, std::size_t> by_value_;
  bool allow_empty_ = false;
};

// Total function between finite domains.
class PointMap {
 public:
  PointMap() = default;
  PointMap(Domain source, Domain target, std::vector<std::size_t> image);

  static PointMap identity(const Domain& domain);
  // Builds a map from an id->id table; every source id must be assigned.
  static PointMap from_table(Domain source, Domain target,
                             const std::map<std::string, std::string>& table);

  const Domain& source() const { return source_; }
  const Domain& target() const { return target_; }
  const std::vector<std::size_t>& image() const { return image_; }
  std::size_t operator()(std::size_t x) const { return image_[x]; }

  bool is_endo() const { return source_ == target_; }
  bool is_injective() const;
  bool is_bijective() const;
  std::optional<PointMap> inverse() const;

  friend bool operator==(const PointMap& a, const PointMap& b) {
    return a.image_ == b.image_ && a.source_ == b.source_ && a.target_ == b.target_;
  }

 private:
  Domain source_;
  Domain target_;
  std::vector<std::size_t> image_;
};

// outer ∘ inner (apply inner first). Requires inner.target() == outer.source().
PointMap compose(const PointMap& outer, const PointMap& inner);

// phi ∘ f, a vector indexed by f.source().
Values precompose(const Values& phi, const PointMap& f);

// A function on the rationals, either builtin or a finite table.
class ValueMap {
 public:
  enum class Kind { identity, negate, affine, clamp_sign, table };

  static ValueMap identity();
  static ValueMap negate();
  // x -> a*x + b
  static ValueMap affine(Rational a, Rational b);
  // x < 0 -> -1, x >= 0 -> 1
  static ValueMap clamp_sign();
  static ValueMap table(std::map<Rational, Rational> entries);

  Kind kind() const { return kind_; }
  const Rational& slope() const { return a_; }
  const Rational& offset() const { return b_; }
  const std::map<Rational, Rational>& entries() const { return table_; }

  // Throws InputError on a table miss.
  Rational operator()(const Rational& x) const;
  bool is_invertible() const;
  // Throws HypothesisViolation when not invertible.
  ValueMap inverse() const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::identity;
  Rational a_{1};
  Rational b_{0};
  std::map<Rational, Rational> table_;
};

}  // namespace enriched

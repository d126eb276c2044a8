#include "enriched/dataset.hpp"

#include <algorithm>
#include <set>

#include "enriched/errors.hpp"

namespace enriched {

Domain::Domain(std::vector<std::string> ids) : ids_(std::move(ids)) {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (!index_.emplace(ids_[i], i).second) {
      throw InputError("duplicate domain element '" + ids_[i] + "'", {{"point", ids_[i]}});
    }
  }
}

std::optional<std::size_t> Domain::find(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Domain::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw InputError("unknown domain element '" + std::string(id) + "'", {{"point", std::string(id)}});
}

DataSet::DataSet(Domain domain, std::vector<Measurement> measurements, bool allow_empty)
    : domain_(std::move(domain)), allow_empty_(allow_empty) {
  std::set<std::string, std::less<>> names;
  for (auto& m : measurements) {
    if (m.values.size() != domain_.size()) {
      throw InputError("measurement has " + std::to_string(m.values.size()) + " values, domain has " +
                           std::to_string(domain_.size()) + " points",
                       {{"measurement", m.aliases.empty() ? std::string("?") : m.aliases.front()}});
    }
    if (m.aliases.empty()) m.aliases.push_back("m" + std::to_string(measurements_.size()));
    for (const auto& alias : m.aliases) {
      if (!names.insert(alias).second) {
        throw InputError("duplicate measurement name '" + alias + "'", {{"measurement", alias}});
      }
    }
    auto [it, inserted] = by_value_.emplace(m.values, measurements_.size());
    if (inserted) {
      measurements_.push_back(std::move(m));
    } else {
      auto& kept = measurements_[it->second].aliases;
      kept.insert(kept.end(), m.aliases.begin(), m.aliases.end());
    }
  }
  if (measurements_.empty() && !allow_empty_) {
    throw InputError("empty data set (pass allow_empty to permit it)");
  }
}

DataSet DataSet::from_values(Domain domain, const std::vector<Values>& values, std::string_view prefix,
                             bool allow_empty) {
  std::vector<Measurement> ms;
  ms.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ms.push_back({values[i], {std::string(prefix) + std::to_string(i)}});
  }
  // Duplicated value vectors would otherwise keep several generated aliases.
  std::vector<Measurement> unique;
  std::set<Values> seen;
  for (auto& m : ms) {
    if (seen.insert(m.values).second) unique.push_back(std::move(m));
  }
  return DataSet(std::move(domain), std::move(unique), allow_empty);
}

std::optional<std::size_t> DataSet::find(const Values& values) const {
  auto it = by_value_.find(values);
  if (it == by_value_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> DataSet::find_name(std::string_view name) const {
  for (std::size_t i = 0; i < measurements_.size(); ++i) {
    const auto& aliases = measurements_[i].aliases;
    if (std::find(aliases.begin(), aliases.end(), name) != aliases.end()) return i;
  }
  return std::nullopt;
}

std::size_t DataSet::index_of(std::string_view name) const {
  if (auto i = find_name(name)) return *i;
  throw InputError("unknown measurement '" + std::string(name) + "'", {{"measurement", std::string(name)}});
}

bool DataSet::same_set(const DataSet& other) const {
  if (!(domain_ == other.domain_) || size() != other.size()) return false;
  for (const auto& [values, index] : by_value_) {
    if (!other.find(values)) return false;
  }
  return true;
}

bool operator==(const DataSet& a, const DataSet& b) {
  if (!(a.domain_ == b.domain_) || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.values(i) != b.values(i)) return false;
  }
  return true;
}

PointMap::PointMap(Domain source, Domain target, std::vector<std::size_t> image)
    : source_(std::move(source)), target_(std::move(target)), image_(std::move(image)) {
  if (image_.size() != source_.size()) {
    throw InputError("point map is not total: " + std::to_string(image_.size()) + " images for " +
                     std::to_string(source_.size()) + " points");
  }
  for (std::size_t i = 0; i < image_.size(); ++i) {
    if (image_[i] >= target_.size()) {
      throw InputError("point map sends '" + source_.id(i) + "' outside its target",
                       {{"point", source_.id(i)}});
    }
  }
}

PointMap PointMap::identity(const Domain& domain) {
  std::vector<std::size_t> image(domain.size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = i;
  return PointMap(domain, domain, std::move(image));
}

PointMap PointMap::from_table(Domain source, Domain target, const std::map<std::string, std::string>& table) {
  std::vector<std::size_t> image(source.size());
  for (const auto& [from, to] : table) source.index_of(from);
  for (std::size_t i = 0; i < source.size(); ++i) {
    auto it = table.find(source.id(i));
    if (it == table.end()) {
      throw InputError("point map does not assign '" + source.id(i) + "'", {{"point", source.id(i)}});
    }
    image[i] = target.index_of(it->second);
  }
  return PointMap(std::move(source), std::move(target), std::move(image));
}

bool PointMap::is_injective() const {
  std::vector<bool> hit(target_.size(), false);
  for (auto y : image_) {
    if (hit[y]) return false;
    hit[y] = true;
  }
  return true;
}

bool PointMap::is_bijective() const { return source_.size() == target_.size() && is_injective(); }

std::optional<PointMap> PointMap::inverse() const {
  if (!is_bijective()) return std::nullopt;
  std::vector<std::size_t> inv(image_.size());
  for (std::size_t i = 0; i < image_.size(); ++i) inv[image_[i]] = i;
  return PointMap(target_, source_, std::move(inv));
}

PointMap compose(const PointMap& outer, const PointMap& inner) {
  if (!(inner.target() == outer.source())) {
    throw DomainMismatch("cannot compose point maps: domains do not match");
  }
  std::vector<std::size_t> image(inner.source().size());
  for (std::size_t i = 0; i < image.size(); ++i) image[i] = outer(inner(i));
  return PointMap(inner.source(), outer.target(), std::move(image));
}

Values precompose(const Values& phi, const PointMap& f) {
  if (phi.size() != f.target().size()) throw DomainMismatch("measurement is not defined on the map's target");
  Values out;
  out.reserve(f.source().size());
  for (auto x : f.image()) out.push_back(phi[x]);
  return out;
}

ValueMap ValueMap::identity() { return ValueMap{}; }

ValueMap ValueMap::negate() {
  ValueMap f;
  f.kind_ = Kind::negate;
  f.a_ = Rational(-1);
  return f;
}

ValueMap ValueMap::affine(Rational a, Rational b) {
  ValueMap f;
  f.kind_ = Kind::affine;
  f.a_ = std::move(a);
  f.b_ = std::move(b);
  return f;
}

ValueMap ValueMap::clamp_sign() {
  ValueMap f;
  f.kind_ = Kind::clamp_sign;
  return f;
}

ValueMap ValueMap::table(std::map<Rational, Rational> entries) {
  ValueMap f;
  f.kind_ = Kind::table;
  f.table_ = std::move(entries);
  return f;
}

Rational ValueMap::operator()(const Rational& x) const {
  switch (kind_) {
    case Kind::identity:
      return x;
    case Kind::negate:
      return -x;
    case Kind::affine:
      return a_ * x + b_;
    case Kind::clamp_sign:
      return x.sign() < 0 ? Rational(-1) : Rational(1);
    case Kind::table: {
      auto it = table_.find(x);
      if (it == table_.end()) {
        throw InputError("value map table has no entry for " + x.to_string(), {{"value", x.to_string()}});
      }
      return it->second;
    }
  }
  return x;
}

bool ValueMap::is_invertible() const {
  switch (kind_) {
    case Kind::identity:
    case Kind::negate:
      return true;
    case Kind::affine:
      return !a_.is_zero();
    case Kind::clamp_sign:
      return false;
    case Kind::table: {
      std::set<Rational> image;
      for (const auto& [k, v] : table_) {
        if (!image.insert(v).second) return false;
      }
      return true;
    }
  }
  return false;
}

ValueMap ValueMap::inverse() const {
  if (!is_invertible()) throw HypothesisViolation("value map " + describe() + " is not invertible");
  switch (kind_) {
    case Kind::identity:
    case Kind::negate:
      return *this;
    case Kind::affine:
      return affine(Rational(1) / a_, -b_ / a_);
    case Kind::table: {
      std::map<Rational, Rational> inv;
      for (const auto& [k, v] : table_) inv.emplace(v, k);
      return table(std::move(inv));
    }
    case Kind::clamp_sign:
      break;
  }
  throw HypothesisViolation("value map " + describe() + " is not invertible");
}

std::string ValueMap::describe() const {
  switch (kind_) {
    case Kind::identity:
      return "identity";
    case Kind::negate:
      return "negate";
    case Kind::affine:
      return "affine(" + a_.to_string() + "," + b_.to_string() + ")";
    case Kind::clamp_sign:
      return "clamp-sign";
    case Kind::table:
      return "table(" + std::to_string(table_.size()) + " entries)";
  }
  return "?";
}

}  // namespace enriched

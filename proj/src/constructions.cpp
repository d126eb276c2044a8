#include "enriched/constructions.hpp"

#include <algorithm>
#include <set>

#include "enriched/errors.hpp"

namespace enriched {

std::vector<Rational> PseudometricMatrix::distinct_values() const {
  std::set<Rational> values{Rational(0)};
  values.insert(entries_.begin(), entries_.end());
  return {values.begin(), values.end()};
}

Rational sup_distance(const Values& phi, const Values& psi) {
  if (phi.size() != psi.size()) {
    throw DomainMismatch("sup distance between measurements on different domains");
  }
  Rational best(0);
  for (std::size_t i = 0; i < phi.size(); ++i) best = max(best, (phi[i] - psi[i]).abs());
  return best;
}

PseudometricMatrix pseudometric(const DataSet& data) {
  const std::size_t n = data.domain().size();
  PseudometricMatrix d(n);
  for (const auto& m : data.measurements()) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        Rational gap = (m.values[i] - m.values[j]).abs();
        if (d(i, j) < gap) {
          d(i, j) = gap;
          d(j, i) = std::move(gap);
        }
      }
    }
  }
  return d;
}

Domain disjoint_union(const Domain& left, const Domain& right) {
  std::vector<std::string> ids;
  ids.reserve(left.size() + right.size());
  for (const auto& id : left.ids()) ids.push_back("L:" + id);
  for (const auto& id : right.ids()) ids.push_back("R:" + id);
  return Domain(std::move(ids));
}

PointMap disjoint_union(const PointMap& left, const PointMap& right) {
  const std::size_t shift = left.target().size();
  std::vector<std::size_t> image(left.image());
  for (auto y : right.image()) image.push_back(y + shift);
  return PointMap(disjoint_union(left.source(), right.source()), disjoint_union(left.target(), right.target()),
                  std::move(image));
}

namespace {

Values concat(const Values& a, const Values& b) {
  Values out(a);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace

Coproduct coproduct(const DataSet& left, const DataSet& right) {
  const Values zero_left(left.domain().size(), Rational(0));
  const Values zero_right(right.domain().size(), Rational(0));
  std::vector<Measurement> ms;
  for (const auto& m : left.measurements()) ms.push_back({concat(m.values, zero_right), {"L:" + m.name()}});
  for (const auto& m : right.measurements()) ms.push_back({concat(zero_left, m.values), {"R:" + m.name()}});
  Coproduct out{DataSet(disjoint_union(left.domain(), right.domain()), std::move(ms),
                        left.allows_empty() || right.allows_empty()),
                {},
                {}};
  for (const auto& m : left.measurements()) out.in_left.push_back(*out.data.find(concat(m.values, zero_right)));
  for (const auto& m : right.measurements()) out.in_right.push_back(*out.data.find(concat(zero_left, m.values)));
  return out;
}

Product product(const DataSet& left, const DataSet& right) {
  std::vector<Measurement> ms;
  std::vector<std::pair<std::size_t, std::size_t>> origin;
  for (std::size_t i = 0; i < left.size(); ++i) {
    for (std::size_t j = 0; j < right.size(); ++j) {
      ms.push_back({concat(left.values(i), right.values(j)), {left[i].name() + "+" + right[j].name()}});
      origin.emplace_back(i, j);
    }
  }
  Product out{DataSet(disjoint_union(left.domain(), right.domain()), std::move(ms),
                      left.allows_empty() || right.allows_empty()),
              {},
              {}};
  out.pr_left.resize(out.data.size());
  out.pr_right.resize(out.data.size());
  for (const auto& [i, j] : origin) {
    const auto k = *out.data.find(concat(left.values(i), right.values(j)));
    out.pr_left[k] = i;
    out.pr_right[k] = j;
  }
  return out;
}

SetMap copair(const Coproduct& coproduct, const SetMap& alpha, const SetMap& beta) {
  if (alpha.size() != coproduct.in_left.size() || beta.size() != coproduct.in_right.size()) {
    throw InputError("copair: component maps do not match the coproduct summands");
  }
  std::vector<std::optional<std::size_t>> mu(coproduct.data.size());
  auto assign = [&](std::size_t k, std::size_t value, const std::string& side) {
    if (mu[k] && *mu[k] != value) {
      throw HypothesisViolation("copair does not exist: the summands share measurement '" +
                                    coproduct.data[k].name() + "' but the maps disagree on it",
                                {{"measurement", coproduct.data[k].name()}, {"side", side}});
    }
    mu[k] = value;
  };
  for (std::size_t i = 0; i < alpha.size(); ++i) assign(coproduct.in_left[i], alpha[i], "left");
  for (std::size_t j = 0; j < beta.size(); ++j) assign(coproduct.in_right[j], beta[j], "right");
  SetMap out;
  out.reserve(mu.size());
  for (const auto& v : mu) out.push_back(*v);
  return out;
}

SetMap pair(const Product& product, const SetMap& alpha, const SetMap& beta) {
  if (alpha.size() != beta.size()) throw InputError("pair: component maps have different sources");
  SetMap out(alpha.size());
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    bool found = false;
    for (std::size_t m = 0; m < product.data.size(); ++m) {
      if (product.pr_left[m] == alpha[k] && product.pr_right[m] == beta[k]) {
        out[k] = m;
        found = true;
        break;
      }
    }
    if (!found) throw InputError("pair: component map leaves its codomain");
  }
  return out;
}

UnitsChange change_units(const ValueMap& f, const DataSet& data, std::string_view label) {
  std::vector<Measurement> ms;
  std::vector<Values> images;
  for (const auto& m : data.measurements()) {
    Values v;
    v.reserve(m.values.size());
    for (const auto& x : m.values) v.push_back(f(x));
    images.push_back(v);
    ms.push_back({std::move(v), {std::string(label) + "(" + m.name() + ")"}});
  }
  UnitsChange out{DataSet(data.domain(), std::move(ms), data.allows_empty()), {}};
  for (const auto& v : images) out.transport.push_back(*out.data.find(v));
  return out;
}

DomainChange domain_change(const DataSet& data, const PointMap& f, std::string_view label) {
  if (!(f.target() == data.domain())) throw DomainMismatch("domain change: map target is not the data set domain");
  std::vector<Measurement> ms;
  std::vector<Values> images;
  for (const auto& m : data.measurements()) {
    Values v = precompose(m.values, f);
    images.push_back(v);
    ms.push_back({std::move(v), {m.name() + "." + std::string(label)}});
  }
  DomainChange out{DataSet(f.source(), std::move(ms), data.allows_empty()), {}};
  for (const auto& v : images) out.transport.push_back(*out.data.find(v));
  return out;
}

}  // namespace enriched

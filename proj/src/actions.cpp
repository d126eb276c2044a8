#include "enriched/actions.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <deque>
#include <map>
#include <numeric>
#include <set>

#include "enriched/errors.hpp"

namespace enriched {

namespace {

constexpr std::uint32_t kNoProduct = UINT32_MAX;
// Beyond this many operations the |M|^2 product table is not materialized.
constexpr std::size_t kProductTableLimit = 2048;

std::string image_name(const PointMap& g) {
  std::string out = "[";
  for (std::size_t i = 0; i < g.image().size(); ++i) {
    if (i) out += ",";
    out += g.target().id(g(i));
  }
  return out + "]";
}

void require_endo(const PointMap& g, const DataSet& data) {
  if (!(g.source() == data.domain()) || !(g.target() == data.domain())) {
    throw DomainMismatch("map is not an endomorphism of the data set domain");
  }
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

// Measurements re-encoded as indices into the sorted distinct values of Φ.
struct ValueCodes {
  std::vector<std::vector<std::uint32_t>> codes;
  std::set<std::vector<std::uint32_t>> members;

  explicit ValueCodes(const DataSet& data) {
    std::map<Rational, std::uint32_t> index;
    for (const auto& m : data.measurements()) {
      for (const auto& v : m.values) index.emplace(v, 0);
    }
    std::uint32_t next = 0;
    for (auto& [v, code] : index) code = next++;
    for (const auto& m : data.measurements()) {
      std::vector<std::uint32_t> c;
      c.reserve(m.values.size());
      for (const auto& v : m.values) c.push_back(index.at(v));
      members.insert(c);
      codes.push_back(std::move(c));
    }
  }

  bool preserved_by(const std::vector<std::size_t>& image, std::vector<std::uint32_t>& scratch) const {
    for (const auto& c : codes) {
      for (std::size_t i = 0; i < image.size(); ++i) scratch[i] = c[image[i]];
      if (!members.count(scratch)) return false;
    }
    return true;
  }
};

}  // namespace

std::size_t guard_from_environment(std::size_t fallback) {
  const char* raw = std::getenv("ENRICHED_PH_GUARD");
  if (raw == nullptr || *raw == '\0') return fallback;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(raw, &end, 10);
  if (end == raw || *end != '\0') throw InputError("ENRICHED_PH_GUARD must be a non-negative integer");
  return static_cast<std::size_t>(value);
}

std::optional<std::size_t> operation_failure(const PointMap& g, const DataSet& data) {
  require_endo(g, data);
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (!data.find(precompose(data.values(i), g))) return i;
  }
  return std::nullopt;
}

bool is_operation(const PointMap& g, const DataSet& data) { return !operation_failure(g, data).has_value(); }

OperationSet enumerate_end(const DataSet& data, std::size_t guard) {
  const std::size_t n = data.domain().size();
  if (n > guard) {
    throw GuardExceeded("endomorphism enumeration needs |X| <= " + std::to_string(guard) + ", got " +
                            std::to_string(n),
                        {{"domain_size", std::to_string(n)}, {"guard", std::to_string(guard)}});
  }
  OperationSet out{data, {}};
  const ValueCodes codes(data);
  std::vector<std::size_t> image(n, 0);
  std::vector<std::uint32_t> scratch(n);
  while (true) {
    if (codes.preserved_by(image, scratch)) {
      PointMap g(data.domain(), data.domain(), image);
      std::string name = image_name(g);
      out.ops.push_back({std::move(g), std::move(name)});
    }
    // Odometer in lexicographic order, last position fastest.
    std::size_t pos = n;
    while (pos > 0) {
      --pos;
      if (++image[pos] < n) break;
      image[pos] = 0;
      if (pos == 0) return out;
    }
    if (n == 0) return out;
  }
}

OperationSet enumerate_aut(const DataSet& data, std::size_t guard) {
  OperationSet end = enumerate_end(data, guard);
  OperationSet out{std::move(end.data), {}};
  for (auto& op : end.ops) {
    if (op.map.is_bijective()) out.ops.push_back(std::move(op));
  }
  return out;
}

std::vector<PointMap> generated_submonoid(const Domain& domain, const std::vector<PointMap>& generators) {
  for (const auto& g : generators) {
    if (!(g.source() == domain) || !(g.target() == domain)) {
      throw DomainMismatch("generator is not an endomorphism of the given domain");
    }
  }
  std::vector<PointMap> out{PointMap::identity(domain)};
  std::set<std::vector<std::size_t>> seen{out.front().image()};
  for (std::size_t k = 0; k < out.size(); ++k) {
    for (const auto& g : generators) {
      PointMap next = compose(out[k], g);
      if (seen.insert(next.image()).second) out.push_back(std::move(next));
    }
  }
  return out;
}

std::string to_string(IncarnationKind kind) {
  switch (kind) {
    case IncarnationKind::general:
      return "general";
    case IncarnationKind::group_like:
      return "group-like";
    case IncarnationKind::monoid:
      return "monoid";
    case IncarnationKind::group:
      return "group";
  }
  return "general";
}

Incarnation::Incarnation(DataSet data, std::vector<Operation> ops) : data_(std::move(data)) {
  std::map<std::vector<std::size_t>, std::size_t> by_image;
  for (auto& op : ops) {
    if (!(op.map.source() == data_.domain()) || !(op.map.target() == data_.domain())) {
      throw DomainMismatch("operation '" + op.name + "' is not an endomorphism of the data set domain",
                           {{"operation", op.name}});
    }
    if (auto bad = operation_failure(op.map, data_)) {
      throw InvalidIncarnation("'" + op.name + "' is not an operation: " + data_[*bad].name() + " composed with " +
                                   op.name + " leaves the data set",
                               {{"operation", op.name}, {"measurement", data_[*bad].name()}});
    }
    if (by_image.emplace(op.map.image(), ops_.size()).second) ops_.push_back(std::move(op));
  }

  const std::size_t m = ops_.size();
  action_.resize(data_.size() * m);
  for (std::size_t phi = 0; phi < data_.size(); ++phi) {
    for (std::size_t g = 0; g < m; ++g) {
      action_[phi * m + g] = *data_.find(precompose(data_.values(phi), ops_[g].map));
    }
  }

  for (const auto& op : ops_) group_like_ = group_like_ && op.map.is_bijective();

  bool closed = true;
  if (m <= kProductTableLimit) products_.assign(m * m, std::nullopt);
  for (std::size_t g = 0; g < m; ++g) {
    for (std::size_t h = 0; h < m; ++h) {
      auto it = by_image.find(compose(ops_[g].map, ops_[h].map).image());
      if (it == by_image.end()) {
        closed = false;
        if (m > kProductTableLimit) break;
        continue;
      }
      if (m <= kProductTableLimit) products_[g * m + h] = it->second;
    }
    if (!closed && m > kProductTableLimit) break;
  }
  const bool has_identity = identity_index().has_value();
  const bool monoid = has_identity && closed;
  if (monoid) {
    bool inverses = true;
    const std::size_t id = *identity_index();
    for (std::size_t g = 0; g < m && inverses; ++g) {
      bool found = false;
      for (std::size_t h = 0; h < m && !found; ++h) found = product(g, h) == id && product(h, g) == id;
      inverses = found;
    }
    kind_ = inverses ? IncarnationKind::group : IncarnationKind::monoid;
  } else {
    kind_ = group_like_ ? IncarnationKind::group_like : IncarnationKind::general;
  }
}

Incarnation::Incarnation(DataSet data, const std::vector<PointMap>& maps, const std::string& prefix)
    : Incarnation(std::move(data), [&] {
        std::vector<Operation> ops;
        for (std::size_t i = 0; i < maps.size(); ++i) ops.push_back({maps[i], prefix + std::to_string(i)});
        return ops;
      }()) {}

std::optional<std::size_t> Incarnation::identity_index() const {
  for (std::size_t g = 0; g < ops_.size(); ++g) {
    const auto& image = ops_[g].map.image();
    bool id = true;
    for (std::size_t x = 0; x < image.size() && id; ++x) id = image[x] == x;
    if (id) return g;
  }
  return std::nullopt;
}

std::optional<std::size_t> Incarnation::find_op(const PointMap& map) const {
  for (std::size_t g = 0; g < ops_.size(); ++g) {
    if (ops_[g].map == map) return g;
  }
  return std::nullopt;
}

std::optional<std::size_t> Incarnation::find_op_name(std::string_view name) const {
  for (std::size_t g = 0; g < ops_.size(); ++g) {
    if (ops_[g].name == name) return g;
  }
  return std::nullopt;
}

std::optional<std::size_t> Incarnation::product(std::size_t g, std::size_t h) const {
  const std::size_t m = ops_.size();
  if (!products_.empty()) return products_[g * m + h];
  return find_op(compose(ops_[g].map, ops_[h].map));
}

bool operator==(const Incarnation& a, const Incarnation& b) {
  if (!(a.data_ == b.data_) || a.ops_.size() != b.ops_.size()) return false;
  for (std::size_t g = 0; g < a.ops_.size(); ++g) {
    if (!(a.ops_[g].map == b.ops_[g].map)) return false;
  }
  return true;
}

Incarnation universal_incarnation(const DataSet& data, std::size_t guard) {
  auto end = enumerate_end(data, guard);
  return Incarnation(std::move(end.data), std::move(end.ops));
}

Incarnation generated_incarnation(const Incarnation& inc) {
  std::vector<PointMap> gens;
  for (const auto& op : inc.ops()) gens.push_back(op.map);
  auto closure = generated_submonoid(inc.domain(), gens);
  std::vector<Operation> ops;
  for (auto& g : closure) {
    auto existing = inc.find_op(g);
    std::string name = existing ? inc.ops()[*existing].name : image_name(g);
    ops.push_back({std::move(g), std::move(name)});
  }
  return Incarnation(inc.data(), std::move(ops));
}

MeasurementSet deformation_closure(const MeasurementSet& omega, const Incarnation& inc) {
  std::vector<bool> reached(inc.size(), false);
  std::deque<std::size_t> queue;
  for (auto w : omega) {
    if (w >= inc.size()) throw InputError("measurement index out of range");
    if (!reached[w]) {
      reached[w] = true;
      queue.push_back(w);
    }
  }
  while (!queue.empty()) {
    const auto phi = queue.front();
    queue.pop_front();
    for (std::size_t g = 0; g < inc.op_count(); ++g) {
      const auto next = inc.act(phi, g);
      if (!reached[next]) {
        reached[next] = true;
        queue.push_back(next);
      }
    }
  }
  MeasurementSet out;
  for (std::size_t i = 0; i < reached.size(); ++i) {
    if (reached[i]) out.push_back(i);
  }
  return out;
}

std::vector<MeasurementSet> blocks(const Incarnation& inc) {
  UnionFind uf(inc.size());
  for (std::size_t phi = 0; phi < inc.size(); ++phi) {
    for (std::size_t g = 0; g < inc.op_count(); ++g) uf.unite(phi, inc.act(phi, g));
  }
  std::map<std::size_t, MeasurementSet> by_root;
  for (std::size_t phi = 0; phi < inc.size(); ++phi) by_root[uf.find(phi)].push_back(phi);
  std::vector<MeasurementSet> out;
  for (auto& [root, members] : by_root) out.push_back(std::move(members));
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

std::size_t block_of(const std::vector<MeasurementSet>& partition, std::size_t phi) {
  for (std::size_t b = 0; b < partition.size(); ++b) {
    if (std::binary_search(partition[b].begin(), partition[b].end(), phi)) return b;
  }
  throw InputError("measurement not covered by partition");
}

bool is_deformation(std::size_t psi, std::size_t phi, const Incarnation& inc) {
  const auto reach = deformation_closure({phi}, inc);
  return std::binary_search(reach.begin(), reach.end(), psi);
}

bool is_independent(const MeasurementSet& omega, const Incarnation& inc) {
  for (auto w : omega) {
    const auto reach = deformation_closure({w}, inc);
    for (auto v : omega) {
      if (v != w && std::binary_search(reach.begin(), reach.end(), v)) return false;
    }
  }
  return true;
}

bool is_generating(const MeasurementSet& omega, const Incarnation& inc) {
  return deformation_closure(omega, inc).size() == inc.size();
}

bool is_basis(const MeasurementSet& omega, const Incarnation& inc) {
  return is_independent(omega, inc) && is_generating(omega, inc);
}

bool indistinguishable(std::size_t phi, std::size_t psi, const Incarnation& inc) {
  return is_deformation(psi, phi, inc) && is_deformation(phi, psi, inc);
}

MeasurementSet find_basis(const Incarnation& inc) {
  std::vector<MeasurementSet> reach(inc.size());
  for (std::size_t phi = 0; phi < inc.size(); ++phi) reach[phi] = deformation_closure({phi}, inc);
  auto reaches = [&](std::size_t from, std::size_t to) {
    return std::binary_search(reach[from].begin(), reach[from].end(), to);
  };

  MeasurementSet omega;
  while (true) {
    const auto span = deformation_closure(omega, inc);
    if (span.size() == inc.size()) break;
    std::size_t psi = 0;
    while (std::binary_search(span.begin(), span.end(), psi)) ++psi;
    MeasurementSet next{psi};
    for (auto w : omega) {
      if (!reaches(psi, w)) next.push_back(w);
    }
    std::sort(next.begin(), next.end());
    omega = std::move(next);
  }
  return omega;
}

std::vector<MeasurementSet> enumerate_bases(const Incarnation& inc, std::size_t guard) {
  const std::size_t n = inc.size();
  if (n > guard || n > 62) {
    throw GuardExceeded("basis enumeration needs |Φ| <= " + std::to_string(std::min<std::size_t>(guard, 62)) +
                            ", got " + std::to_string(n),
                        {{"measurements", std::to_string(n)}, {"guard", std::to_string(guard)}});
  }
  std::vector<std::uint64_t> reach(n, 0);
  for (std::size_t phi = 0; phi < n; ++phi) {
    for (auto r : deformation_closure({phi}, inc)) reach[phi] |= std::uint64_t{1} << r;
  }
  const std::uint64_t all = n == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1;
  std::vector<MeasurementSet> out;
  for (std::uint64_t mask = 0; mask <= all; ++mask) {
    std::uint64_t span = 0;
    bool independent = true;
    for (std::size_t w = 0; w < n && independent; ++w) {
      if (!(mask >> w & 1)) continue;
      span |= reach[w];
      independent = (reach[w] & mask) == (std::uint64_t{1} << w);
    }
    if (independent && span == all) {
      MeasurementSet basis;
      for (std::size_t w = 0; w < n; ++w) {
        if (mask >> w & 1) basis.push_back(w);
      }
      out.push_back(std::move(basis));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t dimension(const Incarnation& inc) { return find_basis(inc).size(); }

Incarnation block_incarnation(const Incarnation& inc, std::size_t psi) {
  const auto partition = blocks(inc);
  const auto& block = partition[block_of(partition, psi)];
  std::vector<Measurement> ms;
  for (auto phi : block) ms.push_back(inc.data()[phi]);
  DataSet data(inc.domain(), std::move(ms), inc.data().allows_empty());
  try {
    return Incarnation(std::move(data), inc.ops());
  } catch (const InvalidIncarnation& e) {
    throw InternalError(std::string("block is not preserved by the action: ") + e.what(), e.witness());
  }
}

}  // namespace enriched

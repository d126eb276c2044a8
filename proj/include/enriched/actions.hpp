#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "enriched/dataset.hpp"

namespace enriched {

// Default bound on |X| for exhaustive endomorphism enumeration (|X|^|X| candidates).
inline constexpr std::size_t kDefaultEnumerationGuard = 6;
// Default bound on |Φ| for exhaustive basis enumeration (2^|Φ| subsets).
inline constexpr std::size_t kDefaultBasisGuard = 12;

// Reads ENRICHED_PH_GUARD, falling back to the given default.
std::size_t guard_from_environment(std::size_t fallback);

struct Operation {
  PointMap map;
  std::string name;
};

// true iff φ∘g ∈ Φ for every φ. Throws DomainMismatch unless g is an endo of dom(Φ).
bool is_operation(const PointMap& g, const DataSet& data);
// First φ (index) with φ∘g ∉ Φ, if any.
std::optional<std::size_t> operation_failure(const PointMap& g, const DataSet& data);

// Finite set of verified Φ-operations, in canonical order.
struct OperationSet {
  DataSet data;
  std::vector<Operation> ops;
};

// End_Φ(X), enumerated over all |X|^|X| maps in lexicographic image order.
// Throws GuardExceeded when |X| > guard.
OperationSet enumerate_end(const DataSet& data, std::size_t guard = kDefaultEnumerationGuard);
// Aut_Φ(X): the bijective members of End_Φ(X).
OperationSet enumerate_aut(const DataSet& data, std::size_t guard = kDefaultEnumerationGuard);

// Least composition-closed set containing the identity and the given maps.
// Order: identity, then breadth-first by word length.
std::vector<PointMap> generated_submonoid(const Domain& domain, const std::vector<PointMap>& generators);

enum class IncarnationKind { general, group_like, monoid, group };
std::string to_string(IncarnationKind kind);

// A data set with a chosen set M of operations. Duplicated maps in M are
// merged (first name kept). The kind is computed, never declared.
class Incarnation {
 public:
  Incarnation() = default;
  // Throws InvalidIncarnation naming (g, φ) when some g is not a Φ-operation.
  Incarnation(DataSet data, std::vector<Operation> ops);
  Incarnation(DataSet data, const std::vector<PointMap>& maps, const std::string& prefix);

  const DataSet& data() const { return data_; }
  const Domain& domain() const { return data_.domain(); }
  const std::vector<Operation>& ops() const { return ops_; }
  std::size_t size() const { return data_.size(); }
  std::size_t op_count() const { return ops_.size(); }
  const PointMap& op(std::size_t g) const { return ops_.at(g).map; }

  // Index of φ∘g in Φ.
  std::size_t act(std::size_t phi, std::size_t g) const { return action_[phi * ops_.size() + g]; }

  IncarnationKind kind() const { return kind_; }
  bool is_monoid() const { return kind_ == IncarnationKind::monoid || kind_ == IncarnationKind::group; }
  bool is_group() const { return kind_ == IncarnationKind::group; }
  bool is_group_like() const { return group_like_; }

  std::optional<std::size_t> identity_index() const;
  std::optional<std::size_t> find_op(const PointMap& map) const;
  std::optional<std::size_t> find_op_name(std::string_view name) const;
  // Index of g∘h in M, when present. Then φ(g∘h) = (φg)h.
  std::optional<std::size_t> product(std::size_t g, std::size_t h) const;

  friend bool operator==(const Incarnation& a, const Incarnation& b);

 private:
  DataSet data_;
  std::vector<Operation> ops_;
  std::vector<std::size_t> action_;
  std::vector<std::optional<std::size_t>> products_;
  IncarnationKind kind_ = IncarnationKind::general;
  bool group_like_ = true;
};

using MeasurementSet = std::vector<std::size_t>;  // sorted indices into Φ

// (Φ, End_Φ(X)).
Incarnation universal_incarnation(const DataSet& data, std::size_t guard = kDefaultEnumerationGuard);
// (Φ, ⟨M⟩).
Incarnation generated_incarnation(const Incarnation& inc);

// ΩM: Ω together with every ωg1⋯gk.
MeasurementSet deformation_closure(const MeasurementSet& omega, const Incarnation& inc);

// Φ/M: classes of the equivalence generated by deformation, each sorted, in
// order of their smallest member.
std::vector<MeasurementSet> blocks(const Incarnation& inc);
std::size_t block_of(const std::vector<MeasurementSet>& partition, std::size_t phi);

bool is_deformation(std::size_t psi, std::size_t phi, const Incarnation& inc);  // ψ ∈ φM
bool is_independent(const MeasurementSet& omega, const Incarnation& inc);
bool is_generating(const MeasurementSet& omega, const Incarnation& inc);
bool is_basis(const MeasurementSet& omega, const Incarnation& inc);
bool indistinguishable(std::size_t phi, std::size_t psi, const Incarnation& inc);

// Exchange argument: repeatedly adjoin the first measurement outside ΩM and
// drop the members it deforms into. Output sorted.
MeasurementSet find_basis(const Incarnation& inc);
// All bases, in lexicographic order of their sorted index lists. Throws
// GuardExceeded when |Φ| > guard.
std::vector<MeasurementSet> enumerate_bases(const Incarnation& inc, std::size_t guard = kDefaultBasisGuard);
std::size_t dimension(const Incarnation& inc);

// ([ψ], M). Throws InternalError if some g fails to preserve the block.
Incarnation block_incarnation(const Incarnation& inc, std::size_t psi);

}  // namespace enriched

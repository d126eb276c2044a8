#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "enriched/actions.hpp"
#include "enriched/constructions.hpp"

namespace enriched {

// Set equivariant operator (α, T): (Φ, M) → (Ψ, N) with α(φg) = α(φ)T(g).
// Construct through validate_seo or one of the builders below; flags are computed.
struct Seo {
  Incarnation source;
  Incarnation target;
  SetMap alpha;  // Φ index -> Ψ index
  SetMap T;      // M index -> N index
  bool is_meo = false;
  bool is_geo = false;
  std::optional<PointMap> realization;  // Y → X, when geometric

  bool is_geometric() const { return realization.has_value(); }
  bool is_isomorphism() const;
};

// Equality of the underlying pairs of maps between equal endpoints.
bool same_seo(const Seo& a, const Seo& b);

// First (φ, g) with α(φg) ≠ α(φ)T(g), in canonical order.
std::optional<std::pair<std::size_t, std::size_t>> equivariance_failure(const Incarnation& source,
                                                                       const Incarnation& target,
                                                                       const SetMap& alpha, const SetMap& T);

// Verifies equivariance and computes the flags. Does not extend T to ⟨M⟩.
// Throws HypothesisViolation with the witnessing (φ, g), or when T leaves N.
Seo validate_seo(const Incarnation& source, const Incarnation& target, const SetMap& alpha, const SetMap& T);
// T given as maps; each must be a member of N.
Seo validate_seo(const Incarnation& source, const Incarnation& target, const SetMap& alpha,
                 const std::vector<PointMap>& T);

Seo identity_seo(const Incarnation& inc);
// (id, M ↪ End_Φ(X)) into the universal incarnation.
Seo canonical_seo(const Incarnation& inc, const Incarnation& universal);

// second ∘ first. Throws InputError when first.target ≠ second.source.
Seo compose_seo(const Seo& first, const Seo& second);

// Per-point candidate sets f(y) ∈ ⋂_φ φ⁻¹(α(φ)(y)).
struct RealizationSearch {
  std::optional<PointMap> realization;
  std::optional<std::size_t> empty_point;  // a y with no candidates
};

// A realization f: Y → X of α: Φ → Ψ (φ∘f = α(φ)), the first in canonical order.
RealizationSearch find_realization(const DataSet& source, const DataSet& target, const SetMap& alpha);
// Every realization of α, in lexicographic image order.
std::vector<PointMap> all_realizations(const DataSet& source, const DataSet& target, const SetMap& alpha);

// A realization of (α, T): φ∘f = α(φ) and g∘f = f∘T(g) for all φ, g.
RealizationSearch find_seo_realization(const Seo& seo);

struct OperatorResult {
  Incarnation incarnation;
  Seo seo;
};

// Restriction to an M-invariant subset Y ⊂ X (given by ids, kept in X order).
// Throws HypothesisViolation naming (y, g) when Y is not invariant.
OperatorResult restriction(const Incarnation& inc, const std::vector<std::string>& subset);

// Domain change along a bijection f: Y → X with T(g) = f⁻¹gf.
OperatorResult domain_change_incarnation(const Incarnation& inc, const PointMap& f);

// (fΦ, M) with the SEO (f−, id_M).
OperatorResult change_units_seo(const ValueMap& f, const Incarnation& inc);

// C(f)((α,T)) = ((f−)α(f⁻¹−), T) between (fΦ, M) and (fΨ, N). f must be invertible.
Seo change_units_functor(const ValueMap& f, const Seo& seo);

enum class ExtensionVariant { seo, meo, geo };
std::string to_string(ExtensionVariant variant);

struct ExtensionOptions {
  // Relations are explored over all words by default; a bound restricts the
  // general-variant relation scan to words of at most this length.
  std::optional<std::size_t> max_word_length;
};

// The unique SEO/MEO/GEO (α, T) with α|Ω = ᾱ. basis_images[k] is ᾱ(Ω[k]).
// Throws HypothesisViolation naming the offending relation or coincidence.
Seo extend_from_basis(const Incarnation& source, const Incarnation& target, const MeasurementSet& basis,
                      const SetMap& basis_images, const SetMap& T, ExtensionVariant variant,
                      const ExtensionOptions& options = {});

// True iff T is a monoid homomorphism M → N (both must be monoids).
bool is_monoid_hom(const Incarnation& source, const Incarnation& target, const SetMap& T);

// M_ω = {g | ωg = ω}.
std::vector<std::size_t> isotropy(const Incarnation& inc, std::size_t omega);

// All GEOs out of a transitive group incarnation, one per ψ with T(M_ω) ⊆ N_ψ.
std::vector<Seo> enumerate_geos(const Incarnation& source, std::size_t omega, const Incarnation& target,
                                const SetMap& T);

// Diagonal incarnation (∐_{blocks} [ψ], M′) and the isomorphism (α, T).
OperatorResult decompose(const Incarnation& inc);

}  // namespace enriched

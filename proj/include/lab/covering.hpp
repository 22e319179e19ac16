#pragma once

#include "lab/group.hpp"

#include <optional>
#include <vector>

namespace lab {

// One translate B_{radius}·center.
struct TranslateMember {
    long long radius = 0;
    GroupElement center;
};

struct TranslateFamily {
    const GroupContext* ctx = nullptr;
    std::vector<TranslateMember> members;
};

struct MultiplicityReport {
    long long multiplicity = 0;
    GroupElement witness;
    std::optional<std::unordered_map<GroupElement, long long, ElemHash>> histogram;
};

struct IncrementalCheck {
    bool ok = true;
    // First violating index pair (j later member, i earlier) when !ok; -1 for the
    // radius-monotonicity violation at position j.
    long long j = -1, i = -1;
};

struct IncrementalSequence {
    TranslateFamily family;
    bool verified = false;
    long long multiplicity_at_identity = 0;
    GroupElement witness;
};

enum class SearchStatus { Found, Exhausted };

struct WitnessSearchResult {
    SearchStatus status = SearchStatus::Exhausted;
    IncrementalSequence seq;
    long long nodes = 0;
};

MultiplicityReport multiplicity(const TranslateFamily& fam, bool with_histogram = false);
long long multiplicity_at(const TranslateFamily& fam, const GroupElement& g);

// Radii non-increasing and every center outside the union of the earlier translates.
IncrementalCheck is_incremental(const TranslateFamily& fam);

// Greedy subfamily extraction; input must be sorted by non-increasing radius.
// The output is incremental and its translates cover every input center.
IncrementalSequence greedy_incremental(const TranslateFamily& fam);

// Deterministic backtracking for k translates whose centers all carry the identity;
// candidates scanned in canonical order within each ball. Exhaustion is an explicit
// result, never a covering-property certificate.
WitnessSearchResult incremental_witness_search(const GroupContext& ctx,
                                               const std::vector<long long>& radii,
                                               long long k, long long node_budget);

// Greedy packing of directions δ with |δ| ≤ scale and pairwise |δ_i δ_j⁻¹| > scale + margin.
// Seeds the axis powers and central twists, then scans a grid of twisted diagonals.
std::vector<GroupElement> separated_directions(const GroupContext& ctx, long long scale,
                                               long long margin, std::size_t max_count);

// Verified multiplicity-k family at the identity. The ball-gap route is consulted first
// (central powers, maximal internal gaps, quadratic growth condition); when it yields
// nothing within the radius schedule the separated-direction family is used. The returned
// sequence always passes is_incremental and has multiplicity exactly k at the identity.
IncrementalSequence heisenberg_incremental(const GroupContext& ctx, long long k);

// Internal gap scan of a sorted integer set: maximal t - s over consecutive s < t.
struct GapInfo {
    bool has_gap = false;
    long long s = 0, t = 0, length = 0;
};
GapInfo max_internal_gap(const std::vector<long long>& sorted_set);

// m = |g|; spot-checks B_n·g ⊆ B_m·B_n for n ≤ n_max via the triangle inequality
// on sampled elements. A failure indicates a metric bug.
long long almost_central_expander(const GroupContext& ctx, const GroupElement& g, long long n_max);

// 6^c · c2 / c1, exact.
Rat besicovitch_bound_constant(long long c, const Rat& c1, const Rat& c2);

struct BoundedRadiusReport {
    bool ok = false;
    long long measured = 0;
    Rat bound;
};

// Radii must lie in [N, 2N]; compares measured multiplicity against the context's
// growth-constant bound.
BoundedRadiusReport verify_bounded_radius_multiplicity(const IncrementalSequence& seq, long long N);

} // namespace lab

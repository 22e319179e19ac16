#pragma once

#include "lab/numeric.hpp"

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <variant>
#include <vector>

namespace lab {

enum class GroupKind { Zd, Heisenberg, Free, ZInfinity };

std::string group_kind_name(GroupKind k);

// Canonical element encodings. Equality is structural.
struct ZdElem {
    std::vector<long long> v;
    bool operator==(const ZdElem&) const = default;
};

// Upper triangular matrix [[1,k,m],[0,1,n],[0,0,1]].
struct HeisElem {
    long long k = 0, m = 0, n = 0;
    bool operator==(const HeisElem&) const = default;
};

// Reduced word; letter i in 1..r is generator i, -i its inverse.
struct FreeElem {
    std::vector<int> w;
    bool operator==(const FreeElem&) const = default;
};

// Sparse map index -> value, sorted by index, no zero values.
struct ZInfElem {
    std::vector<std::pair<int, long long>> c;
    bool operator==(const ZInfElem&) const = default;
};

using GroupElement = std::variant<ZdElem, HeisElem, FreeElem, ZInfElem>;

struct ElemHash {
    std::size_t operator()(const GroupElement& g) const;
};

// Lexicographic order on canonical encodings; total, used for reproducible tie-breaks.
bool canonical_less(const GroupElement& a, const GroupElement& b);
bool is_identity(const GroupElement& g);
std::string element_str(const GroupElement& g);

struct BudgetError : std::runtime_error {
    explicit BudgetError(std::string msg, long long completed_layers = -1)
        : std::runtime_error(std::move(msg)), layers(completed_layers) {}
    long long layers; // completed BFS layers when the budget tripped
};

struct KindError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class GroupContext;

// BFS layers of the ball around the identity, extended on demand.
struct BallCache {
    long long radius = -1;
    std::vector<GroupElement> elems;      // BFS discovery order
    std::vector<std::size_t> layer_end;   // layer_end[n] = |B_n|
    std::unordered_map<GroupElement, long long, ElemHash> length;
};

class GroupContext {
public:
    static GroupContext zd(int d);
    static GroupContext heisenberg();
    static GroupContext free_group(int rank);
    // Balls only make sense for an explicit finite generator list; this uses ±e_1..±e_d.
    static GroupContext zinf(int d);

    GroupKind kind() const { return kind_; }
    int dim() const { return dim_; }
    const std::vector<GroupElement>& generators() const { return generators_; }
    GroupElement identity() const;
    bool standard_generators() const { return standard_; }

    std::size_t budget() const { return budget_; }
    void set_budget(std::size_t b) { budget_ = b; }

    std::optional<int> growth_c;
    std::optional<Rat> growth_c1, growth_c2;

    // Extends the cached BFS to radius n (throws BudgetError past the element budget).
    const BallCache& balls(long long n) const;
    const BallCache& cache() const { return *cache_; }

private:
    GroupContext(GroupKind kind, int dim, std::vector<GroupElement> gens, bool standard);

    GroupKind kind_;
    int dim_;
    std::vector<GroupElement> generators_;
    bool standard_;
    std::size_t budget_ = 5'000'000;
    std::shared_ptr<BallCache> cache_; // shared so copies of a context reuse the BFS work
};

GroupElement multiply(const GroupContext& ctx, const GroupElement& g, const GroupElement& h);
GroupElement invert(const GroupContext& ctx, const GroupElement& g);
long long word_length(const GroupContext& ctx, const GroupElement& g);

// Exact metric evaluator for the standard Heisenberg generators {a^{±1}, b^{±1}}.
long long heisenberg_word_length(const HeisElem& g);

// g ∈ B_n·center, i.e. word_length(g·center⁻¹) ≤ n.
bool translated_ball_contains(const GroupContext& ctx, long long n,
                              const GroupElement& center, const GroupElement& g);

// Explicit element set, or an implicit ball tag with membership via the metric.
class FiniteSubset {
public:
    static FiniteSubset ball(const GroupContext& ctx, long long n);
    static FiniteSubset of(const GroupContext& ctx, std::vector<GroupElement> elems);

    bool is_ball() const { return ball_radius_.has_value(); }
    long long ball_radius() const { return *ball_radius_; }
    const GroupContext& ctx() const { return *ctx_; }

    bool contains(const GroupElement& g) const;
    // Enumerates (materializing an implicit ball if needed; budget applies).
    const std::vector<GroupElement>& elements() const;
    std::size_t size() const { return elements().size(); }

private:
    explicit FiniteSubset(const GroupContext& ctx) : ctx_(&ctx) {}
    const GroupContext* ctx_;
    std::optional<long long> ball_radius_;
    mutable std::vector<GroupElement> elems_;
    mutable std::unordered_set<GroupElement, ElemHash> index_;
    mutable bool materialized_ = false;
};

FiniteSubset set_product(const FiniteSubset& A, const FiniteSubset& B);

// M_r = {m : word_length(c^m) ≤ 4r} for c = (0,-1,0); sorted.
std::vector<long long> central_powers_in_ball(const GroupContext& ctx, long long r);

} // namespace lab

#pragma once

#include "lab/covering.hpp"
#include "lab/group.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace lab {

// ---- Hopf baseline: translation on Z with counting measure -------------------------

struct HopfSystem {
    std::map<long long, Rat> phi, psi; // finite supports, exact values
};

HopfSystem hopf_system(std::map<long long, Rat> phi, std::map<long long, Rat> psi);

Rat hopf_S(const std::map<long long, Rat>& f, const BigInt& radius, long long x);

struct RatioResult {
    bool defined = false;
    Rat value;
};
RatioResult hopf_R(const HopfSystem& sys, const BigInt& radius, long long x);

// Smallest n from which R_{[-n,n]} equals Σφ/Σψ for every larger radius.
long long hopf_absorption_threshold(const HopfSystem& sys, long long x);

// ---- Cutting-and-stacking tower -----------------------------------------------------

struct TowerPiece {
    Rat start;          // interval [start, start + r)
    Rat phi, psi;
    long long idx = 0;  // stage index value; meaningful iff has_idx
    bool has_idx = false;
};

class TowerStage {
public:
    int n = 1;
    Rat r;                // common interval length
    GroupContext ctx;
    std::vector<std::pair<GroupElement, TowerPiece>> pieces; // insertion order
    std::unordered_map<GroupElement, std::size_t, ElemHash> index;
    std::map<Rat, std::size_t> by_start;
    Rat cursor;           // lazy allocator: next free position right of all mass

    explicit TowerStage(GroupContext c) : ctx(std::move(c)) {}

    const TowerPiece* piece_of(const GroupElement& g) const;
    // Piece containing point x, or nullptr.
    const std::pair<GroupElement, TowerPiece>* piece_at(const Rat& x) const;

    Rat phi_l1() const;
    Rat psi_l1() const;
    long long i_star() const;        // max idx over pieces carrying one
    long long support_radius() const; // max word length over piece elements

    void insert_piece(const GroupElement& g, TowerPiece p);
    // Disjointness and length bookkeeping; throws on violation.
    void check_intervals() const;
};

enum class Observable { Phi, Psi };

struct EvalResult {
    Rat value;
    bool defined = true;
};

// S_F at x: sum of the observable over translates, computed support-restricted
// (iterate pieces, test membership in F implicitly). Strict mode additionally
// enumerates F and flags translates that land outside every assigned interval.
EvalResult eval_S(const TowerStage& stage, const FiniteSubset& F, Observable obs,
                  const Rat& x, bool strict = false);
EvalResult eval_R(const TowerStage& stage, const FiniteSubset& F, const Rat& x);

TowerStage stage_init(const GroupContext& ctx);

struct ProviderResult {
    std::vector<GroupElement> H;
    std::vector<std::pair<long long, GroupElement>> kg; // (k_j, γ_j), j = 1..ℓ
};

// Behavioral contract: given mass set D, fuzz set E, length ℓ and a strict lower
// bound for the radii, produce H ⊇ D and translates passing the explicit verifier.
using IncrementalProvider =
    std::function<ProviderResult(const std::vector<GroupElement>& D,
                                 const std::vector<GroupElement>& E, long long ell,
                                 long long min_k)>;

struct ContractCheck {
    bool ok = true;
    std::string failed; // name of the first failing condition
};

// (i) translate-avoidance E·γ_i vs B_{k_j}·e·γ_j (i ≠ j), (ii) H avoids E·γ_j,
// (iii) every B_{k_j}·e·γ_j meets H, plus D ⊆ H.
ContractCheck verify_provider_contract(const GroupContext& ctx,
                                       const std::vector<GroupElement>& D,
                                       const std::vector<GroupElement>& E,
                                       const ProviderResult& res);

struct StageTransitionPlan {
    Rat Phi, Psi, v;
    std::vector<GroupElement> H;
    long long N = 0;
    std::vector<GroupElement> gamma;
    std::vector<long long> k;
    int sign = 1;
};

// Exact Φ, Ψ maxima over the [0,1] pieces, v = Φ + Ψ, least power-of-two N meeting
// the mass budget, provider translates with every condition verified explicitly.
// Rejection names the failing condition.
StageTransitionPlan plan_transition(const TowerStage& stage, const IncrementalProvider& provider);

TowerStage apply_transition(const TowerStage& stage, const StageTransitionPlan& plan);

struct AlternationReport {
    bool ok = true;
    std::vector<std::string> violations;
};

// R_{F_{i_n(x)}} >= 1 on odd stages, <= -1 on even stages, on every [0,1] piece,
// exactly; index values strictly increasing stage over stage.
AlternationReport verify_alternation(const std::vector<TowerStage>& history);

// Partial actions of consecutive stages agree where both are defined; exact
// interval arithmetic over sampled pieces and translators.
bool verify_compatibility(const TowerStage& prev, const TowerStage& next,
                          const StageTransitionPlan& plan, std::size_t max_samples = 64);

// Deterministic witness construction: separated directions around cluster centers
// far out on the a-axis; the cancellation h(gδh)⁻¹ = δ⁻¹g⁻¹ makes one witness serve
// every mass element at once.
ProviderResult heisenberg_provider(const GroupContext& ctx, const std::vector<GroupElement>& D,
                                   const std::vector<GroupElement>& E, long long ell,
                                   long long min_k);

} // namespace lab

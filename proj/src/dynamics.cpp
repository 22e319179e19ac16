#include "lab/dynamics.hpp"

#include <algorithm>
#include <stdexcept>

namespace lab {

// ---- Hopf ---------------------------------------------------------------------------

HopfSystem hopf_system(std::map<long long, Rat> phi, std::map<long long, Rat> psi) {
    Rat s = 0;
    for (const auto& [p, v] : psi) s += v;
    if (s == 0) throw std::invalid_argument("hopf_system: psi sums to zero");
    return HopfSystem{std::move(phi), std::move(psi)};
}

Rat hopf_S(const std::map<long long, Rat>& f, const BigInt& radius, long long x) {
    Rat s = 0;
    for (const auto& [p, v] : f) {
        BigInt d = p - x;
        if (d < 0) d = -d;
        if (d <= radius) s += v;
    }
    return s;
}

RatioResult hopf_R(const HopfSystem& sys, const BigInt& radius, long long x) {
    RatioResult r;
    Rat den = hopf_S(sys.psi, radius, x);
    if (den == 0) return r;
    r.defined = true;
    r.value = hopf_S(sys.phi, radius, x) / den;
    return r;
}

long long hopf_absorption_threshold(const HopfSystem& sys, long long x) {
    long long t = 0;
    for (const auto& [p, v] : sys.phi) t = std::max(t, std::llabs(p - x));
    for (const auto& [p, v] : sys.psi) t = std::max(t, std::llabs(p - x));
    return t;
}

// ---- Tower --------------------------------------------------------------------------

const TowerPiece* TowerStage::piece_of(const GroupElement& g) const {
    auto it = index.find(g);
    return it == index.end() ? nullptr : &pieces[it->second].second;
}

const std::pair<GroupElement, TowerPiece>* TowerStage::piece_at(const Rat& x) const {
    auto it = by_start.upper_bound(x);
    if (it == by_start.begin()) return nullptr;
    --it;
    const auto& entry = pieces[it->second];
    if (x >= entry.second.start && x < entry.second.start + r) return &entry;
    return nullptr;
}

Rat TowerStage::phi_l1() const {
    Rat s = 0;
    for (const auto& [g, p] : pieces) s += rat_abs(p.phi) * r;
    return s;
}

Rat TowerStage::psi_l1() const {
    Rat s = 0;
    for (const auto& [g, p] : pieces) s += rat_abs(p.psi) * r;
    return s;
}

long long TowerStage::i_star() const {
    long long m = 0;
    for (const auto& [g, p] : pieces)
        if (p.has_idx) m = std::max(m, p.idx);
    return m;
}

long long TowerStage::support_radius() const {
    long long m = 0;
    for (const auto& [g, p] : pieces) m = std::max(m, word_length(ctx, g));
    return m;
}

void TowerStage::insert_piece(const GroupElement& g, TowerPiece p) {
    if (index.count(g)) throw std::logic_error("tower: element already owns an interval");
    auto nxt = by_start.lower_bound(p.start);
    if (nxt != by_start.end() && nxt->first < p.start + r)
        throw std::logic_error("tower: interval collision");
    if (nxt != by_start.begin() && std::prev(nxt)->first + r > p.start)
        throw std::logic_error("tower: interval collision");
    index[g] = pieces.size();
    by_start[p.start] = pieces.size();
    pieces.emplace_back(g, std::move(p));
}

void TowerStage::check_intervals() const {
    Rat prev_end = 0;
    bool first = true;
    for (const auto& [start, i] : by_start) {
        if (!first && start < prev_end)
            throw std::logic_error("tower: interval collision");
        prev_end = start + r;
        first = false;
    }
}

EvalResult eval_S(const TowerStage& stage, const FiniteSubset& F, Observable obs,
                  const Rat& x, bool strict) {
    const auto* home = stage.piece_at(x);
    if (!home) throw std::invalid_argument("eval_S: point lies in no assigned interval");
    const GroupElement g_inv = invert(stage.ctx, home->first);
    EvalResult res;
    res.value = 0;
    for (const auto& [w, p] : stage.pieces) {
        const Rat& val = (obs == Observable::Phi) ? p.phi : p.psi;
        if (val == 0) continue;
        if (F.contains(multiply(stage.ctx, w, g_inv))) res.value += val;
    }
    if (strict) {
        for (const auto& h : F.elements()) {
            GroupElement target = multiply(stage.ctx, h, home->first);
            if (!stage.piece_of(target)) {
                res.defined = false;
                break;
            }
        }
    }
    return res;
}

EvalResult eval_R(const TowerStage& stage, const FiniteSubset& F, const Rat& x) {
    EvalResult den = eval_S(stage, F, Observable::Psi, x);
    EvalResult res;
    if (den.value == 0) {
        res.defined = false;
        return res;
    }
    res.value = eval_S(stage, F, Observable::Phi, x).value / den.value;
    return res;
}

TowerStage stage_init(const GroupContext& ctx) {
    TowerStage s(ctx);
    s.n = 1;
    s.r = 1;
    s.cursor = 1;
    TowerPiece p;
    p.start = 0;
    p.phi = 1;
    p.psi = 1;
    p.idx = 1;
    p.has_idx = true;
    s.insert_piece(ctx.identity(), std::move(p));
    return s;
}

// ---- Provider -----------------------------------------------------------------------

ProviderResult heisenberg_provider(const GroupContext& ctx, const std::vector<GroupElement>& D,
                                   const std::vector<GroupElement>& E, long long ell,
                                   long long min_k) {
    if (ctx.kind() != GroupKind::Heisenberg)
        throw KindError("heisenberg_provider needs the Heisenberg context");
    long long R = 0;
    for (const auto& g : D) R = std::max(R, word_length(ctx, g));
    for (const auto& g : E) R = std::max(R, word_length(ctx, g));
    R = std::max(R, min_k); // radii come out > 24·R, comfortably above min_k
    const long long K = 24 * R + 16;
    const long long margin = 3 * R + 1;
    auto dirs = separated_directions(ctx, K, margin, 16);
    if (dirs.size() < 4) throw BudgetError("heisenberg_provider: direction packing too small");
    const long long cap = static_cast<long long>(dirs.size());
    const long long delta = 3 * K + 6 * R + 2;
    const long long kj = K + R + 1;

    ProviderResult res;
    res.H = D;
    std::unordered_set<GroupElement, ElemHash> in_h(D.begin(), D.end());
    for (long long j = 0; j < ell; ++j) {
        long long t = j / cap + 1;
        GroupElement center(HeisElem{delta * t, 0, 0});
        if (in_h.insert(center).second) res.H.push_back(center);
        res.kg.emplace_back(kj, multiply(ctx, dirs[j % cap], center));
    }
    return res;
}

ContractCheck verify_provider_contract(const GroupContext& ctx,
                                       const std::vector<GroupElement>& D,
                                       const std::vector<GroupElement>& E,
                                       const ProviderResult& res) {
    std::unordered_set<GroupElement, ElemHash> in_h(res.H.begin(), res.H.end());
    for (const auto& d : D)
        if (!in_h.count(d)) return {false, "H-contains-D"};

    const long long ell = static_cast<long long>(res.kg.size());
    // Translated fuzz sets E·γ_j.
    std::vector<std::unordered_set<GroupElement, ElemHash>> eg(ell);
    for (long long j = 0; j < ell; ++j)
        for (const auto& e : E)
            eg[j].insert(multiply(ctx, e, res.kg[j].second));

    // (ii) H avoids every E·γ_j.
    for (long long j = 0; j < ell; ++j)
        for (const auto& h : res.H)
            if (eg[j].count(h)) return {false, "H-avoidance"};

    // (iii) every B_{k_j}·e·γ_j meets H.
    for (long long j = 0; j < ell; ++j)
        for (const auto& e : E) {
            GroupElement center = multiply(ctx, e, res.kg[j].second);
            bool hit = false;
            for (const auto& h : res.H)
                if (translated_ball_contains(ctx, res.kg[j].first, center, h)) {
                    hit = true;
                    break;
                }
            if (!hit) return {false, "witness-hitting"};
        }

    // (i) E·γ_i stays clear of every B_{k_j}·e·γ_j, i ≠ j.
    for (long long i = 0; i < ell; ++i)
        for (long long j = 0; j < ell; ++j) {
            if (i == j) continue;
            for (const auto& ei : eg[i])
                for (const auto& e : E) {
                    GroupElement center = multiply(ctx, e, res.kg[j].second);
                    if (translated_ball_contains(ctx, res.kg[j].first, center, ei))
                        return {false, "translate-avoidance"};
                }
        }
    return {};
}

// ---- Transitions --------------------------------------------------------------------

StageTransitionPlan plan_transition(const TowerStage& stage, const IncrementalProvider& provider) {
    StageTransitionPlan plan;
    const GroupContext& ctx = stage.ctx;
    const long long R = stage.support_radius();
    const long long istar = stage.i_star();

    // At radius 2R every piece sees the whole support, so the maxima over the [0,1]
    // pieces are exact and uniform.
    FiniteSubset sat = FiniteSubset::ball(ctx, 2 * R);
    bool any = false;
    for (const auto& [g, p] : stage.pieces) {
        if (!(p.start >= 0 && p.start < 1)) continue;
        Rat sp = rat_abs(eval_S(stage, sat, Observable::Phi, p.start).value);
        Rat sq = rat_abs(eval_S(stage, sat, Observable::Psi, p.start).value);
        if (!any || sp > plan.Phi) plan.Phi = sp;
        if (!any || sq > plan.Psi) plan.Psi = sq;
        any = true;
    }
    if (!any) throw std::logic_error("plan_transition: no pieces inside [0,1]");
    plan.v = plan.Phi + plan.Psi;
    plan.sign = ((stage.n + 1) % 2 == 0) ? -1 : +1;

    std::vector<GroupElement> support;
    for (const auto& [g, p] : stage.pieces) support.push_back(g);

    const Rat budget = Rat(2) - stage.phi_l1();
    if (budget <= 0) throw std::logic_error("plan_transition: mass budget exhausted");
    ProviderResult res;
    bool found = false;
    for (long long N = 2; N <= (1LL << 16); N *= 2) {
        res = provider(support, support, N, istar);
        if (Rat(static_cast<long long>(res.H.size())) * plan.v * stage.r / N < budget) {
            plan.N = N;
            found = true;
            break;
        }
    }
    if (!found) throw BudgetError("plan_transition: no cut count meets the mass budget");

    plan.H = res.H;
    for (auto& [kj, gj] : res.kg) {
        plan.k.push_back(kj);
        plan.gamma.push_back(gj);
    }
    for (long long kj : plan.k) {
        if (kj <= istar) throw std::logic_error("plan rejected: index-monotonicity");
        if (kj < 2 * R) throw std::logic_error("plan rejected: saturation-radius");
    }

    ContractCheck cc = verify_provider_contract(ctx, support, support, res);
    if (!cc.ok) throw std::logic_error("plan rejected: " + cc.failed);

    // Global disjointness of the translated copies.
    std::unordered_set<GroupElement, ElemHash> all;
    for (long long j = 0; j < plan.N; ++j)
        for (const auto& g : support)
            if (!all.insert(multiply(ctx, g, plan.gamma[j])).second)
                throw std::logic_error("plan rejected: copy-disjointness");

    return plan;
}

TowerStage apply_transition(const TowerStage& stage, const StageTransitionPlan& plan) {
    const GroupContext& ctx = stage.ctx;
    TowerStage next(ctx);
    next.n = stage.n + 1;
    next.r = stage.r / plan.N;
    next.cursor = stage.cursor;

    for (const auto& [g, p] : stage.pieces) {
        for (long long j = 0; j < plan.N; ++j) {
            TowerPiece q;
            q.start = p.start + Rat(j) * next.r;
            q.phi = p.phi;
            q.psi = p.psi;
            q.idx = plan.k[j];
            q.has_idx = true;
            next.insert_piece(multiply(ctx, g, plan.gamma[j]), std::move(q));
        }
    }
    for (const auto& h : plan.H) {
        if (next.index.count(h)) {
            // Survivors of the old support keep no interval of their own; the fresh
            // mass goes to elements not touched by the cut copies.
            throw std::logic_error("apply_transition: H collides with a translated copy");
        }
        TowerPiece q;
        q.start = next.cursor;
        next.cursor += next.r;
        q.phi = Rat(plan.sign) * plan.v;
        q.psi = 0;
        next.insert_piece(h, std::move(q));
    }
    next.check_intervals();
    if (!(next.phi_l1() < 2) || !(next.psi_l1() < 2))
        throw std::logic_error("apply_transition: norm invariant broken");
    return next;
}

AlternationReport verify_alternation(const std::vector<TowerStage>& history) {
    AlternationReport rep;
    for (const auto& stage : history) {
        for (const auto& [g, p] : stage.pieces) {
            if (!p.has_idx) continue;
            if (!(p.start >= 0 && p.start < 1)) continue;
            FiniteSubset F = FiniteSubset::ball(stage.ctx, p.idx);
            EvalResult ratio = eval_R(stage, F, p.start);
            if (!ratio.defined) {
                rep.ok = false;
                rep.violations.push_back("stage " + std::to_string(stage.n) +
                                         ": ratio undefined at " + rat_str(p.start));
                continue;
            }
            bool good = (stage.n % 2 == 1) ? (ratio.value >= 1) : (ratio.value <= -1);
            if (!good) {
                rep.ok = false;
                rep.violations.push_back("stage " + std::to_string(stage.n) + ": ratio " +
                                         rat_str(ratio.value) + " at " + rat_str(p.start));
            }
        }
    }
    for (std::size_t s = 1; s < history.size(); ++s) {
        long long prev_star = history[s - 1].i_star();
        long long next_min = -1;
        for (const auto& [g, p] : history[s].pieces)
            if (p.has_idx && (next_min < 0 || p.idx < next_min)) next_min = p.idx;
        if (next_min >= 0 && next_min <= prev_star) {
            rep.ok = false;
            rep.violations.push_back("stage " + std::to_string(history[s].n) +
                                     ": index not strictly increasing");
        }
    }
    return rep;
}

bool verify_compatibility(const TowerStage& prev, const TowerStage& next,
                          const StageTransitionPlan& plan, std::size_t max_samples) {
    const GroupContext& ctx = prev.ctx;
    const BallCache& c = ctx.balls(2);
    std::size_t checked = 0;
    std::size_t stride = std::max<std::size_t>(1, prev.pieces.size() / 8);
    for (std::size_t pi = 0; pi < prev.pieces.size(); pi += stride) {
        const auto& [g, pg] = prev.pieces[pi];
        for (std::size_t hi = 0; hi < c.layer_end[2]; ++hi) {
            const GroupElement& h = c.elems[hi];
            const TowerPiece* phg = prev.piece_of(multiply(ctx, h, g));
            if (!phg) continue;
            for (long long j : {0LL, plan.N / 2, plan.N - 1}) {
                const TowerPiece* a = next.piece_of(
                    multiply(ctx, g, plan.gamma[j]));
                const TowerPiece* b = next.piece_of(
                    multiply(ctx, multiply(ctx, h, g), plan.gamma[j]));
                if (!a || !b) return false;
                // Both stages translate by h; the displacement must agree exactly.
                if (b->start - a->start != phg->start - pg.start) return false;
                if (++checked >= max_samples) return true;
            }
        }
    }
    return true;
}

} // namespace lab

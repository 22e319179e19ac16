#include "lab/covering.hpp"

#include <algorithm>
#include <stdexcept>

namespace lab {

namespace {

// Union of the translates, deduplicated, in discovery order.
std::vector<GroupElement> family_union(const TranslateFamily& fam) {
    const GroupContext& ctx = *fam.ctx;
    std::vector<GroupElement> out;
    std::unordered_set<GroupElement, ElemHash> seen;
    for (const auto& mem : fam.members) {
        const BallCache& c = ctx.balls(mem.radius);
        std::size_t end = c.layer_end[mem.radius];
        for (std::size_t i = 0; i < end; ++i) {
            GroupElement p = multiply(ctx, c.elems[i], mem.center);
            if (seen.insert(p).second) {
                if (seen.size() > ctx.budget())
                    throw BudgetError("family union budget exceeded");
                out.push_back(std::move(p));
            }
        }
    }
    return out;
}

} // namespace

long long multiplicity_at(const TranslateFamily& fam, const GroupElement& g) {
    long long count = 0;
    for (const auto& mem : fam.members)
        if (translated_ball_contains(*fam.ctx, mem.radius, mem.center, g)) ++count;
    return count;
}

MultiplicityReport multiplicity(const TranslateFamily& fam, bool with_histogram) {
    MultiplicityReport rep;
    rep.witness = fam.ctx->identity();
    if (with_histogram) rep.histogram.emplace();
    bool have = false;
    for (const auto& p : family_union(fam)) {
        long long c = multiplicity_at(fam, p);
        if (with_histogram) (*rep.histogram)[p] = c;
        if (!have || c > rep.multiplicity) {
            rep.multiplicity = c;
            rep.witness = p;
            have = true;
        } else if (c == rep.multiplicity && canonical_less(p, rep.witness)) {
            rep.witness = p;
        }
    }
    return rep;
}

IncrementalCheck is_incremental(const TranslateFamily& fam) {
    for (std::size_t j = 1; j < fam.members.size(); ++j) {
        if (fam.members[j].radius > fam.members[j - 1].radius)
            return {false, static_cast<long long>(j), -1};
        for (std::size_t i = 0; i < j; ++i)
            if (translated_ball_contains(*fam.ctx, fam.members[i].radius,
                                         fam.members[i].center, fam.members[j].center))
                return {false, static_cast<long long>(j), static_cast<long long>(i)};
    }
    return {};
}

IncrementalSequence greedy_incremental(const TranslateFamily& fam) {
    if (fam.members.empty()) throw std::invalid_argument("empty family");
    for (std::size_t j = 1; j < fam.members.size(); ++j)
        if (fam.members[j].radius > fam.members[j - 1].radius)
            throw std::invalid_argument("input not sorted by non-increasing radius");
    const GroupContext& ctx = *fam.ctx;
    IncrementalSequence out;
    out.family.ctx = fam.ctx;
    for (const auto& mem : fam.members) {
        bool covered = false;
        for (const auto& kept : out.family.members)
            if (translated_ball_contains(ctx, kept.radius, kept.center, mem.center)) {
                covered = true;
                break;
            }
        if (!covered) out.family.members.push_back(mem);
    }
    out.verified = is_incremental(out.family).ok;
    out.witness = ctx.identity();
    out.multiplicity_at_identity = multiplicity_at(out.family, out.witness);
    return out;
}

WitnessSearchResult incremental_witness_search(const GroupContext& ctx,
                                               const std::vector<long long>& radii,
                                               long long k, long long node_budget) {
    WitnessSearchResult res;
    if (k <= 0 || static_cast<std::size_t>(k) > radii.size())
        throw std::invalid_argument("k out of range");
    for (std::size_t j = 1; j < radii.size(); ++j)
        if (radii[j] > radii[j - 1]) throw std::invalid_argument("radii must be non-increasing");

    // Candidates for slot i: elements of B_{radii[i]} in canonical order; any such center
    // keeps the identity inside its translate.
    std::vector<std::vector<GroupElement>> candidates(k);
    for (long long i = 0; i < k; ++i) {
        const BallCache& c = ctx.balls(radii[i]);
        candidates[i].assign(c.elems.begin(), c.elems.begin() + c.layer_end[radii[i]]);
        std::sort(candidates[i].begin(), candidates[i].end(), canonical_less);
    }

    std::vector<GroupElement> chosen;
    long long nodes = 0;
    auto ok_against_prefix = [&](const GroupElement& g) {
        for (long long i = 0; i < static_cast<long long>(chosen.size()); ++i)
            if (translated_ball_contains(ctx, radii[i], chosen[i], g)) return false;
        return true;
    };
    std::vector<std::size_t> pos(k, 0);
    long long depth = 0;
    while (depth >= 0) {
        if (depth == k) {
            res.status = SearchStatus::Found;
            res.seq.family.ctx = &ctx;
            for (long long i = 0; i < k; ++i)
                res.seq.family.members.push_back({radii[i], chosen[i]});
            res.seq.verified = is_incremental(res.seq.family).ok;
            res.seq.witness = ctx.identity();
            res.seq.multiplicity_at_identity = multiplicity_at(res.seq.family, res.seq.witness);
            res.nodes = nodes;
            return res;
        }
        bool advanced = false;
        while (pos[depth] < candidates[depth].size()) {
            const GroupElement& g = candidates[depth][pos[depth]++];
            if (++nodes > node_budget) {
                res.status = SearchStatus::Exhausted;
                res.nodes = nodes;
                return res;
            }
            if (ok_against_prefix(g)) {
                chosen.push_back(g);
                ++depth;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            pos[depth] = 0;
            --depth;
            if (depth >= 0) chosen.pop_back();
        }
    }
    res.status = SearchStatus::Exhausted;
    res.nodes = nodes;
    return res;
}

std::vector<GroupElement> separated_directions(const GroupContext& ctx, long long scale,
                                               long long margin, std::size_t max_count) {
    if (ctx.kind() != GroupKind::Heisenberg)
        throw KindError("separated_directions needs the Heisenberg context");
    const long long K = scale;
    auto el = [](long long p, long long q, long long s) {
        return GroupElement(HeisElem{p, p * q + s, q}); // a^p b^q c^s
    };
    std::vector<GroupElement> pool;
    const long long s0 = (K / 4) * (K / 4); // |c^{s0}| = 4*sqrt(s0) <= K
    pool.push_back(el(K, 0, 0));
    pool.push_back(el(-K, 0, 0));
    pool.push_back(el(0, K, 0));
    pool.push_back(el(0, -K, 0));
    pool.push_back(el(0, 0, s0));
    pool.push_back(el(0, 0, -s0));
    const long long step = std::max(1LL, K / 8);
    for (long long p = -K; p <= K; p += step)
        for (long long q = -K; q <= K; q += step)
            for (long long s : {s0, -s0, 2 * s0, -2 * s0, s0 / 2, -s0 / 2, (2 * s0) / 3,
                                -(2 * s0) / 3})
                pool.push_back(el(p, q, s));

    std::vector<GroupElement> chosen;
    for (const auto& g : pool) {
        if (chosen.size() >= max_count) break;
        const auto& h = std::get<HeisElem>(g);
        if (heisenberg_word_length(h) > K) continue;
        bool ok = true;
        for (const auto& f : chosen) {
            GroupElement d = multiply(ctx, g, invert(ctx, f));
            if (heisenberg_word_length(std::get<HeisElem>(d)) <= K + margin) {
                ok = false;
                break;
            }
        }
        if (ok && !is_identity(g)) chosen.push_back(g);
    }
    return chosen;
}

GapInfo max_internal_gap(const std::vector<long long>& sorted_set) {
    GapInfo info;
    for (std::size_t i = 1; i < sorted_set.size(); ++i) {
        long long len = sorted_set[i] - sorted_set[i - 1];
        if (!info.has_gap || len > info.length) {
            info.has_gap = true;
            info.s = sorted_set[i - 1];
            info.t = sorted_set[i];
            info.length = len;
        }
    }
    return info;
}

IncrementalSequence heisenberg_incremental(const GroupContext& ctx, long long k) {
    if (ctx.kind() != GroupKind::Heisenberg)
        throw KindError("heisenberg_incremental needs the Heisenberg context");
    if (k < 1) throw std::invalid_argument("k must be positive");

    // Central-gap route: scan M_r for internal gaps whose length beats the previous
    // radius squared. (The scan is cheap; if the metric never produces such gaps this
    // route simply yields nothing and the direction family below takes over.)
    {
        TranslateFamily fam;
        fam.ctx = &ctx;
        std::vector<std::pair<long long, std::pair<long long, long long>>> picks;
        long long prev_r = 0;
        for (long long r = 1; r <= 127 && static_cast<long long>(picks.size()) < k; r = 2 * r + 1) {
            GapInfo gap = max_internal_gap(central_powers_in_ball(ctx, r));
            if (gap.has_gap && gap.length > 1 && (picks.empty() || gap.length > prev_r * prev_r)) {
                picks.push_back({r, {gap.s, gap.t}});
                prev_r = r;
            }
        }
        if (static_cast<long long>(picks.size()) >= k) {
            for (auto it = picks.rbegin(); it != picks.rend(); ++it) {
                auto [r, st] = *it;
                fam.members.push_back(
                    {4 * r, GroupElement(HeisElem{0, -(st.first - st.second), 0})});
            }
            IncrementalSequence seq;
            seq.family = fam;
            seq.witness = ctx.identity();
            seq.verified = is_incremental(fam).ok;
            seq.multiplicity_at_identity = multiplicity_at(fam, seq.witness);
            if (seq.verified && seq.multiplicity_at_identity == k) return seq;
        }
    }

    // Direction family: equal radii r, centers pairwise farther than r apart, each of
    // norm <= r, so the identity lies in all k translates and the family is incremental.
    for (long long r = 8; r <= 1024; r *= 2) {
        auto dirs = separated_directions(ctx, r, std::max(1LL, r / 8),
                                         static_cast<std::size_t>(k));
        if (static_cast<long long>(dirs.size()) < k) continue;
        IncrementalSequence seq;
        seq.family.ctx = &ctx;
        for (long long i = 0; i < k; ++i) seq.family.members.push_back({r, dirs[i]});
        seq.witness = ctx.identity();
        seq.verified = is_incremental(seq.family).ok;
        seq.multiplicity_at_identity = multiplicity_at(seq.family, seq.witness);
        if (seq.verified && seq.multiplicity_at_identity == k) return seq;
    }
    throw BudgetError("heisenberg_incremental: no verified family within schedule");
}

long long almost_central_expander(const GroupContext& ctx, const GroupElement& g, long long n_max) {
    const long long m = word_length(ctx, g);
    for (long long n = 0; n <= n_max; ++n) {
        const BallCache& c = ctx.balls(n);
        std::size_t end = c.layer_end[n];
        std::size_t stride = std::max<std::size_t>(1, end / 64);
        for (std::size_t i = 0; i < end; i += stride) {
            GroupElement hg = multiply(ctx, c.elems[i], g);
            if (word_length(ctx, hg) > m + n)
                throw std::logic_error("almost_central_expander: metric inconsistency");
        }
    }
    return m;
}

Rat besicovitch_bound_constant(long long c, const Rat& c1, const Rat& c2) {
    if (c < 0 || c1 <= 0 || c2 <= 0)
        throw std::invalid_argument("besicovitch_bound_constant: non-positive inputs");
    Rat pow6 = 1;
    for (long long i = 0; i < c; ++i) pow6 *= 6;
    return pow6 * c2 / c1;
}

BoundedRadiusReport verify_bounded_radius_multiplicity(const IncrementalSequence& seq, long long N) {
    const GroupContext& ctx = *seq.family.ctx;
    for (const auto& mem : seq.family.members)
        if (mem.radius < N || mem.radius > 2 * N)
            throw std::invalid_argument("radius outside [N, 2N]");
    if (!ctx.growth_c || !ctx.growth_c1 || !ctx.growth_c2)
        throw std::invalid_argument("context growth constants not set");
    BoundedRadiusReport rep;
    rep.bound = besicovitch_bound_constant(*ctx.growth_c, *ctx.growth_c1, *ctx.growth_c2);
    rep.measured = multiplicity(seq.family).multiplicity;
    rep.ok = Rat(rep.measured) <= rep.bound;
    return rep;
}

} // namespace lab

#include "lab/group.hpp"

#include <algorithm>
#include <climits>
#include <sstream>

namespace lab {

std::string group_kind_name(GroupKind k) {
    switch (k) {
        case GroupKind::Zd: return "zd";
        case GroupKind::Heisenberg: return "heis";
        case GroupKind::Free: return "free";
        case GroupKind::ZInfinity: return "zinf";
    }
    return "?";
}

namespace {

inline void hash_mix(std::size_t& seed, std::size_t v) {
    seed ^= v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

} // namespace

std::size_t ElemHash::operator()(const GroupElement& g) const {
    std::size_t seed = g.index();
    std::visit([&seed](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ZdElem>) {
            for (long long x : e.v) hash_mix(seed, static_cast<std::size_t>(x));
        } else if constexpr (std::is_same_v<T, HeisElem>) {
            hash_mix(seed, static_cast<std::size_t>(e.k));
            hash_mix(seed, static_cast<std::size_t>(e.m));
            hash_mix(seed, static_cast<std::size_t>(e.n));
        } else if constexpr (std::is_same_v<T, FreeElem>) {
            for (int x : e.w) hash_mix(seed, static_cast<std::size_t>(x + 1024));
        } else {
            for (auto [i, v] : e.c) {
                hash_mix(seed, static_cast<std::size_t>(i));
                hash_mix(seed, static_cast<std::size_t>(v));
            }
        }
    }, g);
    return seed;
}

bool canonical_less(const GroupElement& a, const GroupElement& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    if (std::holds_alternative<ZdElem>(a))
        return std::get<ZdElem>(a).v < std::get<ZdElem>(b).v;
    if (std::holds_alternative<HeisElem>(a)) {
        const auto& x = std::get<HeisElem>(a);
        const auto& y = std::get<HeisElem>(b);
        return std::tie(x.k, x.m, x.n) < std::tie(y.k, y.m, y.n);
    }
    if (std::holds_alternative<FreeElem>(a))
        return std::get<FreeElem>(a).w < std::get<FreeElem>(b).w;
    return std::get<ZInfElem>(a).c < std::get<ZInfElem>(b).c;
}

bool is_identity(const GroupElement& g) {
    return std::visit([](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ZdElem>)
            return std::all_of(e.v.begin(), e.v.end(), [](long long x) { return x == 0; });
        else if constexpr (std::is_same_v<T, HeisElem>)
            return e.k == 0 && e.m == 0 && e.n == 0;
        else if constexpr (std::is_same_v<T, FreeElem>)
            return e.w.empty();
        else
            return e.c.empty();
    }, g);
}

std::string element_str(const GroupElement& g) {
    std::ostringstream os;
    std::visit([&os](const auto& e) {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, ZdElem>) {
            os << "(";
            for (std::size_t i = 0; i < e.v.size(); ++i) os << (i ? "," : "") << e.v[i];
            os << ")";
        } else if constexpr (std::is_same_v<T, HeisElem>) {
            os << "(" << e.k << "," << e.m << "," << e.n << ")";
        } else if constexpr (std::is_same_v<T, FreeElem>) {
            if (e.w.empty()) os << "e";
            for (int x : e.w) os << static_cast<char>((x > 0 ? 'a' + x - 1 : 'A' - x - 1));
        } else {
            os << "{";
            bool first = true;
            for (auto [i, v] : e.c) {
                if (!first) os << ",";
                first = false;
                os << i << ":" << v;
            }
            os << "}";
        }
    }, g);
    return os.str();
}

GroupContext::GroupContext(GroupKind kind, int dim, std::vector<GroupElement> gens, bool standard)
    : kind_(kind), dim_(dim), generators_(std::move(gens)), standard_(standard),
      cache_(std::make_shared<BallCache>()) {}

GroupContext GroupContext::zd(int d) {
    std::vector<GroupElement> gens;
    for (int i = 0; i < d; ++i)
        for (int s : {1, -1}) {
            ZdElem e;
            e.v.assign(d, 0);
            e.v[i] = s;
            gens.emplace_back(std::move(e));
        }
    GroupContext ctx(GroupKind::Zd, d, std::move(gens), true);
    ctx.growth_c = d;
    return ctx;
}

GroupContext GroupContext::heisenberg() {
    std::vector<GroupElement> gens = {
        GroupElement(HeisElem{1, 0, 0}), GroupElement(HeisElem{-1, 0, 0}),
        GroupElement(HeisElem{0, 0, 1}), GroupElement(HeisElem{0, 0, -1})};
    GroupContext ctx(GroupKind::Heisenberg, 3, std::move(gens), true);
    ctx.growth_c = 4; // Bass exponent
    return ctx;
}

GroupContext GroupContext::free_group(int rank) {
    std::vector<GroupElement> gens;
    for (int i = 1; i <= rank; ++i)
        for (int s : {1, -1}) gens.emplace_back(FreeElem{{s * i}});
    return GroupContext(GroupKind::Free, rank, std::move(gens), true);
}

GroupContext GroupContext::zinf(int d) {
    std::vector<GroupElement> gens;
    for (int i = 0; i < d; ++i)
        for (long long s : {1LL, -1LL}) gens.emplace_back(ZInfElem{{{i, s}}});
    return GroupContext(GroupKind::ZInfinity, d, std::move(gens), true);
}

GroupElement GroupContext::identity() const {
    switch (kind_) {
        case GroupKind::Zd: {
            ZdElem e;
            e.v.assign(dim_, 0);
            return e;
        }
        case GroupKind::Heisenberg: return HeisElem{};
        case GroupKind::Free: return FreeElem{};
        case GroupKind::ZInfinity: return ZInfElem{};
    }
    throw KindError("unknown group kind");
}

namespace {

void check_kind(const GroupContext& ctx, const GroupElement& g) {
    bool ok = false;
    switch (ctx.kind()) {
        case GroupKind::Zd: ok = std::holds_alternative<ZdElem>(g); break;
        case GroupKind::Heisenberg: ok = std::holds_alternative<HeisElem>(g); break;
        case GroupKind::Free: ok = std::holds_alternative<FreeElem>(g); break;
        case GroupKind::ZInfinity: ok = std::holds_alternative<ZInfElem>(g); break;
    }
    if (!ok) throw KindError("element does not belong to " + group_kind_name(ctx.kind()));
}

} // namespace

GroupElement multiply(const GroupContext& ctx, const GroupElement& g, const GroupElement& h) {
    check_kind(ctx, g);
    check_kind(ctx, h);
    switch (ctx.kind()) {
        case GroupKind::Zd: {
            const auto& a = std::get<ZdElem>(g);
            const auto& b = std::get<ZdElem>(h);
            if (a.v.size() != b.v.size()) throw KindError("dimension mismatch");
            ZdElem r = a;
            for (std::size_t i = 0; i < r.v.size(); ++i) r.v[i] += b.v[i];
            return r;
        }
        case GroupKind::Heisenberg: {
            const auto& a = std::get<HeisElem>(g);
            const auto& b = std::get<HeisElem>(h);
            return HeisElem{a.k + b.k, a.m + b.m + a.k * b.n, a.n + b.n};
        }
        case GroupKind::Free: {
            const auto& a = std::get<FreeElem>(g);
            const auto& b = std::get<FreeElem>(h);
            FreeElem r = a;
            for (int x : b.w) {
                if (!r.w.empty() && r.w.back() == -x) r.w.pop_back();
                else r.w.push_back(x);
            }
            return r;
        }
        case GroupKind::ZInfinity: {
            const auto& a = std::get<ZInfElem>(g);
            const auto& b = std::get<ZInfElem>(h);
            ZInfElem r;
            std::size_t i = 0, j = 0;
            while (i < a.c.size() || j < b.c.size()) {
                if (j == b.c.size() || (i < a.c.size() && a.c[i].first < b.c[j].first)) {
                    r.c.push_back(a.c[i++]);
                } else if (i == a.c.size() || b.c[j].first < a.c[i].first) {
                    r.c.push_back(b.c[j++]);
                } else {
                    long long s = a.c[i].second + b.c[j].second;
                    if (s != 0) r.c.emplace_back(a.c[i].first, s);
                    ++i;
                    ++j;
                }
            }
            return r;
        }
    }
    throw KindError("unknown group kind");
}

GroupElement invert(const GroupContext& ctx, const GroupElement& g) {
    check_kind(ctx, g);
    switch (ctx.kind()) {
        case GroupKind::Zd: {
            ZdElem r = std::get<ZdElem>(g);
            for (auto& x : r.v) x = -x;
            return r;
        }
        case GroupKind::Heisenberg: {
            const auto& a = std::get<HeisElem>(g);
            return HeisElem{-a.k, a.k * a.n - a.m, -a.n};
        }
        case GroupKind::Free: {
            const auto& a = std::get<FreeElem>(g);
            FreeElem r;
            r.w.reserve(a.w.size());
            for (auto it = a.w.rbegin(); it != a.w.rend(); ++it) r.w.push_back(-*it);
            return r;
        }
        case GroupKind::ZInfinity: {
            ZInfElem r = std::get<ZInfElem>(g);
            for (auto& [i, v] : r.c) v = -v;
            return r;
        }
    }
    throw KindError("unknown group kind");
}

long long heisenberg_word_length(const HeisElem& g) {
    long long x = g.k, y = g.n, A = g.m;
    if (std::llabs(A) > (1LL << 56) || std::llabs(x) > (1LL << 28) || std::llabs(y) > (1LL << 28))
        throw std::overflow_error("heisenberg_word_length: coordinates out of supported range");
    // Normalize to y >= 0, then A >= 0 (metric-preserving symmetries).
    if (y < 0) { y = -y; A = -A; }
    if (A < 0) { x = -x; A = -A; }
    const long long ax = std::llabs(x);
    if (A == 0) return ax + y;
    // A word tracing the horizontal interval [-q, p] (p >= max(0,x), q >= max(0,-x)) costs
    // 2p + 2q - |x| horizontal moves and y + 2D vertical moves, where D extra down/up pairs
    // suffice iff D*(p+q) + y*p >= A. For fixed u = p+q the optimum pins q at its minimum.
    const long long pmin = std::max(0LL, x), qmin = std::max(0LL, -x);
    const long long B = A + y * qmin;
    const long long umin = std::max(1LL, pmin + qmin);
    long long best = LLONG_MAX;
    auto probe = [&](long long u0) {
        for (long long u = u0 - 4; u <= u0 + 4; ++u) {
            if (u < umin) continue;
            long long d = std::max(0LL, ceil_div(B, u) - y);
            best = std::min(best, 2 * u - ax + y + 2 * d);
        }
    };
    probe(umin);
    long long s = isqrt_ll(B);
    probe(s);
    probe(s + 1);
    if (y > 0) probe(ceil_div(B, y));
    return best;
}

const BallCache& GroupContext::balls(long long n) const {
    BallCache& c = *cache_;
    if (c.radius < 0) {
        c.elems.push_back(identity());
        c.length[identity()] = 0;
        c.layer_end.push_back(1);
        c.radius = 0;
    }
    while (c.radius < n) {
        std::size_t lo = c.radius == 0 ? 0 : c.layer_end[c.radius - 1];
        std::size_t hi = c.layer_end[c.radius];
        std::vector<GroupElement> next;
        for (std::size_t i = lo; i < hi; ++i) {
            for (const auto& a : generators_) {
                GroupElement p = multiply(*this, a, c.elems[i]);
                if (c.length.find(p) == c.length.end()) {
                    if (c.elems.size() + next.size() + 1 > budget_)
                        throw BudgetError("ball enumeration budget exceeded", c.radius);
                    c.length[p] = c.radius + 1;
                    next.push_back(std::move(p));
                }
            }
        }
        for (auto& p : next) c.elems.push_back(std::move(p));
        c.layer_end.push_back(c.elems.size());
        ++c.radius;
    }
    return c;
}

long long word_length(const GroupContext& ctx, const GroupElement& g) {
    check_kind(ctx, g);
    if (ctx.standard_generators()) {
        switch (ctx.kind()) {
            case GroupKind::Zd: {
                long long s = 0;
                for (long long x : std::get<ZdElem>(g).v) s += std::llabs(x);
                return s;
            }
            case GroupKind::Heisenberg:
                return heisenberg_word_length(std::get<HeisElem>(g));
            case GroupKind::Free:
                return static_cast<long long>(std::get<FreeElem>(g).w.size());
            case GroupKind::ZInfinity: {
                long long s = 0;
                for (auto [i, v] : std::get<ZInfElem>(g).c) s += std::llabs(v);
                return s;
            }
        }
    }
    // Generic path: grow the BFS until the element shows up.
    long long n = std::max(ctx.cache().radius, 0LL);
    for (;;) {
        const BallCache& c = ctx.balls(n);
        auto it = c.length.find(g);
        if (it != c.length.end()) return it->second;
        ++n;
    }
}

bool translated_ball_contains(const GroupContext& ctx, long long n,
                              const GroupElement& center, const GroupElement& g) {
    return word_length(ctx, multiply(ctx, g, invert(ctx, center))) <= n;
}

FiniteSubset FiniteSubset::ball(const GroupContext& ctx, long long n) {
    FiniteSubset s(ctx);
    s.ball_radius_ = n;
    return s;
}

FiniteSubset FiniteSubset::of(const GroupContext& ctx, std::vector<GroupElement> elems) {
    FiniteSubset s(ctx);
    for (auto& e : elems)
        if (s.index_.insert(e).second) s.elems_.push_back(std::move(e));
    s.materialized_ = true;
    return s;
}

bool FiniteSubset::contains(const GroupElement& g) const {
    if (ball_radius_) return word_length(*ctx_, g) <= *ball_radius_;
    return index_.count(g) > 0;
}

const std::vector<GroupElement>& FiniteSubset::elements() const {
    if (!materialized_) {
        const BallCache& c = ctx_->balls(*ball_radius_);
        std::size_t end = c.layer_end[*ball_radius_];
        elems_.assign(c.elems.begin(), c.elems.begin() + end);
        index_.insert(elems_.begin(), elems_.end());
        materialized_ = true;
    }
    return elems_;
}

FiniteSubset set_product(const FiniteSubset& A, const FiniteSubset& B) {
    const GroupContext& ctx = A.ctx();
    if (&ctx != &B.ctx() && ctx.kind() != B.ctx().kind())
        throw KindError("set_product across different groups");
    std::vector<GroupElement> out;
    std::unordered_set<GroupElement, ElemHash> seen;
    for (const auto& a : A.elements())
        for (const auto& b : B.elements()) {
            GroupElement p = multiply(ctx, a, b);
            if (seen.insert(p).second) {
                if (seen.size() > ctx.budget())
                    throw BudgetError("set_product budget exceeded");
                out.push_back(std::move(p));
            }
        }
    return FiniteSubset::of(ctx, std::move(out));
}

std::vector<long long> central_powers_in_ball(const GroupContext& ctx, long long r) {
    if (ctx.kind() != GroupKind::Heisenberg)
        throw KindError("central_powers_in_ball needs the Heisenberg context");
    std::vector<long long> out;
    const long long bound = 16 * r * r; // |c^m| = 4r forces |m| <= (2r)^2/4 * 4 <= 16r^2
    for (long long m = -bound; m <= bound; ++m)
        if (heisenberg_word_length(HeisElem{0, -m, 0}) <= 4 * r) out.push_back(m);
    return out;
}

} // namespace lab

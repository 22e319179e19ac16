#include "lab/averaging.hpp"

#include <algorithm>
#include <stdexcept>

namespace lab {

long long IndexSequence::block_of(long long i) {
    if (i < 1) throw std::invalid_argument("index must be >= 1");
    long long m = 0;
    while ((1LL << m) <= i) ++m; // 2^{m-1} <= i < 2^m
    return m;
}

void IndexSequence::fill_to(long long i) {
    while (static_cast<long long>(memo_.size()) < i) {
        long long j = static_cast<long long>(memo_.size()) + 1;
        if (j == 1) {
            memo_.emplace_back(1);
            continue;
        }
        long long m = block_of(j);
        BigInt N = (m == 1) ? BigInt(1) : memo_[(1LL << (m - 1)) - 2]; // n(2^{m-1} - 1)
        BigInt L = 3 * BigInt(1LL << (m - 1)) * N;
        memo_.push_back(L + BigInt(j - (1LL << (m - 1))) * 3 * N);
    }
}

const BigInt& IndexSequence::n(long long i) {
    if (i < 1) throw std::invalid_argument("index must be >= 1");
    std::lock_guard<std::mutex> lock(mu_);
    fill_to(i);
    return memo_[i - 1];
}

IndexSequence::Block IndexSequence::block_data(long long m) {
    if (m < 1) throw std::invalid_argument("block must be >= 1");
    Block b;
    b.m = m;
    b.lo = 1LL << (m - 1);
    b.hi = 1LL << m;
    if (m == 1) {
        b.N = 1;
        b.L = 3; // unused: n(1) = 1 is pinned by the base case
    } else {
        b.N = n((1LL << (m - 1)) - 1);
        b.L = 3 * BigInt(b.lo) * b.N;
    }
    return b;
}

bool IndexSequence::nesting_ok(long long i) {
    if (i < 2) return true;
    Block cur = block_data(block_of(i));
    Block prev = block_data(block_of(i - 1));
    return n(i - 1) + prev.N <= n(i) - cur.N;
}

AveragingSets averaging_sets(IndexSequence& seq, long long i) {
    if (i < 1) throw std::invalid_argument("index must be >= 1");
    AveragingSets s;
    s.i = i;
    s.m = IndexSequence::block_of(i);
    auto blk = seq.block_data(s.m);
    s.f_radius = seq.n(i);
    s.fplus_radius = s.f_radius + blk.N;
    s.annulus_outer = s.fplus_radius;
    s.annulus_inner = s.f_radius - blk.N;
    if (i >= 2) {
        auto pblk = seq.block_data(IndexSequence::block_of(i - 1));
        s.prev_fplus_radius = seq.n(i - 1) + pblk.N;
    }
    return s;
}

RatioValue boundary_ratio_phi_i(IndexSequence& seq, long long i, const BallSumFn& S) {
    if (i < 2) throw std::invalid_argument("boundary ratio needs i >= 2");
    AveragingSets s = averaging_sets(seq, i);
    Rat denom = S(s.prev_fplus_radius);
    RatioValue out;
    if (denom == 0) return out; // flagged, not NaN
    Rat numer = S(s.annulus_outer) - S(s.annulus_inner);
    out.defined = true;
    out.value = numer / denom;
    return out;
}

DensityEstimate upper_density(const std::function<bool(long long)>& indicator, long long horizon) {
    if (horizon < 1) throw std::invalid_argument("horizon must be >= 1");
    DensityEstimate d;
    d.horizon = horizon;
    Rat best = 0;
    long long hits = 0;
    for (long long M = 1; M <= horizon; ++M) {
        if (indicator(M)) ++hits;
        Rat cur(hits, M);
        if (cur > best) best = cur;
    }
    d.hits = hits;
    d.estimate = Rat(hits, horizon);
    d.running_max = best;
    d.zero_flag = hits <= isqrt_ll(horizon);
    return d;
}

DlsResult dls(const std::function<Rat(long long)>& values, long long horizon,
              std::vector<Rat> grid) {
    if (grid.empty()) throw std::invalid_argument("empty threshold grid");
    std::sort(grid.begin(), grid.end());
    DlsResult out;
    for (const Rat& t : grid) {
        DensityEstimate d = upper_density(
            [&](long long n) { return values(n) > t; }, horizon);
        out.profile.emplace_back(t, d);
        if (!out.defined && d.zero_flag) {
            out.defined = true;
            out.value = t;
        }
    }
    if (!out.defined) out.value = grid.back();
    return out;
}

} // namespace lab

#pragma once

#include "lab/numeric.hpp"

#include <functional>
#include <mutex>
#include <utility>
#include <vector>

namespace lab {

// Index recursion: n(1) = 1; for block m >= 2, N(m) = n(2^{m-1} - 1) (with N(1) = 1 by
// convention), L(m) = 3·2^{m-1}·N(m), and n is arithmetic with step 3N(m) from L(m) on
// J_m = [2^{m-1}, 2^m). Values grow super-exponentially; everything is exact.
class IndexSequence {
public:
    struct Block {
        long long m = 0;
        long long lo = 0, hi = 0; // J_m = [lo, hi)
        BigInt N, L;
    };

    const BigInt& n(long long i);
    Block block_data(long long m);
    static long long block_of(long long i); // m with i ∈ J_m

    // n(i-1) + N(block(i-1)) <= n(i) - N(block(i)): the annuli and enlarged sets nest.
    bool nesting_ok(long long i);

private:
    void fill_to(long long i);
    std::vector<BigInt> memo_; // memo_[i-1] = n(i)
    std::mutex mu_;
};

struct AveragingSets {
    long long i = 0, m = 0;
    BigInt f_radius;        // n(i)
    BigInt fplus_radius;    // n(i) + N(m)
    BigInt annulus_outer;   // n(i) + N(m)
    BigInt annulus_inner;   // n(i) - N(m)
    BigInt prev_fplus_radius; // n(i-1) + N(block(i-1)), valid for i >= 2
};

AveragingSets averaging_sets(IndexSequence& seq, long long i);

struct RatioValue {
    bool defined = false;
    Rat value;
};

// φ_i at a fixed point: (S(n(i)+N) − S(n(i)−N)) / S(n(i−1)+N'), where S maps a ball
// radius to the corresponding orbit sum and the zero-denominator case is flagged,
// never folded into a value.
using BallSumFn = std::function<Rat(const BigInt& radius)>;
RatioValue boundary_ratio_phi_i(IndexSequence& seq, long long i, const BallSumFn& S);

struct DensityEstimate {
    long long horizon = 0;
    long long hits = 0;
    Rat estimate;    // hits / horizon
    Rat running_max; // max over M <= horizon of hits(M)/M
    bool zero_flag = false; // hits <= floor(sqrt(horizon)): treated as density zero
};

DensityEstimate upper_density(const std::function<bool(long long)>& indicator, long long horizon);

struct DlsResult {
    bool defined = false;
    Rat value;
    std::vector<std::pair<Rat, DensityEstimate>> profile;
};

// Density-limsup proxy: smallest grid threshold whose superlevel index set has
// finite-horizon density zero under the sqrt rule above.
DlsResult dls(const std::function<Rat(long long)>& values, long long horizon,
              std::vector<Rat> grid);

} // namespace lab

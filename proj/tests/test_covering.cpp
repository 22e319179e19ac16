#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lab/covering.hpp"

#include <algorithm>
#include <random>
#include <unordered_map>

using namespace lab;

namespace {

// Brute multiplicity: enumerate every translate fully and count overlaps pointwise.
std::pair<long long, std::unordered_map<GroupElement, long long, ElemHash>>
brute_multiplicity(const TranslateFamily& fam) {
    std::unordered_map<GroupElement, long long, ElemHash> count;
    for (const auto& mem : fam.members) {
        for (const GroupElement& g : fam.ctx->balls(mem.radius).elems) {
            if (fam.ctx->cache().length.at(g) > mem.radius) continue;
            ++count[multiply(*fam.ctx, g, mem.center)];
        }
    }
    long long best = 0;
    for (const auto& [g, c] : count) best = std::max(best, c);
    return {best, std::move(count)};
}

TranslateFamily random_family(const GroupContext& ctx, std::mt19937_64& rng) {
    std::uniform_int_distribution<long long> rad(1, 6);
    std::uniform_int_distribution<int> cnt(2, 12);
    std::uniform_int_distribution<long long> coord(-10, 10);
    TranslateFamily fam;
    fam.ctx = &ctx;
    int members = cnt(rng);
    std::vector<long long> radii;
    for (int i = 0; i < members; ++i) radii.push_back(rad(rng));
    std::sort(radii.rbegin(), radii.rend());
    for (int i = 0; i < members; ++i) {
        GroupElement c = ctx.kind() == GroupKind::Zd && ctx.dim() == 1
                             ? GroupElement{ZdElem{{coord(rng)}}}
                             : GroupElement{ZdElem{{coord(rng), coord(rng)}}};
        fam.members.push_back({radii[i], c});
    }
    return fam;
}

} // namespace

TEST_CASE("multiplicity matches brute force on random families") {
    GroupContext z1 = GroupContext::zd(1);
    GroupContext z2 = GroupContext::zd(2);
    std::mt19937_64 rng(42);
    for (int t = 0; t < 60; ++t) {
        const GroupContext& ctx = (t % 2) ? z1 : z2;
        TranslateFamily fam = random_family(ctx, rng);
        auto [ref, counts] = brute_multiplicity(fam);
        MultiplicityReport rep = multiplicity(fam, true);
        CHECK(rep.multiplicity == ref);
        CHECK(counts.at(rep.witness) == ref);
        CHECK(multiplicity_at(fam, rep.witness) == ref);
    }
}

TEST_CASE("greedy output is incremental and covers every input center") {
    GroupContext z1 = GroupContext::zd(1);
    GroupContext z2 = GroupContext::zd(2);
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        const GroupContext& ctx = (t % 2) ? z1 : z2;
        TranslateFamily fam = random_family(ctx, rng);
        IncrementalSequence seq = greedy_incremental(fam);
        CHECK(is_incremental(seq.family).ok);
        for (const auto& mem : fam.members) {
            bool covered = false;
            for (const auto& kept : seq.family.members)
                if (translated_ball_contains(ctx, kept.radius, kept.center, mem.center)) {
                    covered = true;
                    break;
                }
            CHECK(covered);
        }
        CHECK(seq.multiplicity_at_identity == multiplicity_at(seq.family, ctx.identity()));
        CHECK(multiplicity(seq.family).multiplicity <= multiplicity(fam).multiplicity);
    }
}

TEST_CASE("greedy rejects unsorted radii") {
    GroupContext z1 = GroupContext::zd(1);
    TranslateFamily fam;
    fam.ctx = &z1;
    fam.members.push_back({2, ZdElem{{0}}});
    fam.members.push_back({5, ZdElem{{9}}});
    CHECK_THROWS(greedy_incremental(fam));
}

TEST_CASE("is_incremental pinpoints the first violation") {
    GroupContext z1 = GroupContext::zd(1);
    TranslateFamily fam;
    fam.ctx = &z1;
    fam.members.push_back({3, ZdElem{{0}}});
    fam.members.push_back({3, ZdElem{{2}}}); // inside B_3·0
    IncrementalCheck chk = is_incremental(fam);
    CHECK(!chk.ok);
    CHECK(chk.j == 1);
    CHECK(chk.i == 0);
}

TEST_CASE("witness search on Z: two translates found, three with equal radii exhausted") {
    GroupContext z1 = GroupContext::zd(1);
    WitnessSearchResult two = incremental_witness_search(z1, {2, 2}, 2, 100000);
    REQUIRE(two.status == SearchStatus::Found);
    CHECK(is_incremental(two.seq.family).ok);
    CHECK(multiplicity_at(two.seq.family, z1.identity()) == 2);

    WitnessSearchResult three = incremental_witness_search(z1, {2, 2, 2}, 3, 1'000'000);
    CHECK(three.status == SearchStatus::Exhausted);
}

TEST_CASE("max internal gap scan") {
    CHECK(!max_internal_gap({}).has_gap);
    CHECK(!max_internal_gap({4}).has_gap);
    GapInfo g = max_internal_gap({-3, -1, 0, 4, 5});
    CHECK(g.has_gap);
    CHECK(g.s == 0);
    CHECK(g.t == 4);
    CHECK(g.length == 4);
}

TEST_CASE("heisenberg families of multiplicity 2, 3, 4") {
    GroupContext h = GroupContext::heisenberg();
    for (long long k = 2; k <= 4; ++k) {
        IncrementalSequence seq = heisenberg_incremental(h, k);
        CHECK(seq.verified);
        CHECK(is_incremental(seq.family).ok);
        CHECK(multiplicity_at(seq.family, h.identity()) == k);
        CHECK(seq.multiplicity_at_identity == k);
    }
}

TEST_CASE("separated directions really are separated") {
    GroupContext h = GroupContext::heisenberg();
    long long scale = 16, margin = 2;
    std::vector<GroupElement> dirs = separated_directions(h, scale, margin, 16);
    CHECK(dirs.size() >= 6);
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        CHECK(word_length(h, dirs[i]) <= scale);
        for (std::size_t j = i + 1; j < dirs.size(); ++j) {
            GroupElement d = multiply(h, dirs[i], invert(h, dirs[j]));
            CHECK(word_length(h, d) > scale + margin);
        }
    }
}

TEST_CASE("almost central expander radius for a central element") {
    GroupContext h = GroupContext::heisenberg();
    GroupElement c = HeisElem{0, -1, 0};
    CHECK(almost_central_expander(h, c, 6) == 4);
}

TEST_CASE("covering bound constant is exact") {
    CHECK(besicovitch_bound_constant(4, 1, 2) == Rat(2592));
    CHECK(besicovitch_bound_constant(2, Rat(1, 2), 3) == Rat(216));
}

TEST_CASE("bounded-radius multiplicity stays under the growth bound") {
    GroupContext z2 = GroupContext::zd(2);
    z2.growth_c = 2;
    z2.growth_c1 = Rat(2);
    z2.growth_c2 = Rat(5);
    std::mt19937_64 rng(13);
    std::uniform_int_distribution<long long> coord(-20, 20);
    for (long long N = 3; N <= 5; ++N) {
        for (int t = 0; t < 10; ++t) {
            std::uniform_int_distribution<long long> rad(N, 2 * N);
            TranslateFamily raw;
            raw.ctx = &z2;
            std::vector<long long> radii;
            for (int i = 0; i < 10; ++i) radii.push_back(rad(rng));
            std::sort(radii.rbegin(), radii.rend());
            for (long long r : radii)
                raw.members.push_back({r, ZdElem{{coord(rng), coord(rng)}}});
            IncrementalSequence seq = greedy_incremental(raw);
            BoundedRadiusReport rep = verify_bounded_radius_multiplicity(seq, N);
            CHECK(rep.ok);
            CHECK(Rat(rep.measured) <= rep.bound);
        }
    }
}

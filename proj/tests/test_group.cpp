#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lab/group.hpp"

#include <algorithm>
#include <random>

using namespace lab;

namespace {

// Independent evaluator for central elements: |c^m| = min{2s : floor(s/2)*ceil(s/2) >= |m|}.
long long central_length_ref(long long m) {
    if (m < 0) m = -m;
    if (m == 0) return 0;
    long long s = 1;
    while ((s / 2) * ((s + 1) / 2) < m) ++s;
    return 2 * s;
}

GroupElement heis(long long k, long long m, long long n) { return HeisElem{k, m, n}; }

} // namespace

TEST_CASE("zd ball sizes match the closed forms") {
    GroupContext z1 = GroupContext::zd(1);
    GroupContext z2 = GroupContext::zd(2);
    const BallCache& c1 = z1.balls(30);
    const BallCache& c2 = z2.balls(20);
    for (long long n = 0; n <= 30; ++n)
        CHECK(static_cast<long long>(c1.layer_end[n]) == 2 * n + 1);
    for (long long n = 0; n <= 20; ++n)
        CHECK(static_cast<long long>(c2.layer_end[n]) == 2 * n * n + 2 * n + 1);
}

TEST_CASE("free group ball sizes are 2*3^n - 1") {
    GroupContext f = GroupContext::free_group(2);
    const BallCache& c = f.balls(8);
    long long pow3 = 1;
    for (long long n = 0; n <= 8; ++n) {
        CHECK(static_cast<long long>(c.layer_end[n]) == (n == 0 ? 1 : 2 * pow3 * 3 - 1));
        if (n >= 1) pow3 *= 3;
    }
}

TEST_CASE("zinf with finitely many tracked coordinates matches zd") {
    GroupContext zi = GroupContext::zinf(2);
    GroupContext z2 = GroupContext::zd(2);
    const BallCache& a = zi.balls(8);
    const BallCache& b = z2.balls(8);
    for (long long n = 0; n <= 8; ++n) CHECK(a.layer_end[n] == b.layer_end[n]);
}

TEST_CASE("heisenberg ball sizes, frozen") {
    GroupContext h = GroupContext::heisenberg();
    const BallCache& c = h.balls(8);
    const long long expected[] = {1, 5, 17, 53, 135, 299, 593, 1069, 1793};
    for (long long n = 0; n <= 8; ++n)
        CHECK(static_cast<long long>(c.layer_end[n]) == expected[n]);
}

TEST_CASE("heisenberg multiplication, inverse, commutator") {
    GroupContext h = GroupContext::heisenberg();
    GroupElement a = heis(1, 0, 0), b = heis(0, 0, 1);
    CHECK(multiply(h, a, b) == heis(1, 1, 1));
    CHECK(invert(h, heis(1, 1, 1)) == heis(-1, 0, -1));
    GroupElement comm = multiply(h, multiply(h, invert(h, b), invert(h, a)), multiply(h, b, a));
    CHECK(comm == heis(0, -1, 0));
    CHECK(word_length(h, comm) == 4);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<long long> d(-50, 50);
    for (int t = 0; t < 200; ++t) {
        GroupElement g = heis(d(rng), d(rng), d(rng));
        CHECK(is_identity(multiply(h, g, invert(h, g))));
        CHECK(is_identity(multiply(h, invert(h, g), g)));
    }
}

TEST_CASE("heisenberg word length agrees with BFS on the whole 8-ball") {
    GroupContext h = GroupContext::heisenberg();
    const BallCache& c = h.balls(8);
    for (const GroupElement& g : c.elems) {
        const HeisElem& e = std::get<HeisElem>(g);
        CHECK(heisenberg_word_length(e) == c.length.at(g));
    }
}

TEST_CASE("heisenberg word length on central powers matches the quadratic rule") {
    for (long long m = 0; m <= 20000; m += (m < 100 ? 1 : 137))
        CHECK(heisenberg_word_length(HeisElem{0, -m, 0}) == central_length_ref(m));
    CHECK(heisenberg_word_length(HeisElem{0, 1, 0}) == 4);
}

TEST_CASE("heisenberg metric properties under fuzz") {
    GroupContext h = GroupContext::heisenberg();
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long long> d(-200, 200);
    for (int t = 0; t < 500; ++t) {
        HeisElem g{d(rng), d(rng) * d(rng) / 7, d(rng)};
        HeisElem gi = std::get<HeisElem>(invert(h, GroupElement{g}));
        long long lg = heisenberg_word_length(g);
        CHECK(heisenberg_word_length(gi) == lg);
        HeisElem k{d(rng), d(rng), d(rng)};
        long long lk = heisenberg_word_length(k);
        GroupElement prod = multiply(h, GroupElement{g}, GroupElement{k});
        CHECK(heisenberg_word_length(std::get<HeisElem>(prod)) <= lg + lk);
        if (lg > 0) {
            // Removing one generator changes the length by exactly one in some direction.
            bool drop = false;
            for (const GroupElement& s : h.generators()) {
                HeisElem gs = std::get<HeisElem>(multiply(h, GroupElement{g}, s));
                long long l2 = heisenberg_word_length(gs);
                CHECK(std::llabs(l2 - lg) <= 1);
                if (l2 == lg - 1) drop = true;
            }
            CHECK(drop);
        }
    }
}

TEST_CASE("word length for non-heisenberg kinds") {
    GroupContext z3 = GroupContext::zd(3);
    CHECK(word_length(z3, ZdElem{{2, -3, 1}}) == 6);
    GroupContext f = GroupContext::free_group(2);
    CHECK(word_length(f, FreeElem{{1, 2, -1}}) == 3);
    GroupContext zi = GroupContext::zinf(4);
    CHECK(word_length(zi, ZInfElem{{{0, 2}, {3, -5}}}) == 7);
}

TEST_CASE("translated balls and set products") {
    GroupContext h = GroupContext::heisenberg();
    GroupElement a = heis(1, 0, 0), b = heis(0, 0, 1);
    CHECK(translated_ball_contains(h, 1, a, heis(2, 0, 0)));
    CHECK(translated_ball_contains(h, 1, b, heis(1, 1, 1))); // a·b lands in B_1·b
    CHECK(!translated_ball_contains(h, 1, a, heis(1, 1, 1))); // but not in B_1·a
    CHECK(!translated_ball_contains(h, 1, a, heis(3, 0, 0)));

    FiniteSubset b1 = FiniteSubset::ball(h, 1);
    FiniteSubset prod = set_product(b1, b1);
    FiniteSubset b2 = FiniteSubset::ball(h, 2);
    CHECK(prod.size() == b2.size());
    for (const GroupElement& g : prod.elements()) CHECK(b2.contains(g));
}

TEST_CASE("central powers in a ball form the full quadratic interval") {
    GroupContext h = GroupContext::heisenberg();
    for (long long r = 0; r <= 10; ++r) {
        std::vector<long long> m = central_powers_in_ball(h, r);
        REQUIRE(static_cast<long long>(m.size()) == 2 * r * r + 1);
        for (std::size_t i = 0; i < m.size(); ++i)
            CHECK(m[i] == -r * r + static_cast<long long>(i));
    }
}

TEST_CASE("budget exhaustion raises with the completed layer count") {
    GroupContext h = GroupContext::heisenberg();
    h.set_budget(100);
    CHECK_THROWS_AS(h.balls(10), BudgetError);
    try {
        h.balls(10);
    } catch (const BudgetError& e) {
        CHECK(e.layers >= 0);
        CHECK(e.layers < 10);
    }
}

TEST_CASE("canonical order is a strict total order on a ball") {
    GroupContext z2 = GroupContext::zd(2);
    std::vector<GroupElement> elems = z2.balls(3).elems;
    std::sort(elems.begin(), elems.end(), canonical_less);
    for (std::size_t i = 1; i < elems.size(); ++i) {
        CHECK(canonical_less(elems[i - 1], elems[i]));
        CHECK(!canonical_less(elems[i], elems[i - 1]));
    }
}

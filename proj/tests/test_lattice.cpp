#include "doctest.h"
#include "modk0/lattice_backend.hpp"
#include "testutil.hpp"

using namespace modk0;
using testutil::Rng;

namespace {

LatticeBackend be;

Point pt(std::initializer_list<long> xs) {
    Point p;
    for (long x : xs) p.emplace_back(x);
    return p;
}

std::vector<Int> iv(std::initializer_list<long> xs) {
    return std::vector<Int>(xs.begin(), xs.end());
}

IntMatrix rows(std::initializer_list<std::initializer_list<long>> rs, std::size_t cols) {
    IntMatrix m(0, cols);
    for (auto& r : rs) m.append_row(std::vector<Int>(r.begin(), r.end()));
    return m;
}

PPSet nz(long n) { return be.from_offset_basis(iv({0}), rows({{n}}, 1)); }
PPSet coset(long a, long n) { return be.from_offset_basis(iv({a}), rows({{n}}, 1)); }

}  // namespace

TEST_CASE("lattice meets with residue brute force") {
    CHECK(be.meet(nz(2), nz(3)) == nz(6));
    CHECK(be.meet(coset(1, 2), nz(2)).is_empty());
    PPSet p = be.from_offset_basis(iv({1, 2}), rows({{2, 0}, {0, 3}}, 2));
    CHECK(be.meet(p, p) == p);

    Rng rng(61001);
    for (int it = 0; it < 40; ++it) {
        long a = rng.pick(1, 6), b = rng.pick(1, 6);
        long ra = rng.pick(-3, 3), rb = rng.pick(-3, 3);
        PPSet m = be.meet(coset(ra, a), coset(rb, b));
        for (long x = -60; x <= 60; ++x) {
            bool in_both = ((x - ra) % a == 0) && ((x - rb) % b == 0);
            bool in_meet = !m.is_empty() && be.contains(m, pt({x}));
            CHECK(in_both == in_meet);
        }
    }
}

TEST_CASE("lattice indices") {
    auto idx = be.index(nz(2), nz(6));
    CHECK(idx.kind == IndexValue::Finite);
    CHECK(idx.value == 3);

    PPSet z2 = be.full_space(2);
    PPSet sub = be.from_offset_basis(iv({0, 0}), rows({{2, 0}, {0, 3}}, 2));
    CHECK(be.index(z2, sub).value == 6);
    CHECK(be.index(be.full_space(1), be.full_space(1)).is_one());

    PPSet xaxis = be.from_offset_basis(iv({0, 0}), rows({{1, 0}}, 2));
    CHECK(be.index(z2, xaxis).kind == IndexValue::Infinite);

    // [Z^r : 2Z^r] = 2^r
    for (std::size_t r = 1; r <= 3; ++r) {
        IntMatrix two(r, r);
        for (std::size_t i = 0; i < r; ++i) two(i, i) = 2;
        Int expect = 1;
        for (std::size_t i = 0; i < r; ++i) expect *= 2;
        CHECK(be.index(be.full_space(r), be.from_offset_basis(std::vector<Int>(r, Int(0)), two))
                  .value == expect);
    }
}

TEST_CASE("bands and colours") {
    CHECK(be.band_key(nz(2)) == be.band_key(nz(3)));
    CHECK(be.band_key(nz(2)) != be.band_key(be.singleton(pt({0}))));
    PPSet xaxis = be.from_offset_basis(iv({0, 0}), rows({{1, 0}}, 2));
    PPSet diag = be.from_offset_basis(iv({0, 0}), rows({{1, 1}}, 2));
    CHECK(be.band_key(xaxis) != be.band_key(diag));

    CHECK(be.colour_key(nz(6)) == "r:1");
    CHECK(be.colour_key(be.singleton(pt({5}))) == "r:0");
    PPSet prod = be.product(nz(2), nz(3));
    CHECK(be.colour_key(prod) == "r:2");
}

TEST_CASE("coset decompositions") {
    auto cs = be.coset_decompose(nz(2), nz(6));
    REQUIRE(cs.size() == 3);
    CHECK(cs[0] == nz(6));
    CHECK(cs[1] == coset(2, 6));
    CHECK(cs[2] == coset(4, 6));

    auto self = be.coset_decompose(nz(5), nz(5));
    REQUIRE(self.size() == 1);
    CHECK(self[0] == nz(5));

    PPSet z2 = be.full_space(2);
    PPSet sub = be.from_offset_basis(iv({0, 0}), rows({{2, 0}, {0, 2}}, 2));
    auto quad = be.coset_decompose(z2, sub);
    CHECK(quad.size() == 4);
    // the pieces partition: distinct, and every small point is in exactly one
    for (long x = -4; x <= 4; ++x)
        for (long y = -4; y <= 4; ++y) {
            int hits = 0;
            for (const PPSet& c : quad)
                if (be.contains(c, pt({x, y}))) ++hits;
            CHECK(hits == 1);
        }
    CHECK_THROWS(be.coset_decompose(z2, be.from_offset_basis(iv({0, 0}), rows({{1, 0}}, 2))));
}

TEST_CASE("avoidance picks with finite-index obstructions") {
    // Z covered by the two residue classes mod 2
    CHECK(!be.pick_point_avoiding(be.full_space(1), {nz(2), coset(1, 2)}).has_value());
    // Z avoiding 2Z gives an odd number
    auto odd = be.pick_point_avoiding(be.full_space(1), {nz(2)});
    REQUIRE(odd.has_value());
    CHECK(numerator((*odd)[0]) % 2 != 0);
    // mixed finite and infinite index obstructions in Z^2
    PPSet z2 = be.full_space(2);
    PPSet even_x = be.from_offset_basis(iv({0, 0}), rows({{2, 0}, {0, 1}}, 2));
    PPSet diag = be.from_offset_basis(iv({0, 0}), rows({{1, 1}}, 2));
    auto picked = be.pick_point_avoiding(z2, {even_x, diag});
    REQUIRE(picked.has_value());
    CHECK(!be.contains(even_x, *picked));
    CHECK(!be.contains(diag, *picked));
}

TEST_CASE("index is multiplicative across products") {
    Rng rng(61002);
    for (int it = 0; it < 30; ++it) {
        long a1 = rng.pick(1, 4), b1 = rng.pick(1, 4);
        long a2 = rng.pick(1, 4), b2 = rng.pick(1, 4);
        PPSet p1 = nz(a1), q1 = nz(a1 * b1);
        PPSet p2 = nz(a2), q2 = nz(a2 * b2);
        auto lhs = be.index(be.product(p1, p2), be.product(q1, q2));
        CHECK(lhs.value == be.index(p1, q1).value * be.index(p2, q2).value);
    }
}

TEST_CASE("existential presentations over Z") {
    // { x : exists y, x - 2y = 0 } is 2Z, not all of Z
    RatMatrix r(0, 1), s(0, 1);
    r.append_row({Rat(1)});
    s.append_row({Rat(-2)});
    CHECK(be.pp_from_presentation(r, s, {Rat(0)}) == nz(2));
}

TEST_CASE("lattice descriptors") {
    auto j = nlohmann::json::parse(R"({"kind":"lattice","n":1,"offset":[1],"basis":[[2]]})");
    CHECK(be.from_descriptor(j) == coset(1, 2));
    auto j2 = nlohmann::json::parse(
        R"({"exists":{"n":1,"m":1,"R":[[1]],"S":[[-2]],"c":[0]}})");
    CHECK(be.from_descriptor(j2) == nz(2));
}

TEST_CASE("canonical offsets") {
    CHECK(coset(7, 6) == coset(1, 6));
    CHECK(coset(-5, 6) == coset(1, 6));
    CHECK(be.from_offset_basis(iv({3, 5}), rows({{2, 0}, {0, 2}}, 2)) ==
          be.from_offset_basis(iv({1, 1}), rows({{2, 0}, {0, 2}}, 2)));
}

TEST_CASE("symbolic p-adic presentations") {
    CHECK(zp_presentation(5).render_text() == "Z[X]/<4X>");
    CHECK(zp_sum_presentation(5, 3).render_text() == "Z[X]/<124X>");
    CHECK(zp_sum_presentation(5, 1).render_text() == "Z[X]/<4X>");
}

TEST_CASE("meet is commutative and associative up to set equality") {
    Rng rng(61003);
    for (int it = 0; it < 40; ++it) {
        long a1 = rng.pick(1, 5), a2 = rng.pick(1, 5), a3 = rng.pick(1, 5);
        PPSet p = coset(rng.pick(-2, 2), a1);
        PPSet q = coset(rng.pick(-2, 2), a2);
        PPSet r = coset(rng.pick(-2, 2), a3);
        CHECK(be.meet(p, q) == be.meet(q, p));
        CHECK(be.meet(be.meet(p, q), r) == be.meet(p, be.meet(q, r)));
    }
}

TEST_CASE("index one exactly characterizes subgroup containment") {
    Rng rng(61004);
    for (int it = 0; it < 40; ++it) {
        long a = rng.pick(1, 6), b = rng.pick(1, 6);
        PPSet p = nz(a), q = nz(b);
        bool contained = a % b == 0;  // aZ inside bZ iff b divides a
        CHECK(be.index(p, q).is_one() == contained);
    }
}

TEST_CASE("bands capture mutual finite indices") {
    Rng rng(61005);
    for (int it = 0; it < 30; ++it) {
        PPSet p = nz(rng.pick(1, 6));
        PPSet q = nz(rng.pick(1, 6));
        bool same_band = be.band_key(p) == be.band_key(q);
        bool both_finite = be.index(p, q).kind == IndexValue::Finite &&
                           be.index(q, p).kind == IndexValue::Finite;
        CHECK(same_band == both_finite);
    }
    PPSet xaxis = be.from_offset_basis(iv({0, 0}), rows({{1, 0}}, 2));
    PPSet z2 = be.full_space(2);
    CHECK(be.band_key(xaxis) != be.band_key(z2));
    CHECK(be.index(z2, xaxis).kind == IndexValue::Infinite);
}

#include "doctest.h"
#include "modk0/affine_backend.hpp"
#include "testutil.hpp"

using namespace modk0;
using testutil::Rng;

namespace {

AffineBackend be;

Point pt(std::initializer_list<long> xs) {
    Point p;
    for (long x : xs) p.emplace_back(x);
    return p;
}

RatMatrix rows(std::initializer_list<std::initializer_list<long>> rs) {
    RatMatrix m(0, rs.size() ? rs.begin()->size() : 0);
    for (auto& r : rs) {
        std::vector<Rat> row;
        for (long x : r) row.emplace_back(x);
        m.append_row(row);
    }
    return m;
}

PPSet line_through(Point base, Point dir) {
    RatMatrix basis(0, base.size());
    std::vector<Rat> row(dir.begin(), dir.end());
    basis.append_row(row);
    return be.from_point_basis(std::move(base), std::move(basis));
}

// random invertible rational matrix with small integer entries
RatMatrix random_invertible(Rng& rng, std::size_t n) {
    for (;;) {
        RatMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) m(i, j) = Rat(rng.pick(-3, 3));
        if (rat_rank(m) == n) return m;
    }
}

PPSet random_subspace(Rng& rng, std::size_t n) {
    std::size_t d = static_cast<std::size_t>(rng.pick(0, static_cast<long>(n)));
    RatMatrix basis(0, n);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Rat> row;
        for (std::size_t j = 0; j < n; ++j) row.emplace_back(rng.pick(-3, 3));
        basis.append_row(row);
    }
    Point base;
    for (std::size_t j = 0; j < n; ++j) base.emplace_back(rng.pick(-4, 4));
    return be.from_point_basis(base, basis);
}

}  // namespace

TEST_CASE("affine meets") {
    PPSet l1 = line_through(pt({0, 0}), pt({1, 0}));
    PPSet l2 = line_through(pt({0, 0}), pt({0, 1}));
    PPSet m = be.meet(l1, l2);
    CHECK(be.cardinality(m) == Card::One);
    CHECK(be.contains(m, pt({0, 0})));

    CHECK(be.meet(l1, l1) == l1);

    PPSet l3 = line_through(pt({0, 1}), pt({1, 0}));
    CHECK(be.meet(l1, l3).is_empty());

    // crossing lines with offset intersection: x+y=1 meets x-y=1 at (1,0)
    PPSet a = be.from_equations(rows({{1, 1}}), {Rat(-1)});
    PPSet b = be.from_equations(rows({{1, -1}}), {Rat(-1)});
    PPSet c = be.meet(a, b);
    CHECK(be.cardinality(c) == Card::One);
    CHECK(be.contains(c, pt({1, 0})));
}

TEST_CASE("affine index is 1 or infinity") {
    PPSet l1 = line_through(pt({0, 0}), pt({1, 0}));
    PPSet l2 = line_through(pt({0, 3}), pt({1, 0}));
    CHECK(be.index(l1, l2).is_one());
    PPSet plane = be.full_space(2);
    CHECK(be.index(plane, l1).kind == IndexValue::Infinite);
    PPSet point = be.singleton(pt({5, 7}));
    CHECK(be.index(point, l1).is_one());
    CHECK(be.index(point, plane).is_one());
}

TEST_CASE("affine colours") {
    CHECK(be.colour_key(be.singleton(pt({3}))) == "d:0");
    PPSet l = line_through(pt({0, 0}), pt({1, 1}));
    CHECK(be.colour_key(l) == "d:1");
    CHECK(be.colour_key(be.product(l, l)) == "d:2");
    PPSet plane3 = be.from_equations(rows({{1, 1, 1}}), {Rat(0)});
    CHECK(be.colour_key(plane3) == "d:2");
}

TEST_CASE("pp sets from existential presentations") {
    // { x in Q : exists y, x - 2y = 0 } is all of Q
    PPSet all = be.pp_from_presentation(rows({{1}}), rows({{-2}}), {Rat(0)});
    CHECK(all == be.full_space(1));
    // { x in Q^2 : x1 + x2 - 1 = 0 }
    PPSet line = be.pp_from_presentation(rows({{1, 1}}), RatMatrix(0, 0), {Rat(-1)});
    CHECK(be.dim(line) == 1);
    CHECK(be.contains(line, pt({1, 0})));
    CHECK(be.contains(line, pt({0, 1})));
    // diagonal via x1 = y, x2 = y
    PPSet diag = be.pp_from_presentation(rows({{1, 0}, {0, 1}}), rows({{-1}, {-1}}),
                                         {Rat(0), Rat(0)});
    CHECK(be.dim(diag) == 1);
    CHECK(be.contains(diag, pt({4, 4})));
    CHECK(!be.contains(diag, pt({1, 2})));
}

TEST_CASE("deterministic avoidance picks") {
    PPSet l = line_through(pt({0, 0}), pt({1, 2}));
    std::vector<PPSet> avoid;
    auto base = be.pick_point_avoiding(l, avoid);
    REQUIRE(base.has_value());
    CHECK(*base == be.pick_point(l));

    for (long k = 0; k < 3; ++k) {
        Point p = pt({k, 2 * k});
        avoid.push_back(be.singleton(p));
    }
    auto picked = be.pick_point_avoiding(l, avoid);
    REQUIRE(picked.has_value());
    CHECK(be.contains(l, *picked));
    for (const PPSet& a : avoid) CHECK(!be.contains(a, *picked));

    PPSet point = be.singleton(pt({1, 1}));
    CHECK_THROWS(be.pick_point_avoiding(point, {point}));
}

TEST_CASE("no affine subspace is a finite union of proper subspaces") {
    Rng rng(51001);
    for (int it = 0; it < 40; ++it) {
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 3));
        PPSet p = random_subspace(rng, n);
        if (be.dim(p) == 0) continue;
        std::vector<PPSet> avoid;
        for (int i = 0; i < 4; ++i) {
            PPSet q = random_subspace(rng, n);
            PPSet m = be.meet(p, q);
            if (!m.is_empty() && m != p) avoid.push_back(q);
        }
        auto picked = be.pick_point_avoiding(p, avoid);
        REQUIRE(picked.has_value());
        CHECK(be.contains(p, *picked));
        for (const PPSet& a : avoid) CHECK(!be.contains(a, *picked));
    }
}

TEST_CASE("colour is invariant under invertible affine maps") {
    Rng rng(51002);
    for (int it = 0; it < 40; ++it) {
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 3));
        PPSet p = random_subspace(rng, n);
        RatMatrix a = random_invertible(rng, n);
        Point t;
        for (std::size_t j = 0; j < n; ++j) t.emplace_back(rng.pick(-4, 4));
        CHECK(be.colour_key(be.linear_image(p, a, t)) == be.colour_key(p));
    }
}

TEST_CASE("enumerate_points walks the set deterministically") {
    PPSet l = line_through(pt({0, 1}), pt({1, 0}));
    auto pts = be.enumerate_points(l, 5);
    REQUIRE(pts.size() == 5);
    for (const Point& p : pts) CHECK(be.contains(l, p));
    CHECK(pts == be.enumerate_points(l, 5));
    CHECK(pts[0] == pt({0, 1}));
}

TEST_CASE("affine descriptors") {
    auto j = nlohmann::json::parse(R"({"kind":"affine","n":2,"eq":[[1,1,-1]]})");
    PPSet l = be.from_descriptor(j);
    CHECK(be.dim(l) == 1);
    CHECK(be.contains(l, pt({1, 0})));
    auto j2 = nlohmann::json::parse(
        R"({"exists":{"n":1,"m":1,"R":[[1]],"S":[[-2]],"c":[0]}})");
    CHECK(be.from_descriptor(j2) == be.full_space(1));
    auto j3 = nlohmann::json::parse(R"({"kind":"affine","n":2,"eq":[]})");
    CHECK(be.from_descriptor(j3) == be.full_space(2));
}

TEST_CASE("canonical presentations collapse equal sets") {
    // same line described two ways
    PPSet a = line_through(pt({1, 1}), pt({2, 2}));
    PPSet b = line_through(pt({-3, -3}), pt({-1, -1}));
    CHECK(a == b);
    PPSet c = be.from_equations(rows({{1, -1}}), {Rat(0)});
    CHECK(a == c);
}

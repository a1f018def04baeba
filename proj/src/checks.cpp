#include "modk0/checks.hpp"

#include "modk0/affine_backend.hpp"
#include "modk0/k0algebra.hpp"
#include "modk0/lattice_backend.hpp"
#include "modk0/simplicial.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <sstream>

namespace modk0::checks {

namespace {

// identical portable draw discipline as the unit-test helper
class Rng {
public:
    explicit Rng(std::uint64_t seed) : g_(seed) {}
    long pick(long lo, long hi) {
        return lo + static_cast<long>(g_() % static_cast<std::uint64_t>(hi - lo + 1));
    }
    bool chance(unsigned percent) { return g_() % 100 < percent; }

private:
    std::mt19937_64 g_;
};

// ---------------------------------------------------------------------------
// generators

SimplicialComplex random_complex(Rng& rng, int max_vertices, int max_faces, int max_face_size) {
    int nv = static_cast<int>(rng.pick(1, max_vertices));
    int nf = static_cast<int>(rng.pick(1, max_faces));
    std::vector<Face> maximal;
    for (int i = 0; i < nf; ++i) {
        int sz = static_cast<int>(rng.pick(1, max_face_size));
        Face f;
        for (int j = 0; j < sz; ++j) f.push_back("v" + std::to_string(rng.pick(1, nv)));
        std::sort(f.begin(), f.end());
        f.erase(std::unique(f.begin(), f.end()), f.end());
        maximal.push_back(f);
    }
    return SimplicialComplex::from_maximal_faces(maximal);
}

SimplicialComplex random_subcomplex(Rng& rng, const SimplicialComplex& k) {
    std::vector<Face> picks;
    for (const Face& f : k.faces())
        if (rng.chance(40)) picks.push_back(f);
    return SimplicialComplex::from_maximal_faces(picks);
}

std::string dump_complex_pair(const SimplicialComplex& k, const SimplicialComplex& q) {
    return "K:\n" + maximal_faces_text(k) + "Q:\n" + maximal_faces_text(q);
}

Point make_point(Rng& rng, std::size_t n, long lo = -4, long hi = 4) {
    Point p;
    for (std::size_t i = 0; i < n; ++i) p.emplace_back(rng.pick(lo, hi));
    return p;
}

PPSet random_affine_set(const AffineBackend& be, Rng& rng, std::size_t n) {
    std::size_t d = static_cast<std::size_t>(rng.pick(0, static_cast<long>(n)));
    RatMatrix basis(0, n);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Rat> row;
        for (std::size_t j = 0; j < n; ++j) row.emplace_back(rng.pick(-2, 2));
        basis.append_row(row);
    }
    return be.from_point_basis(make_point(rng, n, -3, 3), basis);
}

PPSet random_lattice_set(const LatticeBackend& be, Rng& rng, std::size_t n) {
    std::size_t d = static_cast<std::size_t>(rng.pick(0, static_cast<long>(n)));
    IntMatrix basis(0, n);
    for (std::size_t i = 0; i < d; ++i) {
        std::vector<Int> row;
        for (std::size_t j = 0; j < n; ++j) row.emplace_back(rng.pick(-3, 3));
        basis.append_row(row);
    }
    std::vector<Int> off;
    for (std::size_t j = 0; j < n; ++j) off.emplace_back(rng.pick(-3, 3));
    return be.from_offset_basis(std::move(off), std::move(basis));
}

// A small pool of named sets plus a random expression over them.
struct ExprInstance {
    std::map<std::string, PPSet> sets;
    Expr expr = Expr::atom("?");
};

Expr random_expr_over(Rng& rng, const std::vector<std::string>& names, int depth) {
    if (depth == 0 || (depth < 2 && rng.chance(40)))
        return Expr::atom(names[rng.pick(0, static_cast<long>(names.size()) - 1)]);
    Expr lhs = random_expr_over(rng, names, depth - 1);
    Expr rhs = random_expr_over(rng, names, depth - 1);
    switch (rng.pick(0, 2)) {
        case 0: return Expr::combine(Expr::Op::Union, lhs, rhs);
        case 1: return Expr::combine(Expr::Op::Inter, lhs, rhs);
        default: return Expr::combine(Expr::Op::Diff, lhs, rhs);
    }
}

ExprInstance random_affine_instance(const AffineBackend& be, Rng& rng, std::size_t n,
                                    int pool_size, int depth) {
    ExprInstance inst;
    std::vector<std::string> names;
    for (int i = 0; i < pool_size; ++i) {
        PPSet s = random_affine_set(be, rng, n);
        std::string name = "S" + std::to_string(i);
        inst.sets.emplace(name, s);
        names.push_back(name);
    }
    inst.expr = random_expr_over(rng, names, depth);
    return inst;
}

ExprInstance random_lattice_instance(const LatticeBackend& be, Rng& rng, std::size_t n,
                                     int pool_size, int depth) {
    ExprInstance inst;
    std::vector<std::string> names;
    for (int i = 0; i < pool_size; ++i) {
        PPSet s = random_lattice_set(be, rng, n);
        std::string name = "S" + std::to_string(i);
        inst.sets.emplace(name, s);
        names.push_back(name);
    }
    inst.expr = random_expr_over(rng, names, depth);
    return inst;
}

std::string dump_instance(const TheoryBackend& be, const ExprInstance& inst,
                          const std::string& note = "") {
    nlohmann::json j;
    j["backend"] = be.name();
    nlohmann::json sets = nlohmann::json::object();
    for (const auto& [name, s] : inst.sets) sets[name] = be.descriptor(s);
    j["sets"] = sets;
    j["exprs"] = {{"D", inst.expr.to_string()}};
    if (!note.empty()) j["note"] = note;
    return j.dump();
}

long long chi_of(const HomologyResult& h) {
    long long chi = 0;
    for (std::size_t n = 0; n < h.groups.size(); ++n)
        chi += (n % 2 == 0 ? 1 : -1) * h.groups[n].betti;
    return chi;
}

// ---------------------------------------------------------------------------
// chi identity suites

SuiteResult suite_chi_cone(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "chi-cone";
    Rng rng(cfg.seed);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        SimplicialComplex k = random_complex(rng, 8, 5, 4);
        SimplicialComplex q = random_subcomplex(rng, k);
        SimplicialComplex c = cone(k, q, fresh_apex(k));
        if (euler_char(c) + euler_char(q) != euler_char(k) + 1) {
            ++res.failures;
            res.failure_dumps.push_back(dump_complex_pair(k, q));
        }
    }
    return res;
}

SuiteResult suite_chi_disjunctive(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "chi-disjunctive";
    Rng rng(cfg.seed + 1);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        SimplicialComplex k = random_complex(rng, 4, 3, 3);
        SimplicialComplex q = random_complex(rng, 4, 3, 3);
        long long ck = euler_char(k), cq = euler_char(q);
        // a single maximal face F x V(Q) can reach 2^12 subsets here, so the
        // suite raises the face cap above the CLI default
        if (euler_char(disjunctive_product(k, q, 1 << 17)) != ck + cq - ck * cq) {
            ++res.failures;
            res.failure_dumps.push_back(dump_complex_pair(k, q));
        }
    }
    return res;
}

SuiteResult suite_chi_product(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "chi-product";
    Rng rng(cfg.seed + 2);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        // keep one side a graph so products stay small
        SimplicialComplex k = random_complex(rng, 4, 3, 3);
        SimplicialComplex q = random_complex(rng, 4, 3, 2);
        SimplicialComplex p = simplicial_product(k, q);
        bool ok = euler_char(p) == euler_char(k) * euler_char(q);
        HomologyResult hp = homology(p);
        HomologyResult ht = homology(tensor_chain(chain_complex(k), chain_complex(q)));
        ok = ok && hp == ht && chi_of(hp) == euler_char(p);
        if (!ok) {
            ++res.failures;
            res.failure_dumps.push_back(dump_complex_pair(k, q));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// local/global characteristic suites (affine and integer backends)

SuiteResult suite_incl_excl(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "incl-excl";
    AffineBackend aff;
    LatticeBackend lat;
    Rng rng(cfg.seed + 3);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        bool integer_case = it % 3 == 2;
        const TheoryBackend& be = integer_case ? static_cast<const TheoryBackend&>(lat)
                                               : static_cast<const TheoryBackend&>(aff);
        Calculus c(be);
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 2));
        std::vector<PPSet> xs, ys;
        for (int i = 0; i < 2; ++i) {
            xs.push_back(integer_case ? random_lattice_set(lat, rng, n)
                                      : random_affine_set(aff, rng, n));
            ys.push_back(integer_case ? random_lattice_set(lat, rng, n)
                                      : random_affine_set(aff, rng, n));
        }
        Antichain alpha = c.canonical_antichain(xs);
        Antichain beta = c.canonical_antichain(ys);
        if (alpha.empty() || beta.empty()) continue;
        std::vector<PPSet> join_in = alpha.elements;
        join_in.insert(join_in.end(), beta.elements.begin(), beta.elements.end());
        std::vector<PPSet> meet_in;
        for (const PPSet& p : alpha.elements)
            for (const PPSet& q : beta.elements) {
                PPSet m = be.meet(p, q);
                if (!m.is_empty()) meet_in.push_back(m);
            }
        // joint discretized nest makes every family member compatible
        std::vector<PPSet> seed = join_in;
        seed.insert(seed.end(), meet_in.begin(), meet_in.end());
        Nest nest = c.build_nest(seed);
        auto rewrite = [&](const std::vector<PPSet>& fam) {
            // replace each member by the same-band nest cosets composing it
            std::vector<PPSet> out;
            for (const PPSet& f : fam)
                for (const PPSet& g : nest.elements)
                    if (be.band_key(g) == be.band_key(f) && be.is_subset(g, f))
                        out.push_back(g);
            std::sort(out.begin(), out.end());
            out.erase(std::unique(out.begin(), out.end()), out.end());
            return out;
        };
        std::vector<PPSet> a1 = rewrite(alpha.elements);
        std::vector<PPSet> a2 = rewrite(beta.elements);
        Antichain join = c.canonical_antichain(join_in);
        Antichain meetac = c.canonical_antichain(meet_in);
        std::vector<PPSet> b1 = rewrite(join.elements);
        std::vector<PPSet> b2 = rewrite(meetac.elements);
        bool ok = true;
        std::string note;
        for (const PPSet& p : nest.elements) {
            long long lhs = c.local_characteristic(a1, p) + c.local_characteristic(a2, p);
            long long rhs = c.local_characteristic(b1, p) + c.local_characteristic(b2, p);
            if (lhs != rhs) {
                ok = false;
                note = "inclusion-exclusion fails at " + p.key();
                break;
            }
        }
        if (!ok) {
            ++res.failures;
            ExprInstance inst;
            int i = 0;
            for (const PPSet& p : xs) inst.sets.emplace("A" + std::to_string(i++), p);
            for (const PPSet& p : ys) inst.sets.emplace("B" + std::to_string(i++), p);
            inst.expr = Expr::atom("A0");
            res.failure_dumps.push_back(dump_instance(be, inst, note));
        }
    }
    return res;
}

SuiteResult suite_partition(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "partition";
    AffineBackend aff;
    LatticeBackend lat;
    Rng rng(cfg.seed + 4);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        bool integer_case = it % 3 == 2;
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 2));
        const TheoryBackend& be = integer_case ? static_cast<const TheoryBackend&>(lat)
                                               : static_cast<const TheoryBackend&>(aff);
        ExprInstance inst = integer_case ? random_lattice_instance(lat, rng, n, 3, 2)
                                         : random_affine_instance(aff, rng, n, 3, 2);
        // refine with an extra pp-set to get a second partition of the same set
        PPSet h = integer_case ? random_lattice_set(lat, rng, n) : random_affine_set(aff, rng, n);
        inst.sets.emplace("H", h);
        Calculus c(be, inst.sets);
        Expr d1 = inst.expr;
        Expr d2 = Expr::combine(Expr::Op::Union,
                                Expr::combine(Expr::Op::Inter, inst.expr, Expr::atom("H")),
                                Expr::combine(Expr::Op::Diff, inst.expr, Expr::atom("H")));
        auto a1 = c.analyze_with(c.atoms(d2), d1);
        auto a2 = c.analyze_with(c.atoms(d1), d2);
        bool ok = a1.nest == a2.nest;
        if (ok)
            for (const PPSet& p : a1.nest) {
                long long s1 = 0, s2 = 0;
                for (const Block& b : a1.blocks) s1 += c.local_characteristic(b, p);
                for (const Block& b : a2.blocks) s2 += c.local_characteristic(b, p);
                if (s1 != s2) {
                    ok = false;
                    break;
                }
            }
        if (ok) ok = c.evaluate_blocks(a1.nest, a1.blocks) == c.evaluate_blocks(a2.nest, a2.blocks);
        if (!ok) {
            ++res.failures;
            res.failure_dumps.push_back(dump_instance(be, inst, "partition dependence"));
        }
    }
    return res;
}

namespace bijection_support {

// one global affine move plus per-block translations, disjointness verified
struct PiecewiseMap {
    RatMatrix a;
    Point global_t;
    std::vector<Point> block_t;
};

std::optional<Expr> image_expr(Calculus& c, const std::vector<Block>& blocks,
                               const PiecewiseMap& f, std::map<std::string, PPSet>& names) {
    const TheoryBackend& be = c.backend();
    std::optional<Expr> acc;
    std::vector<std::pair<PPSet, std::vector<PPSet>>> images;
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        Point shift = point_add(f.global_t, f.block_t[i]);
        PPSet bar = be.linear_image(blocks[i].bar, f.a, shift);
        std::vector<PPSet> negs;
        for (const PPSet& q : blocks[i].negative.elements)
            negs.push_back(be.linear_image(q, f.a, shift));
        images.emplace_back(bar, negs);
    }
    // exact pairwise disjointness of the image blocks
    std::map<std::string, PPSet> sets;
    std::vector<Expr> block_exprs;
    for (std::size_t i = 0; i < images.size(); ++i) {
        std::string bn = "ib" + std::to_string(i);
        sets.emplace(bn, images[i].first);
        Expr e = Expr::atom(bn);
        for (std::size_t j = 0; j < images[i].second.size(); ++j) {
            std::string nn = "in" + std::to_string(i) + "_" + std::to_string(j);
            sets.emplace(nn, images[i].second[j]);
            e = Expr::combine(Expr::Op::Diff, e, Expr::atom(nn));
        }
        block_exprs.push_back(e);
    }
    Calculus imgcalc(be, sets);
    for (std::size_t i = 0; i < block_exprs.size(); ++i)
        for (std::size_t j = i + 1; j < block_exprs.size(); ++j) {
            Expr overlap = Expr::combine(Expr::Op::Inter, block_exprs[i], block_exprs[j]);
            if (!imgcalc.partition_definable(overlap).empty()) return std::nullopt;
        }
    for (auto& [k, v] : sets) names.emplace(k, v);
    for (Expr& e : block_exprs) acc = acc ? Expr::combine(Expr::Op::Union, *acc, e) : e;
    return acc;
}

}  // namespace bijection_support

SuiteResult suite_bijection(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "bijection";
    AffineBackend aff;
    LatticeBackend lat;
    Rng rng(cfg.seed + 5);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        bool integer_case = it % 3 == 2;
        std::size_t n = 2;
        const TheoryBackend& be = integer_case ? static_cast<const TheoryBackend&>(lat)
                                               : static_cast<const TheoryBackend&>(aff);
        ExprInstance inst = integer_case ? random_lattice_instance(lat, rng, n, 3, 2)
                                         : random_affine_instance(aff, rng, n, 3, 2);
        Calculus c(be, inst.sets);
        EvalImage before = c.evaluate(inst.expr);
        auto blocks = c.partition_definable(inst.expr);
        if (blocks.empty()) continue;

        bijection_support::PiecewiseMap f;
        long mode = rng.pick(0, 3);
        if (mode == 0) {
            // random invertible map (unimodular for the integer backend)
            IntMatrix u = IntMatrix::identity(n);
            for (int s = 0; s < 4; ++s) {
                std::size_t i = static_cast<std::size_t>(rng.pick(0, 1));
                std::size_t j = 1 - i;
                Int fscale(rng.pick(-2, 2));
                for (std::size_t col = 0; col < n; ++col) u(i, col) += fscale * u(j, col);
            }
            f.a = RatMatrix::from_int(u);
        } else if (mode == 1) {
            // coordinate swap
            f.a = RatMatrix(2, 2);
            f.a(0, 1) = 1;
            f.a(1, 0) = 1;
        } else if (mode == 2 && !integer_case) {
            // rational invertible map, affine backend only
            do {
                f.a = RatMatrix(2, 2);
                for (std::size_t i = 0; i < 2; ++i)
                    for (std::size_t j = 0; j < 2; ++j) f.a(i, j) = Rat(rng.pick(-2, 2));
            } while (rat_rank(f.a) != 2);
        } else {
            f.a = RatMatrix::identity(2);
        }
        f.global_t = make_point(rng, n, -3, 3);
        f.block_t.assign(blocks.size(), Point(n, Rat(0)));

        std::map<std::string, PPSet> names;
        std::optional<Expr> image;
        for (int attempt = 0; attempt < 4 && !image; ++attempt) {
            if (attempt > 0)  // try per-block translations, fall back to rigid
                for (Point& t : f.block_t)
                    t = attempt < 3 ? make_point(rng, n, -2, 2) : Point(n, Rat(0));
            names.clear();
            image = bijection_support::image_expr(c, blocks, f, names);
        }
        if (!image) continue;
        Calculus imgcalc(be, names);
        EvalImage after = imgcalc.evaluate(*image);
        if (!(before == after)) {
            ++res.failures;
            res.failure_dumps.push_back(
                dump_instance(be, inst, "bijection image " + after.to_string(be.colour_monoid()) +
                                            " vs " + before.to_string(be.colour_monoid())));
        }
    }
    return res;
}

SuiteResult suite_ev_product(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "ev-product";
    AffineBackend aff;
    LatticeBackend lat;
    Rng rng(cfg.seed + 6);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        bool integer_case = it % 3 == 2;
        const TheoryBackend& be = integer_case ? static_cast<const TheoryBackend&>(lat)
                                               : static_cast<const TheoryBackend&>(aff);
        ExprInstance i1 = integer_case ? random_lattice_instance(lat, rng, 1, 2, 2)
                                       : random_affine_instance(aff, rng, 1, 2, 2);
        ExprInstance i2 = integer_case ? random_lattice_instance(lat, rng, 2, 2, 1)
                                       : random_affine_instance(aff, rng, 2, 2, 1);
        std::map<std::string, PPSet> sets;
        for (auto& [k, v] : i1.sets) sets.emplace("L" + k, v);
        for (auto& [k, v] : i2.sets) sets.emplace("R" + k, v);
        auto rename = [](const Expr& e, const std::string& prefix) {
            std::function<Expr(const Expr&)> go = [&](const Expr& x) -> Expr {
                switch (x.op()) {
                    case Expr::Op::Atom:
                        return Expr::atom(prefix + x.name());
                    case Expr::Op::Literal:
                        return x;
                    default:
                        return Expr::combine(x.op(), go(x.lhs()), go(x.rhs()));
                }
            };
            return go(e);
        };
        Expr d1 = rename(i1.expr, "L");
        Expr d2 = rename(i2.expr, "R");
        Calculus c(be, sets);
        EvalImage e1 = c.evaluate(d1);
        EvalImage e2 = c.evaluate(d2);
        EvalImage prod = c.evaluate(Expr::combine(Expr::Op::Product, d1, d2));
        MonoidRingElement expect_raw = mr_mul(e1.raw, e2.raw, be.colour_monoid());
        auto rels = be.invariants_relations();
        MonoidRingElement expect = homogeneous_schema(rels)
                                       ? normal_form(expect_raw, rels, be.colour_monoid())
                                       : expect_raw;
        if (!(prod.reduced == expect)) {
            ++res.failures;
            ExprInstance dump;
            dump.sets = sets;
            dump.expr = Expr::combine(Expr::Op::Product, d1, d2);
            res.failure_dumps.push_back(dump_instance(be, dump, "product multiplicativity"));
        }
    }
    return res;
}

SuiteResult suite_representation(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "representation";
    AffineBackend aff;
    Rng rng(cfg.seed + 7);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 3));
        Calculus c(aff);
        // a finite family with deliberate redundancy
        std::vector<PPSet> beta;
        for (int i = 0; i < 3; ++i) beta.push_back(random_affine_set(aff, rng, n));
        std::vector<PPSet> extra;
        for (std::size_t i = 0; i < beta.size(); ++i)
            for (std::size_t j = i + 1; j < beta.size(); ++j) {
                PPSet m = aff.meet(beta[i], beta[j]);
                if (!m.is_empty()) extra.push_back(m);
            }
        beta.insert(beta.end(), extra.begin(), extra.end());
        Antichain alpha = c.canonical_antichain(beta);
        if (alpha.empty()) continue;
        Nest nest = c.build_nest(beta);
        bool ok = true;
        for (const PPSet& p : nest.elements)
            if (c.local_characteristic(beta, p) != c.local_characteristic(alpha.elements, p)) {
                ok = false;
                break;
            }
        if (!ok) {
            ++res.failures;
            ExprInstance inst;
            int i = 0;
            for (const PPSet& p : beta) inst.sets.emplace("A" + std::to_string(i++), p);
            inst.expr = Expr::atom("A0");
            res.failure_dumps.push_back(dump_instance(aff, inst, "representation dependence"));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Minkowski, discrete form, cell decomposition, connectedness, PHP

SuiteResult suite_minkowski(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "minkowski";
    AffineBackend aff;
    Rng rng(cfg.seed + 8);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        std::size_t n = static_cast<std::size_t>(rng.pick(1, 3));
        Calculus c(aff);
        // a block: positive part of dimension >= 1 minus random proper parts
        PPSet bar = random_affine_set(aff, rng, n);
        if (aff.dim(bar) == 0) bar = aff.full_space(n);
        std::vector<PPSet> negs;
        for (int i = 0; i < 2; ++i) {
            PPSet q = random_affine_set(aff, rng, n);
            PPSet m = aff.meet(bar, q);
            if (!m.is_empty() && m != bar) negs.push_back(m);
        }
        negs.push_back(aff.singleton(aff.pick_point(bar)));
        Block b{bar, c.canonical_antichain(negs)};

        bool ok = true;
        std::string note;
        // the closure points we can reach: block samples and negative parts
        std::vector<Point> targets = c.sample_block_points(b, 3);
        for (const PPSet& q : b.negative.elements) targets.push_back(aff.pick_point(q));
        for (const Point& d : targets) {
            MinkowskiWitness w = c.minkowski_witness(b, d);
            if (point_sub(point_add(w.x, w.y), w.z) != d || !c.in_block(b, w.x) ||
                !c.in_block(b, w.y) || !c.in_block(b, w.z)) {
                ok = false;
                note = "witness recipe fails at " + point_to_string(d);
                break;
            }
        }
        // sampled membership x + y - z inside the closure
        auto pts = c.sample_block_points(b, 3);
        for (const Point& x : pts)
            for (const Point& y : pts)
                for (const Point& z : pts)
                    if (!aff.contains(b.bar, point_sub(point_add(x, y), z))) {
                        ok = false;
                        note = "B+B-B escapes the closure";
                    }
        if (!ok) {
            ++res.failures;
            ExprInstance inst;
            inst.sets.emplace("Bar", b.bar);
            int i = 0;
            for (const PPSet& q : b.negative.elements)
                inst.sets.emplace("N" + std::to_string(i++), q);
            inst.expr = Expr::atom("Bar");
            res.failure_dumps.push_back(dump_instance(aff, inst, note));
        }
    }
    return res;
}

SuiteResult suite_discrete_form(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "discrete-form";
    LatticeBackend lat;
    Rng rng(cfg.seed + 9);
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        Calculus c(lat);
        bool ok = true;
        std::string note;

        // union preservation of the discrete form, checked on an integer box
        std::vector<PPSet> fam;
        int count = static_cast<int>(rng.pick(1, 3));
        for (int i = 0; i < count; ++i) {
            long a = rng.pick(1, 5), r = rng.pick(-3, 3);
            fam.push_back(lat.from_offset_basis({Int(r)}, IntMatrix::from_rows({{Int(a)}})));
        }
        auto rewritten = c.discrete_form({fam})[0];
        for (long x = -60; x <= 60 && ok; ++x) {
            Point p{Rat(x)};
            bool before = false, after = false;
            for (const PPSet& s : fam) before = before || lat.contains(s, p);
            for (const PPSet& s : rewritten) after = after || lat.contains(s, p);
            if (before != after) {
                ok = false;
                note = "discrete form changes the union at x=" + std::to_string(x);
            }
        }
        // within each band the rewritten elements are pairwise disjoint
        for (std::size_t i = 0; i < rewritten.size() && ok; ++i)
            for (std::size_t j = i + 1; j < rewritten.size(); ++j)
                if (lat.band_key(rewritten[i]) == lat.band_key(rewritten[j]) &&
                    !lat.meet(rewritten[i], rewritten[j]).is_empty()) {
                    ok = false;
                    note = "band elements overlap";
                }

        // partitionfurther: [P(alpha):P(beta)] |alpha| = [P(beta):P(alpha)] |beta|
        long h = rng.pick(1, 3), u = rng.pick(1, 4), v = rng.pick(1, 4), r0 = rng.pick(-2, 2);
        auto cosets_of = [&](long mod) {
            std::vector<PPSet> cs;
            for (long i = 0; i < mod / h; ++i)
                cs.push_back(lat.from_offset_basis({Int(r0 + h * i)},
                                                   IntMatrix::from_rows({{Int(mod)}})));
            return cs;
        };
        std::vector<PPSet> alpha = cosets_of(h * u);
        std::vector<PPSet> beta = cosets_of(h * v);
        PPSet pa = lat.subgroup_part(alpha.front());
        PPSet pb = lat.subgroup_part(beta.front());
        Int iab = lat.index(pa, pb).value;
        Int iba = lat.index(pb, pa).value;
        if (iab * Int(alpha.size()) != iba * Int(beta.size())) {
            ok = false;
            note = "partitionfurther identity fails";
        }
        if (!ok) {
            ++res.failures;
            ExprInstance inst;
            int i = 0;
            for (const PPSet& p : fam) inst.sets.emplace("A" + std::to_string(i++), p);
            inst.expr = Expr::atom("A0");
            res.failure_dumps.push_back(dump_instance(lat, inst, note));
        }
    }
    return res;
}

// the fixed workbench sets used by the constructed corpora
std::map<std::string, PPSet> plane_sets(const AffineBackend& aff) {
    std::map<std::string, PPSet> sets;
    auto span2 = [&](long a, long b) {
        RatMatrix m(0, 2);
        m.append_row({Rat(a), Rat(b)});
        return aff.from_point_basis(Point{Rat(0), Rat(0)}, m);
    };
    sets.emplace("X", span2(1, 0));
    sets.emplace("Y", span2(0, 1));
    sets.emplace("D1", span2(1, 1));
    sets.emplace("D2", span2(1, -1));
    sets.emplace("P2", aff.full_space(2));
    sets.emplace("O", aff.singleton(Point{Rat(0), Rat(0)}));
    RatMatrix m(0, 2);
    m.append_row({Rat(1), Rat(0)});
    sets.emplace("X1", aff.from_point_basis(Point{Rat(0), Rat(1)}, m));
    return sets;
}

std::vector<Expr> cdt_corpus(Rng& rng, std::size_t count) {
    std::vector<std::string> fixed = {
        "(X|Y)\\{(0,0)}",
        "(P2\\X)|{(2,0)}",
        "X|Y|D1",
        "P2\\(X|Y)",
        "(P2\\(X|Y))|{(0,0)}",
        "{(1,1),(2,2),(3,3)}",
        "X1|X",
        "(D1|D2)\\{(0,0),(1,1)}",
        "(P2\\D1)|(D1\\{(0,0)})",
        "X\\{(1,0),(2,0),(3,0)}",
    };
    std::vector<Expr> out;
    for (const std::string& s : fixed) out.push_back(parse_expr(s));
    std::vector<std::string> names = {"X", "Y", "D1", "D2", "P2", "O", "X1"};
    while (out.size() < count) out.push_back(random_expr_over(rng, names, 3));
    return out;
}

SuiteResult suite_celldecomp(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "celldecomp";
    AffineBackend aff;
    Rng rng(cfg.seed + 10);
    auto sets = plane_sets(aff);
    Calculus c(aff, sets);
    for (const Expr& d : cdt_corpus(rng, std::max<std::size_t>(cfg.cases / 6, 50))) {
        ++res.cases;
        bool ok = true;
        std::string note;
        Tower t = c.cell_decompose(d);
        // the tower invariants
        for (std::size_t j = 0; ok && j < t.cells.size(); ++j) {
            const Cell& cell = t.cells[j];
            for (const PPSet& q : cell.negative.elements) {
                bool dominated = false;
                for (const PPSet& p : cell.positive.elements)
                    if (aff.is_strict_superset(p, q)) dominated = true;
                if (!dominated) {
                    ok = false;
                    note = "cell negative part is not strictly below the positive part";
                }
            }
            if (j + 1 < t.cells.size())
                for (const PPSet& p : t.cells[j + 1].positive.elements) {
                    bool dominated = false;
                    for (const PPSet& q : cell.negative.elements)
                        if (aff.is_strict_superset(q, p)) dominated = true;
                    if (!dominated) {
                        ok = false;
                        note = "tower ordering violated";
                    }
                }
        }
        // decompose(union(tower)) reproduces the identical tower
        if (ok && t.height() > 0) {
            std::map<std::string, PPSet> names = sets;
            Expr u = c.tower_union_expr(t, names);
            Calculus c2(aff, names);
            if (!(c2.cell_decompose(u) == t)) {
                ok = false;
                note = "cell decomposition is not idempotent";
            }
        }
        // chain bijection round trip with height preservation
        if (ok) {
            PrecChain ch = tower_chain(t);
            if (!(chain_tower(ch) == t) || ch.height() != t.height()) {
                ok = false;
                note = "tower/chain round trip fails";
            }
        }
        if (!ok) {
            ++res.failures;
            ExprInstance inst{sets, d};
            res.failure_dumps.push_back(dump_instance(aff, inst, note));
        }
    }
    return res;
}

SuiteResult suite_connectedness(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "connectedness";
    AffineBackend aff;
    Rng rng(cfg.seed + 11);
    std::size_t rounds = std::max<std::size_t>(cfg.cases / 10, 20);
    for (std::size_t it = 0; it < rounds; ++it) {
        ++res.cases;
        bool ok = true;
        std::string note;
        // m disjoint vertical lines, each possibly missing a point
        long m = rng.pick(2, 4);
        std::map<std::string, PPSet> sets;
        RatMatrix up(0, 2);
        up.append_row({Rat(0), Rat(1)});
        std::vector<Expr> pieces;
        for (long i = 0; i < m; ++i) {
            std::string name = "V" + std::to_string(i);
            sets.emplace(name, aff.from_point_basis(Point{Rat(i), Rat(0)}, up));
            Expr piece = Expr::atom(name);
            if (rng.chance(50)) {
                Expr hole = Expr::literal({Point{Rat(i), Rat(rng.pick(-2, 2))}});
                piece = Expr::combine(Expr::Op::Diff, piece, hole);
            }
            pieces.push_back(piece);
        }
        Expr all = pieces[0];
        for (std::size_t i = 1; i < pieces.size(); ++i)
            all = Expr::combine(Expr::Op::Union, all, pieces[i]);
        CalcOptions opt;
        opt.lambda_budget_rounds = cfg.budget;
        Calculus c(aff, sets, opt);
        LambdaResult lr = c.lambda(all);
        if (lr.value != static_cast<std::size_t>(m) || !lr.exact) {
            ok = false;
            note = "lambda of " + std::to_string(m) + " disjoint lines computed as " +
                   std::to_string(lr.value);
        }
        // every piece is connected and lies inside exactly one component
        for (long i = 0; ok && i < m; ++i) {
            LambdaResult one = c.lambda(pieces[i]);
            if (one.value != 1 || !one.exact) {
                ok = false;
                note = "block fails connectedness";
                break;
            }
            int containers = 0;
            for (long j = 0; j < m; ++j) {
                Expr leftover = Expr::combine(Expr::Op::Diff, pieces[i],
                                              pieces[static_cast<std::size_t>(j)]);
                if (c.partition_definable(leftover).empty()) ++containers;
            }
            if (containers != 1) {
                ok = false;
                note = "topconn containment fails";
            }
        }
        if (!ok) {
            ++res.failures;
            ExprInstance inst{sets, all};
            res.failure_dumps.push_back(dump_instance(aff, inst, note));
        }
    }
    return res;
}

SuiteResult suite_pigeonhole(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "pigeonhole";
    AffineBackend aff;
    Rng rng(cfg.seed + 12);
    MonoidOps ops = nat_monoid("d");
    for (std::size_t it = 0; it < cfg.cases; ++it) {
        ++res.cases;
        std::map<std::string, PPSet> sets;
        sets.emplace("P2", aff.full_space(2));
        Calculus c(aff, sets);
        long count = rng.pick(0, 20);
        std::vector<Point> pts;
        for (long i = 0; i < count; ++i) {
            Point p = make_point(rng, 2, -10, 10);
            if (std::find(pts.begin(), pts.end(), p) == pts.end()) pts.push_back(p);
        }
        bool ok = true;
        std::string note;
        if (!pts.empty()) {
            Expr f = Expr::literal(pts);
            EvalImage ef = c.evaluate(f);
            MonoidRingElement expect =
                MonoidRingElement::monomial(ops.unit, Int(static_cast<long long>(pts.size())));
            if (!(ef.reduced == expect)) {
                ok = false;
                note = "finite set evaluates to " + ef.to_string(ops);
            }
            EvalImage plane = c.evaluate(Expr::atom("P2"));
            EvalImage cofinite =
                c.evaluate(Expr::combine(Expr::Op::Diff, Expr::atom("P2"), f));
            if (plane == cofinite) {
                ok = false;
                note = "removing a finite set left the characteristic unchanged";
            }
        } else {
            // F empty: removing one point must still change the image
            Expr hole = Expr::literal({make_point(rng, 2, 30, 40)});
            if (c.evaluate(Expr::atom("P2")) ==
                c.evaluate(Expr::combine(Expr::Op::Diff, Expr::atom("P2"), hole))) {
                ok = false;
                note = "removing a point left the characteristic unchanged";
            }
        }
        if (!ok) {
            ++res.failures;
            ExprInstance inst{sets, Expr::literal(pts)};
            res.failure_dumps.push_back(dump_instance(aff, inst, note));
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// exhaustive semiring universal property

namespace semiring_enum {

using Table = std::vector<std::vector<std::size_t>>;

bool associative(const Table& t) {
    const std::size_t n = t.size();
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
    return true;
}

// all commutative monoid tables on {0..n-1} with the given identity
std::vector<Table> commutative_monoids(std::size_t n, std::size_t id) {
    std::vector<std::pair<std::size_t, std::size_t>> free_cells;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (i != id && j != id) free_cells.emplace_back(i, j);
    std::vector<Table> out;
    std::vector<std::size_t> choice(free_cells.size(), 0);
    for (;;) {
        Table t(n, std::vector<std::size_t>(n));
        for (std::size_t a = 0; a < n; ++a) {
            t[id][a] = a;
            t[a][id] = a;
        }
        for (std::size_t k = 0; k < free_cells.size(); ++k) {
            auto [i, j] = free_cells[k];
            t[i][j] = choice[k];
            t[j][i] = choice[k];
        }
        if (associative(t)) out.push_back(t);
        std::size_t pos = 0;
        while (pos < choice.size()) {
            if (++choice[pos] < n) break;
            choice[pos] = 0;
            ++pos;
        }
        if (pos == choice.size()) break;
    }
    return out;
}

struct EnumeratedSemiring {
    Table add, mul;
    std::size_t one;
};

// every semiring structure on {0..n-1} with additive identity 0
std::vector<EnumeratedSemiring> all_semirings(std::size_t n) {
    std::vector<EnumeratedSemiring> out;
    auto adds = commutative_monoids(n, 0);
    std::vector<std::pair<Table, std::size_t>> muls;
    for (std::size_t one = 0; one < n; ++one)
        for (const Table& t : commutative_monoids(n, one)) muls.emplace_back(t, one);
    for (const Table& add : adds)
        for (const auto& [mul, one] : muls) {
            bool ok = true;
            for (std::size_t a = 0; a < n && ok; ++a)
                if (mul[a][0] != 0) ok = false;  // absorption
            for (std::size_t a = 0; a < n && ok; ++a)
                for (std::size_t b = 0; b < n && ok; ++b)
                    for (std::size_t c = 0; c < n; ++c)
                        if (mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]) {
                            ok = false;
                            break;
                        }
            if (ok) out.push_back({add, mul, one});
        }
    return out;
}

}  // namespace semiring_enum

// negation inside an arbitrary finite ring table
std::size_t diff_negate_in(const FiniteSemiring& t, std::size_t a) {
    for (std::size_t b = 0; b < t.size(); ++b)
        if (t.add(a, b) == t.zero()) return b;
    throw std::logic_error("no additive inverse");
}

SuiteResult suite_semiring_k0(const SuiteConfig& cfg) {
    SuiteResult res;
    res.name = "semiring-k0";
    (void)cfg;  // exhaustive by definition
    using semiring_enum::EnumeratedSemiring;
    std::vector<FiniteSemiring> semirings;
    std::vector<FiniteSemiring> rings;
    for (std::size_t n = 1; n <= 4; ++n)
        for (const EnumeratedSemiring& e : semiring_enum::all_semirings(n)) {
            FiniteSemiring s(e.add, e.mul, 0, e.one);
            semirings.push_back(s);
            if (s.has_additive_inverses()) rings.push_back(s);
        }

    for (const FiniteSemiring& s : semirings) {
        SemiringK0 k0 = k0_of_semiring(s);
        DifferenceRing diff = ring_of_differences(cancellative_quotient(s).quotient);
        for (const FiniteSemiring& t : rings) {
            // every semiring homomorphism g : s -> t
            std::vector<std::size_t> g(s.size(), 0);
            for (;;) {
                bool hom = g[s.zero()] == t.zero() && g[s.one()] == t.one();
                for (std::size_t a = 0; a < s.size() && hom; ++a)
                    for (std::size_t b = 0; b < s.size(); ++b) {
                        if (g[s.add(a, b)] != t.add(g[a], g[b]) ||
                            g[s.mul(a, b)] != t.mul(g[a], g[b])) {
                            hom = false;
                            break;
                        }
                    }
                if (hom) {
                    ++res.cases;
                    // gbar(eta(a) - eta(b)) := g(a) - g(b) must be well defined,
                    // a ring homomorphism, and satisfy gbar . eta = g
                    std::vector<std::optional<std::size_t>> gbar(k0.ring.size());
                    bool ok = true;
                    std::string note;
                    for (std::size_t a = 0; a < s.size() && ok; ++a)
                        for (std::size_t b = 0; b < s.size(); ++b) {
                            std::size_t cls =
                                k0.ring.add(k0.eta[a], diff.negate(k0.eta[b]));
                            std::size_t val = t.add(g[a], diff_negate_in(t, g[b]));
                            if (!gbar[cls])
                                gbar[cls] = val;
                            else if (*gbar[cls] != val) {
                                ok = false;
                                note = "gbar is not well defined";
                                break;
                            }
                        }
                    for (std::size_t a = 0; a < s.size() && ok; ++a)
                        if (*gbar[k0.eta[a]] != g[a]) {
                            ok = false;
                            note = "triangle fails";
                        }
                    for (std::size_t x = 0; x < k0.ring.size() && ok; ++x)
                        for (std::size_t y = 0; y < k0.ring.size(); ++y) {
                            if (!gbar[x] || !gbar[y]) {
                                ok = false;
                                note = "gbar is not total";
                                break;
                            }
                            if (*gbar[k0.ring.add(x, y)] != t.add(*gbar[x], *gbar[y]) ||
                                *gbar[k0.ring.mul(x, y)] != t.mul(*gbar[x], *gbar[y])) {
                                ok = false;
                                note = "gbar is not a ring homomorphism";
                                break;
                            }
                        }
                    if (!ok) {
                        ++res.failures;
                        res.failure_dumps.push_back("semiring size " +
                                                    std::to_string(s.size()) + ": " + note);
                    }
                }
                std::size_t pos = 0;
                while (pos < g.size()) {
                    if (++g[pos] < t.size()) break;
                    g[pos] = 0;
                    ++pos;
                }
                if (pos == g.size()) break;
            }
        }
    }
    return res;
}

}  // namespace

std::vector<std::string> suite_names() {
    return {"chi-cone", "chi-disjunctive", "chi-product", "incl-excl",  "partition",   "bijection",
            "ev-product",       "representation",              "minkowski",        "celldecomp", "connectedness", "discrete-form",
            "pigeonhole",      "semiring-k0"};
}

SuiteResult run_suite(const std::string& name, const SuiteConfig& cfg) {
    if (name == "chi-cone") return suite_chi_cone(cfg);
    if (name == "chi-disjunctive") return suite_chi_disjunctive(cfg);
    if (name == "chi-product") return suite_chi_product(cfg);
    if (name == "incl-excl") return suite_incl_excl(cfg);
    if (name == "partition") return suite_partition(cfg);
    if (name == "bijection") return suite_bijection(cfg);
    if (name == "ev-product") return suite_ev_product(cfg);
    if (name == "representation") return suite_representation(cfg);
    if (name == "minkowski") return suite_minkowski(cfg);
    if (name == "celldecomp") return suite_celldecomp(cfg);
    if (name == "connectedness") return suite_connectedness(cfg);
    if (name == "discrete-form") return suite_discrete_form(cfg);
    if (name == "pigeonhole") return suite_pigeonhole(cfg);
    if (name == "semiring-k0") return suite_semiring_k0(cfg);
    throw CalcError("unknown check suite: " + name);
}

std::vector<SuiteResult> run_all(const SuiteConfig& cfg) {
    std::vector<SuiteResult> out;
    for (const std::string& name : suite_names()) out.push_back(run_suite(name, cfg));
    return out;
}

}  // namespace modk0::checks

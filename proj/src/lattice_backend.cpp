#include "modk0/lattice_backend.hpp"

#include <algorithm>
#include <sstream>

namespace modk0 {

namespace {

struct LatticeData final : PPSetData {
    std::vector<Int> offset;
    IntMatrix basis;  // hnf, no zero rows
};

const LatticeData& cast(const PPSet& p) {
    auto* d = dynamic_cast<const LatticeData*>(&p.data());
    if (!d) throw CalcError("lattice backend: foreign pp-set");
    return *d;
}

Int floor_div(const Int& a, const Int& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::vector<Int> to_int_point(const Point& p) {
    std::vector<Int> out;
    out.reserve(p.size());
    for (const Rat& q : p) {
        if (denominator(q) != 1) throw CalcError("lattice backend: point is not integral");
        out.push_back(numerator(q));
    }
    return out;
}

Point to_rat_point(const std::vector<Int>& p) {
    Point out;
    out.reserve(p.size());
    for (const Int& x : p) out.emplace_back(x);
    return out;
}

long spiral(std::size_t idx) {
    if (idx == 0) return 0;
    long half = static_cast<long>((idx + 1) / 2);
    return idx % 2 == 1 ? half : -half;
}

class TupleSpiral {
public:
    explicit TupleSpiral(std::size_t k) : k_(k) {}
    std::vector<long> next() {
        for (;;) {
            if (k_ == 0) return {};
            std::size_t width = 2 * level_ + 1;
            while (counter_ >= pow_width(width)) {
                ++level_;
                width = 2 * level_ + 1;
                counter_ = 0;
            }
            std::vector<long> t(k_);
            std::size_t c = counter_++;
            long maxabs = 0;
            for (std::size_t i = 0; i < k_; ++i) {
                t[i] = spiral(c % width);
                c /= width;
                maxabs = std::max(maxabs, std::abs(t[i]));
            }
            if (static_cast<std::size_t>(maxabs) == level_) return t;
        }
    }

private:
    std::size_t pow_width(std::size_t w) const {
        std::size_t p = 1;
        for (std::size_t i = 0; i < k_; ++i) p *= w;
        return p;
    }
    std::size_t k_;
    std::size_t level_ = 0;
    std::size_t counter_ = 0;
};

RatMatrix span_of(const IntMatrix& basis) { return rref(RatMatrix::from_int(basis)); }

}  // namespace

PPSet LatticeBackend::empty_set(std::size_t n) const {
    auto d = std::make_shared<LatticeData>();
    d->ambient = n;
    d->empty = true;
    d->key = "L" + std::to_string(n) + "|empty";
    return PPSet(d);
}

PPSet LatticeBackend::from_offset_basis(std::vector<Int> offset, IntMatrix basis) const {
    const std::size_t n = offset.size();
    if (basis.rows() > 0 && basis.cols() != n)
        throw CalcError("lattice set: basis ambient mismatch");
    IntMatrix b = hnf_basis(basis.rows() ? basis : IntMatrix(0, n));
    // reduce the offset modulo the lattice, pivot by pivot
    for (std::size_t i = 0; i < b.rows(); ++i) {
        std::size_t piv = 0;
        while (piv < n && b(i, piv) == 0) ++piv;
        Int q = floor_div(offset[piv], b(i, piv));
        if (q == 0) continue;
        for (std::size_t c = 0; c < n; ++c) offset[c] -= q * b(i, c);
    }
    auto d = std::make_shared<LatticeData>();
    d->ambient = n;
    d->empty = false;
    d->offset = std::move(offset);
    d->basis = std::move(b);
    std::ostringstream key;
    key << "L" << n << "|o";
    for (const Int& x : d->offset) key << "," << x;
    key << "|B";
    for (std::size_t i = 0; i < d->basis.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) key << "," << d->basis(i, j);
    d->key = key.str();
    return PPSet(d);
}

std::size_t LatticeBackend::rank(const PPSet& p) const { return cast(p).basis.rows(); }
std::vector<Int> LatticeBackend::offset(const PPSet& p) const { return cast(p).offset; }
const IntMatrix& LatticeBackend::basis(const PPSet& p) const { return cast(p).basis; }

PPSet LatticeBackend::full_space(std::size_t n) const {
    return from_offset_basis(std::vector<Int>(n, Int(0)), IntMatrix::identity(n));
}

PPSet LatticeBackend::singleton(const Point& p) const {
    return from_offset_basis(to_int_point(p), IntMatrix(0, p.size()));
}

PPSet LatticeBackend::meet(const PPSet& a, const PPSet& b) const {
    if (a.ambient() != b.ambient()) throw CalcError("meet: ambient mismatch");
    if (a.is_empty() || b.is_empty()) return empty_set(a.ambient());
    const LatticeData& da = cast(a);
    const LatticeData& db = cast(b);
    const std::size_t n = a.ambient();
    IntMatrix stacked(0, n);
    for (std::size_t i = 0; i < da.basis.rows(); ++i) stacked.append_row(da.basis.row(i));
    for (std::size_t i = 0; i < db.basis.rows(); ++i) stacked.append_row(db.basis.row(i));
    std::vector<Int> diff(n);
    for (std::size_t c = 0; c < n; ++c) diff[c] = db.offset[c] - da.offset[c];
    auto w = solve_in_lattice(stacked, diff);
    if (!w) return empty_set(n);
    std::vector<Int> pt = da.offset;
    for (std::size_t i = 0; i < da.basis.rows(); ++i)
        for (std::size_t c = 0; c < n; ++c) pt[c] += (*w)[i] * da.basis(i, c);
    return from_offset_basis(std::move(pt), lattice_intersect(da.basis, db.basis));
}

Card LatticeBackend::cardinality(const PPSet& p) const {
    if (p.is_empty()) return Card::Empty;
    return rank(p) == 0 ? Card::One : Card::Infinite;
}

IndexValue LatticeBackend::index(const PPSet& p, const PPSet& q) const {
    if (p.is_empty() || q.is_empty()) throw CalcError("index: empty input");
    const IntMatrix& l = cast(p).basis;
    IntMatrix inter = lattice_intersect(l, cast(q).basis);
    if (inter.rows() < l.rows()) return IndexValue::infinite();
    const std::size_t r = l.rows();
    if (r == 0) return IndexValue::finite(1);
    IntMatrix c(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        auto w = solve_in_lattice(l, inter.row(i));
        if (!w) throw CalcError("index: intersection escapes the subgroup");
        for (std::size_t j = 0; j < r; ++j) c(i, j) = (*w)[j];
    }
    Int idx = det(c);
    if (idx < 0) idx = -idx;
    if (idx > index_cap_) return IndexValue::too_large();
    return IndexValue::finite(idx);
}

PPSet LatticeBackend::translate(const PPSet& p, const Point& t) const {
    if (p.is_empty()) return p;
    const LatticeData& d = cast(p);
    std::vector<Int> off = d.offset;
    std::vector<Int> ti = to_int_point(t);
    for (std::size_t c = 0; c < off.size(); ++c) off[c] += ti[c];
    return from_offset_basis(std::move(off), d.basis);
}

PPSet LatticeBackend::subgroup_part(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("subgroup_part: empty input");
    return from_offset_basis(std::vector<Int>(p.ambient(), Int(0)), cast(p).basis);
}

std::vector<PPSet> LatticeBackend::coset_decompose(const PPSet& q, const PPSet& h) const {
    if (q.is_empty() || h.is_empty()) throw CalcError("coset_decompose: empty input");
    const LatticeData& dq = cast(q);
    const LatticeData& dh = cast(h);
    const std::size_t r = dq.basis.rows();
    if (dh.basis.rows() != r) throw CalcError("coset_decompose: infinite index");
    if (r == 0) return {q};
    // write the subgroup basis in coordinates of the group basis
    IntMatrix c(r, r);
    for (std::size_t i = 0; i < r; ++i) {
        auto w = solve_in_lattice(dq.basis, dh.basis.row(i));
        if (!w) throw CalcError("coset_decompose: subgroup not inside the group");
        for (std::size_t j = 0; j < r; ++j) c(i, j) = (*w)[j];
    }
    SnfResult s = snf(c);
    Int total = 1;
    for (const Int& d : s.d) total *= d;
    if (total == 0) throw CalcError("coset_decompose: degenerate subgroup");
    if (total < 0) total = -total;
    if (total > index_cap_) throw CalcError("coset_decompose: finite index too large");
    // representatives along the adapted basis v^{-1} * B
    IntMatrix adapted = unimodular_inverse(s.v) * dq.basis;
    std::vector<PPSet> out;
    std::vector<Int> tuple(r, Int(0));
    for (;;) {
        std::vector<Int> off = dq.offset;
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t cc = 0; cc < dq.basis.cols(); ++cc)
                off[cc] += tuple[i] * adapted(i, cc);
        out.push_back(from_offset_basis(std::move(off), dh.basis));
        // odometer over prod of invariant factors
        std::size_t pos = 0;
        while (pos < r) {
            tuple[pos] += 1;
            Int lim = s.d[pos] < 0 ? Int(-s.d[pos]) : s.d[pos];
            if (tuple[pos] < lim) break;
            tuple[pos] = 0;
            ++pos;
        }
        if (pos == r) break;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string LatticeBackend::colour_key(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("colour_key: empty input");
    return nat_key("r", static_cast<long long>(rank(p)));
}

std::string LatticeBackend::band_key(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("band_key: empty input");
    RatMatrix span = span_of(cast(p).basis);
    std::ostringstream key;
    key << "Lb" << p.ambient() << "|";
    for (std::size_t i = 0; i < span.rows(); ++i)
        for (std::size_t j = 0; j < span.cols(); ++j) key << "," << span(i, j);
    return key.str();
}

PPSet LatticeBackend::product(const PPSet& p, const PPSet& q) const {
    if (p.is_empty() || q.is_empty()) return empty_set(p.ambient() + q.ambient());
    const LatticeData& dp = cast(p);
    const LatticeData& dq = cast(q);
    const std::size_t n = p.ambient(), m = q.ambient();
    std::vector<Int> off = dp.offset;
    off.insert(off.end(), dq.offset.begin(), dq.offset.end());
    IntMatrix basis(dp.basis.rows() + dq.basis.rows(), n + m);
    for (std::size_t i = 0; i < dp.basis.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i, j) = dp.basis(i, j);
    for (std::size_t i = 0; i < dq.basis.rows(); ++i)
        for (std::size_t j = 0; j < m; ++j) basis(dp.basis.rows() + i, n + j) = dq.basis(i, j);
    return from_offset_basis(std::move(off), std::move(basis));
}

Point LatticeBackend::pick_point(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("pick_point: empty input");
    return to_rat_point(cast(p).offset);
}

bool LatticeBackend::contains(const PPSet& p, const Point& x) const {
    if (p.is_empty()) return false;
    if (x.size() != p.ambient()) throw CalcError("contains: dimension mismatch");
    for (const Rat& q : x)
        if (denominator(q) != 1) return false;
    const LatticeData& d = cast(p);
    std::vector<Int> diff = to_int_point(x);
    for (std::size_t c = 0; c < diff.size(); ++c) diff[c] -= d.offset[c];
    return in_row_lattice(d.basis, diff);
}

std::vector<Point> LatticeBackend::enumerate_points(const PPSet& p, std::size_t count) const {
    if (p.is_empty()) return {};
    const LatticeData& d = cast(p);
    const std::size_t k = d.basis.rows();
    std::vector<Point> out;
    if (k == 0) {
        out.push_back(to_rat_point(d.offset));
        return out;
    }
    TupleSpiral gen(k);
    while (out.size() < count) {
        auto t = gen.next();
        std::vector<Int> pt = d.offset;
        for (std::size_t i = 0; i < k; ++i) {
            if (t[i] == 0) continue;
            for (std::size_t c = 0; c < p.ambient(); ++c) pt[c] += Int(t[i]) * d.basis(i, c);
        }
        out.push_back(to_rat_point(pt));
    }
    return out;
}

std::optional<Point> LatticeBackend::pick_avoiding_meets(const PPSet& p,
                                                         const std::vector<PPSet>& meets) const {
    const LatticeData& d = cast(p);
    if (meets.empty()) return to_rat_point(d.offset);

    std::vector<PPSet> finite_part, infinite_part;
    for (const PPSet& m : meets) {
        IndexValue idx = index(p, m);
        if (idx.kind == IndexValue::Infinite)
            infinite_part.push_back(m);
        else if (idx.kind == IndexValue::Finite)
            finite_part.push_back(m);
        else
            throw CalcError("pick_point_avoiding: index too large");
    }

    if (!finite_part.empty()) {
        // refine into cosets of the common finite-index subgroup; only the
        // finite-index obstructions can swallow whole cosets
        PPSet common = subgroup_part(finite_part.front());
        for (std::size_t i = 1; i < finite_part.size(); ++i)
            common = meet(common, subgroup_part(finite_part[i]));
        common = meet(common, subgroup_part(p));
        for (const PPSet& coset : coset_decompose(p, common)) {
            bool swallowed = false;
            for (const PPSet& m : finite_part)
                if (is_subset(coset, m)) {
                    swallowed = true;
                    break;
                }
            if (swallowed) continue;
            std::vector<PPSet> rest;
            for (const PPSet& m : infinite_part) {
                PPSet mm = meet(coset, m);
                if (mm.is_empty()) continue;
                rest.push_back(mm);
            }
            auto pt = pick_avoiding_meets(coset, rest);
            if (pt) return pt;
        }
        return std::nullopt;
    }

    // all obstructions have infinite index: a spanning-direction line escapes
    const std::size_t k = d.basis.rows();
    if (k == 0) return std::nullopt;  // a point met properly cannot happen
    std::vector<RatMatrix> spans;
    for (const PPSet& m : infinite_part) spans.push_back(span_of(cast(m).basis));
    std::vector<Int> v;
    TupleSpiral gen(k);
    for (std::size_t guard = 0; guard < 100000; ++guard) {
        auto t = gen.next();
        if (std::all_of(t.begin(), t.end(), [](long x) { return x == 0; })) continue;
        std::vector<Int> cand(p.ambient(), Int(0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < p.ambient(); ++c) cand[c] += Int(t[i]) * d.basis(i, c);
        bool good = true;
        for (const RatMatrix& s : spans)
            if (in_row_space(s, to_rat_point(cand))) {
                good = false;
                break;
            }
        if (good) {
            v = std::move(cand);
            break;
        }
    }
    if (v.empty()) throw CalcError("pick_point_avoiding: no direction found");
    for (std::size_t t = 0; t <= infinite_part.size(); ++t) {
        std::vector<Int> cand = d.offset;
        for (std::size_t c = 0; c < cand.size(); ++c) cand[c] += Int(t) * v[c];
        Point rp = to_rat_point(cand);
        bool clean = true;
        for (const PPSet& m : infinite_part)
            if (contains(m, rp)) {
                clean = false;
                break;
            }
        if (clean) return rp;
    }
    throw CalcError("pick_point_avoiding: line search exhausted");
}

std::optional<Point> LatticeBackend::pick_point_avoiding(const PPSet& p,
                                                         const std::vector<PPSet>& avoid) const {
    if (p.is_empty()) throw CalcError("pick_point_avoiding: empty input");
    std::vector<PPSet> meets;
    for (const PPSet& a : avoid) {
        PPSet m = meet(p, a);
        if (m.is_empty()) continue;
        if (m == p) return std::nullopt;  // covered outright
        meets.push_back(m);
    }
    return pick_avoiding_meets(p, meets);
}

PPSet LatticeBackend::pp_from_presentation(const RatMatrix& r, const RatMatrix& s,
                                           const std::vector<Rat>& c) const {
    const std::size_t t = r.rows(), n = r.cols(), m = s.rows() ? s.cols() : 0;
    if (s.rows() != 0 && s.rows() != t) throw CalcError("pp_from_presentation: row mismatch");
    if (c.size() != t) throw CalcError("pp_from_presentation: constant size mismatch");
    IntMatrix coeffs(t, n + m);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (denominator(r(i, j)) != 1) throw CalcError("lattice presentation must be integral");
            coeffs(i, j) = numerator(r(i, j));
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (denominator(s(i, j)) != 1) throw CalcError("lattice presentation must be integral");
            coeffs(i, n + j) = numerator(s(i, j));
        }
    }
    std::vector<Int> rhs;
    for (const Rat& x : c) {
        if (denominator(x) != 1) throw CalcError("lattice presentation must be integral");
        rhs.push_back(-numerator(x));
    }
    IntMatrix basis_t = coeffs.transposed();  // rows index the unknowns
    auto w = solve_in_lattice(basis_t, rhs);
    if (!w) return empty_set(n);
    IntMatrix ker = int_row_kernel(basis_t);
    std::vector<Int> off((*w).begin(), (*w).begin() + n);
    IntMatrix proj(0, n);
    for (std::size_t i = 0; i < ker.rows(); ++i) {
        auto row = ker.row(i);
        proj.append_row(std::vector<Int>(row.begin(), row.begin() + n));
    }
    return from_offset_basis(std::move(off), std::move(proj));
}

PPSet LatticeBackend::linear_image(const PPSet& p, const RatMatrix& a, const Point& t) const {
    if (p.is_empty()) return empty_set(a.cols());
    const LatticeData& d = cast(p);
    if (a.rows() != p.ambient()) throw CalcError("linear_image: matrix shape mismatch");
    if (rat_rank(a) != a.rows()) throw CalcError("linear_image: map is not injective");
    IntMatrix ai(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (denominator(a(i, j)) != 1) throw CalcError("lattice map must be integral");
            ai(i, j) = numerator(a(i, j));
        }
    auto apply = [&](const std::vector<Int>& x) {
        std::vector<Int> y(ai.cols(), Int(0));
        for (std::size_t i = 0; i < ai.rows(); ++i)
            for (std::size_t j = 0; j < ai.cols(); ++j) y[j] += x[i] * ai(i, j);
        return y;
    };
    std::vector<Int> off = apply(d.offset);
    std::vector<Int> ti = to_int_point(t);
    for (std::size_t c = 0; c < off.size(); ++c) off[c] += ti[c];
    IntMatrix basis(0, ai.cols());
    for (std::size_t i = 0; i < d.basis.rows(); ++i) basis.append_row(apply(d.basis.row(i)));
    return from_offset_basis(std::move(off), std::move(basis));
}

PPSet LatticeBackend::from_descriptor(const nlohmann::json& j) const {
    auto parse_int = [](const nlohmann::json& v) -> Int {
        if (v.is_number_integer()) return Int(v.get<long long>());
        if (v.is_string()) return Int(v.get<std::string>());
        throw CalcError("lattice descriptor: bad integer");
    };
    if (j.contains("exists")) {
        const auto& e = j.at("exists");
        std::size_t n = e.at("n").get<std::size_t>();
        std::size_t m = e.at("m").get<std::size_t>();
        auto parse_matrix = [&](const nlohmann::json& v, std::size_t cols) {
            RatMatrix out(0, cols);
            for (const auto& row : v) {
                std::vector<Rat> r;
                for (const auto& x : row) r.emplace_back(parse_int(x));
                out.append_row(r);
            }
            return out;
        };
        RatMatrix r = parse_matrix(e.at("R"), n);
        RatMatrix s = parse_matrix(e.at("S"), m);
        std::vector<Rat> c;
        for (const auto& x : e.at("c")) c.emplace_back(parse_int(x));
        return pp_from_presentation(r, s, c);
    }
    if (j.value("kind", "") != "lattice") throw CalcError("lattice descriptor: kind mismatch");
    std::size_t n = j.at("n").get<std::size_t>();
    std::vector<Int> off(n, Int(0));
    if (j.contains("offset")) {
        off.clear();
        for (const auto& x : j.at("offset")) off.push_back(parse_int(x));
        if (off.size() != n) throw CalcError("lattice descriptor: offset length");
    }
    IntMatrix basis(0, n);
    if (j.contains("basis"))
        for (const auto& row : j.at("basis")) {
            std::vector<Int> r;
            for (const auto& x : row) r.push_back(parse_int(x));
            if (r.size() != n) throw CalcError("lattice descriptor: basis row length");
            basis.append_row(r);
        }
    return from_offset_basis(std::move(off), std::move(basis));
}

std::vector<IndexRelation> LatticeBackend::invariants_relations() const {
    return {{nat_key("r", 1), nat_key("r", 1), Int(2)},
            {nat_key("r", 1), nat_key("r", 1), Int(3)}};
}

K0Presentation zp_presentation(long p) {
    return K0Presentation("N (p-adic: colour of p^n Zp)", nat_monoid("x"), {nat_key("x", 1)},
                          {{nat_key("x", 1), nat_key("x", 1), Int(p)}});
}

K0Presentation zp_sum_presentation(long p, long k) {
    Int idx = 1;
    for (long i = 0; i < k; ++i) idx *= p;
    return K0Presentation("N (direct sum of " + std::to_string(k) + " copies of Zp)",
                          nat_monoid("x"), {nat_key("x", 1)},
                          {{nat_key("x", 1), nat_key("x", 1), idx}});
}


nlohmann::json LatticeBackend::descriptor(const PPSet& p) const {
    nlohmann::json j;
    j["kind"] = "lattice";
    j["n"] = p.ambient();
    if (p.is_empty()) {
        j["empty"] = true;
        return j;
    }
    nlohmann::json off = nlohmann::json::array();
    for (const Int& x : offset(p)) off.push_back(x.convert_to<long long>());
    j["offset"] = off;
    nlohmann::json b = nlohmann::json::array();
    const IntMatrix& m = basis(p);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(i, c).convert_to<long long>());
        b.push_back(row);
    }
    j["basis"] = b;
    return j;
}

}  // namespace modk0

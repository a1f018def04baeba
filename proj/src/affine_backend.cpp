#include "modk0/affine_backend.hpp"

#include <algorithm>
#include <sstream>

namespace modk0 {

namespace {

struct AffineData final : PPSetData {
    Point base;
    RatMatrix basis;  // rref rows
};

const AffineData& cast(const PPSet& p) {
    auto* d = dynamic_cast<const AffineData*>(&p.data());
    if (!d) throw CalcError("affine backend: foreign pp-set");
    return *d;
}

std::string rat_str(const Rat& q) {
    std::ostringstream os;
    os << q;
    return os.str();
}

// deterministic integer sequence 0, 1, -1, 2, -2, ...
long spiral(std::size_t idx) {
    if (idx == 0) return 0;
    long half = static_cast<long>((idx + 1) / 2);
    return idx % 2 == 1 ? half : -half;
}

// enumerate k-tuples of integers level by level (max |entry| = level)
class TupleSpiral {
public:
    explicit TupleSpiral(std::size_t k) : k_(k) {}

    std::vector<long> next() {
        for (;;) {
            if (k_ == 0) {
                ++level_;  // only the empty tuple exists; keep returning it
                return {};
            }
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
            if (static_cast<std::size_t>(maxabs) == level_) return t;  // new at this level
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

}  // namespace

PPSet AffineBackend::empty_set(std::size_t n) const {
    auto d = std::make_shared<AffineData>();
    d->ambient = n;
    d->empty = true;
    d->key = "A" + std::to_string(n) + "|empty";
    return PPSet(d);
}

PPSet AffineBackend::from_point_basis(Point base, RatMatrix basis) const {
    const std::size_t n = base.size();
    if (basis.cols() != n && basis.rows() > 0)
        throw CalcError("affine set: basis ambient mismatch");
    RatMatrix b = rref(basis.rows() ? basis : RatMatrix(0, n));
    // zero the basepoint's pivot coordinates
    for (std::size_t i = 0; i < b.rows(); ++i) {
        std::size_t piv = 0;
        while (piv < n && b(i, piv) == 0) ++piv;
        Rat f = base[piv];
        if (f == 0) continue;
        for (std::size_t c = 0; c < n; ++c) base[c] -= f * b(i, c);
    }
    auto d = std::make_shared<AffineData>();
    d->ambient = n;
    d->empty = false;
    d->base = std::move(base);
    d->basis = std::move(b);
    std::ostringstream key;
    key << "A" << n << "|p";
    for (const Rat& x : d->base) key << "," << rat_str(x);
    key << "|B";
    for (std::size_t i = 0; i < d->basis.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) key << "," << rat_str(d->basis(i, j));
    d->key = key.str();
    return PPSet(d);
}

PPSet AffineBackend::from_equations(const RatMatrix& lhs, const std::vector<Rat>& c) const {
    std::vector<Rat> rhs;
    for (const Rat& x : c) rhs.push_back(-x);
    auto sol = solve_rational(lhs, rhs);
    if (!sol) return empty_set(lhs.cols());
    return from_point_basis(sol->particular, sol->kernel);
}

std::size_t AffineBackend::dim(const PPSet& p) const { return cast(p).basis.rows(); }
const Point& AffineBackend::basepoint(const PPSet& p) const { return cast(p).base; }
const RatMatrix& AffineBackend::direction_basis(const PPSet& p) const { return cast(p).basis; }

PPSet AffineBackend::full_space(std::size_t n) const {
    return from_point_basis(Point(n, Rat(0)), RatMatrix::identity(n));
}

PPSet AffineBackend::singleton(const Point& p) const {
    return from_point_basis(p, RatMatrix(0, p.size()));
}

PPSet AffineBackend::meet(const PPSet& a, const PPSet& b) const {
    if (a.ambient() != b.ambient()) throw CalcError("meet: ambient mismatch");
    if (a.is_empty() || b.is_empty()) return empty_set(a.ambient());
    const AffineData& da = cast(a);
    const AffineData& db = cast(b);
    const std::size_t n = a.ambient();
    const std::size_t ru = da.basis.rows(), rw = db.basis.rows();
    RatMatrix sys(n, ru + rw);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < ru; ++i) sys(c, i) = da.basis(i, c);
        for (std::size_t j = 0; j < rw; ++j) sys(c, ru + j) = -db.basis(j, c);
    }
    auto sol = solve_rational(sys, point_sub(db.base, da.base));
    if (!sol) return empty_set(n);
    Point pt = da.base;
    for (std::size_t i = 0; i < ru; ++i)
        for (std::size_t c = 0; c < n; ++c) pt[c] += sol->particular[i] * da.basis(i, c);
    return from_point_basis(pt, row_space_intersect(da.basis, db.basis));
}

Card AffineBackend::cardinality(const PPSet& p) const {
    if (p.is_empty()) return Card::Empty;
    return dim(p) == 0 ? Card::One : Card::Infinite;
}

IndexValue AffineBackend::index(const PPSet& p, const PPSet& q) const {
    if (p.is_empty() || q.is_empty()) throw CalcError("index: empty input");
    const AffineData& dp = cast(p);
    const AffineData& dq = cast(q);
    for (std::size_t i = 0; i < dp.basis.rows(); ++i)
        if (!in_row_space(dq.basis, dp.basis.row(i))) return IndexValue::infinite();
    return IndexValue::finite(1);
}

PPSet AffineBackend::translate(const PPSet& p, const Point& t) const {
    if (p.is_empty()) return p;
    const AffineData& d = cast(p);
    return from_point_basis(point_add(d.base, t), d.basis);
}

PPSet AffineBackend::subgroup_part(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("subgroup_part: empty input");
    const AffineData& d = cast(p);
    return from_point_basis(Point(p.ambient(), Rat(0)), d.basis);
}

std::vector<PPSet> AffineBackend::coset_decompose(const PPSet& q, const PPSet& h) const {
    if (q.is_empty() || h.is_empty()) throw CalcError("coset_decompose: empty input");
    IndexValue idx = index(q, h);
    if (!idx.is_one()) throw CalcError("coset_decompose: infinite index");
    return {q};
}

std::string AffineBackend::colour_key(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("colour_key: empty input");
    return nat_key("d", static_cast<long long>(dim(p)));
}

std::string AffineBackend::band_key(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("band_key: empty input");
    const AffineData& d = cast(p);
    std::ostringstream key;
    key << "Ab" << p.ambient() << "|";
    for (std::size_t i = 0; i < d.basis.rows(); ++i)
        for (std::size_t j = 0; j < d.basis.cols(); ++j) key << "," << rat_str(d.basis(i, j));
    return key.str();
}

PPSet AffineBackend::product(const PPSet& p, const PPSet& q) const {
    if (p.is_empty() || q.is_empty()) return empty_set(p.ambient() + q.ambient());
    const AffineData& dp = cast(p);
    const AffineData& dq = cast(q);
    const std::size_t n = p.ambient(), m = q.ambient();
    Point base = dp.base;
    base.insert(base.end(), dq.base.begin(), dq.base.end());
    RatMatrix basis(dp.basis.rows() + dq.basis.rows(), n + m);
    for (std::size_t i = 0; i < dp.basis.rows(); ++i)
        for (std::size_t j = 0; j < n; ++j) basis(i, j) = dp.basis(i, j);
    for (std::size_t i = 0; i < dq.basis.rows(); ++i)
        for (std::size_t j = 0; j < m; ++j) basis(dp.basis.rows() + i, n + j) = dq.basis(i, j);
    return from_point_basis(std::move(base), std::move(basis));
}

Point AffineBackend::pick_point(const PPSet& p) const {
    if (p.is_empty()) throw CalcError("pick_point: empty input");
    return cast(p).base;
}

bool AffineBackend::contains(const PPSet& p, const Point& x) const {
    if (p.is_empty()) return false;
    const AffineData& d = cast(p);
    if (x.size() != p.ambient()) throw CalcError("contains: dimension mismatch");
    return in_row_space(d.basis, point_sub(x, d.base));
}

std::vector<Point> AffineBackend::enumerate_points(const PPSet& p, std::size_t count) const {
    if (p.is_empty()) return {};
    const AffineData& d = cast(p);
    const std::size_t k = d.basis.rows();
    std::vector<Point> out;
    if (k == 0) {
        out.push_back(d.base);
        return out;
    }
    TupleSpiral spiral_gen(k);
    while (out.size() < count) {
        auto t = spiral_gen.next();
        Point pt = d.base;
        for (std::size_t i = 0; i < k; ++i) {
            if (t[i] == 0) continue;
            for (std::size_t c = 0; c < p.ambient(); ++c)
                pt[c] += Rat(t[i]) * d.basis(i, c);
        }
        out.push_back(std::move(pt));
    }
    return out;
}

std::optional<Point> AffineBackend::pick_point_avoiding(const PPSet& p,
                                                        const std::vector<PPSet>& avoid) const {
    if (p.is_empty()) throw CalcError("pick_point_avoiding: empty input");
    const AffineData& d = cast(p);
    std::vector<PPSet> meets;
    for (const PPSet& a : avoid) {
        PPSet m = meet(p, a);
        if (m.is_empty()) continue;
        if (m == p)
            throw CalcError("pick_point_avoiding: an avoid set contains the whole set");
        meets.push_back(m);
    }
    if (meets.empty()) return d.base;
    // a direction inside the set but along none of the obstructions
    const std::size_t k = d.basis.rows();
    Point v;
    TupleSpiral spiral_gen(k);
    for (std::size_t guard = 0; guard < 100000; ++guard) {
        auto t = spiral_gen.next();
        if (std::all_of(t.begin(), t.end(), [](long x) { return x == 0; })) continue;
        Point cand(p.ambient(), Rat(0));
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t c = 0; c < p.ambient(); ++c)
                cand[c] += Rat(t[i]) * d.basis(i, c);
        bool good = true;
        for (const PPSet& m : meets)
            if (in_row_space(cast(m).basis, cand)) {
                good = false;
                break;
            }
        if (good) {
            v = std::move(cand);
            break;
        }
    }
    if (v.empty()) throw CalcError("pick_point_avoiding: no direction found");
    // at most one hit per obstruction along this line
    for (std::size_t t = 0; t <= meets.size(); ++t) {
        Point cand = d.base;
        for (std::size_t c = 0; c < cand.size(); ++c) cand[c] += Rat(static_cast<long>(t)) * v[c];
        bool clean = true;
        for (const PPSet& m : meets)
            if (contains(m, cand)) {
                clean = false;
                break;
            }
        if (clean) return cand;
    }
    throw CalcError("pick_point_avoiding: line search exhausted");
}

PPSet AffineBackend::pp_from_presentation(const RatMatrix& r, const RatMatrix& s,
                                          const std::vector<Rat>& c) const {
    const std::size_t t = r.rows(), n = r.cols(), m = s.rows() ? s.cols() : 0;
    if (s.rows() != 0 && s.rows() != t) throw CalcError("pp_from_presentation: row mismatch");
    if (c.size() != t) throw CalcError("pp_from_presentation: constant size mismatch");
    RatMatrix aug(t, n + m);
    for (std::size_t i = 0; i < t; ++i) {
        for (std::size_t j = 0; j < n; ++j) aug(i, j) = r(i, j);
        for (std::size_t j = 0; j < m; ++j) aug(i, n + j) = s(i, j);
    }
    std::vector<Rat> rhs;
    for (const Rat& x : c) rhs.push_back(-x);
    auto sol = solve_rational(aug, rhs);
    if (!sol) return empty_set(n);
    Point base(sol->particular.begin(), sol->particular.begin() + n);
    RatMatrix basis(0, n);
    for (std::size_t i = 0; i < sol->kernel.rows(); ++i) {
        auto row = sol->kernel.row(i);
        basis.append_row(std::vector<Rat>(row.begin(), row.begin() + n));
    }
    return from_point_basis(std::move(base), std::move(basis));
}

PPSet AffineBackend::linear_image(const PPSet& p, const RatMatrix& a, const Point& t) const {
    if (p.is_empty()) return empty_set(a.cols());
    const AffineData& d = cast(p);
    if (a.rows() != p.ambient()) throw CalcError("linear_image: matrix shape mismatch");
    if (rat_rank(a) != a.rows()) throw CalcError("linear_image: map is not injective");
    auto apply = [&](const Point& x) {
        Point y(a.cols(), Rat(0));
        for (std::size_t i = 0; i < a.rows(); ++i)
            for (std::size_t j = 0; j < a.cols(); ++j) y[j] += x[i] * a(i, j);
        return y;
    };
    Point base = point_add(apply(d.base), t);
    RatMatrix basis(0, a.cols());
    for (std::size_t i = 0; i < d.basis.rows(); ++i) basis.append_row(apply(d.basis.row(i)));
    return from_point_basis(std::move(base), std::move(basis));
}

PPSet AffineBackend::from_descriptor(const nlohmann::json& j) const {
    auto parse_rat = [](const nlohmann::json& v) -> Rat {
        if (v.is_number_integer()) return Rat(v.get<long long>());
        if (v.is_string()) {
            std::string s = v.get<std::string>();
            auto slash = s.find('/');
            if (slash == std::string::npos) return Rat(Int(s));
            return Rat(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        }
        throw CalcError("affine descriptor: bad number");
    };
    auto parse_matrix = [&](const nlohmann::json& v, std::size_t cols) {
        RatMatrix m(0, cols);
        for (const auto& row : v) {
            std::vector<Rat> r;
            for (const auto& x : row) r.push_back(parse_rat(x));
            m.append_row(r);
        }
        return m;
    };
    if (j.contains("exists")) {
        const auto& e = j.at("exists");
        std::size_t n = e.at("n").get<std::size_t>();
        std::size_t m = e.at("m").get<std::size_t>();
        RatMatrix r = parse_matrix(e.at("R"), n);
        RatMatrix s = parse_matrix(e.at("S"), m);
        std::vector<Rat> c;
        for (const auto& x : e.at("c")) c.push_back(parse_rat(x));
        return pp_from_presentation(r, s, c);
    }
    if (j.value("kind", "") != "affine") throw CalcError("affine descriptor: kind mismatch");
    std::size_t n = j.at("n").get<std::size_t>();
    if (j.contains("point")) {
        Point base;
        for (const auto& x : j.at("point")) base.push_back(parse_rat(x));
        RatMatrix basis(0, n);
        if (j.contains("basis")) basis = parse_matrix(j.at("basis"), n);
        return from_point_basis(std::move(base), std::move(basis));
    }
    // rows [a1..an, c] encode a1 x1 + ... + an xn + c = 0
    RatMatrix lhs(0, n);
    std::vector<Rat> c;
    if (j.contains("eq")) {
        for (const auto& row : j.at("eq")) {
            std::vector<Rat> r;
            for (const auto& x : row) r.push_back(parse_rat(x));
            if (r.size() != n + 1) throw CalcError("affine descriptor: equation length");
            c.push_back(r.back());
            r.pop_back();
            lhs.append_row(r);
        }
    }
    return from_equations(lhs, c);
}


nlohmann::json AffineBackend::descriptor(const PPSet& p) const {
    nlohmann::json j;
    j["kind"] = "affine";
    j["n"] = p.ambient();
    if (p.is_empty()) {
        j["empty"] = true;
        return j;
    }
    const auto rat_json = [](const Rat& q) -> nlohmann::json {
        if (denominator(q) == 1) return nlohmann::json(numerator(q).convert_to<long long>());
        std::ostringstream os;
        os << q;
        return nlohmann::json(os.str());
    };
    nlohmann::json point = nlohmann::json::array();
    for (const Rat& x : basepoint(p)) point.push_back(rat_json(x));
    j["point"] = point;
    nlohmann::json basis = nlohmann::json::array();
    const RatMatrix& b = direction_basis(p);
    for (std::size_t i = 0; i < b.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t c = 0; c < b.cols(); ++c) row.push_back(rat_json(b(i, c)));
        basis.push_back(row);
    }
    j["basis"] = basis;
    return j;
}

}  // namespace modk0

#include "modk0/ppcalc.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <set>
#include <sstream>

namespace modk0 {

Point point_add(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw CalcError("point arithmetic: dimension mismatch");
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Point point_sub(const Point& a, const Point& b) {
    if (a.size() != b.size()) throw CalcError("point arithmetic: dimension mismatch");
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Point point_neg(const Point& a) {
    Point r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = -a[i];
    return r;
}

std::string point_to_string(const Point& p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
    os << ")";
    return os.str();
}

bool TheoryBackend::is_subset(const PPSet& a, const PPSet& b) const {
    if (a.is_empty()) return true;
    if (b.is_empty()) return false;
    return meet(a, b) == a;
}

bool TheoryBackend::is_strict_superset(const PPSet& a, const PPSet& b) const {
    return is_subset(b, a) && a != b;
}

std::string Antichain::to_string() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < elements.size(); ++i) os << (i ? ", " : "") << elements[i].key();
    os << "}";
    return os.str();
}

// ---------------------------------------------------------------------------
// towers and chains

PrecChain tower_chain(const Tower& t) {
    PrecChain out;
    const std::size_t l = t.cells.size();
    for (std::size_t j = 0; j < l; ++j) {
        out.chain.push_back(t.cells[j].positive);
        if (j + 1 < l || !t.cells[j].negative.empty())
            out.chain.push_back(t.cells[j].negative);
    }
    return out;
}

Tower chain_tower(const PrecChain& c) {
    Tower out;
    const std::size_t k = c.chain.size();
    for (std::size_t j = 0; 2 * j < k; ++j) {
        Cell cell;
        cell.positive = c.chain[2 * j];
        if (2 * j + 1 < k) cell.negative = c.chain[2 * j + 1];
        out.cells.push_back(std::move(cell));
    }
    return out;
}

std::size_t ConnectivityDigraph::weak_components() const {
    std::vector<std::size_t> parent(nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (auto [i, j] : arcs) parent[find(i)] = find(j);
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < nodes.size(); ++i) roots.insert(find(i));
    return roots.size();
}

// ---------------------------------------------------------------------------
// expressions

Expr Expr::atom(std::string name) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->op = Op::Atom;
    n->name = std::move(name);
    e.n_ = n;
    return e;
}

Expr Expr::literal(std::vector<Point> points) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->op = Op::Literal;
    n->points = std::move(points);
    e.n_ = n;
    return e;
}

Expr Expr::combine(Op op, Expr lhs, Expr rhs) {
    Expr e;
    auto n = std::make_shared<Node>();
    n->op = op;
    n->lhs = std::make_shared<Expr>(std::move(lhs));
    n->rhs = std::make_shared<Expr>(std::move(rhs));
    e.n_ = n;
    return e;
}

std::string Expr::to_string() const {
    switch (op()) {
        case Op::Atom:
            return name();
        case Op::Literal: {
            std::ostringstream os;
            os << "{";
            for (std::size_t i = 0; i < points().size(); ++i) {
                if (i) os << ",";
                const Point& p = points()[i];
                if (p.size() == 1)
                    os << p[0];
                else {
                    os << "(";
                    for (std::size_t j = 0; j < p.size(); ++j) os << (j ? "," : "") << p[j];
                    os << ")";
                }
            }
            os << "}";
            return os.str();
        }
        default: {
            const char* sym = op() == Op::Union      ? "|"
                              : op() == Op::Inter    ? "&"
                              : op() == Op::Diff     ? "\\"
                              : op() == Op::Disjoint ? "+"
                                                     : "*";
            return "(" + lhs().to_string() + " " + sym + " " + rhs().to_string() + ")";
        }
    }
}

namespace {

struct Lexer {
    const std::string& s;
    std::size_t i = 0;
    int line = 1, col = 1;

    void advance() {
        if (i < s.size()) {
            if (s[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++i;
        }
    }
    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) advance();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }
};

Rat parse_number(Lexer& lx) {
    lx.skip_ws();
    std::string tok;
    if (lx.i < lx.s.size() && (lx.s[lx.i] == '-' || lx.s[lx.i] == '+')) {
        tok += lx.s[lx.i];
        lx.advance();
    }
    bool digits = false;
    while (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i]))) {
        tok += lx.s[lx.i];
        lx.advance();
        digits = true;
    }
    if (!digits) lx.fail("expected a number");
    Int num(tok);
    Int den(1);
    if (lx.i < lx.s.size() && lx.s[lx.i] == '/') {
        lx.advance();
        std::string dtok;
        while (lx.i < lx.s.size() && std::isdigit(static_cast<unsigned char>(lx.s[lx.i]))) {
            dtok += lx.s[lx.i];
            lx.advance();
        }
        if (dtok.empty()) lx.fail("expected a denominator");
        den = Int(dtok);
        if (den == 0) lx.fail("zero denominator");
    }
    return Rat(num, den);
}

Point parse_point(Lexer& lx) {
    if (lx.eat('(')) {
        Point p;
        p.push_back(parse_number(lx));
        while (lx.eat(',')) p.push_back(parse_number(lx));
        if (!lx.eat(')')) lx.fail("expected ')' in point");
        return p;
    }
    return Point{parse_number(lx)};
}

Expr parse_expr_impl(Lexer& lx);

Expr parse_primary(Lexer& lx) {
    char c = lx.peek();
    if (c == '(') {
        lx.advance();
        Expr e = parse_expr_impl(lx);
        if (!lx.eat(')')) lx.fail("expected ')'");
        return e;
    }
    if (c == '{') {
        lx.advance();
        std::vector<Point> pts;
        if (lx.peek() != '}') {
            pts.push_back(parse_point(lx));
            while (lx.eat(',')) pts.push_back(parse_point(lx));
        }
        if (!lx.eat('}')) lx.fail("expected '}'");
        std::size_t dim = pts.empty() ? 0 : pts.front().size();
        for (const Point& p : pts)
            if (p.size() != dim) lx.fail("mixed point dimensions in literal");
        return Expr::literal(std::move(pts));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string name;
        while (lx.i < lx.s.size() &&
               (std::isalnum(static_cast<unsigned char>(lx.s[lx.i])) || lx.s[lx.i] == '_')) {
            name += lx.s[lx.i];
            lx.advance();
        }
        return Expr::atom(std::move(name));
    }
    lx.fail(std::string("unexpected character '") + c + "'");
}

Expr parse_factor(Lexer& lx) {
    Expr e = parse_primary(lx);
    while (lx.peek() == '*') {
        lx.advance();
        e = Expr::combine(Expr::Op::Product, std::move(e), parse_primary(lx));
    }
    return e;
}

Expr parse_term(Lexer& lx) {
    Expr e = parse_factor(lx);
    for (;;) {
        char c = lx.peek();
        if (c == '&') {
            lx.advance();
            e = Expr::combine(Expr::Op::Inter, std::move(e), parse_factor(lx));
        } else if (c == '\\') {
            lx.advance();
            e = Expr::combine(Expr::Op::Diff, std::move(e), parse_factor(lx));
        } else {
            break;
        }
    }
    return e;
}

Expr parse_expr_impl(Lexer& lx) {
    Expr e = parse_term(lx);
    for (;;) {
        char c = lx.peek();
        if (c == '|') {
            lx.advance();
            e = Expr::combine(Expr::Op::Union, std::move(e), parse_term(lx));
        } else if (c == '+') {
            lx.advance();
            e = Expr::combine(Expr::Op::Disjoint, std::move(e), parse_term(lx));
        } else {
            break;
        }
    }
    return e;
}

}  // namespace

Expr parse_expr(const std::string& text) {
    Lexer lx{text};
    Expr e = parse_expr_impl(lx);
    if (lx.peek() != '\0') lx.fail("trailing input");
    return e;
}

// ---------------------------------------------------------------------------
// the calculus

Calculus::Calculus(const TheoryBackend& backend, std::map<std::string, PPSet> sets,
                   CalcOptions opt)
    : be_(backend), sets_(std::move(sets)), opt_(opt) {}

void Calculus::require_t_aleph0(const char* op) const {
    if (!be_.is_T_aleph0())
        throw CalcError(std::string(op) + ": unsupported backend (requires T = T^aleph0)");
}

std::size_t Calculus::ambient(const Expr& e) const {
    switch (e.op()) {
        case Expr::Op::Atom: {
            auto it = sets_.find(e.name());
            if (it == sets_.end()) throw CalcError("unknown set name: " + e.name());
            return it->second.ambient();
        }
        case Expr::Op::Literal:
            if (e.points().empty())
                throw CalcError("empty literal has no ambient; use a named empty set");
            return e.points().front().size();
        case Expr::Op::Product:
            return ambient(e.lhs()) + ambient(e.rhs());
        default: {
            std::size_t l = ambient(e.lhs()), r = ambient(e.rhs());
            if (l != r) throw CalcError("ambient power mismatch in expression");
            return l;
        }
    }
}

bool Calculus::point_in(const Expr& e, const Point& p) const {
    switch (e.op()) {
        case Expr::Op::Atom:
            return be_.contains(sets_.at(e.name()), p);
        case Expr::Op::Literal:
            return std::find(e.points().begin(), e.points().end(), p) != e.points().end();
        case Expr::Op::Union:
        case Expr::Op::Disjoint:
            return point_in(e.lhs(), p) || point_in(e.rhs(), p);
        case Expr::Op::Inter:
            return point_in(e.lhs(), p) && point_in(e.rhs(), p);
        case Expr::Op::Diff:
            return point_in(e.lhs(), p) && !point_in(e.rhs(), p);
        case Expr::Op::Product: {
            std::size_t nl = ambient(e.lhs());
            Point a(p.begin(), p.begin() + nl);
            Point b(p.begin() + nl, p.end());
            return point_in(e.lhs(), a) && point_in(e.rhs(), b);
        }
    }
    throw CalcError("point_in: bad expression");
}

std::vector<PPSet> Calculus::atoms(const Expr& e) const {
    std::vector<PPSet> out;
    switch (e.op()) {
        case Expr::Op::Atom:
            out.push_back(sets_.at(e.name()));
            break;
        case Expr::Op::Literal:
            for (const Point& p : e.points()) out.push_back(be_.singleton(p));
            break;
        case Expr::Op::Product: {
            std::size_t nl = ambient(e.lhs()), nr = ambient(e.rhs());
            for (const PPSet& a : atoms(e.lhs())) out.push_back(be_.product(a, be_.full_space(nr)));
            for (const PPSet& b : atoms(e.rhs())) out.push_back(be_.product(be_.full_space(nl), b));
            break;
        }
        default: {
            out = atoms(e.lhs());
            auto r = atoms(e.rhs());
            out.insert(out.end(), r.begin(), r.end());
            break;
        }
    }
    return out;
}

Antichain Calculus::canonical_antichain(std::vector<PPSet> sets) const {
    std::vector<PPSet> nonempty;
    for (PPSet& p : sets)
        if (p.valid() && !p.is_empty()) nonempty.push_back(std::move(p));
    for (std::size_t i = 1; i < nonempty.size(); ++i)
        if (nonempty[i].ambient() != nonempty[0].ambient())
            throw CalcError("canonical_antichain: mixed ambient powers");
    std::sort(nonempty.begin(), nonempty.end());
    nonempty.erase(std::unique(nonempty.begin(), nonempty.end()), nonempty.end());
    Antichain out;
    for (const PPSet& p : nonempty) {
        bool maximal = true;
        for (const PPSet& q : nonempty)
            if (p != q && be_.is_subset(p, q)) {
                maximal = false;
                break;
            }
        if (maximal) out.elements.push_back(p);
    }
    return out;
}

std::vector<PPSet> Calculus::meet_closure(std::vector<PPSet> sets) const {
    std::map<std::string, PPSet> fam;
    for (PPSet& p : sets)
        if (p.valid() && !p.is_empty()) fam.emplace(p.key(), std::move(p));
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<PPSet> current;
        for (auto& [k, v] : fam) current.push_back(v);
        for (std::size_t i = 0; i < current.size(); ++i)
            for (std::size_t j = i + 1; j < current.size(); ++j) {
                PPSet m = be_.meet(current[i], current[j]);
                if (m.is_empty()) continue;
                if (fam.emplace(m.key(), m).second) changed = true;
                if (fam.size() > opt_.nest_cap) throw CalcError("nest cap exceeded");
            }
    }
    std::vector<PPSet> out;
    for (auto& [k, v] : fam) out.push_back(v);
    return out;
}

namespace {

// Rewrites every band of the pool as cosets of the band-wide common subgroup.
// Returns true when anything changed.
bool band_discretize(const TheoryBackend& be, std::map<std::string, PPSet>& fam) {
    std::map<std::string, std::vector<PPSet>> bands;
    for (auto& [k, v] : fam) bands[be.band_key(v)].push_back(v);
    bool changed = false;
    for (auto& [bk, members] : bands) {
        PPSet common = be.subgroup_part(members.front());
        for (std::size_t i = 1; i < members.size(); ++i)
            common = be.meet(common, be.subgroup_part(members[i]));
        for (const PPSet& p : members) {
            if (be.subgroup_part(p) == common) continue;
            fam.erase(p.key());
            for (const PPSet& coset : be.coset_decompose(p, common)) fam.emplace(coset.key(), coset);
            changed = true;
        }
    }
    return changed;
}

}  // namespace

std::vector<std::vector<PPSet>> Calculus::discrete_form(
    const std::vector<std::vector<PPSet>>& family) const {
    // common subgroup per band across the whole family
    std::map<std::string, PPSet> common;
    for (const auto& member : family)
        for (const PPSet& p : member) {
            if (p.is_empty()) continue;
            std::string bk = be_.band_key(p);
            PPSet sub = be_.subgroup_part(p);
            auto [it, inserted] = common.emplace(bk, sub);
            if (!inserted) it->second = be_.meet(it->second, sub);
        }
    std::vector<std::vector<PPSet>> out;
    for (const auto& member : family) {
        std::map<std::string, PPSet> rewritten;
        for (const PPSet& p : member) {
            if (p.is_empty()) continue;
            const PPSet& c = common.at(be_.band_key(p));
            if (be_.subgroup_part(p) == c)
                rewritten.emplace(p.key(), p);
            else
                for (const PPSet& coset : be_.coset_decompose(p, c))
                    rewritten.emplace(coset.key(), coset);
        }
        std::vector<PPSet> m;
        for (auto& [k, v] : rewritten) m.push_back(v);
        out.push_back(std::move(m));
    }
    return out;
}

Nest Calculus::build_nest(const std::vector<PPSet>& sets) const {
    Nest nest;
    std::map<std::string, PPSet> fam;
    for (const PPSet& p : sets)
        if (p.valid() && !p.is_empty()) fam.emplace(p.key(), p);
    for (;;) {
        std::vector<PPSet> flat;
        for (auto& [k, v] : fam) flat.push_back(v);
        flat = meet_closure(std::move(flat));
        fam.clear();
        for (PPSet& p : flat) fam.emplace(p.key(), std::move(p));
        if (!band_discretize(be_, fam)) break;
        if (fam.size() > opt_.nest_cap) throw CalcError("nest cap exceeded");
    }
    for (auto& [k, v] : fam) nest.elements.push_back(v);
    return nest;
}

void Calculus::mark_nest(Nest& nest, const Expr& d) const {
    nest.positive.clear();
    nest.negative.clear();
    const auto& els = nest.elements;
    for (std::size_t i = 0; i < els.size(); ++i) {
        std::vector<PPSet> proper;
        for (std::size_t j = 0; j < els.size(); ++j)
            if (i != j && be_.is_subset(els[j], els[i])) proper.push_back(els[j]);
        Antichain avoid = canonical_antichain(proper);
        auto pt = be_.pick_point_avoiding(els[i], avoid.elements);
        if (pt && point_in(d, *pt))
            nest.positive.push_back(els[i]);
        else
            nest.negative.push_back(els[i]);
    }
}

Calculus::Analysis Calculus::analyze(const Expr& d) const { return analyze_with({}, d); }

Calculus::Analysis Calculus::analyze_with(std::vector<PPSet> extra, const Expr& d) const {
    check_disjoint_nodes(d, nullptr);
    return analyze_bare(std::move(extra), d);
}

Calculus::Analysis Calculus::analyze_bare(std::vector<PPSet> extra, const Expr& d) const {
    std::vector<PPSet> seed = atoms(d);
    seed.insert(seed.end(), extra.begin(), extra.end());
    Analysis a;
    a.nest = build_nest(seed).elements;

    const std::size_t n = a.nest.size();
    std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) below[i][j] = be_.is_subset(a.nest[i], a.nest[j]);

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<PPSet> proper;
        for (std::size_t j = 0; j < n; ++j)
            if (below[j][i]) proper.push_back(a.nest[j]);
        Antichain neg = canonical_antichain(proper);
        auto pt = be_.pick_point_avoiding(a.nest[i], neg.elements);
        if (!pt) continue;  // empty core
        a.core_point[a.nest[i].key()] = *pt;
        if (point_in(d, *pt)) {
            a.positive.push_back(a.nest[i]);
            a.blocks.push_back(Block{a.nest[i], std::move(neg)});
        }
    }
    return a;
}

void Calculus::check_disjoint_nodes(const Expr& d, const Analysis*) const {
    switch (d.op()) {
        case Expr::Op::Atom:
        case Expr::Op::Literal:
            return;
        case Expr::Op::Disjoint: {
            Analysis meet = analyze_bare({}, Expr::combine(Expr::Op::Inter, d.lhs(), d.rhs()));
            if (!meet.blocks.empty())
                throw CalcError("disjoint union operands overlap: witness " +
                                point_to_string(meet.core_point.at(
                                    meet.blocks.front().bar.key())));
            check_disjoint_nodes(d.lhs(), nullptr);
            check_disjoint_nodes(d.rhs(), nullptr);
            return;
        }
        default:
            check_disjoint_nodes(d.lhs(), nullptr);
            check_disjoint_nodes(d.rhs(), nullptr);
    }
}

std::vector<Block> Calculus::partition_definable(const Expr& d) const {
    return analyze(d).blocks;
}

// DFS over subsets whose meet strictly contains p; each face is counted once.
long long Calculus::chi_local(const std::vector<PPSet>& vertices, const PPSet& p,
                              std::vector<Face>* faces_out) const {
    long long chi = 0;
    std::vector<std::size_t> stack;
    std::function<void(std::size_t, const PPSet&)> rec = [&](std::size_t start,
                                                             const PPSet& meet_so_far) {
        for (std::size_t j = start; j < vertices.size(); ++j) {
            PPSet m = stack.empty() ? vertices[j] : be_.meet(meet_so_far, vertices[j]);
            if (m.is_empty() || m == p) continue;  // not a strict superset of p
            stack.push_back(j);
            chi += (stack.size() % 2 == 1) ? 1 : -1;
            if (faces_out) {
                Face f;
                for (std::size_t idx : stack) f.push_back(vertices[idx].key());
                faces_out->push_back(f);
            }
            rec(j + 1, m);
            stack.pop_back();
        }
    };
    rec(0, p);
    return chi;
}

// Outside T = T^aleph0, kappa is meaningful only for discrete compatible
// families: same-band members must share one subgroup part.
void Calculus::check_compatible(const std::vector<PPSet>& alpha, const PPSet& p) const {
    if (be_.is_T_aleph0()) return;
    std::map<std::string, std::string> band_subgroup;
    auto visit = [&](const PPSet& s) {
        if (s.is_empty()) return;
        auto [it, inserted] = band_subgroup.emplace(be_.band_key(s), be_.subgroup_part(s).key());
        if (!inserted && it->second != be_.subgroup_part(s).key())
            throw CalcError("incompatible family: band holds two different subgroups");
    };
    visit(p);
    for (const PPSet& s : alpha) visit(s);
}

SimplicialComplex Calculus::local_complex(const std::vector<PPSet>& alpha,
                                          const PPSet& p) const {
    check_compatible(alpha, p);
    std::vector<PPSet> vertices;
    for (const PPSet& a : alpha)
        if (!a.is_empty() && a != p && be_.is_subset(p, a)) vertices.push_back(a);
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    std::vector<Face> faces;
    chi_local(vertices, p, &faces);
    return SimplicialComplex::from_faces(faces);
}

long long Calculus::local_characteristic(const std::vector<PPSet>& alpha,
                                         const PPSet& p) const {
    check_compatible(alpha, p);
    std::vector<PPSet> vertices;
    bool delta = false;
    for (const PPSet& a : alpha) {
        if (a.is_empty()) continue;
        if (be_.is_subset(p, a)) {
            delta = true;
            if (a != p) vertices.push_back(a);
        }
    }
    std::sort(vertices.begin(), vertices.end());
    vertices.erase(std::unique(vertices.begin(), vertices.end()), vertices.end());
    return chi_local(vertices, p, nullptr) - (delta ? 1 : 0);
}

long long Calculus::local_characteristic(const Block& b, const PPSet& p) const {
    return local_characteristic(std::vector<PPSet>{b.bar}, p) -
           local_characteristic(b.negative.elements, p);
}

long long Calculus::local_characteristic(const Cell& c, const PPSet& p) const {
    return local_characteristic(c.positive.elements, p) -
           local_characteristic(c.negative.elements, p);
}

std::vector<PPSet> Calculus::singular_set(const std::vector<Block>& blocks) const {
    std::vector<PPSet> seed;
    for (const Block& b : blocks) {
        seed.push_back(b.bar);
        for (const PPSet& q : b.negative.elements) seed.push_back(q);
    }
    std::vector<PPSet> nest = build_nest(seed).elements;
    std::vector<PPSet> sing;
    for (const PPSet& p : nest) {
        long long k = 0;
        for (const Block& b : blocks) k += local_characteristic(b, p);
        if (k != 0) sing.push_back(p);
    }
    return sing;
}

EvalImage Calculus::evaluate_blocks(const std::vector<PPSet>& nest,
                                    const std::vector<Block>& blocks) const {
    EvalImage img;
    for (const PPSet& p : nest) {
        long long k = 0;
        for (const Block& b : blocks) k += local_characteristic(b, p);
        if (k != 0) img.raw.add_term(be_.colour_key(p), Int(-k));
    }
    auto rels = be_.invariants_relations();
    img.reduced = homogeneous_schema(rels) ? normal_form(img.raw, rels, be_.colour_monoid())
                                           : img.raw;
    return img;
}

EvalImage Calculus::evaluate(const Expr& d) const {
    Analysis a = analyze(d);
    return evaluate_blocks(a.nest, a.blocks);
}

K0Presentation Calculus::k0() const {
    return K0Presentation(be_.monoid_description(), be_.colour_monoid(),
                          be_.monoid_generators(), be_.invariants_relations());
}

// ---------------------------------------------------------------------------
// T = T^aleph0 operations

Antichain Calculus::closure(const Expr& d) const {
    require_t_aleph0("closure");
    Analysis a = analyze(d);
    return canonical_antichain(a.positive);
}

Tower Calculus::cell_decompose(const Expr& d) const {
    require_t_aleph0("cell_decompose");
    Analysis a = analyze(d);
    const std::size_t n = a.nest.size();
    std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) below[i][j] = be_.is_subset(a.nest[i], a.nest[j]);

    auto down = [&](const std::set<std::size_t>& s) {
        std::set<std::size_t> out;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f : s)
                if (i == f || below[i][f]) {
                    out.insert(i);
                    break;
                }
        }
        return out;
    };
    auto maximal_antichain = [&](const std::set<std::size_t>& s) {
        std::vector<PPSet> els;
        for (std::size_t i : s) {
            bool max = true;
            for (std::size_t j : s)
                if (i != j && below[i][j]) {
                    max = false;
                    break;
                }
            if (max) els.push_back(a.nest[i]);
        }
        Antichain out;
        std::sort(els.begin(), els.end());
        out.elements = std::move(els);
        return out;
    };
    auto minus = [](const std::set<std::size_t>& x, const std::set<std::size_t>& y) {
        std::set<std::size_t> out;
        for (std::size_t i : x)
            if (!y.count(i)) out.insert(i);
        return out;
    };

    std::set<std::size_t> cur;  // D as a set of cores
    for (std::size_t i = 0; i < n; ++i)
        for (const PPSet& p : a.positive)
            if (a.nest[i] == p) cur.insert(i);

    Tower tower;
    while (!cur.empty()) {
        std::set<std::size_t> bar = down(cur);
        std::set<std::size_t> rest = minus(bar, cur);          // closure(D) minus D
        std::set<std::size_t> restbar = down(rest);
        Cell cell{maximal_antichain(bar), maximal_antichain(restbar)};
        std::set<std::size_t> cell_cores = minus(bar, restbar);
        tower.cells.push_back(std::move(cell));
        cur = minus(cur, cell_cores);
    }
    return tower;
}

Expr Calculus::tower_union_expr(const Tower& t, std::map<std::string, PPSet>& names_out) const {
    std::map<std::string, std::string> key_to_name;
    auto bind = [&](const PPSet& p) {
        auto it = key_to_name.find(p.key());
        if (it != key_to_name.end()) return it->second;
        std::string name = "_c" + std::to_string(key_to_name.size());
        key_to_name.emplace(p.key(), name);
        names_out.emplace(name, p);
        return name;
    };
    std::optional<Expr> acc;
    for (const Cell& c : t.cells) {
        std::optional<Expr> pos;
        for (const PPSet& p : c.positive.elements) {
            Expr e = Expr::atom(bind(p));
            pos = pos ? Expr::combine(Expr::Op::Union, *pos, e) : e;
        }
        if (!pos) continue;
        Expr cell_expr = *pos;
        std::optional<Expr> neg;
        for (const PPSet& p : c.negative.elements) {
            Expr e = Expr::atom(bind(p));
            neg = neg ? Expr::combine(Expr::Op::Union, *neg, e) : e;
        }
        if (neg) cell_expr = Expr::combine(Expr::Op::Diff, cell_expr, *neg);
        acc = acc ? Expr::combine(Expr::Op::Union, *acc, cell_expr) : cell_expr;
    }
    if (!acc) throw CalcError("tower_union_expr: empty tower has no expression");
    return *acc;
}

ConnectivityDigraph Calculus::connectivity_digraph(const std::vector<PPSet>& nest,
                                                   const std::vector<PPSet>& positive) const {
    (void)nest;
    ConnectivityDigraph g;
    g.nodes = positive;
    std::sort(g.nodes.begin(), g.nodes.end());
    const std::size_t n = g.nodes.size();
    std::vector<std::vector<bool>> below(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) below[i][j] = be_.is_subset(g.nodes[i], g.nodes[j]);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!below[i][j]) continue;
            bool covering = true;
            for (std::size_t k = 0; k < n && covering; ++k)
                if (k != i && k != j && below[i][k] && below[k][j]) covering = false;
            if (covering) g.arcs.emplace_back(i, j);
        }
    return g;
}

LambdaResult Calculus::lambda(const Expr& d) const {
    require_t_aleph0("lambda");
    Analysis a = analyze(d);
    if (a.positive.empty()) return {0, true};

    std::size_t best = connectivity_digraph(a.nest, a.positive).weak_components();

    // bounded refinement: adjoin meets with translates of nest elements by
    // differences of nest basepoints
    std::vector<PPSet> pool = a.nest;
    for (std::size_t round = 0; round < opt_.lambda_budget_rounds && best > 1; ++round) {
        std::map<std::string, PPSet> extra;
        for (const PPSet& f : pool) {
            Point bf = be_.pick_point(f);
            for (const PPSet& g : pool) {
                if (extra.size() >= opt_.lambda_extra_cap) break;
                Point bg = be_.pick_point(g);
                Point t = point_sub(bf, bg);
                if (std::all_of(t.begin(), t.end(), [](const Rat& x) { return x == 0; }))
                    continue;
                PPSet tg = be_.translate(g, t);
                extra.emplace(tg.key(), tg);
            }
        }
        std::vector<PPSet> extra_v;
        for (auto& [k, v] : extra) extra_v.push_back(v);
        Analysis refined = analyze_with(extra_v, d);
        best = std::min(best,
                        connectivity_digraph(refined.nest, refined.positive).weak_components());
        pool = refined.nest;
    }

    // sound lower bound: components of the closure antichain linked where the
    // pairwise meet still touches D
    Antichain closure_ac = canonical_antichain(a.positive);
    const auto& cls = closure_ac.elements;
    std::vector<std::size_t> parent(cls.size());
    std::iota(parent.begin(), parent.end(), 0);
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < cls.size(); ++i)
        for (std::size_t j = i + 1; j < cls.size(); ++j) {
            PPSet m = be_.meet(cls[i], cls[j]);
            if (m.is_empty()) continue;
            bool touches = false;
            for (const PPSet& f : a.positive)
                if (be_.is_subset(f, m)) {
                    touches = true;
                    break;
                }
            if (touches) parent[find(i)] = find(j);
        }
    std::set<std::size_t> roots;
    for (std::size_t i = 0; i < cls.size(); ++i) roots.insert(find(i));
    std::size_t lower_bound = roots.size();

    return {best, best <= 1 || best == lower_bound};
}

bool Calculus::in_block(const Block& b, const Point& p) const {
    if (!be_.contains(b.bar, p)) return false;
    for (const PPSet& q : b.negative.elements)
        if (be_.contains(q, p)) return false;
    return true;
}

std::vector<Point> Calculus::sample_block_points(const Block& b, std::size_t count) const {
    std::vector<Point> out;
    std::size_t budget = 8 * (count + 4);
    for (const Point& p : be_.enumerate_points(b.bar, budget)) {
        if (in_block(b, p)) out.push_back(p);
        if (out.size() == count) break;
    }
    return out;
}

MinkowskiWitness Calculus::minkowski_witness(const Block& b, const Point& d) const {
    require_t_aleph0("minkowski_witness");
    if (!be_.contains(b.bar, d)) throw CalcError("minkowski_witness: point outside the closure");
    if (in_block(b, d)) return {d, d, d};

    // work in subgroup coordinates: G = bar - a
    Point a = be_.pick_point(b.bar);
    PPSet g = be_.subgroup_part(b.bar);
    Point dprime = point_sub(d, a);

    auto shifted = [&](const Point& t) {
        std::vector<PPSet> out;
        for (const PPSet& q : b.negative.elements) {
            PPSet s = be_.translate(q, point_neg(point_add(a, t)));
            PPSet m = be_.meet(s, g);
            if (!m.is_empty()) out.push_back(m);
        }
        return out;
    };

    // x in G avoiding (D - a - d'); then x + d' lands in the block
    auto avoid_x = shifted(dprime);
    auto x = be_.pick_point_avoiding(g, avoid_x);
    if (!x) throw CalcError("minkowski_witness: avoidance pick failed");
    // y in G avoiding (D - a - d') and (D - a - d' - x)
    auto avoid_y = avoid_x;
    for (const PPSet& q : shifted(point_add(dprime, *x))) avoid_y.push_back(q);
    auto y = be_.pick_point_avoiding(g, avoid_y);
    if (!y) throw CalcError("minkowski_witness: avoidance pick failed");

    Point wx = point_add(d, *x);
    Point wy = point_add(d, *y);
    Point wz = point_add(wx, *y);
    return {wx, wy, wz};
}

std::function<Point(const Point&)> Calculus::extend_linear(
    const Block& b, const std::function<Point(const Point&)>& f) const {
    require_t_aleph0("extend_linear");
    // sample-based linearity and injectivity checks
    auto samples = sample_block_points(b, 6);
    for (const Point& x : samples)
        for (const Point& y : samples)
            for (const Point& z : samples) {
                Point w = point_sub(point_add(x, y), z);
                if (!in_block(b, w)) continue;
                if (f(w) != point_sub(point_add(f(x), f(y)), f(z)))
                    throw CalcError("extend_linear: map is not linear on samples");
            }
    for (std::size_t i = 0; i < samples.size(); ++i)
        for (std::size_t j = i + 1; j < samples.size(); ++j)
            if (f(samples[i]) == f(samples[j]))
                throw CalcError("extend_linear: map is not injective on samples");

    PPSet bar = b.bar;
    PPSet g = be_.subgroup_part(bar);
    Antichain negative = b.negative;
    Block block = b;

    return [this, f, bar, g, negative, block](const Point& v) -> Point {
        if (!be_.contains(bar, v)) throw CalcError("extend_linear: point outside the closure");
        if (in_block(block, v)) return f(v);
        // pick x in G with x + v inside the block
        std::vector<PPSet> avoid_x;
        for (const PPSet& q : negative.elements) {
            PPSet s = be_.translate(q, point_neg(v));
            PPSet m = be_.meet(s, g);
            if (!m.is_empty()) avoid_x.push_back(m);
        }
        auto x = be_.pick_point_avoiding(g, avoid_x);
        if (!x) throw CalcError("extend_linear: avoidance pick failed");
        // pick y inside the block with x + y also inside
        std::vector<PPSet> avoid_y = negative.elements;
        for (const PPSet& q : negative.elements) {
            PPSet s = be_.translate(q, point_neg(*x));
            PPSet m = be_.meet(s, bar);
            if (!m.is_empty()) avoid_y.push_back(m);
        }
        auto y = be_.pick_point_avoiding(bar, avoid_y);
        if (!y) throw CalcError("extend_linear: avoidance pick failed");
        return point_sub(point_add(f(point_add(*x, v)), f(*y)), f(point_add(*x, *y)));
    };
}

}  // namespace modk0

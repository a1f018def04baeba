#include "modk0/k0algebra.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace modk0 {

namespace {

Int gcd_int(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Int t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Int pos_mod(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

void check_commutative_monoid(const std::vector<std::vector<std::size_t>>& t, std::size_t id,
                              const char* what) {
    const std::size_t n = t.size();
    for (std::size_t a = 0; a < n; ++a) {
        if (t[a].size() != n) throw std::invalid_argument(std::string(what) + ": ragged table");
        for (std::size_t b = 0; b < n; ++b) {
            if (t[a][b] >= n) throw std::invalid_argument(std::string(what) + ": out of range");
            if (t[a][b] != t[b][a])
                throw std::invalid_argument(std::string(what) + ": not commutative");
        }
    }
    for (std::size_t a = 0; a < n; ++a)
        if (t[id][a] != a) throw std::invalid_argument(std::string(what) + ": identity fails");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (t[t[a][b]][c] != t[a][t[b][c]])
                    throw std::invalid_argument(std::string(what) + ": not associative");
}

}  // namespace

FiniteSemiring::FiniteSemiring(std::vector<std::vector<std::size_t>> add_table,
                               std::vector<std::vector<std::size_t>> mul_table,
                               std::size_t zero, std::size_t one)
    : add_(std::move(add_table)), mul_(std::move(mul_table)), zero_(zero), one_(one) {
    const std::size_t n = add_.size();
    if (n == 0 || mul_.size() != n || zero >= n || one >= n)
        throw std::invalid_argument("semiring: bad shape");
    check_commutative_monoid(add_, zero_, "semiring addition");
    check_commutative_monoid(mul_, one_, "semiring multiplication");
    for (std::size_t a = 0; a < n; ++a)
        if (mul_[a][zero_] != zero_) throw std::invalid_argument("semiring: a*0 != 0");
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t c = 0; c < n; ++c)
                if (mul_[a][add_[b][c]] != add_[mul_[a][b]][mul_[a][c]])
                    throw std::invalid_argument("semiring: distributivity fails");
}

bool FiniteSemiring::is_cancellative() const {
    for (std::size_t a = 0; a < size(); ++a)
        for (std::size_t b = 0; b < size(); ++b) {
            if (a == b) continue;
            for (std::size_t c = 0; c < size(); ++c)
                if (add_[a][c] == add_[b][c]) return false;
        }
    return true;
}

bool FiniteSemiring::has_additive_inverses() const {
    for (std::size_t a = 0; a < size(); ++a) {
        bool found = false;
        for (std::size_t b = 0; b < size(); ++b)
            if (add_[a][b] == zero_) found = true;
        if (!found) return false;
    }
    return true;
}

CancellativeQuotient cancellative_quotient(const FiniteSemiring& s) {
    const std::size_t n = s.size();
    // a ~ b iff exists c with a + c = b + c; the relation is transitive
    std::vector<std::size_t> cls(n, n);
    std::vector<std::vector<std::size_t>> members;
    for (std::size_t a = 0; a < n; ++a) {
        if (cls[a] != n) continue;
        std::size_t id = members.size();
        cls[a] = id;
        members.push_back({a});
        for (std::size_t b = a + 1; b < n; ++b) {
            if (cls[b] != n) continue;
            for (std::size_t c = 0; c < n; ++c)
                if (s.add(a, c) == s.add(b, c)) {
                    cls[b] = id;
                    members[id].push_back(b);
                    break;
                }
        }
    }
    const std::size_t m = members.size();
    std::vector<std::vector<std::size_t>> add(m, std::vector<std::size_t>(m));
    std::vector<std::vector<std::size_t>> mul(m, std::vector<std::size_t>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            add[i][j] = cls[s.add(members[i][0], members[j][0])];
            mul[i][j] = cls[s.mul(members[i][0], members[j][0])];
        }
    CancellativeQuotient out{FiniteSemiring(add, mul, cls[s.zero()], cls[s.one()]), cls};
    if (!out.quotient.is_cancellative())
        throw std::logic_error("cancellative_quotient: quotient is not cancellative");
    return out;
}

DifferenceRing ring_of_differences(const FiniteSemiring& r) {
    if (!r.is_cancellative())
        throw std::invalid_argument("ring_of_differences: input not cancellative");
    const std::size_t n = r.size();
    std::vector<std::vector<std::size_t>> cls(n, std::vector<std::size_t>(n, n * n));
    std::vector<std::pair<std::size_t, std::size_t>> rep;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            if (cls[a][b] != n * n) continue;
            std::size_t id = rep.size();
            rep.emplace_back(a, b);
            for (std::size_t c = 0; c < n; ++c)
                for (std::size_t d = 0; d < n; ++d)
                    if (r.add(a, d) == r.add(b, c)) cls[c][d] = id;
        }
    const std::size_t m = rep.size();
    std::vector<std::vector<std::size_t>> add(m, std::vector<std::size_t>(m));
    std::vector<std::vector<std::size_t>> mul(m, std::vector<std::size_t>(m));
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            auto [a, b] = rep[i];
            auto [c, d] = rep[j];
            add[i][j] = cls[r.add(a, c)][r.add(b, d)];
            mul[i][j] = cls[r.add(r.mul(a, c), r.mul(b, d))][r.add(r.mul(a, d), r.mul(b, c))];
        }
    std::size_t zero = cls[r.zero()][r.zero()];
    std::size_t one = cls[r.one()][r.zero()];
    DifferenceRing out{FiniteSemiring(add, mul, zero, one), cls};
    if (!out.ring.has_additive_inverses())
        throw std::logic_error("ring_of_differences: result lacks additive inverses");
    return out;
}

std::size_t DifferenceRing::negate(std::size_t a) const {
    for (std::size_t b = 0; b < ring.size(); ++b)
        if (ring.add(a, b) == ring.zero()) return b;
    throw std::logic_error("DifferenceRing::negate: no inverse");
}

SemiringK0 k0_of_semiring(const FiniteSemiring& s) {
    CancellativeQuotient q = cancellative_quotient(s);
    DifferenceRing d = ring_of_differences(q.quotient);
    std::vector<std::size_t> eta(s.size());
    for (std::size_t a = 0; a < s.size(); ++a) eta[a] = d.embed(q.onto[a]);
    return SemiringK0{d.ring, eta};
}

MonoidOps nat_monoid(const std::string& prefix) {
    MonoidOps ops;
    ops.unit = prefix + ":0";
    ops.mul = [prefix](const std::string& a, const std::string& b) {
        return nat_key(prefix, nat_key_degree(a) + nat_key_degree(b));
    };
    ops.divides = [](const std::string& g, const std::string& m) {
        return nat_key_degree(g) <= nat_key_degree(m);
    };
    ops.pretty = [](const std::string& key) -> std::string {
        long long d = nat_key_degree(key);
        if (d == 0) return "1";
        if (d == 1) return "X";
        return "X^" + std::to_string(d);
    };
    return ops;
}

long long nat_key_degree(const std::string& key) {
    auto colon = key.find(':');
    if (colon == std::string::npos)
        throw std::invalid_argument("nat_key_degree: malformed key " + key);
    return std::stoll(key.substr(colon + 1));
}

std::string nat_key(const std::string& prefix, long long degree) {
    return prefix + ":" + std::to_string(degree);
}

MonoidRingElement MonoidRingElement::monomial(const std::string& key, Int coeff) {
    MonoidRingElement e;
    e.add_term(key, coeff);
    return e;
}

Int MonoidRingElement::coeff(const std::string& key) const {
    auto it = terms_.find(key);
    return it == terms_.end() ? Int(0) : it->second;
}

void MonoidRingElement::add_term(const std::string& key, const Int& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(key, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

std::string MonoidRingElement::to_string(const MonoidOps& ops) const {
    if (terms_.empty()) return "0";
    // print highest keys first so polynomials read naturally
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const Int& c = it->second;
        std::string mono = ops.pretty(it->first);
        if (first) {
            if (c < 0) os << "-";
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        Int a = c < 0 ? Int(-c) : c;
        if (mono == "1") {
            os << a;
        } else {
            if (a != 1) os << a;
            os << mono;
        }
        first = false;
    }
    return os.str();
}

MonoidRingElement mr_add(const MonoidRingElement& x, const MonoidRingElement& y) {
    MonoidRingElement out = x;
    for (const auto& [k, c] : y.terms()) out.add_term(k, c);
    return out;
}

MonoidRingElement mr_neg(const MonoidRingElement& x) {
    MonoidRingElement out;
    for (const auto& [k, c] : x.terms()) out.add_term(k, -c);
    return out;
}

MonoidRingElement mr_sub(const MonoidRingElement& x, const MonoidRingElement& y) {
    return mr_add(x, mr_neg(y));
}

MonoidRingElement mr_mul(const MonoidRingElement& x, const MonoidRingElement& y,
                         const MonoidOps& ops) {
    MonoidRingElement out;
    for (const auto& [kx, cx] : x.terms())
        for (const auto& [ky, cy] : y.terms()) out.add_term(ops.mul(kx, ky), cx * cy);
    return out;
}

bool homogeneous_schema(const std::vector<IndexRelation>& rels) {
    return std::all_of(rels.begin(), rels.end(),
                       [](const IndexRelation& r) { return r.upper == r.lower; });
}

MonoidRingElement normal_form(const MonoidRingElement& x,
                              const std::vector<IndexRelation>& rels, const MonoidOps& ops) {
    if (!homogeneous_schema(rels))
        throw std::invalid_argument("normal_form: unsupported schema (non-homogeneous relations)");
    MonoidRingElement out;
    for (const auto& [key, c] : x.terms()) {
        Int modulus = 0;  // gcd over applicable relations
        for (const IndexRelation& r : rels)
            if (ops.divides(r.lower, key)) modulus = gcd_int(modulus, r.index - 1);
        if (modulus == 0)
            out.add_term(key, c);
        else
            out.add_term(key, pos_mod(c, modulus));
    }
    return out;
}

ColourClassGroup colour_class_group(const std::vector<std::string>& generators,
                                    const std::vector<IndexRelation>& rels) {
    ColourClassGroup g;
    g.generators = generators;
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < generators.size(); ++i) index[generators[i]] = i;
    IntMatrix rows(0, generators.size());
    for (const IndexRelation& r : rels) {
        auto iu = index.find(r.upper);
        auto il = index.find(r.lower);
        if (iu == index.end() || il == index.end())
            throw std::invalid_argument("colour_class_group: relation key outside generators");
        std::vector<Int> row(generators.size(), Int(0));
        row[iu->second] += 1;
        row[il->second] -= r.index;
        rows.append_row(row);
    }
    g.relation_matrix = rows;
    auto d = snf_diagonal(rows);
    std::size_t rank = 0;
    for (const Int& x : d)
        if (x != 0) {
            ++rank;
            if (x > 1) g.invariant_factors.push_back(x);
        }
    g.free_rank = generators.size() - rank;
    return g;
}

K0Presentation::K0Presentation(std::string monoid_description, MonoidOps ops,
                               std::vector<std::string> generators,
                               std::vector<IndexRelation> relations)
    : monoid_description_(std::move(monoid_description)),
      ops_(std::move(ops)),
      generators_(std::move(generators)) {
    for (IndexRelation& r : relations) {
        if (r.index < 1) throw std::invalid_argument("K0Presentation: index must be positive");
        if (r.index == 1) continue;  // vacuous
        relations_.push_back(std::move(r));
    }
    homogeneous_ = homogeneous_schema(relations_);
}

MonoidRingElement K0Presentation::nf(const MonoidRingElement& x) const {
    if (!homogeneous_)
        throw std::invalid_argument("K0Presentation: no normal form for this schema");
    return normal_form(x, relations_, ops_);
}

std::map<std::string, Int> K0Presentation::reduction_moduli() const {
    std::map<std::string, Int> mod;
    for (const IndexRelation& r : relations_) {
        auto [it, inserted] = mod.emplace(r.lower, r.index - 1);
        if (!inserted) it->second = gcd_int(it->second, r.index - 1);
    }
    return mod;
}

bool K0Presentation::ideal_contained_in(const K0Presentation& other) const {
    if (!homogeneous_ || !other.homogeneous_)
        throw std::invalid_argument("ideal_contained_in: needs homogeneous schemas");
    auto mine = reduction_moduli();
    auto theirs = other.reduction_moduli();
    // <a g> is inside <b g> exactly when b divides a
    for (const auto& [key, a] : mine) {
        Int b = 0;
        for (const auto& [k2, m2] : theirs)
            if (other.ops_.divides(k2, key)) b = gcd_int(b, m2);
        if (b == 0 || a % b != 0) return false;
    }
    return true;
}

std::string K0Presentation::render_text() const {
    std::string base = "Z[" ;
    for (std::size_t i = 0; i < generators_.size(); ++i)
        base += (i ? "," : "") + ops_.pretty(generators_[i]);
    base += "]";
    if (relations_.empty()) return base;
    auto mod = reduction_moduli();
    // single generator with every positive degree annihilated collapses to Z
    if (generators_.size() == 1 && mod.size() == 1) {
        auto it = mod.begin();
        if (it->first == generators_[0] && it->second == 1) return "Z";
    }
    std::ostringstream os;
    os << base << "/<";
    bool first = true;
    for (const auto& [key, d] : mod) {
        if (!first) os << ", ";
        first = false;
        if (d != 1) os << d;
        os << ops_.pretty(key);
    }
    os << ">";
    return os.str();
}

nlohmann::json K0Presentation::render_json() const {
    nlohmann::json j;
    j["monoid"] = monoid_description_;
    j["ring"] = render_text();
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& g : generators_) gens.push_back(ops_.pretty(g));
    j["generators"] = gens;
    nlohmann::json rels = nlohmann::json::array();
    for (const IndexRelation& r : relations_) {
        nlohmann::json jr;
        jr["upper"] = ops_.pretty(r.upper);
        jr["lower"] = ops_.pretty(r.lower);
        jr["index"] = r.index.convert_to<long long>();
        rels.push_back(jr);
    }
    j["relations"] = rels;
    nlohmann::json inv = nlohmann::json::object();
    for (const auto& [key, d] : reduction_moduli())
        inv[ops_.pretty(key)] = d.convert_to<long long>();
    j["invariant_factors"] = inv;
    return j;
}

}  // namespace modk0

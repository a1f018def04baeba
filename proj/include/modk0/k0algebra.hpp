#ifndef MODK0_K0ALGEBRA_HPP
#define MODK0_K0ALGEBRA_HPP

#include "modk0/linalg.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace modk0 {

/// Commutative semiring with unity on elements {0..n-1}, given by tables.
/// All axioms are checked exhaustively at construction.
class FiniteSemiring {
public:
    FiniteSemiring(std::vector<std::vector<std::size_t>> add_table,
                   std::vector<std::vector<std::size_t>> mul_table,
                   std::size_t zero, std::size_t one);

    std::size_t size() const { return add_.size(); }
    std::size_t add(std::size_t a, std::size_t b) const { return add_[a][b]; }
    std::size_t mul(std::size_t a, std::size_t b) const { return mul_[a][b]; }
    std::size_t zero() const { return zero_; }
    std::size_t one() const { return one_; }

    bool is_cancellative() const;
    bool has_additive_inverses() const;

private:
    std::vector<std::vector<std::size_t>> add_, mul_;
    std::size_t zero_, one_;
};

/// Quotient by a ~ b iff exists c with a + c = b + c, with the projection map.
struct CancellativeQuotient {
    FiniteSemiring quotient;
    std::vector<std::size_t> onto;  // element -> class index
};
CancellativeQuotient cancellative_quotient(const FiniteSemiring& s);

/// Ring of differences of a cancellative semiring: E-classes of pairs.
struct DifferenceRing {
    FiniteSemiring ring;                             // has additive inverses
    std::vector<std::vector<std::size_t>> pair_class;  // class of (a, b)
    std::size_t embed(std::size_t a) const { return pair_class[a][0]; }  // a -> (a, 0)
    std::size_t negate(std::size_t a) const;
};
DifferenceRing ring_of_differences(const FiniteSemiring& cancellative);

/// K0 of an arbitrary finite semiring: differences of the cancellative
/// quotient, with the unit map eta.
struct SemiringK0 {
    FiniteSemiring ring;
    std::vector<std::size_t> eta;  // S -> K0(S)
};
SemiringK0 k0_of_semiring(const FiniteSemiring& s);

/// Monoid structure on canonical monomial keys. The monoid itself is never
/// enumerated, only queried through these callbacks.
struct MonoidOps {
    std::string unit;
    std::function<std::string(const std::string&, const std::string&)> mul;
    std::function<bool(const std::string&, const std::string&)> divides;  // g | m
    std::function<std::string(const std::string&)> pretty;
};

/// The free commutative monoid N with keys "<prefix>:<k>".
MonoidOps nat_monoid(const std::string& prefix);
long long nat_key_degree(const std::string& key);
std::string nat_key(const std::string& prefix, long long degree);

/// Element of an integral monoid ring: finite support, no zero coefficients.
class MonoidRingElement {
public:
    MonoidRingElement() = default;
    static MonoidRingElement monomial(const std::string& key, Int coeff);

    const std::map<std::string, Int>& terms() const { return terms_; }
    Int coeff(const std::string& key) const;
    bool is_zero() const { return terms_.empty(); }
    void add_term(const std::string& key, const Int& c);

    bool operator==(const MonoidRingElement&) const = default;
    std::string to_string(const MonoidOps& ops) const;

private:
    std::map<std::string, Int> terms_;
};

MonoidRingElement mr_add(const MonoidRingElement& x, const MonoidRingElement& y);
MonoidRingElement mr_neg(const MonoidRingElement& x);
MonoidRingElement mr_sub(const MonoidRingElement& x, const MonoidRingElement& y);
MonoidRingElement mr_mul(const MonoidRingElement& x, const MonoidRingElement& y,
                         const MonoidOps& ops);

/// delta_upper = index * delta_lower with finite index >= 2.
struct IndexRelation {
    std::string upper, lower;
    Int index;
    bool operator==(const IndexRelation&) const = default;
};

/// True when every relation has upper == lower (same colour).
bool homogeneous_schema(const std::vector<IndexRelation>& rels);

/// Reduce each coefficient modulo gcd{index-1 : relation key divides the
/// monomial}. Requires a homogeneous schema.
MonoidRingElement normal_form(const MonoidRingElement& x,
                              const std::vector<IndexRelation>& rels, const MonoidOps& ops);

/// Cokernel presentation of the rows delta_upper - index * delta_lower.
struct ColourClassGroup {
    std::vector<std::string> generators;
    IntMatrix relation_matrix;
    std::vector<Int> invariant_factors;  // > 1, each dividing the next
    std::size_t free_rank = 0;
};
ColourClassGroup colour_class_group(const std::vector<std::string>& generators,
                                    const std::vector<IndexRelation>& rels);

/// Presentation of K0(M) as Z[monoid]/J. Ring arithmetic with a normal form
/// is available exactly for homogeneous relation schemas.
class K0Presentation {
public:
    K0Presentation(std::string monoid_description, MonoidOps ops,
                   std::vector<std::string> generators, std::vector<IndexRelation> relations);

    bool has_normal_form() const { return homogeneous_; }
    MonoidRingElement nf(const MonoidRingElement& x) const;

    const std::vector<IndexRelation>& relations() const { return relations_; }
    const std::vector<std::string>& generators() const { return generators_; }
    const MonoidOps& ops() const { return ops_; }

    /// gcd of index-1 over relations at each relation key.
    std::map<std::string, Int> reduction_moduli() const;

    /// For a single-generator homogeneous presentation: whether this ideal
    /// is contained in the other one.
    bool ideal_contained_in(const K0Presentation& other) const;

    std::string render_text() const;      // e.g. "Z[X]/<4X>"
    nlohmann::json render_json() const;

private:
    std::string monoid_description_;
    MonoidOps ops_;
    std::vector<std::string> generators_;
    std::vector<IndexRelation> relations_;
    bool homogeneous_;
};

}  // namespace modk0

#endif

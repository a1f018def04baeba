#ifndef MODK0_LATTICE_BACKEND_HPP
#define MODK0_LATTICE_BACKEND_HPP

#include "modk0/ppcalc.hpp"

namespace modk0 {

/// pp-sets are cosets of finitely generated subgroups of Z^n, held as a
/// reduced offset plus an HNF basis. Finite subgroup indices make the
/// invariants ideal nontrivial: T != T^aleph0 here.
class LatticeBackend final : public TheoryBackend {
public:
    explicit LatticeBackend(Int index_cap = Int(1000000)) : index_cap_(std::move(index_cap)) {}

    std::string name() const override { return "integer-z"; }
    bool is_T_aleph0() const override { return false; }

    PPSet empty_set(std::size_t n) const;
    PPSet from_offset_basis(std::vector<Int> offset, IntMatrix basis) const;

    std::size_t rank(const PPSet& p) const;
    std::vector<Int> offset(const PPSet& p) const;
    const IntMatrix& basis(const PPSet& p) const;

    PPSet full_space(std::size_t n) const override;
    PPSet singleton(const Point& p) const override;
    PPSet meet(const PPSet& a, const PPSet& b) const override;
    Card cardinality(const PPSet& p) const override;
    IndexValue index(const PPSet& p, const PPSet& q) const override;
    PPSet translate(const PPSet& p, const Point& t) const override;
    PPSet subgroup_part(const PPSet& p) const override;
    std::vector<PPSet> coset_decompose(const PPSet& q, const PPSet& h) const override;
    std::string colour_key(const PPSet& p) const override;
    std::string band_key(const PPSet& p) const override;
    PPSet product(const PPSet& p, const PPSet& q) const override;
    Point pick_point(const PPSet& p) const override;
    std::optional<Point> pick_point_avoiding(const PPSet& p,
                                             const std::vector<PPSet>& avoid) const override;
    bool contains(const PPSet& p, const Point& x) const override;
    std::vector<Point> enumerate_points(const PPSet& p, std::size_t count) const override;
    PPSet pp_from_presentation(const RatMatrix& r, const RatMatrix& s,
                               const std::vector<Rat>& c) const override;
    PPSet linear_image(const PPSet& p, const RatMatrix& a, const Point& t) const override;
    PPSet from_descriptor(const nlohmann::json& j) const override;
    nlohmann::json descriptor(const PPSet& p) const override;

    MonoidOps colour_monoid() const override { return nat_monoid("r"); }
    std::vector<std::string> monoid_generators() const override { return {nat_key("r", 1)}; }
    std::string monoid_description() const override { return "N (subgroup rank)"; }
    /// Schema: the rank-1 colour is annihilated (indices 2 and 3 have
    /// coprime reductions), which kills every positive rank.
    std::vector<IndexRelation> invariants_relations() const override;

private:
    Int index_cap_;
    std::optional<Point> pick_avoiding_meets(const PPSet& p,
                                             const std::vector<PPSet>& meets) const;
};

/// Symbolic family of section-6 examples: presentation data only.
K0Presentation zp_presentation(long p);
K0Presentation zp_sum_presentation(long p, long k);

}  // namespace modk0

#endif

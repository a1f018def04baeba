#ifndef MODK0_AFFINE_BACKEND_HPP
#define MODK0_AFFINE_BACKEND_HPP

#include "modk0/ppcalc.hpp"

namespace modk0 {

/// pp-sets are affine subspaces of Q^n: a basepoint plus a direction space
/// held as a reduced-echelon basis. Canonical, so key equality is set
/// equality. The theory satisfies T = T^aleph0.
class AffineBackend final : public TheoryBackend {
public:
    AffineBackend() = default;

    std::string name() const override { return "affine-q"; }
    bool is_T_aleph0() const override { return true; }

    PPSet empty_set(std::size_t n) const;
    PPSet from_point_basis(Point base, RatMatrix basis) const;
    /// Solution set of lhs * x + c = 0 (rows are equations).
    PPSet from_equations(const RatMatrix& lhs, const std::vector<Rat>& c) const;

    std::size_t dim(const PPSet& p) const;
    const Point& basepoint(const PPSet& p) const;
    const RatMatrix& direction_basis(const PPSet& p) const;

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

    MonoidOps colour_monoid() const override { return nat_monoid("d"); }
    std::vector<std::string> monoid_generators() const override { return {nat_key("d", 1)}; }
    std::string monoid_description() const override { return "N (affine dimension)"; }
    std::vector<IndexRelation> invariants_relations() const override { return {}; }
};

}  // namespace modk0

#endif

#ifndef MODK0_SIMPLICIAL_HPP
#define MODK0_SIMPLICIAL_HPP

#include "modk0/linalg.hpp"

#include <set>
#include <string>
#include <vector>

namespace modk0 {

using Vertex = std::string;
using Face = std::vector<Vertex>;  // sorted labels, nonempty

struct FaceOrder {
    bool operator()(const Face& a, const Face& b) const {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    }
};

/// Finite abstract simplicial complex over opaque string labels.
/// Stored downward closed; set order groups faces by dimension.
class SimplicialComplex {
public:
    static constexpr std::size_t kDefaultFaceCap = 4096;

    SimplicialComplex() = default;

    /// Downward closure of the given maximal faces. Rejects an explicitly
    /// empty face and complexes larger than face_cap.
    static SimplicialComplex from_maximal_faces(const std::vector<Face>& maximal,
                                                std::size_t face_cap = kDefaultFaceCap);

    /// Adopts an already downward-closed face list (validated).
    static SimplicialComplex from_faces(const std::vector<Face>& faces);

    bool empty() const { return faces_.empty(); }
    std::size_t face_count() const { return faces_.size(); }
    int dimension() const;  // -1 for the empty complex

    const std::set<Face, FaceOrder>& faces() const { return faces_; }
    std::vector<Vertex> vertices() const;
    std::vector<Face> faces_of_dim(int d) const;
    std::vector<Face> maximal_faces() const;

    bool has_face(Face f) const;
    bool is_subcomplex_of(const SimplicialComplex& k) const;

    bool operator==(const SimplicialComplex& rhs) const = default;

private:
    std::set<Face, FaceOrder> faces_;
};

long long euler_char(const SimplicialComplex& k);

struct DegreeHomology {
    long long betti = 0;
    std::vector<Int> torsion;  // invariant factors > 1, each dividing the next
    bool operator==(const DegreeHomology&) const = default;
};

/// Homology groups per degree, trailing trivial groups trimmed.
struct HomologyResult {
    std::vector<DegreeHomology> groups;

    DegreeHomology at(std::size_t n) const {
        return n < groups.size() ? groups[n] : DegreeHomology{};
    }
    bool trivial() const { return groups.empty(); }
    bool operator==(const HomologyResult&) const = default;
    std::string to_string() const;  // e.g. "H0=Z, H1=Z/2"
};

/// Bounded chain complex of free abelian groups.
/// boundaries[k] maps degree k to degree k-1 (rows = ranks[k-1], cols =
/// ranks[k]); boundaries[0] is the zero map out of degree 0.
struct ChainComplex {
    std::vector<std::size_t> ranks;
    std::vector<IntMatrix> boundaries;

    bool boundary_square_zero() const;
};

ChainComplex chain_complex(const SimplicialComplex& k);

/// Tensor product complex with the sign rule
/// d(a (x) b) = da (x) b + (-1)^deg(a) a (x) db.
ChainComplex tensor_chain(const ChainComplex& c, const ChainComplex& d);

HomologyResult homology(const ChainComplex& c);
HomologyResult homology(const SimplicialComplex& k);

/// k plus a cone over the subcomplex q with the given fresh apex.
SimplicialComplex cone(const SimplicialComplex& k, const SimplicialComplex& q,
                       const Vertex& apex);
Vertex fresh_apex(const SimplicialComplex& k);

/// Relative homology H(k; q) computed through the cone construction.
HomologyResult relative_homology(const SimplicialComplex& k, const SimplicialComplex& q);

Vertex pair_label(const Vertex& a, const Vertex& b);

/// Faces are sets whose both projections are faces.
SimplicialComplex simplicial_product(const SimplicialComplex& k, const SimplicialComplex& q,
                                     std::size_t face_cap = SimplicialComplex::kDefaultFaceCap);

/// Faces are sets with at least one projection a face.
SimplicialComplex disjunctive_product(const SimplicialComplex& k, const SimplicialComplex& q,
                                      std::size_t face_cap = SimplicialComplex::kDefaultFaceCap);

/// Text format: one maximal face per line, vertices comma-separated.
SimplicialComplex parse_complex_text(const std::string& text);
std::string maximal_faces_text(const SimplicialComplex& k);

}  // namespace modk0

#endif

#include "modk0/simplicial.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <stdexcept>

namespace modk0 {

namespace {

Face sorted_unique(Face f) {
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

}  // namespace

SimplicialComplex SimplicialComplex::from_maximal_faces(const std::vector<Face>& maximal,
                                                        std::size_t face_cap) {
    SimplicialComplex k;
    for (const Face& raw : maximal) {
        if (raw.empty()) throw std::invalid_argument("simplicial complex: empty face");
        Face f = sorted_unique(raw);
        // close downward over all nonempty subsets
        const std::size_t m = f.size();
        if (m > 8 * sizeof(unsigned long long) - 1)
            throw std::invalid_argument("simplicial complex: face too large");
        for (unsigned long long mask = 1; mask < (1ull << m); ++mask) {
            Face sub;
            for (std::size_t i = 0; i < m; ++i)
                if (mask & (1ull << i)) sub.push_back(f[i]);
            k.faces_.insert(std::move(sub));
            if (k.faces_.size() > face_cap)
                throw std::invalid_argument("simplicial complex: face cap exceeded");
        }
    }
    return k;
}

SimplicialComplex SimplicialComplex::from_faces(const std::vector<Face>& faces) {
    SimplicialComplex k;
    for (const Face& raw : faces) {
        if (raw.empty()) throw std::invalid_argument("simplicial complex: empty face");
        k.faces_.insert(sorted_unique(raw));
    }
    for (const Face& f : k.faces_) {
        if (f.size() == 1) continue;
        for (std::size_t drop = 0; drop < f.size(); ++drop) {
            Face sub;
            for (std::size_t i = 0; i < f.size(); ++i)
                if (i != drop) sub.push_back(f[i]);
            if (!k.faces_.count(sub))
                throw std::invalid_argument("simplicial complex: face list not downward closed");
        }
    }
    return k;
}

int SimplicialComplex::dimension() const {
    if (faces_.empty()) return -1;
    return static_cast<int>(faces_.rbegin()->size()) - 1;
}

std::vector<Vertex> SimplicialComplex::vertices() const {
    std::vector<Vertex> vs;
    for (const Face& f : faces_) {
        if (f.size() != 1) break;  // faces ordered by size
        vs.push_back(f.front());
    }
    return vs;
}

std::vector<Face> SimplicialComplex::faces_of_dim(int d) const {
    std::vector<Face> out;
    for (const Face& f : faces_)
        if (static_cast<int>(f.size()) == d + 1) out.push_back(f);
    return out;
}

std::vector<Face> SimplicialComplex::maximal_faces() const {
    std::vector<Face> out;
    for (const Face& f : faces_) {
        bool maximal = true;
        for (const Face& g : faces_) {
            if (g.size() <= f.size()) continue;
            if (std::includes(g.begin(), g.end(), f.begin(), f.end())) {
                maximal = false;
                break;
            }
        }
        if (maximal) out.push_back(f);
    }
    return out;
}

bool SimplicialComplex::has_face(Face f) const { return faces_.count(sorted_unique(std::move(f))) > 0; }

bool SimplicialComplex::is_subcomplex_of(const SimplicialComplex& k) const {
    return std::all_of(faces_.begin(), faces_.end(),
                       [&](const Face& f) { return k.faces_.count(f) > 0; });
}

long long euler_char(const SimplicialComplex& k) {
    long long chi = 0;
    for (const Face& f : k.faces()) chi += (f.size() % 2 == 1) ? 1 : -1;
    return chi;
}

std::string HomologyResult::to_string() const {
    if (groups.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (std::size_t n = 0; n < groups.size(); ++n) {
        const auto& g = groups[n];
        if (g.betti == 0 && g.torsion.empty()) continue;
        if (!first) os << ", ";
        first = false;
        os << "H" << n << "=";
        bool plus = false;
        if (g.betti > 0) {
            os << "Z";
            if (g.betti > 1) os << "^" << g.betti;
            plus = true;
        }
        for (const Int& t : g.torsion) {
            if (plus) os << "+";
            os << "Z/" << t;
            plus = true;
        }
    }
    if (first) return "0";
    return os.str();
}

bool ChainComplex::boundary_square_zero() const {
    for (std::size_t k = 1; k + 1 < boundaries.size(); ++k)
        if (!(boundaries[k] * boundaries[k + 1]).is_zero()) return false;
    return true;
}

ChainComplex chain_complex(const SimplicialComplex& k) {
    ChainComplex c;
    int dim = k.dimension();
    if (dim < 0) return c;
    std::vector<std::vector<Face>> by_dim;
    std::vector<std::map<Face, std::size_t, FaceOrder>> index;
    for (int d = 0; d <= dim; ++d) {
        by_dim.push_back(k.faces_of_dim(d));
        std::map<Face, std::size_t, FaceOrder> idx;
        for (std::size_t i = 0; i < by_dim[d].size(); ++i) idx[by_dim[d][i]] = i;
        index.push_back(std::move(idx));
        c.ranks.push_back(by_dim[d].size());
    }
    c.boundaries.resize(c.ranks.size());
    c.boundaries[0] = IntMatrix(0, c.ranks[0]);
    for (int d = 1; d <= dim; ++d) {
        IntMatrix b(c.ranks[d - 1], c.ranks[d]);
        for (std::size_t j = 0; j < by_dim[d].size(); ++j) {
            const Face& f = by_dim[d][j];  // sorted: orientation from label order
            for (std::size_t drop = 0; drop < f.size(); ++drop) {
                Face sub;
                for (std::size_t i = 0; i < f.size(); ++i)
                    if (i != drop) sub.push_back(f[i]);
                std::size_t row = index[d - 1].at(sub);
                b(row, j) = (drop % 2 == 0) ? 1 : -1;
            }
        }
        c.boundaries[d] = std::move(b);
    }
    return c;
}

ChainComplex tensor_chain(const ChainComplex& c, const ChainComplex& d) {
    ChainComplex t;
    if (c.ranks.empty() || d.ranks.empty()) return t;
    const std::size_t cn = c.ranks.size(), dn = d.ranks.size();
    const std::size_t tn = cn + dn - 1;
    t.ranks.assign(tn, 0);
    // basis of degree n: pairs (i, j=n-i), i ascending; within a pair,
    // a-index major, b-index minor
    auto offset = [&](std::size_t n, std::size_t i) {
        std::size_t off = 0;
        for (std::size_t ii = 0; ii < i; ++ii) {
            std::size_t jj = n - ii;
            if (ii < cn && jj < dn) off += c.ranks[ii] * d.ranks[jj];
        }
        return off;
    };
    for (std::size_t n = 0; n < tn; ++n)
        for (std::size_t i = 0; i <= n; ++i) {
            std::size_t j = n - i;
            if (i < cn && j < dn) t.ranks[n] += c.ranks[i] * d.ranks[j];
        }
    t.boundaries.resize(tn);
    t.boundaries[0] = IntMatrix(0, t.ranks[0]);
    for (std::size_t n = 1; n < tn; ++n) {
        IntMatrix b(t.ranks[n - 1], t.ranks[n]);
        for (std::size_t i = 0; i <= n; ++i) {
            std::size_t j = n - i;
            if (i >= cn || j >= dn) continue;
            std::size_t col0 = offset(n, i);
            for (std::size_t ai = 0; ai < c.ranks[i]; ++ai)
                for (std::size_t bj = 0; bj < d.ranks[j]; ++bj) {
                    std::size_t col = col0 + ai * d.ranks[j] + bj;
                    if (i >= 1) {  // da (x) b lands in (i-1, j)
                        const IntMatrix& da = c.boundaries[i];
                        std::size_t row0 = offset(n - 1, i - 1);
                        for (std::size_t r = 0; r < c.ranks[i - 1]; ++r)
                            if (da(r, ai) != 0)
                                b(row0 + r * d.ranks[j] + bj, col) += da(r, ai);
                    }
                    if (j >= 1) {  // (-1)^i a (x) db lands in (i, j-1)
                        const IntMatrix& db = d.boundaries[j];
                        std::size_t row0 = offset(n - 1, i);
                        int sign = (i % 2 == 0) ? 1 : -1;
                        for (std::size_t r = 0; r < d.ranks[j - 1]; ++r)
                            if (db(r, bj) != 0)
                                b(row0 + ai * d.ranks[j - 1] + r, col) += sign * db(r, bj);
                    }
                }
        }
        t.boundaries[n] = std::move(b);
    }
    return t;
}

HomologyResult homology(const ChainComplex& c) {
    HomologyResult h;
    if (c.ranks.empty()) return h;
    const std::size_t n = c.ranks.size();
    std::vector<std::size_t> rank_b(n + 1, 0);      // rank of boundary_k
    std::vector<std::vector<Int>> factors(n + 1);   // invariant factors of boundary_k
    for (std::size_t k = 1; k < n; ++k) {
        auto d = snf_diagonal(c.boundaries[k]);
        for (const Int& x : d)
            if (x != 0) {
                ++rank_b[k];
                factors[k].push_back(x);
            }
    }
    h.groups.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        long long betti = static_cast<long long>(c.ranks[k]) -
                          static_cast<long long>(rank_b[k]) -
                          static_cast<long long>(k + 1 <= n - 1 ? rank_b[k + 1] : 0);
        h.groups[k].betti = betti;
        if (k + 1 < n)
            for (const Int& x : factors[k + 1])
                if (x > 1) h.groups[k].torsion.push_back(x);
    }
    while (!h.groups.empty() && h.groups.back().betti == 0 && h.groups.back().torsion.empty())
        h.groups.pop_back();
    return h;
}

HomologyResult homology(const SimplicialComplex& k) { return homology(chain_complex(k)); }

SimplicialComplex cone(const SimplicialComplex& k, const SimplicialComplex& q,
                       const Vertex& apex) {
    if (!q.is_subcomplex_of(k)) throw std::invalid_argument("cone: q is not a subcomplex of k");
    auto vs = k.vertices();
    if (std::binary_search(vs.begin(), vs.end(), apex))
        throw std::invalid_argument("cone: apex collides with an existing vertex");
    std::vector<Face> maximal;
    for (const Face& f : k.maximal_faces()) maximal.push_back(f);
    maximal.push_back({apex});
    for (const Face& f : q.faces()) {
        Face g = f;
        g.push_back(apex);
        std::sort(g.begin(), g.end());
        maximal.push_back(g);
    }
    return SimplicialComplex::from_maximal_faces(maximal);
}

Vertex fresh_apex(const SimplicialComplex& k) {
    Vertex apex = "@apex";
    auto vs = k.vertices();
    while (std::binary_search(vs.begin(), vs.end(), apex)) apex += "'";
    return apex;
}

HomologyResult relative_homology(const SimplicialComplex& k, const SimplicialComplex& q) {
    HomologyResult h = homology(cone(k, q, fresh_apex(k)));
    if (h.groups.empty()) return h;  // cannot happen: the cone is nonempty
    h.groups[0].betti -= 1;          // H_0(cone) = H_0(k; q) + Z
    while (!h.groups.empty() && h.groups.back().betti == 0 && h.groups.back().torsion.empty())
        h.groups.pop_back();
    return h;
}

Vertex pair_label(const Vertex& a, const Vertex& b) { return "(" + a + "," + b + ")"; }

SimplicialComplex simplicial_product(const SimplicialComplex& k, const SimplicialComplex& q,
                                     std::size_t face_cap) {
    std::vector<Face> maximal;
    for (const Face& fk : k.maximal_faces())
        for (const Face& fq : q.maximal_faces()) {
            Face prod;
            for (const Vertex& a : fk)
                for (const Vertex& b : fq) prod.push_back(pair_label(a, b));
            maximal.push_back(prod);
        }
    return SimplicialComplex::from_maximal_faces(maximal, face_cap);
}

SimplicialComplex disjunctive_product(const SimplicialComplex& k, const SimplicialComplex& q,
                                      std::size_t face_cap) {
    std::vector<Face> maximal;
    auto vk = k.vertices();
    auto vq = q.vertices();
    for (const Face& fk : k.maximal_faces()) {
        Face prod;
        for (const Vertex& a : fk)
            for (const Vertex& b : vq) prod.push_back(pair_label(a, b));
        if (!prod.empty()) maximal.push_back(prod);
    }
    for (const Face& fq : q.maximal_faces()) {
        Face prod;
        for (const Vertex& a : vk)
            for (const Vertex& b : fq) prod.push_back(pair_label(a, b));
        if (!prod.empty()) maximal.push_back(prod);
    }
    return SimplicialComplex::from_maximal_faces(maximal, face_cap);
}

SimplicialComplex parse_complex_text(const std::string& text) {
    std::vector<Face> maximal;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        // strip comments and whitespace
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        Face f;
        std::string tok;
        std::istringstream ls(line);
        while (std::getline(ls, tok, ',')) {
            auto b = tok.find_first_not_of(" \t\r");
            auto e = tok.find_last_not_of(" \t\r");
            if (b == std::string::npos) continue;
            f.push_back(tok.substr(b, e - b + 1));
        }
        if (!f.empty()) maximal.push_back(f);
    }
    return SimplicialComplex::from_maximal_faces(maximal);
}

std::string maximal_faces_text(const SimplicialComplex& k) {
    std::ostringstream os;
    for (const Face& f : k.maximal_faces()) {
        for (std::size_t i = 0; i < f.size(); ++i) os << (i ? "," : "") << f[i];
        os << "\n";
    }
    return os.str();
}

}  // namespace modk0

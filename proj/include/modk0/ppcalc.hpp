#ifndef MODK0_PPCALC_HPP
#define MODK0_PPCALC_HPP

#include "modk0/k0algebra.hpp"
#include "modk0/linalg.hpp"
#include "modk0/simplicial.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

namespace modk0 {

using Point = std::vector<Rat>;

Point point_add(const Point& a, const Point& b);
Point point_sub(const Point& a, const Point& b);
Point point_neg(const Point& a);
std::string point_to_string(const Point& p);

enum class Card { Empty, One, Infinite };

struct IndexValue {
    enum Kind { Finite, Infinite, TooLarge } kind = Infinite;
    Int value;  // meaningful when Finite

    static IndexValue finite(Int v) { return {Finite, std::move(v)}; }
    static IndexValue infinite() { return {Infinite, 0}; }
    static IndexValue too_large() { return {TooLarge, 0}; }
    bool is_one() const { return kind == Finite && value == 1; }
};

/// Backend-owned canonical presentation; set equality is key equality.
struct PPSetData {
    std::size_t ambient = 0;
    bool empty = true;
    std::string key;
    virtual ~PPSetData() = default;
};

class PPSet {
public:
    PPSet() = default;
    explicit PPSet(std::shared_ptr<const PPSetData> d) : d_(std::move(d)) {}

    bool valid() const { return d_ != nullptr; }
    const PPSetData& data() const { return *d_; }
    const std::string& key() const { return d_->key; }
    std::size_t ambient() const { return d_->ambient; }
    bool is_empty() const { return d_->empty; }

    friend bool operator==(const PPSet& a, const PPSet& b) { return a.key() == b.key(); }
    friend bool operator!=(const PPSet& a, const PPSet& b) { return !(a == b); }
    friend bool operator<(const PPSet& a, const PPSet& b) { return a.key() < b.key(); }

private:
    std::shared_ptr<const PPSetData> d_;
};

class CalcError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Capability contract a concrete module theory implements. Stateless after
/// construction; all operations are pure.
class TheoryBackend {
public:
    virtual ~TheoryBackend() = default;

    virtual std::string name() const = 0;
    virtual bool is_T_aleph0() const = 0;

    virtual PPSet full_space(std::size_t n) const = 0;
    virtual PPSet singleton(const Point& p) const = 0;
    virtual PPSet meet(const PPSet& a, const PPSet& b) const = 0;
    virtual Card cardinality(const PPSet& p) const = 0;
    /// [P deg : P deg meet Q deg]
    virtual IndexValue index(const PPSet& p, const PPSet& q) const = 0;
    virtual PPSet translate(const PPSet& p, const Point& t) const = 0;
    virtual PPSet subgroup_part(const PPSet& p) const = 0;
    /// All cosets of h inside q; requires h a finite-index subgroup of q deg.
    virtual std::vector<PPSet> coset_decompose(const PPSet& q, const PPSet& h) const = 0;
    virtual std::string colour_key(const PPSet& p) const = 0;
    virtual std::string band_key(const PPSet& p) const = 0;
    virtual PPSet product(const PPSet& p, const PPSet& q) const = 0;
    virtual Point pick_point(const PPSet& p) const = 0;
    /// Deterministic point of p outside every avoid set, or nullopt when p is
    /// covered (possible only when finite indices exist).
    virtual std::optional<Point> pick_point_avoiding(const PPSet& p,
                                                     const std::vector<PPSet>& avoid) const = 0;
    virtual bool contains(const PPSet& p, const Point& x) const = 0;
    /// First `count` points of p in a fixed deterministic enumeration.
    virtual std::vector<Point> enumerate_points(const PPSet& p, std::size_t count) const = 0;
    /// Existential presentation: projection of {(x,y) : R x + S y + c = 0}
    /// onto the x coordinates.
    virtual PPSet pp_from_presentation(const RatMatrix& r, const RatMatrix& s,
                                       const std::vector<Rat>& c) const = 0;
    /// Image of p under x -> x * a + t (a invertible over the scalars).
    virtual PPSet linear_image(const PPSet& p, const RatMatrix& a, const Point& t) const = 0;
    virtual PPSet from_descriptor(const nlohmann::json& j) const = 0;
    /// Round-trippable descriptor of p (the workspace input format).
    virtual nlohmann::json descriptor(const PPSet& p) const = 0;

    virtual MonoidOps colour_monoid() const = 0;
    virtual std::vector<std::string> monoid_generators() const = 0;
    virtual std::string monoid_description() const = 0;
    virtual std::vector<IndexRelation> invariants_relations() const = 0;

    // derived comparisons
    bool is_subset(const PPSet& a, const PPSet& b) const;
    bool is_strict_superset(const PPSet& a, const PPSet& b) const;  // b strictly inside a
};

/// Finite set of pairwise incomparable nonempty pp-sets, canonically ordered.
struct Antichain {
    std::vector<PPSet> elements;

    bool empty() const { return elements.empty(); }
    std::size_t rank() const { return elements.size(); }
    bool operator==(const Antichain&) const = default;
    std::string to_string() const;
};

/// Cell bar(alpha) minus bar(beta) with beta strictly below alpha; a block
/// when the positive part is a single pp-set.
struct Cell {
    Antichain positive;
    Antichain negative;
    bool is_block() const { return positive.rank() == 1; }
    bool operator==(const Cell&) const = default;
};

/// Block: closure pp-set minus the union of the negative antichain.
struct Block {
    PPSet bar;
    Antichain negative;
};

/// Finite meet-closed family with the positive/negative marking of a
/// definable set: positive holds F with Core(F) inside the set.
struct Nest {
    std::vector<PPSet> elements;
    std::vector<PPSet> positive;
    std::vector<PPSet> negative;
};

struct Tower {
    std::vector<Cell> cells;  // outermost first
    std::size_t height() const { return cells.size(); }
    bool operator==(const Tower&) const = default;
};

struct PrecChain {
    std::vector<Antichain> chain;  // chain[i+1] strictly below chain[i]
    std::size_t height() const { return (chain.size() + 1) / 2; }
    bool operator==(const PrecChain&) const = default;
};

PrecChain tower_chain(const Tower& t);
Tower chain_tower(const PrecChain& c);

struct ConnectivityDigraph {
    std::vector<PPSet> nodes;  // the positive part of a nest
    std::vector<std::pair<std::size_t, std::size_t>> arcs;  // covering pairs, small -> large
    std::size_t weak_components() const;
};

/// Definable-set expression over named pp-sets.
class Expr {
public:
    enum class Op { Atom, Literal, Union, Inter, Diff, Disjoint, Product };

    static Expr atom(std::string name);
    static Expr literal(std::vector<Point> points);
    static Expr combine(Op op, Expr lhs, Expr rhs);

    Op op() const { return n_->op; }
    const std::string& name() const { return n_->name; }
    const std::vector<Point>& points() const { return n_->points; }
    const Expr& lhs() const { return *n_->lhs; }
    const Expr& rhs() const { return *n_->rhs; }
    std::string to_string() const;

private:
    struct Node {
        Op op;
        std::string name;
        std::vector<Point> points;
        std::shared_ptr<Expr> lhs, rhs;
    };
    std::shared_ptr<const Node> n_;
};

class ParseError : public CalcError {
public:
    ParseError(const std::string& msg, int line, int col)
        : CalcError(msg + " at line " + std::to_string(line) + ", column " +
                    std::to_string(col)),
          line(line),
          col(col) {}
    int line, col;
};

/// Grammar: names bind pp-sets; `&` meet, `|` union, `\` difference,
/// `+` checked disjoint union, `*` cartesian product; `{p1,...}` finite
/// point sets with points written as rationals or tuples `(a,b)`.
Expr parse_expr(const std::string& text);

struct LambdaResult {
    std::size_t value = 0;
    bool exact = false;
};

struct MinkowskiWitness {
    Point x, y, z;  // x + y - z = d, all three inside the block
};

/// Coloured global characteristic of a definable set: raw integer per colour
/// key, and the same reduced modulo the backend's invariants relations.
struct EvalImage {
    MonoidRingElement raw;
    MonoidRingElement reduced;
    bool operator==(const EvalImage& o) const { return reduced == o.reduced; }
    std::string to_string(const MonoidOps& ops) const { return reduced.to_string(ops); }
};

struct CalcOptions {
    std::size_t nest_cap = 512;
    std::size_t lambda_budget_rounds = 1;
    std::size_t lambda_extra_cap = 64;
};

/// The backend-generic definable-set calculus. Holds the backend, the named
/// pp-sets an expression may reference, and desk-scale budgets.
class Calculus {
public:
    Calculus(const TheoryBackend& backend, std::map<std::string, PPSet> sets = {},
             CalcOptions opt = {});

    const TheoryBackend& backend() const { return be_; }
    const std::map<std::string, PPSet>& sets() const { return sets_; }

    // expression semantics
    std::size_t ambient(const Expr& e) const;
    bool point_in(const Expr& e, const Point& p) const;
    std::vector<PPSet> atoms(const Expr& e) const;

    // the definable-set calculus
    Antichain canonical_antichain(std::vector<PPSet> sets) const;
    std::vector<PPSet> meet_closure(std::vector<PPSet> sets) const;
    std::vector<std::vector<PPSet>> discrete_form(
        const std::vector<std::vector<PPSet>>& family) const;
    Nest build_nest(const std::vector<PPSet>& sets) const;
    void mark_nest(Nest& nest, const Expr& d) const;

    struct Analysis {
        std::vector<PPSet> nest;       // discretized meet closure of the atoms
        std::vector<PPSet> positive;   // F with a nonempty core inside D
        std::vector<Block> blocks;     // the canonical partition
        std::map<std::string, Point> core_point;  // key -> witness point of the core
    };
    Analysis analyze(const Expr& d) const;
    Analysis analyze_with(std::vector<PPSet> extra, const Expr& d) const;

    std::vector<Block> partition_definable(const Expr& d) const;

    SimplicialComplex local_complex(const std::vector<PPSet>& alpha, const PPSet& p) const;
    long long local_characteristic(const std::vector<PPSet>& alpha, const PPSet& p) const;
    long long local_characteristic(const Block& b, const PPSet& p) const;
    long long local_characteristic(const Cell& c, const PPSet& p) const;

    std::vector<PPSet> singular_set(const std::vector<Block>& blocks) const;
    EvalImage evaluate(const Expr& d) const;
    EvalImage evaluate_blocks(const std::vector<PPSet>& nest,
                              const std::vector<Block>& blocks) const;

    K0Presentation k0() const;

    // operations available under T = T^aleph0
    Antichain closure(const Expr& d) const;
    Tower cell_decompose(const Expr& d) const;
    Expr tower_union_expr(const Tower& t, std::map<std::string, PPSet>& names_out) const;
    ConnectivityDigraph connectivity_digraph(const std::vector<PPSet>& nest,
                                             const std::vector<PPSet>& positive) const;
    LambdaResult lambda(const Expr& d) const;
    MinkowskiWitness minkowski_witness(const Block& b, const Point& d) const;
    bool in_block(const Block& b, const Point& p) const;
    std::vector<Point> sample_block_points(const Block& b, std::size_t count) const;
    std::function<Point(const Point&)> extend_linear(
        const Block& b, const std::function<Point(const Point&)>& f) const;

private:
    const TheoryBackend& be_;
    std::map<std::string, PPSet> sets_;
    CalcOptions opt_;

    void require_t_aleph0(const char* op) const;
    void check_compatible(const std::vector<PPSet>& alpha, const PPSet& p) const;
    Analysis analyze_bare(std::vector<PPSet> extra, const Expr& d) const;
    void check_disjoint_nodes(const Expr& d, const Analysis* unused) const;
    long long chi_local(const std::vector<PPSet>& vertices, const PPSet& p,
                        std::vector<Face>* faces_out) const;
};

}  // namespace modk0

#endif

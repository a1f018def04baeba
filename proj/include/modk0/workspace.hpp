#ifndef MODK0_WORKSPACE_HPP
#define MODK0_WORKSPACE_HPP

#include "modk0/checks.hpp"
#include "modk0/ppcalc.hpp"

#include <memory>
#include <string>

#include "json.hpp"

namespace modk0 {

/// Batch-run inputs: backend choice, named pp-sets, named expressions and
/// the property-suite configuration.
class Workspace {
public:
    Workspace() { set_backend("affine-q"); }

    static Workspace from_json(const nlohmann::json& j);
    static Workspace from_file(const std::string& path);

    /// "affine-q", "integer-z", "zp:<p>" or "zp-sum:<p>,<k>".
    void set_backend(const std::string& spec);
    const std::string& backend_spec() const { return spec_; }

    /// Symbolic backends carry presentation data only.
    bool symbolic() const { return be_ == nullptr; }
    const TheoryBackend& backend() const;
    Calculus calculus() const;

    K0Presentation k0() const;

    const std::map<std::string, Expr>& exprs() const { return exprs_; }
    const std::map<std::string, PPSet>& sets() const { return sets_; }
    checks::SuiteConfig& suite() { return suite_; }
    const checks::SuiteConfig& suite() const { return suite_; }

private:
    std::string spec_;
    std::shared_ptr<const TheoryBackend> be_;  // null for symbolic families
    long p_ = 0, k_ = 1;
    std::map<std::string, PPSet> sets_;
    std::map<std::string, Expr> exprs_;
    checks::SuiteConfig suite_;
};

struct Report {
    std::string text;
    nlohmann::json json;
    bool ok = true;
};

/// command is one of: k0 | ev <name> | decompose <name> | lambda <name> |
/// homology <file> | check <suite|all>
Report run_command(const Workspace& ws, const std::string& command,
                   const std::vector<std::string>& args);

}  // namespace modk0

#endif

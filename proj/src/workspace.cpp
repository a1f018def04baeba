#include "modk0/workspace.hpp"

#include "modk0/affine_backend.hpp"
#include "modk0/lattice_backend.hpp"
#include "modk0/simplicial.hpp"

#include <fstream>
#include <sstream>

namespace modk0 {

void Workspace::set_backend(const std::string& spec) {
    spec_ = spec;
    be_.reset();
    p_ = 0;
    k_ = 1;
    if (spec == "affine-q") {
        be_ = std::make_shared<AffineBackend>();
    } else if (spec == "integer-z") {
        be_ = std::make_shared<LatticeBackend>();
    } else if (spec.rfind("zp:", 0) == 0) {
        p_ = std::stol(spec.substr(3));
        if (p_ < 2) throw CalcError("backend zp: p must be at least 2");
    } else if (spec.rfind("zp-sum:", 0) == 0) {
        std::string rest = spec.substr(7);
        auto comma = rest.find(',');
        if (comma == std::string::npos) throw CalcError("backend zp-sum: expected <p>,<k>");
        p_ = std::stol(rest.substr(0, comma));
        k_ = std::stol(rest.substr(comma + 1));
        if (p_ < 2 || k_ < 1) throw CalcError("backend zp-sum: bad parameters");
    } else {
        throw CalcError("unknown backend: " + spec);
    }
}

const TheoryBackend& Workspace::backend() const {
    if (!be_) throw CalcError("backend " + spec_ + " carries presentation data only");
    return *be_;
}

Calculus Workspace::calculus() const {
    CalcOptions opt;
    opt.lambda_budget_rounds = suite_.budget;
    return Calculus(backend(), sets_, opt);
}

K0Presentation Workspace::k0() const {
    if (be_) return Calculus(*be_).k0();
    return k_ == 1 ? zp_presentation(p_) : zp_sum_presentation(p_, k_);
}

Workspace Workspace::from_json(const nlohmann::json& j) {
    Workspace ws;
    if (j.contains("backend")) ws.set_backend(j.at("backend").get<std::string>());
    if (j.contains("sets")) {
        const TheoryBackend& be = ws.backend();
        for (const auto& [name, desc] : j.at("sets").items())
            ws.sets_.emplace(name, be.from_descriptor(desc));
    }
    if (j.contains("exprs"))
        for (const auto& [name, src] : j.at("exprs").items())
            ws.exprs_.emplace(name, parse_expr(src.get<std::string>()));
    if (j.contains("suite")) {
        const auto& s = j.at("suite");
        if (s.contains("seed")) ws.suite_.seed = s.at("seed").get<std::uint64_t>();
        if (s.contains("cases")) ws.suite_.cases = s.at("cases").get<std::size_t>();
        if (s.contains("budget")) ws.suite_.budget = s.at("budget").get<std::size_t>();
    }
    // eagerly validate that every expression resolves
    if (!ws.exprs_.empty()) {
        Calculus c = ws.calculus();
        for (const auto& [name, e] : ws.exprs_) c.ambient(e);
    }
    return ws;
}

Workspace Workspace::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CalcError("cannot open workspace file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw CalcError("workspace parse error in " + path + ": " + e.what());
    }
    return from_json(j);
}

namespace {

const Expr& named_expr(const Workspace& ws, const std::string& name) {
    auto it = ws.exprs().find(name);
    if (it == ws.exprs().end()) throw CalcError("unknown expression name: " + name);
    return it->second;
}

nlohmann::json mre_json(const MonoidRingElement& e, const MonoidOps& ops) {
    nlohmann::json j = nlohmann::json::object();
    for (const auto& [key, c] : e.terms()) j[ops.pretty(key)] = c.convert_to<long long>();
    return j;
}

nlohmann::json antichain_json(const TheoryBackend& be, const Antichain& a) {
    nlohmann::json arr = nlohmann::json::array();
    for (const PPSet& p : a.elements) arr.push_back(be.descriptor(p));
    return arr;
}

Report do_k0(const Workspace& ws) {
    Report rep;
    K0Presentation pres = ws.k0();
    rep.text = "K0 = " + pres.render_text() + "\n";
    rep.json["command"] = "k0";
    rep.json["backend"] = ws.backend_spec();
    rep.json["presentation"] = pres.render_json();
    return rep;
}

Report do_ev(const Workspace& ws, const std::string& name) {
    Report rep;
    Calculus c = ws.calculus();
    EvalImage img = c.evaluate(named_expr(ws, name));
    MonoidOps ops = ws.backend().colour_monoid();
    rep.text = "ev(" + name + ") = " + img.to_string(ops) + "\n";
    rep.json["command"] = "ev";
    rep.json["expr"] = name;
    rep.json["raw"] = mre_json(img.raw, ops);
    rep.json["reduced"] = mre_json(img.reduced, ops);
    rep.json["pretty"] = img.to_string(ops);
    return rep;
}

Report do_decompose(const Workspace& ws, const std::string& name) {
    Report rep;
    Calculus c = ws.calculus();
    const TheoryBackend& be = ws.backend();
    Tower t = c.cell_decompose(named_expr(ws, name));
    std::ostringstream os;
    os << "tower height " << t.height() << "\n";
    nlohmann::json cells = nlohmann::json::array();
    for (std::size_t i = 0; i < t.cells.size(); ++i) {
        const Cell& cell = t.cells[i];
        os << "cell " << (i + 1) << ": P=" << antichain_json(be, cell.positive).dump()
           << " N=" << antichain_json(be, cell.negative).dump() << "\n";
        nlohmann::json jc;
        jc["positive"] = antichain_json(be, cell.positive);
        jc["negative"] = antichain_json(be, cell.negative);
        cells.push_back(jc);
    }
    PrecChain chain = tower_chain(t);
    os << "chain length " << chain.chain.size() << ", height " << chain.height() << "\n";
    rep.text = os.str();
    rep.json["command"] = "decompose";
    rep.json["expr"] = name;
    rep.json["height"] = t.height();
    rep.json["cells"] = cells;
    rep.json["chain_length"] = chain.chain.size();
    return rep;
}

Report do_lambda(const Workspace& ws, const std::string& name) {
    Report rep;
    Calculus c = ws.calculus();
    LambdaResult lr = c.lambda(named_expr(ws, name));
    rep.text = "lambda(" + name + ") = " + std::to_string(lr.value) +
               (lr.exact ? " (exact)" : " (upper bound)") + "\n";
    rep.json["command"] = "lambda";
    rep.json["expr"] = name;
    rep.json["value"] = lr.value;
    rep.json["exact"] = lr.exact;
    return rep;
}

Report do_homology(const std::string& path) {
    Report rep;
    std::ifstream in(path);
    if (!in) throw CalcError("cannot open complex file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    SimplicialComplex k = parse_complex_text(buf.str());
    HomologyResult h = homology(k);
    rep.text = h.to_string() + "\n";
    rep.json["command"] = "homology";
    rep.json["file"] = path;
    rep.json["euler"] = euler_char(k);
    rep.json["pretty"] = h.to_string();
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& g : h.groups) {
        nlohmann::json jg;
        jg["betti"] = g.betti;
        nlohmann::json tor = nlohmann::json::array();
        for (const Int& x : g.torsion) tor.push_back(x.convert_to<long long>());
        jg["torsion"] = tor;
        groups.push_back(jg);
    }
    rep.json["groups"] = groups;
    return rep;
}

Report do_check(const Workspace& ws, const std::string& suite) {
    Report rep;
    std::vector<checks::SuiteResult> results;
    if (suite == "all")
        results = checks::run_all(ws.suite());
    else
        results.push_back(checks::run_suite(suite, ws.suite()));
    std::ostringstream os;
    nlohmann::json jr = nlohmann::json::array();
    std::size_t suites_failed = 0;
    for (const auto& r : results) {
        os << (r.passed() ? "PASS" : "FAIL") << " " << r.name << ": "
           << (r.cases - r.failures) << "/" << r.cases << " cases\n";
        if (!r.passed()) {
            ++suites_failed;
            for (const std::string& dump : r.failure_dumps)
                os << "  failing instance: " << dump << "\n";
        }
        nlohmann::json js;
        js["name"] = r.name;
        js["cases"] = r.cases;
        js["failures"] = r.failures;
        js["dumps"] = r.failure_dumps;
        jr.push_back(js);
    }
    os << "seed " << ws.suite().seed << ", " << (results.size() - suites_failed) << "/"
       << results.size() << " suites passed\n";
    rep.text = os.str();
    rep.json["command"] = "check";
    rep.json["seed"] = ws.suite().seed;
    rep.json["suites"] = jr;
    rep.ok = suites_failed == 0;
    return rep;
}

}  // namespace

Report run_command(const Workspace& ws, const std::string& command,
                   const std::vector<std::string>& args) {
    auto need_arg = [&](const char* what) -> const std::string& {
        if (args.empty()) throw CalcError(std::string(command) + ": missing " + what);
        return args.front();
    };
    if (command == "k0") return do_k0(ws);
    if (command == "ev") return do_ev(ws, need_arg("expression name"));
    if (command == "decompose") return do_decompose(ws, need_arg("expression name"));
    if (command == "lambda") return do_lambda(ws, need_arg("expression name"));
    if (command == "homology") return do_homology(need_arg("complex file"));
    if (command == "check") return do_check(ws, need_arg("suite name"));
    throw CalcError("unknown command: " + command);
}

}  // namespace modk0

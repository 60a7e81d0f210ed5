#include "hexflow/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hexflow/curvature.hpp"
#include "hexflow/errors.hpp"
#include "hexflow/flows.hpp"
#include "hexflow/hexgeom.hpp"
#include "hexflow/mesh.hpp"
#include "hexflow/solver.hpp"

namespace hexflow::cli
{

namespace
{

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

LogLevel level_from_env()
{
    const char* raw = std::getenv("HEXFLOW_LOG");
    if (raw == nullptr) return LogLevel::Info;
    const std::string v(raw);
    if (v == "error") return LogLevel::Error;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Info;
}

class Logger
{
public:
    explicit Logger(std::ostream& sink) : sink_(sink), level_(level_from_env()) {}

    void error(const std::string& msg) const { emit(LogLevel::Error, "error", msg); }
    void info(const std::string& msg) const { emit(LogLevel::Info, "info", msg); }
    void debug(const std::string& msg) const { emit(LogLevel::Debug, "debug", msg); }

private:
    void emit(LogLevel at, const char* tag, const std::string& msg) const
    {
        if (static_cast<int>(at) <= static_cast<int>(level_)) {
            sink_ << "hexflow: " << tag << ": " << msg << '\n';
        }
    }

    std::ostream& sink_;
    LogLevel level_;
};

struct Options {
    std::string mesh;
    std::string state;
    std::vector<double> radii;
    std::string target;
    std::string kind;
    std::optional<double> s;
    double tol = 1e-10;
    double dt0 = 0.01;
    std::size_t max_steps = 200000;
    std::size_t max_iter = 100;
    std::size_t trace_every = 10;
    std::string trace;
    std::string out;
};

template <class Range>
void write_array(std::ostream& os, const char* key, const Range& values, int digits)
{
    os << '"' << key << "\": [";
    std::ostringstream num;
    num << std::setprecision(digits);
    bool first = true;
    for (double v : values) {
        num.str("");
        num << v;
        os << (first ? "" : ", ") << num.str();
        first = false;
    }
    os << ']';
}

std::string state_document(const ConformalState& s, const CurvatureVector& k)
{
    std::ostringstream os;
    os << "{";
    write_array(os, "u", s.u(), 17);
    os << ", ";
    write_array(os, "K", std::vector<double>(k.begin(), k.end()), 17);
    os << "}\n";
    return os.str();
}

void write_text(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << text)) {
        throw Error("cannot write " + path);
    }
}

Eigen::VectorXd to_eigen(const std::vector<double>& v)
{
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<double> initial_factors(const Options& opt)
{
    if (!opt.state.empty()) {
        return load_state(opt.state);
    }
    std::vector<double> u;
    for (std::size_t i = 0; i < opt.radii.size(); ++i) {
        try {
            u.push_back(to_conformal(Radius(opt.radii[i])).value());
        }
        catch (const DomainError& e) {
            throw MeshError(
                MeshError::Kind::Schema, "--radii entry " + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return u;
}

bool has_initial(const Options& opt) { return !opt.state.empty() || !opt.radii.empty(); }

Eigen::VectorXd load_checked_target(const Options& opt, const IdealTriangulation& m)
{
    const auto k = load_target(opt.target);
    if (k.size() != m.boundary_count()) {
        throw MeshError(
            MeshError::Kind::Schema, "target has " + std::to_string(k.size()) +
                                         " entries, mesh has " +
                                         std::to_string(m.boundary_count()) +
                                         " boundary components");
    }
    return to_eigen(k);
}

int cmd_check(const Options& opt, std::ostream& out)
{
    const auto m = load_mesh(opt.mesh);
    double lo = m.edges().front().phi;
    double hi = lo;
    double sum = 0.0;
    for (const Edge& e : m.edges()) {
        lo = std::min(lo, e.phi);
        hi = std::max(hi, e.phi);
        sum += e.phi;
    }
    out << "N=" << m.boundary_count() << " E=" << m.edges().size() << " F=" << m.faces().size()
        << " chi=" << euler_characteristic(m) << '\n';
    out << std::setprecision(15) << "phi min=" << lo << " max=" << hi
        << " mean=" << sum / static_cast<double>(m.edges().size()) << '\n';
    return kSuccess;
}

int cmd_curvature(const Options& opt, std::ostream& out)
{
    const auto m = load_mesh(opt.mesh);
    const auto s = validate_state(m, initial_factors(opt));
    const auto k = curvature(m, s);
    out << "{";
    write_array(out, "K", std::vector<double>(k.begin(), k.end()), 15);
    out << "}\n";
    return kSuccess;
}

FlowKind parse_kind(const Options& opt)
{
    if (opt.kind == "frac") {
        if (!opt.s) throw CLI::ValidationError("--kind frac requires --s");
        return Fractional{*opt.s};
    }
    if (opt.s) throw CLI::ValidationError("--s is only valid with --kind frac");
    if (opt.kind == "ricci") return Ricci{};
    return Calabi{};
}

int cmd_flow(const Options& opt, std::ostream& out, const Logger& log)
{
    FlowConfig cfg;
    cfg.kind = parse_kind(opt);
    const auto m = load_mesh(opt.mesh);
    cfg.kbar = load_checked_target(opt, m);
    cfg.tol = opt.tol;
    cfg.dt0 = opt.dt0;
    cfg.max_steps = opt.max_steps;
    cfg.trace_every = opt.trace_every;
    cfg.validate(m.boundary_count());
    const auto s0 = validate_state(m, initial_factors(opt));

    log.debug("integrating " + to_string(cfg.kind) + " flow");
    const auto result = integrate(m, s0, cfg);

    if (!opt.trace.empty()) {
        std::ostringstream csv;
        result.trace.write_csv(csv);
        write_text(opt.trace, csv.str());
    }
    const auto doc = state_document(result.state, curvature(m, result.state));
    const bool ok = result.status == FlowStatus::Converged;
    std::ostringstream summary;
    summary << (ok ? "converged" : "budget exhausted") << " steps=" << result.steps
            << " rejected=" << result.rejected << std::setprecision(6) << " t=" << result.t
            << " residual_inf=" << result.residual_inf;
    if (opt.out.empty()) {
        out << doc;
        log.info(summary.str());
    }
    else {
        write_text(opt.out, doc);
        out << summary.str() << '\n';
    }
    if (!ok) {
        log.error("flow did not reach tol " + std::to_string(opt.tol) + " within the step budget");
        return kNotConverged;
    }
    return kSuccess;
}

int cmd_solve(const Options& opt, std::ostream& out, const Logger& log)
{
    const auto m = load_mesh(opt.mesh);
    const auto kbar = load_checked_target(opt, m);
    const auto s0 = has_initial(opt) ? validate_state(m, initial_factors(opt)) : default_start(m);
    const auto result = newton_solve(m, s0, kbar, opt.tol, opt.max_iter);

    const auto doc = state_document(result.u_star, curvature(m, result.u_star));
    std::ostringstream summary;
    summary << (result.converged ? "converged" : "not converged")
            << " iterations=" << result.iterations << std::setprecision(6)
            << " residual_inf=" << result.residual_inf;
    if (opt.out.empty()) {
        out << doc;
        log.info(summary.str());
    }
    else {
        write_text(opt.out, doc);
        out << summary.str() << '\n';
    }
    if (!result.converged) {
        log.error("Newton iteration budget exhausted; a Ricci flow run can provide a warm start");
        return kNotConverged;
    }
    return kSuccess;
}

void report_state_error(const StateError& e, const Logger& log)
{
    log.error("inadmissible state");
    for (const auto& v : e.violations()) {
        std::ostringstream os;
        os << std::setprecision(17);
        switch (v.kind) {
            case StateViolation::Kind::Length:
                os << "state has " << v.index << " entries, wrong for this mesh";
                break;
            case StateViolation::Kind::Edge:
                os << "edge " << v.index << ": u_i + u_j + phi = " << v.slack << " (must be > 0)";
                break;
            default:
                os << "u[" << v.index + 1 << "] = " << v.slack << " (must be < 0)";
        }
        log.error(os.str());
    }
}

template <class Body>
int guarded(const Logger& log, Body&& body)
{
    try {
        return body();
    }
    catch (const StateError& e) {
        report_state_error(e, log);
        const auto& v = e.violations();
        const bool malformed = !v.empty() && v.front().kind == StateViolation::Kind::Length;
        return malformed ? kInvalidInput : kInadmissibleState;
    }
    catch (const InadmissibleFaceError& e) {
        log.error(e.what());
        return kInadmissibleState;
    }
    catch (const MeshError& e) {
        log.error(e.what());
        return kInvalidInput;
    }
    catch (const NoDescentError& e) {
        log.error(e.what());
        log.error("hint: run `hexflow flow --kind ricci` first and pass its result via --state");
        return kNotConverged;
    }
    catch (const StepCollapseError& e) {
        log.error(e.what());
        return kNotConverged;
    }
    catch (const NumericError& e) {
        log.error(e.what());
        return kNotConverged;
    }
    catch (const CLI::Error& e) {
        log.error(e.what());
        return kInvalidInput;
    }
    catch (const Error& e) {
        log.error(e.what());
        return kInvalidInput;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    const Logger log(err);
    Options opt;

    CLI::App app{"Generalized circle packings on ideally triangulated surfaces with boundary"};
    app.name("hexflow");
    app.require_subcommand(1);

    auto add_state = [&](CLI::App* sub, bool required) {
        auto* state = sub->add_option("--state", opt.state, "State file {\"u\": [...]} or {\"r\": [...]}")
                           ->check(CLI::ExistingFile);
        auto* radii = sub->add_option("--radii", opt.radii, "Inline radii, comma separated")
                          ->delimiter(',');
        state->excludes(radii);
        radii->excludes(state);
        if (required) {
            sub->callback([&, sub] {
                if (opt.state.empty() && opt.radii.empty()) {
                    throw CLI::RequiredError(sub->get_name() + " needs --state or --radii");
                }
            });
        }
    };

    auto* check = app.add_subcommand("check", "Validate a mesh and print its statistics");
    check->add_option("mesh", opt.mesh, "Mesh file")->required();

    auto* curv = app.add_subcommand("curvature", "Print the boundary lengths K of a state");
    curv->add_option("mesh", opt.mesh, "Mesh file")->required();
    add_state(curv, true);

    auto* flow = app.add_subcommand("flow", "Integrate a curvature flow toward a target");
    flow->add_option("mesh", opt.mesh, "Mesh file")->required();
    add_state(flow, true);
    flow->add_option("--target", opt.target, "Target file {\"K\": [...]}")->required();
    flow->add_option("--kind", opt.kind, "Flow kind")
        ->required()
        ->check(CLI::IsMember({"ricci", "calabi", "frac"}));
    flow->add_option("--s", opt.s, "Fractional order for --kind frac");
    flow->add_option("--tol", opt.tol, "Stop when max|K - target| < tol")->capture_default_str();
    flow->add_option("--max-steps", opt.max_steps, "Accepted-step budget")->capture_default_str();
    flow->add_option("--dt0", opt.dt0, "Initial time step")->capture_default_str();
    flow->add_option("--trace-every", opt.trace_every, "Trace sampling stride")
        ->capture_default_str();
    flow->add_option("--trace", opt.trace, "CSV trace output");
    flow->add_option("--out", opt.out, "Final state output");

    auto* solve = app.add_subcommand("solve", "Newton solve for prescribed boundary lengths");
    solve->add_option("mesh", opt.mesh, "Mesh file")->required();
    solve->add_option("--target", opt.target, "Target file {\"K\": [...]}")->required();
    add_state(solve, false);
    solve->add_option("--tol", opt.tol, "Stop when max|K - target| < tol")->capture_default_str();
    solve->add_option("--max-iter", opt.max_iter, "Newton iteration budget")->capture_default_str();
    solve->add_option("--out", opt.out, "Solution output");

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kInvalidInput;
    }

    return guarded(log, [&] {
        log.debug("mesh " + opt.mesh);
        if (*check) return cmd_check(opt, out);
        if (*curv) return cmd_curvature(opt, out);
        if (*flow) return cmd_flow(opt, out, log);
        return cmd_solve(opt, out, log);
    });
}

}  // namespace hexflow::cli

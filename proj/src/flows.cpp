#include "hexflow/flows.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "hexflow/errors.hpp"

namespace hexflow
{

namespace
{

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool needs_laplacian(const FlowKind& kind) { return !std::holds_alternative<Ricci>(kind); }

bool enforces_monotone_energy(const FlowKind& kind)
{
    return !std::holds_alternative<Fractional>(kind);
}

Eigen::VectorXd rhs_from(
    const FlowKind& kind, const CurvatureVector& k, const LaplacianMatrix* delta,
    const Eigen::VectorXd& kbar)
{
    const Eigen::VectorXd residual = k - kbar;
    return std::visit(
        overloaded{
            [&](const Ricci&) -> Eigen::VectorXd { return residual; },
            [&](const Calabi&) -> Eigen::VectorXd { return -(*delta * residual); },
            [&](const Fractional& f) -> Eigen::VectorXd {
                return -(fractional_power(*delta, f.s) * residual);
            }},
        kind);
}

// Everything the integrator needs at one admissible point.
struct Sample {
    ConformalState state;
    CurvatureVector k;
    Eigen::VectorXd velocity;
    double residual_inf;
    double energy;
};

class Stepper
{
public:
    Stepper(const IdealTriangulation& m, const FlowConfig& cfg) : mesh_(m), cfg_(cfg) {}

    Sample sample(const ConformalState& s) const
    {
        CurvatureVector k;
        Eigen::VectorXd v;
        if (needs_laplacian(cfg_.kind)) {
            auto kd = curvature_and_laplacian(mesh_, s);
            v = rhs_from(cfg_.kind, kd.k, &kd.delta, cfg_.kbar);
            k = std::move(kd.k);
        }
        else {
            k = curvature(mesh_, s);
            v = rhs_from(cfg_.kind, k, nullptr, cfg_.kbar);
        }
        const double res = (k - cfg_.kbar).lpNorm<Eigen::Infinity>();
        const double energy = calabi_energy(k, cfg_.kbar);
        return {s, std::move(k), std::move(v), res, energy};
    }

    // Sample at raw factors, or nothing when they leave the admissible space.
    std::optional<Sample> try_sample(const Eigen::VectorXd& u) const
    {
        try {
            return sample(validate_state(mesh_, std::vector<double>(u.begin(), u.end())));
        }
        catch (const StateError&) {
            return std::nullopt;
        }
        catch (const InadmissibleFaceError&) {
            return std::nullopt;
        }
        catch (const DomainError&) {
            return std::nullopt;
        }
    }

    // One classical RK4 step with the first stage supplied.
    std::optional<Eigen::VectorXd> rk4(
        const Eigen::VectorXd& u, const Eigen::VectorXd& k1, double h) const
    {
        const auto s2 = try_sample(u + 0.5 * h * k1);
        if (!s2) return std::nullopt;
        const auto s3 = try_sample(u + 0.5 * h * s2->velocity);
        if (!s3) return std::nullopt;
        const auto s4 = try_sample(u + h * s3->velocity);
        if (!s4) return std::nullopt;
        return u + (h / 6.0) * (k1 + 2.0 * s2->velocity + 2.0 * s3->velocity + s4->velocity);
    }

    // Step doubling: accept the two-half-step result if it agrees with the full step.
    std::optional<Sample> propose(const Sample& from, double dt) const
    {
        const Eigen::Map<const Eigen::VectorXd> u(
            from.state.u().data(), static_cast<Eigen::Index>(from.state.size()));
        const Eigen::VectorXd u0 = u;
        const auto full = rk4(u0, from.velocity, dt);
        if (!full) return std::nullopt;
        const auto half = rk4(u0, from.velocity, 0.5 * dt);
        if (!half) return std::nullopt;
        const auto mid = try_sample(*half);
        if (!mid) return std::nullopt;
        const auto fine = rk4(*half, mid->velocity, 0.5 * dt);
        if (!fine) return std::nullopt;
        if ((*fine - *full).lpNorm<Eigen::Infinity>() > kStepErrorTol) return std::nullopt;
        auto next = try_sample(*fine);
        if (!next) return std::nullopt;
        if (enforces_monotone_energy(cfg_.kind) && next->energy > from.energy + kEnergySlack) {
            return std::nullopt;
        }
        return next;
    }

private:
    const IdealTriangulation& mesh_;
    const FlowConfig& cfg_;
};

TraceRow make_row(
    const IdealTriangulation& m, const Sample& s, std::size_t step, double t, double dt,
    double potential)
{
    const auto u = s.state.u();
    return {step,
            t,
            dt,
            s.residual_inf,
            s.energy,
            potential,
            min_edge_length(m, s.state),
            *std::max_element(u.begin(), u.end())};
}

}  // namespace

std::string to_string(const FlowKind& kind)
{
    return std::visit(
        overloaded{
            [](const Ricci&) { return std::string("ricci"); },
            [](const Calabi&) { return std::string("calabi"); },
            [](const Fractional& f) {
                std::ostringstream os;
                os << "frac(s=" << f.s << ")";
                return os.str();
            }},
        kind);
}

void FlowConfig::validate(std::size_t n) const
{
    if (static_cast<std::size_t>(kbar.size()) != n) {
        throw DomainError(
            "target has " + std::to_string(kbar.size()) + " entries, mesh has " +
            std::to_string(n) + " boundary components");
    }
    for (Eigen::Index i = 0; i < kbar.size(); ++i) {
        if (!std::isfinite(kbar[i]) || kbar[i] <= 0.0) {
            throw DomainError("prescribed boundary lengths must be positive and finite");
        }
    }
    if (!(dt0 > 0.0) || !std::isfinite(dt0)) throw DomainError("dt0 must be positive");
    if (!(tol > 0.0) || !std::isfinite(tol)) throw DomainError("tol must be positive");
    if (max_steps < 1) throw DomainError("max_steps must be at least 1");
    if (trace_every < 1) throw DomainError("trace_every must be at least 1");
    if (const auto* f = std::get_if<Fractional>(&kind); f && !std::isfinite(f->s)) {
        throw DomainError("fractional order s must be finite");
    }
}

void FlowTrace::write_csv(std::ostream& os) const
{
    const auto old = os.precision(17);
    os << kCsvHeader << '\n';
    for (const auto& r : rows) {
        os << r.step << ',' << r.t << ',' << r.dt << ',' << r.residual_inf << ','
           << r.calabi_energy << ',' << r.ricci_potential_delta << ',' << r.min_edge_length
           << ',' << r.max_u << '\n';
    }
    os.precision(old);
}

Eigen::MatrixXd fractional_power(const Eigen::MatrixXd& a, double s)
{
    if (a.rows() != a.cols()) {
        throw NumericError("fractional power of a non-square matrix");
    }
    if (!std::isfinite(s)) {
        throw DomainError("fractional order s must be finite");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(-a);
    if (eig.info() != Eigen::Success) {
        throw NumericError("symmetric eigensolver did not converge");
    }
    const Eigen::VectorXd& lambda = eig.eigenvalues();
    if (lambda.size() > 0 && !(lambda.minCoeff() > 0.0)) {
        std::ostringstream os;
        os.precision(17);
        os << "matrix is not negative definite (largest eigenvalue " << -lambda.minCoeff() << ")";
        throw NumericError(os.str());
    }
    if (s == 1.0) return a;
    if (s == 0.0) return -Eigen::MatrixXd::Identity(a.rows(), a.cols());
    const Eigen::VectorXd powered = lambda.array().pow(s).matrix();
    const Eigen::MatrixXd& p = eig.eigenvectors();
    return -(p * powered.asDiagonal() * p.transpose());
}

Eigen::VectorXd rhs(const IdealTriangulation& m, const ConformalState& s, const FlowConfig& cfg)
{
    cfg.validate(m.boundary_count());
    if (needs_laplacian(cfg.kind)) {
        const auto kd = curvature_and_laplacian(m, s);
        return rhs_from(cfg.kind, kd.k, &kd.delta, cfg.kbar);
    }
    return rhs_from(cfg.kind, curvature(m, s), nullptr, cfg.kbar);
}

FlowResult integrate(const IdealTriangulation& m, const ConformalState& s0, const FlowConfig& cfg)
{
    cfg.validate(m.boundary_count());
    if (s0.size() != m.boundary_count()) {
        throw DomainError("initial state size does not match the mesh");
    }
    const Stepper stepper(m, cfg);
    Sample current = stepper.sample(s0);

    FlowResult result{s0, {}, FlowStatus::BudgetExhausted, 0, 0, 0.0, current.residual_inf};
    result.trace.rows.push_back(make_row(m, current, 0, 0.0, 0.0, 0.0));
    if (current.residual_inf < cfg.tol) {
        result.status = FlowStatus::Converged;
        return result;
    }

    const double dt_max = 10.0 * cfg.dt0;
    double dt = cfg.dt0;
    double t = 0.0;
    double potential = 0.0;
    double last_dt = 0.0;
    bool last_traced = true;
    while (result.steps < cfg.max_steps) {
        std::optional<Sample> next;
        int halvings = 0;
        while (!(next = stepper.propose(current, dt))) {
            ++result.rejected;
            if (++halvings > kMaxHalvings) {
                std::ostringstream os;
                os << "no admissible step after " << kMaxHalvings << " halvings at t = " << t
                   << " (step " << result.steps << ")";
                throw StepCollapseError(os.str());
            }
            dt *= 0.5;
        }
        potential += ricci_potential(m, next->state, current.state, cfg.kbar);
        t += dt;
        last_dt = dt;
        ++result.steps;
        current = std::move(*next);

        const bool done = current.residual_inf < cfg.tol;
        last_traced = done || result.steps % cfg.trace_every == 0;
        if (last_traced) {
            result.trace.rows.push_back(make_row(m, current, result.steps, t, last_dt, potential));
        }
        if (done) {
            result.status = FlowStatus::Converged;
            break;
        }
        dt = std::min(1.5 * dt, dt_max);
    }
    if (!last_traced) {
        result.trace.rows.push_back(make_row(m, current, result.steps, t, last_dt, potential));
    }
    result.state = current.state;
    result.t = t;
    result.residual_inf = current.residual_inf;
    return result;
}

}  // namespace hexflow

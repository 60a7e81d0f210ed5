#pragma once

/**
 * @file flows.hpp
 * @brief Combinatorial Ricci, Calabi and fractional Calabi flows.
 *
 *   Ricci:          du/dt = K - kbar
 *   Calabi:         du/dt = -Delta (K - kbar)
 *   Fractional(s):  du/dt = -Delta^s (K - kbar),  Delta^s = -(-Delta)^s
 *
 * Fractional(0) is the Ricci flow and Fractional(1) the Calabi flow.
 */

#include <cstddef>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "hexflow/curvature.hpp"
#include "hexflow/mesh.hpp"

namespace hexflow
{

struct Ricci {};
struct Calabi {};
struct Fractional {
    double s;
};

using FlowKind = std::variant<Ricci, Calabi, Fractional>;

std::string to_string(const FlowKind& kind);

struct FlowConfig {
    FlowKind kind = Ricci{};
    /** Prescribed boundary lengths, all positive. */
    Eigen::VectorXd kbar;
    double dt0 = 0.01;
    /** Stop once max |K - kbar| < tol. */
    double tol = 1e-10;
    /** Budget of accepted steps. */
    std::size_t max_steps = 200000;
    /** Trace sampling stride in accepted steps; the first and last step are always kept. */
    std::size_t trace_every = 10;

    /** Throws DomainError unless the config is usable for n components. */
    void validate(std::size_t n) const;
};

struct TraceRow {
    std::size_t step;
    double t;
    double dt;
    double residual_inf;
    double calabi_energy;
    /** E(u(t)) - E(u(0)). */
    double ricci_potential_delta;
    double min_edge_length;
    double max_u;
};

struct FlowTrace {
    static constexpr const char* kCsvHeader =
        "step,t,dt,residual_inf,calabi_energy,ricci_potential_delta,min_edge_length,max_u";

    std::vector<TraceRow> rows;

    void write_csv(std::ostream& os) const;
};

enum class FlowStatus { Converged, BudgetExhausted };

struct FlowResult {
    ConformalState state;
    FlowTrace trace;
    FlowStatus status;
    std::size_t steps;
    std::size_t rejected;
    double t;
    double residual_inf;
};

/** Right-hand side of the flow selected by cfg.kind. */
Eigen::VectorXd rhs(const IdealTriangulation& m, const ConformalState& s, const FlowConfig& cfg);

/**
 * Delta^s = -(-a)^s through the eigendecomposition of -a.
 * Throws NumericError if the eigensolver fails or -a is not positive definite.
 */
Eigen::MatrixXd fractional_power(const Eigen::MatrixXd& a, double s);

/** Per-step RK4 step-doubling error bound (max norm on u). */
inline constexpr double kStepErrorTol = 1e-9;
/** Allowed Calabi-energy increase for a Ricci/Calabi step to be accepted. */
inline constexpr double kEnergySlack = 1e-12;
/** Consecutive halvings before a step is declared collapsed. */
inline constexpr int kMaxHalvings = 60;

/**
 * Classical RK4 with step doubling. A proposal is rejected and dt halved when
 * a stage leaves the admissible space, the doubling error exceeds
 * kStepErrorTol, or (Ricci/Calabi only) the Calabi energy increases by more
 * than kEnergySlack. Accepted steps grow dt by 1.5, capped at 10 dt0.
 * Throws StepCollapseError after kMaxHalvings failed halvings.
 */
FlowResult integrate(const IdealTriangulation& m, const ConformalState& s0, const FlowConfig& cfg);

}  // namespace hexflow

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexflow
{

/** Base class for every error raised by the library. */
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/** Argument outside the domain of a variable change or trigonometric map. */
class DomainError : public Error
{
public:
    using Error::Error;
};

/**
 * Radii pair for which no hexagon edge exists: the cosine-law expression
 * cosh(phi) sinh(r_i) sinh(r_j) - cosh(r_i) cosh(r_j) did not exceed 1.
 */
class InadmissiblePairError : public Error
{
public:
    InadmissiblePairError(const std::string& msg, double expression)
        : Error(msg), expression_(expression)
    {
    }
    /** Value of the cosine-law expression that failed the test. */
    double expression() const noexcept { return expression_; }

private:
    double expression_;
};

/** A face whose edge in slot `slot` is inadmissible. */
class InadmissibleFaceError : public Error
{
public:
    InadmissibleFaceError(const std::string& msg, std::size_t slot)
        : Error(msg), slot_(slot)
    {
    }
    /** Face-local edge slot (0, 1 or 2) that failed. */
    std::size_t slot() const noexcept { return slot_; }

private:
    std::size_t slot_;
};

/** Malformed or structurally invalid mesh / state / target document. */
class MeshError : public Error
{
public:
    enum class Kind { Syntax, Schema, Corner, Dangling, Structure };

    MeshError(Kind kind, const std::string& msg) : Error(msg), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/** One failed constraint of the admissible space. */
struct StateViolation {
    enum class Kind { Length, NonNegative, NonFinite, Edge };
    Kind kind;
    /** Boundary component (0-based) or, for Kind::Edge, the edge file id. */
    std::size_t index;
    /** u_i for component violations, u_i + u_j + phi for edge violations. */
    double slack;
};

/** Conformal factors outside the admissible space. */
class StateError : public Error
{
public:
    StateError(const std::string& msg, std::vector<StateViolation> violations)
        : Error(msg), violations_(std::move(violations))
    {
    }
    const std::vector<StateViolation>& violations() const noexcept
    {
        return violations_;
    }

private:
    std::vector<StateViolation> violations_;
};

/** Linear-algebra failure (eigensolver, factorization, definiteness). */
class NumericError : public Error
{
public:
    using Error::Error;
};

/** Integrator could not find an admissible step after repeated halving. */
class StepCollapseError : public Error
{
public:
    using Error::Error;
};

/** Newton backtracking found no acceptable step. */
class NoDescentError : public Error
{
public:
    using Error::Error;
};

}  // namespace hexflow

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace episafe {

/// Problem instance exceeds a hard size cap of an exact algorithm.
class capacity_error : public std::runtime_error {
public:
    explicit capacity_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed input file. Carries the offending line (1-based, -1 if unknown)
/// and the field name when available.
class parse_error : public std::runtime_error {
public:
    parse_error(const std::string& msg, long line = -1, std::string field = "")
        : std::runtime_error(format(msg, line, field)), line_(line), field_(std::move(field)) {}

    long line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    static std::string format(const std::string& msg, long line, const std::string& field) {
        std::string out = msg;
        if (line >= 0) out += " (line " + std::to_string(line) + ")";
        if (!field.empty()) out += " [field: " + field + "]";
        return out;
    }
    long line_;
    std::string field_;
};

/// Solver stopped before reaching the requested tolerances.
class convergence_error : public std::runtime_error {
public:
    convergence_error(const std::string& msg, double feasibility_residual, double optimality_residual,
                      long iterations)
        : std::runtime_error(msg + " (feasibility " + std::to_string(feasibility_residual) +
                             ", optimality " + std::to_string(optimality_residual) + ", " +
                             std::to_string(iterations) + " iterations)"),
          feasibility_residual(feasibility_residual),
          optimality_residual(optimality_residual),
          iterations(iterations) {}

    double feasibility_residual;
    double optimality_residual;
    long iterations;
};

/// Feasible region of a projection problem is empty. The witness is a
/// nonnegative combination of constraint rows that no point within the
/// variable bounds can satisfy (Farkas-style certificate).
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& msg, std::vector<int> witness_constraints,
                     std::vector<double> witness_weights)
        : std::runtime_error(msg),
          witness_constraints(std::move(witness_constraints)),
          witness_weights(std::move(witness_weights)) {}

    std::vector<int> witness_constraints;
    std::vector<double> witness_weights;
};

}  // namespace episafe

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace muskat {

// Bad user input: malformed config, out-of-range parameters, inconsistent grids.
// Collects every violation found so the caller can report them all at once.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::string message)
        : std::runtime_error(std::move(message)), violations_{what()} {}

    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (const auto& s : v) {
            if (!out.empty()) out += "; ";
            out += s;
        }
        return out.empty() ? std::string("invalid input") : out;
    }
    std::vector<std::string> violations_;
};

// The requested computation left the regime where the numerical method is
// trustworthy (iteration diverged, jacobian degenerated, step rejected, ...).
class SolverRegimeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NoContractionError : public SolverRegimeError {
public:
    using SolverRegimeError::SolverRegimeError;
};

class DegenerateJacobianError : public SolverRegimeError {
public:
    using SolverRegimeError::SolverRegimeError;
};

class StepRejectedError : public SolverRegimeError {
public:
    using SolverRegimeError::SolverRegimeError;
};

class NonConvergenceError : public SolverRegimeError {
public:
    using SolverRegimeError::SolverRegimeError;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace muskat

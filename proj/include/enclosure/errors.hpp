#pragma once

#include <stdexcept>
#include <string>

namespace enclosure {

// Error taxonomy. Each failure mode named by a module contract gets its own
// type so callers (and the CLI) can map them to distinct exit paths.

struct InvalidDirectionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

struct InsufficientDataError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct MeshError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EigenvalueGuardError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SymbolDegeneracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ResolutionError : std::runtime_error {
    // Carries the spacing that would have been needed.
    ResolutionError(const std::string& what, double required_spacing)
        : std::runtime_error(what), required(required_spacing) {}
    double required;
};

struct UnsupportedBackgroundError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ApproximationFailureError : std::runtime_error {
    ApproximationFailureError(const std::string& what, double achieved_misfit)
        : std::runtime_error(what), achieved(achieved_misfit) {}
    double achieved;
};

struct ConditioningError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace enclosure

#pragma once

#include <stdexcept>
#include <string>

namespace sb {

// All failures surface as typed exceptions so callers (and the CLI) can map
// them onto exit codes without string matching.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DomainError : Error {        // input outside an operation's domain
    using Error::Error;
};
struct BranchError : Error {        // no inverse branch lands in the required region
    using Error::Error;
};
struct ConvergenceError : Error {   // iteration stalled above tolerance
    using Error::Error;
};
struct RootSolverError : Error {    // polynomial solver missed its residual target
    using Error::Error;
};
struct DegenerateError : Error {    // parameters collapse the construction (|mu|>=1, ...)
    using Error::Error;
};
struct DivisionError : Error {      // exact division by zero in closed-form algebra
    using Error::Error;
};
struct CertificationFailure : Error {  // a named certificate check has margin <= 0
    using Error::Error;
};
struct DepthExhausted : Error {     // nested-preimage scheme hit its depth cap
    using Error::Error;
};
struct CoverGap : Error {           // greedy step found no admissible cover element
    using Error::Error;
};
struct BudgetExhausted : Error {    // iteration budget spent without a verdict
    using Error::Error;
};
struct PreimageError : Error {      // backward sampler could not invert a step
    using Error::Error;
};
struct GridError : Error {          // raster/grid geometry is inconsistent
    using Error::Error;
};
struct EmptyInput : Error {         // an operation received nothing to work on
    using Error::Error;
};
struct OracleMismatch : Error {     // pinned regression value disagrees with recompute
    using Error::Error;
};
struct ConfigError : Error {        // malformed job configuration
    using Error::Error;
};

} // namespace sb

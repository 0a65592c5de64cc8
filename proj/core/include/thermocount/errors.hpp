#pragma once

#include <stdexcept>
#include <string>

// Error taxonomy shared by all modules.  Everything derives from tc::Error so
// callers can catch the whole family; the concrete types matter for tests and
// for the CLI exit-code mapping.

namespace tc {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// shift construction
struct NotMixing : Error { using Error::Error; };
struct EmptyRowOrColumn : Error { using Error::Error; };

// potentials / sample words
struct DepthTooShallow : Error { using Error::Error; };

// eigen / root solvers
struct NonConvergence : Error { using Error::Error; };
struct BracketFail : Error { using Error::Error; };
struct RootBracketFail : Error { using Error::Error; };

// convex / curve domain errors
struct OutsideGradientRange : Error { using Error::Error; };
struct SlopeOutOfRange : Error { using Error::Error; };

// saddle point
struct NotPositiveDefinite : Error { using Error::Error; };
struct GridTooCoarse : Error { using Error::Error; };

// statistics / truncation studies
struct InsufficientData : Error { using Error::Error; };
struct Inconclusive : Error { using Error::Error; };

// scenario plumbing
struct ConfigError : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

} // namespace tc

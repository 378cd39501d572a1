#pragma once

#include <stdexcept>

namespace seqvar {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// model / engine
struct InvalidSequence : Error { using Error::Error; };
struct EmptyScenario : Error { using Error::Error; };
struct HorizonMismatch : Error { using Error::Error; };

// stats
struct TooFewSamples : Error { using Error::Error; };
struct MalformedInterval : Error { using Error::Error; };

// sequence generators
struct InvalidLawParams : Error { using Error::Error; };

// experiment
struct ZeroAvailability : Error { using Error::Error; };

// io
struct ZeroMu : Error { using Error::Error; };
struct GapInLog : Error { using Error::Error; };
struct OverlapInLog : Error { using Error::Error; };
struct NonAlternating : Error { using Error::Error; };
struct BadTimestamp : Error { using Error::Error; };
struct EmptyLog : Error { using Error::Error; };
struct BadFormat : Error { using Error::Error; };

}  // namespace seqvar

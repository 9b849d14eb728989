#pragma once

#include <stdexcept>
#include <string>

namespace grpiso {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// input / validation
struct ParseError : Error { using Error::Error; };
struct NotAGroup : Error { using Error::Error; };
struct BadParameters : Error { using Error::Error; };

// group-core
struct NotNormal : Error { using Error::Error; };
struct NotGenerating : Error { using Error::Error; };

// structure
struct TrivialGroup : Error { using Error::Error; };
struct PrimeDoesNotDivide : Error { using Error::Error; };
struct NotSolvable : Error { using Error::Error; };

// comp-series
struct ChoiceOutOfRange : Error { using Error::Error; };
struct NonMatchingChoice : Error { using Error::Error; };

// graph encodings / canonization
struct AlphaTooLarge : Error { using Error::Error; };
struct ResourceLimit : Error { using Error::Error; };
struct MalformedCanonGraph : Error { using Error::Error; };

// iso engine
struct NotPGroup : Error { using Error::Error; };
struct SignatureMismatch : Error { using Error::Error; };
struct MethodNotApplicable : Error { using Error::Error; };
struct NotApplicable : Error { using Error::Error; };

}  // namespace grpiso

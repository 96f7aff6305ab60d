#pragma once

#include <stdexcept>
#include <string>

namespace mc {

/// Base class for every domain error thrown by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A requested chair does not occur in the word.
class NotPresent : public Error { public: using Error::Error; };

/// Operation needs a conflict but the configuration is safe.
class NoConflict : public Error { public: using Error::Error; };

/// A search or construction outgrew its configured budget.
class BudgetExceeded : public Error { public: using Error::Error; };

/// Power exponent below the bound required by the lifting lemmas.
class BoundViolated : public Error { public: using Error::Error; };

/// The configuration digraph has a cycle where a DAG was required.
class Cyclic : public Error { public: using Error::Error; };

/// Word system violates the initial-letter hypothesis.
class BadInitials : public Error { public: using Error::Error; };

/// The given vertices are not a conflicted edge of the complex.
class NotAnEdgeConflict : public Error { public: using Error::Error; };

/// Parameters outside the supported range.
class Unsupported : public Error { public: using Error::Error; };

/// A flagged-empty word reached a game operation.
class EmptyWord : public Error { public: using Error::Error; };

/// Churn scenario violates its own invariants.
class ScenarioError : public Error { public: using Error::Error; };

/// Malformed input file; carries the 1-based offending line.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line(line) {}
    int line;
};

} // namespace mc

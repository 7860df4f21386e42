#pragma once

#include <stdexcept>
#include <string>

namespace modelset {

/// Bad CLI flags, unreadable files, malformed JSON. CLI exit code 2.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A CutProjectScheme invariant fails to validate. CLI exit code 3.
struct SchemeError : std::runtime_error {
    explicit SchemeError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Faithfulness or other operation precondition violated. CLI exit code 4.
struct PreconditionError : std::runtime_error {
    explicit PreconditionError(const std::string& msg) : std::runtime_error(msg) {}
};

/// A patch is not a sub-patch of any model set for the given windows
/// (empty intersection while locating the internal parameter). CLI exit code 5.
struct InconsistentPatchError : std::runtime_error {
    explicit InconsistentPatchError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace modelset

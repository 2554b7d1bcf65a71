#pragma once

#include <stdexcept>
#include <string>

namespace srm {

// Base for all conditions that abort a run. Subcommands map these to
// distinct process exit codes; see tools/srmgen.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A candidate position could not be found within the attempt budget;
// the requested initial volume fraction is too close to the jamming
// regime of sequential placement.
struct PlacementFailure : Error {
    PlacementFailure(const std::string& what, std::size_t placed, std::size_t attempts)
        : Error(what), placed_count(placed), attempt_limit(attempts) {}
    std::size_t placed_count;
    std::size_t attempt_limit;
};

// Parameter or input validation failed before any work started.
struct ValidationError : Error {
    using Error::Error;
};

// An operation that requires a cubic box was given an anisotropic one.
struct NonCubicBox : ValidationError {
    using ValidationError::ValidationError;
};

// The requested shell thickness upper bound exceeds what the connectivity
// search can resolve in this box.
struct DeltaMaxTooLarge : ValidationError {
    using ValidationError::ValidationError;
};

// Snapshot or config file could not be read, parsed, or written.
struct IoError : Error {
    using Error::Error;
};

}  // namespace srm

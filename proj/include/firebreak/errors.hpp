#pragma once

#include <stdexcept>
#include <string>

namespace firebreak {

// Malformed input files (raster headers, tables, solution files).
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Well-formed input whose content breaks a domain invariant.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid run configuration, including scenarios that cannot produce an ignition.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A firebreak block that does not fit the landscape.
class PlacementError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// run_fire was handed an ignition cell that cannot burn; callers redraw.
class IgnitionRejected : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace firebreak

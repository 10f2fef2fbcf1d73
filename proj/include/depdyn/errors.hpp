#ifndef DEPDYN_ERRORS_HPP
#define DEPDYN_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace depdyn {

// Unreadable files, failed writes.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input data: corpus schema, lexicon files, config, GeoJSON.
struct FormatError : std::runtime_error {
    explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Model fitting failures: degenerate classes, empty vocabularies,
// non-finite losses, singular solves.
struct TrainError : std::runtime_error {
    explicit TrainError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched dimensions or modes between a model and its input.
struct DimensionError : std::runtime_error {
    explicit DimensionError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace depdyn

#endif

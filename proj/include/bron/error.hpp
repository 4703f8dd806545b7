#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bron {

/// Base of every error raised by the library. Callers that only need to
/// distinguish "bad data" from programming errors can catch this.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// graph-core
class DuplicateNode : public Error { using Error::Error; };
class InvalidNode : public Error { using Error::Error; };
class UnknownNode : public Error { using Error::Error; };
class LayerViolation : public Error { using Error::Error; };
class FrozenGraph : public Error { using Error::Error; };

// ingest
class MalformedInput : public Error {
public:
    MalformedInput(const std::string& what, std::string location)
        : Error(location.empty() ? what : location + ": " + what),
          location_(std::move(location)) {}

    /// "line N", "byte N" or an element path, depending on the format.
    const std::string& location() const noexcept { return location_; }

private:
    std::string location_;
};
class UnsupportedVersion : public Error { using Error::Error; };

// features
class NoPositivePairs : public Error { using Error::Error; };
class EmptyCorpus : public Error { using Error::Error; };

// learn
class DimensionMismatch : public Error { using Error::Error; };
class DegenerateData : public Error { using Error::Error; };
class SingleClass : public Error { using Error::Error; };
class InvalidConfig : public Error { using Error::Error; };

// harness
class TrialFailed : public Error {
public:
    TrialFailed(std::size_t trial, const std::string& what)
        : Error("trial " + std::to_string(trial) + ": " + what), trial_(trial) {}
    std::size_t trial() const noexcept { return trial_; }

private:
    std::size_t trial_;
};
class IoError : public Error { using Error::Error; };

}  // namespace bron

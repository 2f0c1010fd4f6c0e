#pragma once

#include <stdexcept>
#include <string>

namespace llesim {

/// Base class for all llesim errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// dispersion ingestion
class MalformedInput : public Error { using Error::Error; };
class TooFewRows : public Error { using Error::Error; };
class WindowOutsideData : public Error { using Error::Error; };
class PumpNotBracketed : public Error { using Error::Error; };

// plan construction / generic validation
class InconsistentWindows : public Error { using Error::Error; };
class InvalidValue : public Error { using Error::Error; };

// steady-state solver
class SingularJacobian : public Error { using Error::Error; };

// analysis
class IndexOutOfRange : public Error { using Error::Error; };

// configuration
class UnknownKey : public Error { using Error::Error; };
class ConflictingAlias : public Error { using Error::Error; };
class MissingRequired : public Error { using Error::Error; };

// results bundles
class IoFailure : public Error { using Error::Error; };
class CorruptBundle : public Error { using Error::Error; };
class VersionMismatch : public Error { using Error::Error; };

} // namespace llesim

#pragma once

#include <stdexcept>
#include <string>

namespace depthgf {

enum class ErrorCategory {
    input_domain,
    capacity,
    numerical,
    format,
    alignment,
    file,
};

inline const char* to_string(ErrorCategory category) noexcept {
    switch (category) {
    case ErrorCategory::input_domain: return "input";
    case ErrorCategory::capacity: return "capacity";
    case ErrorCategory::numerical: return "numeric";
    case ErrorCategory::format: return "format";
    case ErrorCategory::alignment: return "alignment";
    case ErrorCategory::file: return "file";
    }
    return "unknown";
}

/// Base of every error thrown by the library. The category drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

class InputDomainError : public Error {
public:
    explicit InputDomainError(const std::string& what) : Error(ErrorCategory::input_domain, what) {}
};

/// Raised when a request exceeds what the dense spectral oracle is allowed to handle.
class CapacityError : public Error {
public:
    explicit CapacityError(const std::string& what) : Error(ErrorCategory::capacity, what) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& what) : Error(ErrorCategory::numerical, what) {}
};

class FormatError : public Error {
public:
    explicit FormatError(const std::string& what) : Error(ErrorCategory::format, what) {}
};

class AlignmentError : public Error {
public:
    explicit AlignmentError(const std::string& what) : Error(ErrorCategory::alignment, what) {}
};

class FileError : public Error {
public:
    explicit FileError(const std::string& what) : Error(ErrorCategory::file, what) {}
};

}  // namespace depthgf

#pragma once

#include <stdexcept>
#include <string>

namespace bp {

enum class ErrorKind {
    dimension_mismatch,
    unsupported_dimension,
    domain,
    accuracy,
    singular_integrand,
    division,
    degenerate_scenario,
    continuity_requirement,
    validation,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::unsupported_dimension: return "unsupported dimension";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::accuracy: return "accuracy error";
    case ErrorKind::singular_integrand: return "integrand singularity";
    case ErrorKind::division: return "division error";
    case ErrorKind::degenerate_scenario: return "degenerate scenario";
    case ErrorKind::continuity_requirement: return "continuity requirement";
    case ErrorKind::validation: return "validation error";
    }
    return "error";
}

}  // namespace bp

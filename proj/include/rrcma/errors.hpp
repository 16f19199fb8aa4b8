#pragma once

#include <stdexcept>
#include <string>

namespace rrcma
{
    struct NumericalError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct DimensionError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct DomainError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct ConfigError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct EvaluationError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct IoError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };

    struct ReportError : std::runtime_error
    {
        using std::runtime_error::runtime_error;
    };
}

#pragma once

#include <stdexcept>
#include <string>

namespace solsurf {

enum class ErrorKind {
    invalid_argument,
    dimension_mismatch,
    non_finite,
    lambda_singular,
    contracted_to_zero,
    deformation_out_of_domain,
    chart_mismatch,
    grid_mismatch,
    singular_matrix,
    io
};

const char* error_kind_name(ErrorKind k);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {}
    ErrorKind kind() const { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k)
{
    switch (k) {
    case ErrorKind::invalid_argument: return "InvalidArgument";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::non_finite: return "NonFinite";
    case ErrorKind::lambda_singular: return "LambdaSingular";
    case ErrorKind::contracted_to_zero: return "ContractedToZero";
    case ErrorKind::deformation_out_of_domain: return "DeformationOutOfDomain";
    case ErrorKind::chart_mismatch: return "ChartMismatch";
    case ErrorKind::grid_mismatch: return "GridMismatch";
    case ErrorKind::singular_matrix: return "SingularMatrix";
    case ErrorKind::io: return "IoError";
    }
    return "Error";
}

} // namespace solsurf

#pragma once

#include <stdexcept>
#include <string>

namespace epc {

enum class Errc {
  none = 0,
  parse_error,
  dimension_mismatch,
  asymmetric_input,
  not_psd,
  not_pd,
  singular_input,
  singular_d,
  singular_a,
  no_convergence,
  invalid_distribution,
  degenerate_component,
  invalid_argument,
  precondition_violated,
  enhancement_property_violation,
  certificate_rejected,
  infeasible_b,
  grid_too_large,
  dimension_too_large,
};

const char* errc_name(Errc c);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::none: return "ok";
    case Errc::parse_error: return "ParseError";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::asymmetric_input: return "AsymmetricInput";
    case Errc::not_psd: return "NotPsd";
    case Errc::not_pd: return "NotPd";
    case Errc::singular_input: return "SingularInput";
    case Errc::singular_d: return "SingularD";
    case Errc::singular_a: return "SingularA";
    case Errc::no_convergence: return "NoConvergence";
    case Errc::invalid_distribution: return "InvalidDistribution";
    case Errc::degenerate_component: return "DegenerateComponent";
    case Errc::invalid_argument: return "InvalidArgument";
    case Errc::precondition_violated: return "PreconditionViolated";
    case Errc::enhancement_property_violation: return "EnhancementPropertyViolation";
    case Errc::certificate_rejected: return "CertificateRejected";
    case Errc::infeasible_b: return "InfeasibleB";
    case Errc::grid_too_large: return "GridTooLarge";
    case Errc::dimension_too_large: return "DimensionTooLarge";
  }
  return "UnknownError";
}

}  // namespace epc

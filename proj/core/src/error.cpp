#include "tgf/error.hpp"

namespace tgf {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Structural: return "structural error";
    case ErrorKind::UnsupportedModel: return "unsupported";
    case ErrorKind::Precondition: return "precondition error";
    case ErrorKind::Domain: return "domain error";
    case ErrorKind::DegenerateChart: return "degenerate chart";
    case ErrorKind::Admissibility: return "admissibility error";
    case ErrorKind::Integration: return "integration failure";
    case ErrorKind::Regularity: return "regularity error";
    case ErrorKind::Containment: return "containment error";
    case ErrorKind::CurvatureDegeneracy: return "curvature degeneracy";
    case ErrorKind::FrameChoice: return "frame-choice error";
    case ErrorKind::NotTypeD: return "not of type D";
    case ErrorKind::CoefficientSingularity: return "coefficient singularity";
    case ErrorKind::NonIntegrable: return "non-integrable system";
    case ErrorKind::RecoveryDomain: return "recovery-domain error";
    case ErrorKind::Inconsistency: return "inconsistency";
    case ErrorKind::Input: return "input error";
  }
  return "error";
}

}  // namespace tgf

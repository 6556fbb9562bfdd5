#include "rp3p/error.hpp"

namespace rp3p {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::PointBehindCamera: return "point-behind-camera";
    case ErrorCode::InvalidBearing: return "invalid-bearing";
    case ErrorCode::InvalidProblem: return "invalid-problem";
    case ErrorCode::DegenerateGeometry: return "degenerate-geometry";
    case ErrorCode::NoCandidates: return "no-candidates";
    case ErrorCode::InvalidIncidence: return "invalid-incidence";
    case ErrorCode::InvalidFrame: return "invalid-frame";
    case ErrorCode::DisambiguationFailure: return "disambiguation-failure";
    case ErrorCode::SingularGeometry: return "singular-geometry";
    case ErrorCode::InconsistentDistance: return "inconsistent-distance";
    case ErrorCode::BaselineFailure: return "baseline-failure";
    case ErrorCode::Io: return "io";
    case ErrorCode::Config: return "config";
  }
  return "unknown";
}

std::string_view to_string(Stage stage) {
  switch (stage) {
    case Stage::None: return "none";
    case Stage::Projection: return "projection";
    case Stage::Bearing: return "bearing";
    case Stage::Distance: return "distance";
    case Stage::Disambiguation: return "disambiguation";
    case Stage::Position: return "position";
    case Stage::Height: return "height";
  }
  return "unknown";
}

}  // namespace rp3p

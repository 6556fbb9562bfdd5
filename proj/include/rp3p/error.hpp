#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rp3p {

enum class ErrorCode {
  InvalidParameter,
  PointBehindCamera,
  InvalidBearing,
  InvalidProblem,
  DegenerateGeometry,
  NoCandidates,
  InvalidIncidence,
  InvalidFrame,
  DisambiguationFailure,
  SingularGeometry,
  InconsistentDistance,
  BaselineFailure,
  Io,
  Config,
};

/// Pipeline stage an error was raised in; `None` for errors outside a pipeline.
enum class Stage {
  None,
  Projection,
  Bearing,
  Distance,
  Disambiguation,
  Position,
  Height,
};

std::string_view to_string(ErrorCode code);
std::string_view to_string(Stage stage);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, Stage stage = Stage::None)
      : std::runtime_error(what), code_(code), stage_(stage) {}

  ErrorCode code() const noexcept { return code_; }
  Stage stage() const noexcept { return stage_; }

  /// Same error re-tagged with the stage it surfaced in.
  Error at_stage(Stage stage) const { return Error(code_, what(), stage); }

 private:
  ErrorCode code_;
  Stage stage_;
};

}  // namespace rp3p

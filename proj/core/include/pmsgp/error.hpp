#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pmsgp {

enum class Errc {
  kInvalidDepth,
  kInvalidArgument,
  kConfig,
  kUnfillable,
  kEmptyMask,
  kDimensionMismatch,
  kInvalidSeed,
  kNoValidPixel,
  kDegenerateEdge,
  kDegenerateCross,
  kSegmentationFailure,
  kNoGrasp,
  kEmptyScene,
  kSceneGeneration,
  kMalformedPose,
  kIo,
  kParse,
};

std::string_view to_string(Errc code);

// Every recoverable failure in the library is reported through this type;
// callers that need to branch on the cause inspect code().
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace pmsgp

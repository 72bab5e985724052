#pragma once

#include <stdexcept>
#include <string>

namespace af {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct NotParabolic : Error {
  explicit NotParabolic(const std::string& msg = "matrix is not parabolic") : Error(msg) {}
};

struct DegenerateSegment : Error {
  explicit DegenerateSegment(const std::string& msg = "segment endpoints coincide") : Error(msg) {}
};

struct DegenerateCorner : Error {
  explicit DegenerateCorner(const std::string& msg = "corner normalization does not exist") : Error(msg) {}
};

struct StructuralError : Error {
  explicit StructuralError(const std::string& msg) : Error(msg) {}
};

struct ParseError : Error {
  explicit ParseError(const std::string& msg) : Error(msg) {}
};

struct BadCurve : Error {
  explicit BadCurve(const std::string& msg) : Error(msg) {}
};

struct InvalidStart : Error {
  explicit InvalidStart(const std::string& msg = "ray start is not in the given chart") : Error(msg) {}
};

struct Eigendirection : Error {
  explicit Eigendirection(const std::string& msg = "direction is fixed by the monodromy") : Error(msg) {}
};

struct SearchFailed : Error {
  explicit SearchFailed(const std::string& msg) : Error(msg) {}
};

struct InvalidArgument : Error {
  explicit InvalidArgument(const std::string& msg) : Error(msg) {}
};

struct BoundaryVertex : Error {
  explicit BoundaryVertex(const std::string& msg = "vertex class touches the boundary") : Error(msg) {}
};

struct OutOfBounds : Error {
  explicit OutOfBounds(const std::string& msg = "point outside box bounds") : Error(msg) {}
};

struct DegeneratePair : Error {
  explicit DegeneratePair(const std::string& msg = "pair endpoints coincide") : Error(msg) {}
};

struct InvalidParams : Error {
  explicit InvalidParams(const std::string& msg) : Error(msg) {}
};

struct GluingMismatch : Error {
  explicit GluingMismatch(const std::string& msg) : Error(msg) {}
};

struct InvalidPoint : Error {
  explicit InvalidPoint(const std::string& msg = "point is not a regular surface point") : Error(msg) {}
};

struct CurveHitsFocus : Error {
  explicit CurveHitsFocus(const std::string& msg = "curve passes through a focus point") : Error(msg) {}
};

struct NotClosed : Error {
  explicit NotClosed(const std::string& msg = "curve endpoints do not close up") : Error(msg) {}
};

struct ValidationFailed : Error {
  explicit ValidationFailed(const std::string& msg) : Error(msg) {}
};

}  // namespace af

#pragma once

#include <stdexcept>
#include <string>

namespace seedseg {

// Base class for all library errors. kind() yields a stable machine-readable
// name used in batch skip reasons ("skipped(CorruptImage)").
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual const char* kind() const noexcept { return "Error"; }
};

#define SEEDSEG_DEFINE_ERROR(Name)                                  \
    class Name : public Error {                                     \
    public:                                                         \
        using Error::Error;                                         \
        const char* kind() const noexcept override { return #Name; } \
    }

SEEDSEG_DEFINE_ERROR(FileNotFound);
SEEDSEG_DEFINE_ERROR(UnsupportedFormat);
SEEDSEG_DEFINE_ERROR(CorruptImage);
SEEDSEG_DEFINE_ERROR(IoError);
SEEDSEG_DEFINE_ERROR(DimensionMismatch);
SEEDSEG_DEFINE_ERROR(RectOutOfBounds);
SEEDSEG_DEFINE_ERROR(LengthMismatch);
SEEDSEG_DEFINE_ERROR(EmptyInput);
SEEDSEG_DEFINE_ERROR(NoForeground);
SEEDSEG_DEFINE_ERROR(PlacementFailure);
SEEDSEG_DEFINE_ERROR(ShiftOutOfFrame);
SEEDSEG_DEFINE_ERROR(InvalidSceneSpec);
SEEDSEG_DEFINE_ERROR(InvalidParams);
SEEDSEG_DEFINE_ERROR(InputDirNotFound);
SEEDSEG_DEFINE_ERROR(EmptyFolder);
SEEDSEG_DEFINE_ERROR(OutputIoError);
SEEDSEG_DEFINE_ERROR(MissingTruthRow);
SEEDSEG_DEFINE_ERROR(ParseError);

#undef SEEDSEG_DEFINE_ERROR

} // namespace seedseg

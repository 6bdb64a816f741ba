#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace snowforge {

/// Failure categories surfaced by the library. The CLI maps every one of
/// them to the "data error" exit code.
enum class Errc {
    MissingFrame,
    GeometryMismatch,
    DecodeError,
    CropOutOfBounds,
    MaskRangeError,
    EmptySequence,
    OverlayOutOfBounds,
    SequenceTooShort,
    PairingMismatch,
    FrameTooSmall,
    SchemaError,
    InvalidArgument,
    IoError,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// Raised when a sequence has a hole; carries the first absent index.
class MissingFrameError : public Error {
public:
    MissingFrameError(long long index, const std::string& where)
        : Error(Errc::MissingFrame, "index " + std::to_string(index) + " absent in " + where),
          index_(index) {}

    long long index() const noexcept { return index_; }

private:
    long long index_;
};

}  // namespace snowforge

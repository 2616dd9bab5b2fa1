#pragma once

#include <stdexcept>
#include <string>

namespace makeup {

// Base for everything thrown by this library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File missing or not readable/writable.
struct IoError : Error {
    using Error::Error;
};

// File exists but cannot be decoded as an image.
struct DecodeError : Error {
    using Error::Error;
};

// Image decoded fine but has the wrong channel count.
struct ChannelMismatchError : Error {
    using Error::Error;
};

// Width/height/length disagreement between operands.
struct DimensionError : Error {
    using Error::Error;
};

// A mask with no set pixels where at least one is required.
struct EmptyMaskError : Error {
    using Error::Error;
};

// Model directory errors, kept distinct so callers can tell them apart.
struct ManifestError : Error {
    using Error::Error;
};
struct SizeMismatchError : Error {
    using Error::Error;
};
struct ChecksumError : Error {
    using Error::Error;
};

struct InvalidArgumentError : Error {
    using Error::Error;
};

}  // namespace makeup

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vsstereo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Inputs whose dimensions disagree (left/right views, cost volume vs arms, ...).
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A parameter outside its admissible range. `field()` names the offending parameter.
class ParameterError : public Error {
public:
    ParameterError(std::string field, const std::string& what)
        : Error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

/// File could not be opened, read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// Image file decode failure, positioned at a byte offset.
class FormatError : public Error {
public:
    enum class Kind { MalformedHeader, TruncatedPayload, UnsupportedMagic };

    FormatError(Kind kind, std::size_t offset, const std::string& detail)
        : Error(std::string(kind_name(kind)) + " at byte " + std::to_string(offset) + ": " + detail),
          kind_(kind), offset_(offset) {}

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }

    static const char* kind_name(Kind k) {
        switch (k) {
            case Kind::MalformedHeader: return "malformed header";
            case Kind::TruncatedPayload: return "truncated payload";
            case Kind::UnsupportedMagic: return "unsupported magic number";
        }
        return "format error";
    }

private:
    Kind kind_;
    std::size_t offset_;
};

}  // namespace vsstereo

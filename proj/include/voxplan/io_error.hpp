#pragma once

#include <stdexcept>
#include <string>

namespace voxplan {

/// File-format errors with a machine-checkable reason code.
struct IoError : std::runtime_error {
  enum class Code {
    io_failure,
    bad_magic,
    unsupported_format,
    unsupported_datatype,
    bad_dims,
    bitpix_mismatch,
    bad_vox_offset,
    truncated,
    bad_header,
    length_mismatch,
    bad_version,
  };

  IoError(Code c, const std::string& msg) : std::runtime_error(msg), code(c) {}

  Code code;
};

}  // namespace voxplan

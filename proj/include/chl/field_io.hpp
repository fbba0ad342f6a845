#pragma once

#include <stdexcept>
#include <string>

#include "chl/field.hpp"

namespace chl {

// Field file: magic "CHFD" | u32 LE version=1 | u8 d | u32 LE n | f64 LE phi |
// f64 LE xi | n^d f64 LE values row-major x-fastest. No padding.

enum class FieldIoStatus {
  ok,
  not_a_field_file,     // bad magic
  unsupported_version,
  bad_header,           // d/n/phi/xi out of range
  truncated_payload,
  nan_payload,
  io_failure,           // open/write failure
};

const char* to_string(FieldIoStatus s);

class FieldIoError : public std::runtime_error {
 public:
  FieldIoError(FieldIoStatus s, const std::string& what)
      : std::runtime_error(what), status_(s) {}
  FieldIoStatus status() const { return status_; }

 private:
  FieldIoStatus status_;
};

void write_field(const Field& f, const std::string& path);
Field read_field(const std::string& path);

}  // namespace chl

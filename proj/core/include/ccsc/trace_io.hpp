#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "ccsc/trace.hpp"

namespace ccsc {

/// Malformed trace file. offset is the byte position at which the problem
/// was detected; it is also part of the message.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what), offset_(offset) {}
  [[nodiscard]] std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

/// Binary trace container, little-endian:
///   magic "CCSC" | u16 version=1 | u8 unit tag | u8 reserved=0 |
///   u32 trace count | u32 samples per trace | f64 sample period |
///   per trace: u8 plaintext, then samples as f32.
/// Samples are stored at f32 precision; write->read returns exactly the
/// f32-rounded samples, and a second write is byte-identical.
void write_trace_file(const TraceSet& ts, const std::string& path);
TraceSet read_trace_file(const std::string& path);

/// In-memory variants, used by the file functions and handy in tests.
std::string encode_trace_set(const TraceSet& ts);
TraceSet decode_trace_set(const std::string& bytes);

}  // namespace ccsc

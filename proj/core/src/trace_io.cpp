#include "ccsc/trace_io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <limits>

namespace ccsc {

namespace {

constexpr char kMagic[4] = {'C', 'C', 'S', 'C'};
constexpr std::uint16_t kVersion = 1;

void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void put_f32(std::string& out, float v) {
  put_u32(out, std::bit_cast<std::uint32_t>(v));
}

void put_f64(std::string& out, double v) {
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}

  [[nodiscard]] std::size_t offset() const { return pos_; }

  std::uint8_t u8(const char* what) {
    need(1, what);
    return static_cast<std::uint8_t>(bytes_[pos_++]);
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i)
      v |= static_cast<std::uint16_t>(
          static_cast<std::uint8_t>(bytes_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(
          static_cast<std::uint8_t>(bytes_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    pos_ += 4;
    return v;
  }
  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(
          static_cast<std::uint8_t>(bytes_[pos_ + static_cast<std::size_t>(i)]))
           << (8 * i);
    pos_ += 8;
    return v;
  }
  float f32(const char* what) { return std::bit_cast<float>(u32(what)); }
  double f64(const char* what) { return std::bit_cast<double>(u64(what)); }

  void expect_end() {
    if (pos_ != bytes_.size()) {
      throw ParseError("trace file: " +
                           std::to_string(bytes_.size() - pos_) +
                           " trailing bytes after the last trace, at offset " +
                           std::to_string(pos_),
                       pos_);
    }
  }

 private:
  void need(std::size_t count, const char* what) {
    if (bytes_.size() - pos_ < count) {
      throw ParseError("trace file: truncated while reading " +
                           std::string(what) + " at offset " +
                           std::to_string(pos_),
                       pos_);
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string encode_trace_set(const TraceSet& ts) {
  ts.validate();
  const Unit unit = ts.traces.front().unit;
  for (std::size_t i = 0; i < ts.traces.size(); ++i) {
    if (ts.traces[i].unit != unit) {
      throw std::invalid_argument(
          "trace file: trace " + std::to_string(i) + " unit " +
          unit_name(ts.traces[i].unit) + " differs from the first trace's " +
          unit_name(unit) + "; a file stores one unit");
    }
  }
  if (ts.traces.size() > std::numeric_limits<std::uint32_t>::max() ||
      ts.traces.front().size() > std::numeric_limits<std::uint32_t>::max()) {
    throw std::invalid_argument("trace file: trace set too large for format");
  }

  std::string out;
  const std::size_t len = ts.traces.front().size();
  out.reserve(24 + ts.traces.size() * (1 + 4 * len));
  out.append(kMagic, 4);
  put_u16(out, kVersion);
  out.push_back(static_cast<char>(static_cast<std::uint8_t>(unit)));
  out.push_back(0);  // reserved
  put_u32(out, static_cast<std::uint32_t>(ts.traces.size()));
  put_u32(out, static_cast<std::uint32_t>(len));
  put_f64(out, ts.traces.front().sample_period);
  for (const auto& t : ts.traces) {
    out.push_back(static_cast<char>(t.plaintext));
    for (double s : t.samples) put_f32(out, static_cast<float>(s));
  }
  return out;
}

TraceSet decode_trace_set(const std::string& bytes) {
  Reader r(bytes);

  {
    const std::size_t at = r.offset();
    char magic[4];
    for (char& c : magic) c = static_cast<char>(r.u8("magic"));
    if (magic[0] != kMagic[0] || magic[1] != kMagic[1] ||
        magic[2] != kMagic[2] || magic[3] != kMagic[3]) {
      throw ParseError("trace file: bad magic at offset " + std::to_string(at),
                       at);
    }
  }

  const std::size_t version_at = r.offset();
  const std::uint16_t version = r.u16("version");
  if (version != kVersion) {
    throw ParseError("trace file: unsupported version " +
                         std::to_string(version) + " at offset " +
                         std::to_string(version_at),
                     version_at);
  }

  const std::size_t unit_at = r.offset();
  const std::uint8_t unit_tag = r.u8("unit tag");
  if (unit_tag > 2) {
    throw ParseError("trace file: unknown unit tag " +
                         std::to_string(unit_tag) + " at offset " +
                         std::to_string(unit_at),
                     unit_at);
  }
  const std::size_t reserved_at = r.offset();
  if (r.u8("reserved byte") != 0) {
    throw ParseError("trace file: reserved byte must be 0, at offset " +
                         std::to_string(reserved_at),
                     reserved_at);
  }

  const std::size_t count_at = r.offset();
  const std::uint32_t count = r.u32("trace count");
  const std::size_t len_at = r.offset();
  const std::uint32_t len = r.u32("samples per trace");
  if (count == 0) {
    throw ParseError(
        "trace file: trace count must be positive, at offset " +
            std::to_string(count_at),
        count_at);
  }
  if (len == 0) {
    throw ParseError(
        "trace file: samples per trace must be positive, at offset " +
            std::to_string(len_at),
        len_at);
  }

  const std::size_t sp_at = r.offset();
  const double sp = r.f64("sample period");
  if (!std::isfinite(sp) || sp <= 0.0) {
    throw ParseError("trace file: sample period must be positive, at offset " +
                         std::to_string(sp_at),
                     sp_at);
  }

  TraceSet ts;
  ts.traces.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    Trace t;
    t.sample_period = sp;
    t.unit = static_cast<Unit>(unit_tag);
    t.plaintext = r.u8("plaintext byte");
    t.samples.resize(len);
    for (std::uint32_t s = 0; s < len; ++s) {
      const std::size_t at = r.offset();
      const float v = r.f32("sample");
      if (!std::isfinite(v)) {
        throw ParseError("trace file: non-finite sample in trace " +
                             std::to_string(i) + " at offset " +
                             std::to_string(at),
                         at);
      }
      t.samples[s] = static_cast<double>(v);
    }
    ts.traces.push_back(std::move(t));
  }
  r.expect_end();
  return ts;
}

void write_trace_file(const TraceSet& ts, const std::string& path) {
  const std::string bytes = encode_trace_set(ts);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("trace file: cannot open '" + path +
                             "' for writing");
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw std::runtime_error("trace file: write to '" + path + "' failed");
  }
}

TraceSet read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("trace file: cannot open '" + path + "'");
  }
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) {
    throw std::runtime_error("trace file: read from '" + path + "' failed");
  }
  return decode_trace_set(bytes);
}

}  // namespace ccsc

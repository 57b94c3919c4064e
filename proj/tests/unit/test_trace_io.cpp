#include <unistd.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "ccsc/rng.hpp"
#include "ccsc/trace.hpp"
#include "ccsc/trace_io.hpp"
#include "doctest.h"

using ccsc::TraceSet;

namespace {

TraceSet sample_set() {
  TraceSet ts;
  auto rng = ccsc::make_rng(77);
  for (int i = 0; i < 3; ++i) {
    ccsc::Trace t;
    t.sample_period = 10e-12;
    t.plaintext = static_cast<std::uint8_t>(0x40 + i);
    t.unit = ccsc::Unit::amperes;
    for (int n = 0; n < 7; ++n)
      t.samples.push_back((static_cast<double>(rng() % 10000) - 5000.0) * 1e-7);
    ts.traces.push_back(std::move(t));
  }
  return ts;
}

std::size_t error_offset_of(const std::string& bytes) {
  try {
    ccsc::decode_trace_set(bytes);
  } catch (const ccsc::ParseError& e) {
    return e.offset();
  }
  FAIL("decode accepted corrupted bytes");
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_SUITE("trace_io") {

TEST_CASE("header layout is stable") {
  TraceSet ts;
  ccsc::Trace t;
  t.sample_period = 0.5;
  t.plaintext = 0xAB;
  t.unit = ccsc::Unit::volts;
  t.samples = {1.0, -2.0};
  ts.traces.push_back(t);

  const std::string bytes = ccsc::encode_trace_set(ts);
  REQUIRE(bytes.size() == 24 + 1 + 2 * 4);
  CHECK(bytes.substr(0, 4) == "CCSC");
  CHECK(static_cast<std::uint8_t>(bytes[4]) == 1);  // version, little end
  CHECK(static_cast<std::uint8_t>(bytes[5]) == 0);
  CHECK(static_cast<std::uint8_t>(bytes[6]) == 1);  // volts
  CHECK(static_cast<std::uint8_t>(bytes[7]) == 0);  // reserved
  CHECK(static_cast<std::uint8_t>(bytes[8]) == 1);  // count
  CHECK(static_cast<std::uint8_t>(bytes[12]) == 2);  // samples per trace
  double sp = 0.0;
  std::memcpy(&sp, bytes.data() + 16, 8);
  CHECK(sp == 0.5);
  CHECK(static_cast<std::uint8_t>(bytes[24]) == 0xAB);
  float s0 = 0.0f;
  std::memcpy(&s0, bytes.data() + 25, 4);
  CHECK(s0 == 1.0f);
}

TEST_CASE("encode, decode, encode is byte identical") {
  const auto ts = sample_set();
  const std::string once = ccsc::encode_trace_set(ts);
  const TraceSet back = ccsc::decode_trace_set(once);
  REQUIRE(back.size() == ts.size());
  const std::string twice = ccsc::encode_trace_set(back);
  CHECK(once == twice);
  // Decoded samples are exactly the f32 rounding of the originals.
  for (std::size_t i = 0; i < ts.size(); ++i)
    for (std::size_t n = 0; n < ts.traces[i].size(); ++n)
      CHECK(back.traces[i].samples[n] ==
            static_cast<double>(static_cast<float>(ts.traces[i].samples[n])));
}

TEST_CASE("file round trip matches the in-memory encoding") {
  const auto ts = sample_set();
  const auto path = std::filesystem::temp_directory_path() /
                    ("ccsc_io_test_" + std::to_string(::getpid()) + ".ccsc");
  ccsc::write_trace_file(ts, path.string());
  const TraceSet back = ccsc::read_trace_file(path.string());
  CHECK(ccsc::encode_trace_set(back) == ccsc::encode_trace_set(ts));
  std::filesystem::remove(path);
}

TEST_CASE("corruption is rejected with the failing byte position") {
  const std::string good = ccsc::encode_trace_set(sample_set());

  auto corrupt = [&](std::size_t at, char value) {
    std::string b = good;
    b[at] = value;
    return b;
  };

  CHECK(error_offset_of(corrupt(0, 'X')) == 0);        // magic
  CHECK(error_offset_of(corrupt(4, 2)) == 4);          // version
  CHECK(error_offset_of(corrupt(6, 9)) == 6);          // unit tag
  CHECK(error_offset_of(corrupt(7, 1)) == 7);          // reserved byte
  CHECK(error_offset_of(corrupt(8, 0)) == 8);          // zero trace count
  CHECK(error_offset_of(corrupt(12, 0)) == 12);        // zero-length traces

  std::string bad_sp = good;
  for (int i = 0; i < 8; ++i) bad_sp[16 + i] = '\xFF';  // NaN period
  CHECK(error_offset_of(bad_sp) == 16);

  // Truncation points inside the payload report the incomplete field.
  CHECK(error_offset_of(good.substr(0, 20)) == 16);
  CHECK(error_offset_of(good.substr(0, 24)) == 24);
  CHECK(error_offset_of(good.substr(0, 27)) == 25);

  CHECK(error_offset_of(good + std::string(1, '\0')) == good.size());

  // A non-finite sample value is positioned too.
  std::string bad_sample = good;
  const std::size_t first_sample_at = 25;
  bad_sample[first_sample_at + 0] = '\x00';
  bad_sample[first_sample_at + 1] = '\x00';
  bad_sample[first_sample_at + 2] = '\x80';
  bad_sample[first_sample_at + 3] = '\x7F';  // +inf
  CHECK(error_offset_of(bad_sample) == first_sample_at);
}

TEST_CASE("count and length limits guard resource use") {
  std::string b = ccsc::encode_trace_set(sample_set());
  // Claim more traces than the payload holds.
  b[8] = '\x09';
  CHECK_THROWS_AS(ccsc::decode_trace_set(b), ccsc::ParseError);
}

TEST_CASE("a set with mismatched units cannot be encoded") {
  auto ts = sample_set();
  ts.traces[1].unit = ccsc::Unit::volts;
  CHECK_THROWS_AS(ccsc::encode_trace_set(ts), std::invalid_argument);
}

}  // TEST_SUITE

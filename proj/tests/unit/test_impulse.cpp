#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <vector>

#include "ccsc/impulse.hpp"
#include "ccsc/trace.hpp"
#include "doctest.h"

namespace {

ccsc::Trace ramp_excitation(std::size_t len, double sp) {
  ccsc::Trace t;
  t.sample_period = sp;
  t.unit = ccsc::Unit::amperes;
  for (std::size_t n = 0; n < len; ++n)
    t.samples.push_back(static_cast<double>(n + 1));
  return t;
}

struct TempFile {
  std::filesystem::path path;
  explicit TempFile(const std::string& contents) {
    path = std::filesystem::temp_directory_path() /
           ("ccsc_ir_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter++) + ".csv");
    std::ofstream(path) << contents;
  }
  ~TempFile() { std::error_code ec; std::filesystem::remove(path, ec); }
  static int counter;
};
int TempFile::counter = 0;

}  // namespace

TEST_SUITE("impulse") {

TEST_CASE("import rejects malformed responses") {
  CHECK_THROWS_AS(ccsc::import_impulse_response({}, 1e-9), std::invalid_argument);
  CHECK_THROWS_AS(ccsc::import_impulse_response({1.0}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(ccsc::import_impulse_response({1.0, std::nan("")}, 1e-9),
                  std::invalid_argument);
  CHECK_NOTHROW(ccsc::import_impulse_response({1.0, 0.5}, 1e-9));
}

TEST_CASE("unit-area impulse reproduces the excitation") {
  const double sp = 1e-9;
  const auto ir = ccsc::import_impulse_response({1.0 / sp}, sp);
  const auto x = ramp_excitation(16, sp);
  const auto y = ccsc::apply_impulse_response(ir, x);
  REQUIRE(y.i_leak.size() == x.size());
  for (std::size_t n = 0; n < x.size(); ++n)
    CHECK(y.i_leak.samples[n] == doctest::Approx(x.samples[n]).epsilon(1e-12));
  CHECK(y.i_leak.sample_period == sp);
}

TEST_CASE("delayed impulse shifts the excitation") {
  const double sp = 1e-9;
  const auto ir = ccsc::import_impulse_response({0.0, 1.0 / sp}, sp);
  const auto x = ramp_excitation(16, sp);
  const auto y = ccsc::apply_impulse_response(ir, x);
  CHECK(y.i_leak.samples[0] == doctest::Approx(0.0));
  for (std::size_t n = 1; n < x.size(); ++n)
    CHECK(y.i_leak.samples[n] == doctest::Approx(x.samples[n - 1]).epsilon(1e-12));
}

TEST_CASE("convolution is linear") {
  const double sp = 1e-9;
  const auto ir = ccsc::import_impulse_response({0.5 / sp, 0.25 / sp, 0.1 / sp}, sp);
  auto x1 = ramp_excitation(32, sp);
  auto x2 = ramp_excitation(32, sp);
  for (auto& v : x2.samples) v = v * v * 0.01;
  ccsc::Trace sum = x1;
  for (std::size_t n = 0; n < sum.size(); ++n) sum.samples[n] += x2.samples[n];

  const auto y1 = ccsc::apply_impulse_response(ir, x1);
  const auto y2 = ccsc::apply_impulse_response(ir, x2);
  const auto ys = ccsc::apply_impulse_response(ir, sum);
  for (std::size_t n = 0; n < sum.size(); ++n)
    CHECK(ys.i_leak.samples[n] ==
          doctest::Approx(y1.i_leak.samples[n] + y2.i_leak.samples[n]).epsilon(1e-12));
}

TEST_CASE("a response on a finer grid is resampled to the excitation grid") {
  const double sp = 1e-9;
  // Constant response over the same support, described at half the period.
  const auto coarse = ccsc::import_impulse_response({2e9, 2e9}, sp);
  const auto fine = ccsc::import_impulse_response({2e9, 2e9, 2e9}, sp / 2);
  const auto x = ramp_excitation(8, sp);
  const auto yc = ccsc::apply_impulse_response(coarse, x);
  const auto yf = ccsc::apply_impulse_response(fine, x);
  for (std::size_t n = 0; n < x.size(); ++n)
    CHECK(yf.i_leak.samples[n] == doctest::Approx(yc.i_leak.samples[n]).epsilon(1e-9));
}

TEST_CASE("csv loader accepts a header and enforces a uniform grid") {
  TempFile good("time_s,amplitude\n0,1e9\n1e-9,5e8\n2e-9,2.5e8\n");
  const auto ir = ccsc::load_impulse_response_csv(good.path.string());
  REQUIRE(ir.samples.size() == 3);
  CHECK(ir.sample_period == doctest::Approx(1e-9));
  CHECK(ir.samples[1] == doctest::Approx(5e8));

  TempFile nonuniform("0,1\n1e-9,2\n3e-9,3\n");
  CHECK_THROWS_AS(ccsc::load_impulse_response_csv(nonuniform.path.string()),
                  std::invalid_argument);

  TempFile backwards("0,1\n-1e-9,2\n");
  CHECK_THROWS_AS(ccsc::load_impulse_response_csv(backwards.path.string()),
                  std::invalid_argument);

  CHECK_THROWS(ccsc::load_impulse_response_csv("/nonexistent/ccsc_ir.csv"));
}

}  // TEST_SUITE

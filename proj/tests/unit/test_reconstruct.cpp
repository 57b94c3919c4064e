#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ccsc/reconstruct.hpp"
#include "ccsc/rng.hpp"
#include "ccsc/trace.hpp"
#include "doctest.h"

using ccsc::Trace;
using ccsc::Window;

namespace {

Trace make_trace(std::vector<double> samples) {
  Trace t;
  t.samples = std::move(samples);
  t.sample_period = 1e-9;
  t.unit = ccsc::Unit::amperes;
  t.plaintext = 0x5A;
  return t;
}

}  // namespace

TEST_SUITE("reconstruct") {

TEST_CASE("running sum") {
  const auto x = ccsc::cumulative_integrate(make_trace({1, 2, 3}));
  CHECK(x.samples == std::vector<double>{1, 3, 6});
  CHECK(x.unit == ccsc::Unit::dimensionless);
  CHECK(x.sample_period == doctest::Approx(1e-9));
  CHECK(x.plaintext == 0x5A);

  const auto z = ccsc::cumulative_integrate(make_trace({0, 0, 0, 0}));
  CHECK(z.samples == std::vector<double>{0, 0, 0, 0});
}

TEST_CASE("first difference") {
  const auto y = ccsc::finite_difference(make_trace({1, 3, 6}));
  CHECK(y.samples == std::vector<double>{1, 2, 3});

  const auto c = ccsc::finite_difference(make_trace({4, 4, 4, 4}));
  CHECK(c.samples == std::vector<double>{4, 0, 0, 0});

  CHECK_THROWS_AS(ccsc::finite_difference(make_trace({1})), std::invalid_argument);
}

TEST_CASE("difference of the running sum is the identity") {
  // Integer-valued samples keep every partial sum exact.
  auto rng = ccsc::make_rng(314);
  std::vector<double> v(512);
  for (auto& s : v)
    s = static_cast<double>(static_cast<std::int64_t>(rng() % 2001) - 1000);
  const auto y = make_trace(v);
  const auto back = ccsc::finite_difference(ccsc::cumulative_integrate(y));
  CHECK(back.samples == y.samples);
}

TEST_CASE("running sum of the difference restores the signal") {
  // The difference trace keeps the initial value at index 0, so the
  // composition telescopes back to the untranslated input.
  auto rng = ccsc::make_rng(315);
  std::vector<double> v(512);
  double acc = 0.0;
  for (auto& s : v) {
    acc += (static_cast<double>(rng() % 1000) - 500.0) * 1e-3;
    s = acc;
  }
  const auto x = make_trace(v);
  const auto rt = ccsc::cumulative_integrate(ccsc::finite_difference(x));
  double scale = 0.0;
  for (double s : v) scale = std::max(scale, std::abs(s));
  for (std::size_t n = 0; n < v.size(); ++n)
    CHECK(std::abs(rt.samples[n] - v[n]) <= 1e-6 * scale + 1e-12);
}

TEST_CASE("integration is linear") {
  auto rng = ccsc::make_rng(316);
  std::vector<double> a(64), b(64);
  for (auto& s : a) s = static_cast<double>(rng() % 100) * 0.25;
  for (auto& s : b) s = static_cast<double>(rng() % 100) * 0.5;
  std::vector<double> combo(64);
  for (std::size_t n = 0; n < 64; ++n) combo[n] = 2.0 * a[n] + 3.0 * b[n];

  const auto ia = ccsc::cumulative_integrate(make_trace(a));
  const auto ib = ccsc::cumulative_integrate(make_trace(b));
  const auto ic = ccsc::cumulative_integrate(make_trace(combo));
  for (std::size_t n = 0; n < 64; ++n)
    CHECK(ic.samples[n] ==
          doctest::Approx(2.0 * ia.samples[n] + 3.0 * ib.samples[n]).epsilon(1e-12));
}

TEST_CASE("windowing extracts the requested range") {
  const auto t = make_trace({10, 11, 12, 13, 14, 15, 16, 17});
  const auto full = ccsc::apply_window(t, Window{0, 8});
  CHECK(full.samples == t.samples);

  const auto tail = ccsc::apply_window(t, Window{6, 8});
  CHECK(tail.samples == std::vector<double>{16, 17});
  CHECK(tail.plaintext == t.plaintext);
  CHECK(tail.sample_period == t.sample_period);

  CHECK_THROWS_AS(ccsc::apply_window(t, Window{4, 4}), std::invalid_argument);
  CHECK_THROWS_AS(ccsc::apply_window(t, Window{4, 9}), std::invalid_argument);
  CHECK_THROWS_AS(ccsc::apply_window(t, Window{9, 10}), std::invalid_argument);
}

TEST_CASE("last quarter of a kilosample trace") {
  Trace t;
  t.sample_period = 1e-9;
  t.samples.assign(1024, 0.0);
  for (std::size_t n = 0; n < 1024; ++n) t.samples[n] = static_cast<double>(n);
  const auto w = ccsc::apply_window(t, Window{768, 1024});
  REQUIRE(w.size() == 256);
  CHECK(w.samples.front() == 768.0);
  CHECK(w.samples.back() == 1023.0);
}

TEST_CASE("offset handling") {
  const auto t = make_trace({1, 2, 3});
  const auto same = ccsc::remove_offset(t, ccsc::OffsetMode::none);
  CHECK(same.samples == t.samples);

  const auto centered = ccsc::remove_offset(t, ccsc::OffsetMode::subtract_mean);
  CHECK(centered.samples == std::vector<double>{-1, 0, 1});

  const auto rebased = ccsc::remove_offset(make_trace({5, 7, 9}),
                                           ccsc::OffsetMode::subtract_first);
  CHECK(rebased.samples == std::vector<double>{0, 2, 4});
}

}  // TEST_SUITE

#include "ccsc/dpa.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "ccsc/aes_sbox.hpp"

namespace ccsc {

std::vector<int> predict_leakage(std::span<const std::uint8_t> plaintexts,
                                 std::uint8_t k_star, const LeakageModel& m) {
  (void)m;  // one model kind so far
  std::vector<int> out(plaintexts.size());
  for (std::size_t i = 0; i < plaintexts.size(); ++i)
    out[i] = hamming_weight(intermediate_value(plaintexts[i], k_star));
  return out;
}

namespace {

std::vector<std::uint8_t> plaintexts_of(const TraceSet& ts) {
  std::vector<std::uint8_t> xs(ts.traces.size());
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = ts.traces[i].plaintext;
  return xs;
}

}  // namespace

DistinguisherTrace difference_of_means(const TraceSet& ts, std::uint8_t k_star,
                                       const LeakageModel& m) {
  ts.validate();
  const auto xs = plaintexts_of(ts);
  const auto leak = predict_leakage(xs, k_star, m);

  const std::size_t len = ts.traces.front().size();
  std::vector<double> high(len, 0.0), low(len, 0.0);
  std::size_t n_high = 0, n_low = 0;
  for (std::size_t i = 0; i < ts.traces.size(); ++i) {
    if (leak[i] >= 5) {
      ++n_high;
      for (std::size_t s = 0; s < len; ++s) high[s] += ts.traces[i].samples[s];
    } else if (leak[i] <= 3) {
      ++n_low;
      for (std::size_t s = 0; s < len; ++s) low[s] += ts.traces[i].samples[s];
    }
    // leakage class 4 carries no contrast and is discarded
  }
  if (n_high == 0 || n_low == 0) {
    throw DegeneratePartitionError(
        "difference of means: hypothesis " + std::to_string(k_star) +
        " leaves an empty class (high " + std::to_string(n_high) + ", low " +
        std::to_string(n_low) + ")");
  }

  DistinguisherTrace d;
  d.hypothesis = k_star;
  d.kind = DistinguisherKind::difference_of_means;
  d.values.resize(len);
  for (std::size_t s = 0; s < len; ++s) {
    d.values[s] = high[s] / static_cast<double>(n_high) -
                  low[s] / static_cast<double>(n_low);
  }
  return d;
}

DistinguisherTrace pearson_correlation(const TraceSet& ts, std::uint8_t k_star,
                                       const LeakageModel& m) {
  ts.validate();
  const auto xs = plaintexts_of(ts);
  const auto leak = predict_leakage(xs, k_star, m);
  const auto n = static_cast<double>(ts.traces.size());

  double l_mean = 0.0;
  for (int l : leak) l_mean += l;
  l_mean /= n;
  double l_var = 0.0;
  for (int l : leak) l_var += (l - l_mean) * (l - l_mean);
  if (l_var == 0.0) {
    throw DegeneratePartitionError(
        "pearson: hypothesis " + std::to_string(k_star) +
        " predicts constant leakage across all traces");
  }

  const std::size_t len = ts.traces.front().size();
  DistinguisherTrace d;
  d.hypothesis = k_star;
  d.kind = DistinguisherKind::pearson_correlation;
  d.values.assign(len, 0.0);

  std::vector<double> s_mean(len, 0.0);
  for (const auto& t : ts.traces)
    for (std::size_t s = 0; s < len; ++s) s_mean[s] += t.samples[s];
  for (auto& v : s_mean) v /= n;

  std::vector<double> cov(len, 0.0), s_var(len, 0.0);
  for (std::size_t i = 0; i < ts.traces.size(); ++i) {
    const double dl = leak[i] - l_mean;
    const auto& samples = ts.traces[i].samples;
    for (std::size_t s = 0; s < len; ++s) {
      const double ds = samples[s] - s_mean[s];
      cov[s] += dl * ds;
      s_var[s] += ds * ds;
    }
  }
  for (std::size_t s = 0; s < len; ++s) {
    const double denom = std::sqrt(l_var * s_var[s]);
    d.values[s] = denom > 0.0 ? cov[s] / denom : 0.0;
  }
  return d;
}

namespace {

double peak_abs(const std::vector<double>& values) {
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  return peak;
}

}  // namespace

AttackOutput attack_with_traces(const TraceSet& ts, DistinguisherKind kind,
                                const LeakageModel& m) {
  ts.validate();
  AttackOutput out;
  out.traces.resize(256);
  KeyRanking& r = out.ranking;
  r.entries.reserve(256);
  for (int k = 0; k < 256; ++k) {
    const auto key = static_cast<std::uint8_t>(k);
    auto& d = out.traces[static_cast<std::size_t>(k)];
    d.hypothesis = key;
    d.kind = kind;
    double peak = 0.0;
    try {
      d = kind == DistinguisherKind::difference_of_means
              ? difference_of_means(ts, key, m)
              : pearson_correlation(ts, key, m);
      peak = peak_abs(d.values);
    } catch (const DegeneratePartitionError& e) {
      r.warnings.emplace_back(e.what());
    }
    r.entries.push_back({key, peak});
  }

  std::stable_sort(r.entries.begin(), r.entries.end(),
                   [](const RankEntry& a, const RankEntry& b) {
                     if (a.peak != b.peak) return a.peak > b.peak;
                     return a.key < b.key;
                   });
  const double second = r.entries[1].peak;
  r.nearest_rival_margin =
      second > 0.0 ? r.entries[0].peak / second
                   : (r.entries[0].peak > 0.0
                          ? std::numeric_limits<double>::infinity()
                          : 1.0);
  return out;
}

KeyRanking attack(const TraceSet& ts, DistinguisherKind kind,
                  const LeakageModel& m) {
  return attack_with_traces(ts, kind, m).ranking;
}

int key_rank(const KeyRanking& r, std::uint8_t true_key) {
  for (std::size_t i = 0; i < r.entries.size(); ++i) {
    if (r.entries[i].key == true_key) return static_cast<int>(i) + 1;
  }
  throw std::invalid_argument("key_rank: ranking does not contain key " +
                              std::to_string(true_key));
}

}  // namespace ccsc

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ccsc/trace.hpp"

namespace ccsc {

/// Leakage prediction applied to (plaintext, key hypothesis) pairs.
/// hw_sbox_out: Hamming weight of the S-box output, classes in [0, 8].
struct LeakageModel {
  enum class Kind { hw_sbox_out } kind = Kind::hw_sbox_out;
  std::string description = "Hamming weight of the AES S-box output";
};

enum class DistinguisherKind {
  difference_of_means,
  pearson_correlation,
};

/// Per-sample distinguisher values for one key hypothesis.
struct DistinguisherTrace {
  std::vector<double> values;
  std::uint8_t hypothesis = 0;
  DistinguisherKind kind = DistinguisherKind::difference_of_means;
};

struct RankEntry {
  std::uint8_t key = 0;
  double peak = 0.0;  // max over time of |distinguisher|
};

/// All 256 hypotheses scored and sorted by peak, descending; ties broken
/// by smaller key value.
struct KeyRanking {
  std::vector<RankEntry> entries;
  double nearest_rival_margin = 1.0;  // best peak / second-best peak, >= 1
  std::vector<std::string> warnings;  // one per degenerate hypothesis
};

/// Thrown by difference_of_means when the HIGH (HW >= 5) or LOW (HW <= 3)
/// class is empty for the hypothesis.
class DegeneratePartitionError : public std::runtime_error {
 public:
  explicit DegeneratePartitionError(const std::string& what)
      : std::runtime_error(what) {}
};

/// Element i is the predicted leakage class of plaintexts[i] under k_star.
std::vector<int> predict_leakage(std::span<const std::uint8_t> plaintexts,
                                 std::uint8_t k_star, const LeakageModel& m);

/// mean(HIGH) - mean(LOW) per sample, HIGH = {HW >= 5}, LOW = {HW <= 3};
/// the HW = 4 class is discarded.
DistinguisherTrace difference_of_means(const TraceSet& ts, std::uint8_t k_star,
                                       const LeakageModel& m);

/// Per-sample Pearson correlation between sample values (across traces)
/// and the predicted leakage. Zero-variance sample columns yield 0 by
/// convention; a prediction constant across traces is an error.
DistinguisherTrace pearson_correlation(const TraceSet& ts, std::uint8_t k_star,
                                       const LeakageModel& m);

/// Runs the chosen distinguisher for all 256 hypotheses and ranks them by
/// peak |distinguisher|. A hypothesis with a degenerate partition scores 0
/// and adds a warning instead of aborting the attack.
KeyRanking attack(const TraceSet& ts, DistinguisherKind kind, const LeakageModel& m);

/// attack() together with the 256 per-hypothesis traces it scored, indexed
/// by hypothesis. A degenerate hypothesis leaves its values empty.
struct AttackOutput {
  KeyRanking ranking;
  std::vector<DistinguisherTrace> traces;
};
AttackOutput attack_with_traces(const TraceSet& ts, DistinguisherKind kind,
                                const LeakageModel& m);

/// 1-based position of true_key in the ranking.
int key_rank(const KeyRanking& r, std::uint8_t true_key);

}  // namespace ccsc

// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "unitone/filters.hpp"
#include "unitone/mixture.hpp"
#include "unitone/signal.hpp"

namespace unitone {

/// SNR ceiling. snr_db never returns more than this; a perfect estimate
/// (error energy below 1e-300) returns exactly this value.
inline constexpr double kSnrCeilingDb = 300.0;

/// 10 log10(sum clean^2 / sum (estimate - clean)^2), capped at kSnrCeilingDb.
double snr_db(const Waveform& clean, const Waveform& estimate);

inline bool snr_capped(double db) { return db >= kSnrCeilingDb; }

double delta_snr(const Waveform& clean, const Waveform& noisy,
                 const Waveform& enhanced);

/// Descriptive statistics with population std and linearly interpolated
/// quartiles.
struct StatSummary {
  double mean = 0, std = 0, min = 0, max = 0, median = 0, q1 = 0, q3 = 0;
  std::size_t count = 0;
};

StatSummary summarize(std::span<const double> values);

/// One (mixture, rule, basis) cell.
struct SnrResult {
  MixtureSpec mixture;
  GainRule rule;
  Basis basis;
  double input_snr_db;   // achieved, not target
  double output_snr_db;  // NaN when the cell failed
  double delta_snr_db;   // NaN when the cell failed
  double paired_linf_diff;  // max |s_dft - s_qft| for the same rule
  std::string flags;
  std::string error;

  bool ok() const { return error.empty(); }
};

enum class GroupKey { rule, basis, clean_id };

struct GroupSummary {
  std::vector<std::pair<GroupKey, std::string>> keys;
  StatSummary stats;
};

struct Aggregate {
  std::vector<GroupSummary> groups;
  /// Groups dropped because none of their cells produced a value.
  std::vector<std::string> warnings;
};

/// Groups successful results by `keys` (in the given order) and summarizes
/// delta SNR per group. Groups come out sorted by key values.
Aggregate aggregate(std::span<const SnrResult> results,
                    std::span<const GroupKey> keys);

/// sum w_i x_i / sum w_i. Throws InvalidArgument for nonpositive weights.
double weighted_average_gain(std::span<const double> values,
                             std::span<const double> weights);

struct ExperimentConfig {
  PipelineConfig pipeline;  // rule and basis fields are overridden per cell
  std::vector<GainRule> rules = {GainRule::wiener, GainRule::spectral_subtraction};
  std::vector<Basis> bases = {Basis::dft, Basis::qft};
  std::size_t threads = 0;  // 0 = hardware concurrency
};

struct ExperimentResult {
  /// Sorted by (mixture_id, rule, basis).
  std::vector<SnrResult> rows;
};

/// Cells are independent; a failing cell gets an error record and the run
/// continues.
ExperimentResult run_experiment(std::span<const CorpusEntry> corpus,
                                const ExperimentConfig& cfg);

/// Single cell through the same code path run_experiment uses.
SnrResult evaluate_cell(const CorpusEntry& entry, const PipelineConfig& cfg,
                        Waveform* enhanced_out = nullptr);

inline constexpr double kEquivalenceThreshold = 1e-6;

// CSV products.
std::string results_csv(const ExperimentResult& result);
std::string summary_csv(std::span<const SnrResult> results);
std::string boxdata_csv(std::span<const SnrResult> results);

/// Per-signal mean gains combined across signals: unweighted, weighted by
/// mixture count and (when durations are given) by clip duration.
struct AverageGain {
  GainRule rule;
  Basis basis;
  double unweighted;
  double count_weighted;
  double duration_weighted;  // NaN when no durations are known
};

std::vector<AverageGain> average_gains(
    std::span<const SnrResult> results,
    const std::map<std::string, double>& durations_s = {});
std::string averages_csv(std::span<const AverageGain> averages);

/// Parses results.csv back into SnrResult rows. Throws InvalidArgument
/// naming the offending column and row on schema violations.
std::vector<SnrResult> parse_results_csv(const std::filesystem::path& path);

}  // namespace unitone

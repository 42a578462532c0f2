// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "unitone/evaluation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <optional>
#include <thread>
#include <tuple>

#include "unitone/csv.hpp"
#include "unitone/errors.hpp"

namespace unitone {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinErrorEnergy = 1e-300;

double quantile(const std::vector<double>& sorted, double p) {
  const double pos = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::string key_name(GroupKey k) {
  switch (k) {
    case GroupKey::rule:
      return "rule";
    case GroupKey::basis:
      return "basis";
    case GroupKey::clean_id:
      return "clean_id";
  }
  return "?";
}

std::string key_value(const SnrResult& r, GroupKey k) {
  switch (k) {
    case GroupKey::rule:
      return std::string(to_string(r.rule));
    case GroupKey::basis:
      return std::string(to_string(r.basis));
    case GroupKey::clean_id:
      return r.mixture.clean_id;
  }
  return {};
}

void add_flag(std::string& flags, std::string_view flag) {
  if (!flags.empty()) flags += ';';
  flags += flag;
}

SnrResult make_row(const CorpusEntry& entry, GainRule rule, Basis basis) {
  return SnrResult{entry.spec,
                   rule,
                   basis,
                   entry.spec.achieved_snr_db,
                   kNaN,
                   kNaN,
                   kNaN,
                   {},
                   {}};
}

// Shared by evaluate_cell and run_experiment so a harness cell and a
// standalone run follow one code path.
std::optional<Waveform> run_cell(const CorpusEntry& entry, const PipelineConfig& cfg,
                                 const TransformOperator& op,
                                 const NoiseProfile& profile, SnrResult& row) {
  try {
    Waveform enhanced = denoise(entry.mixture.noisy, profile, cfg, op);
    row.output_snr_db = snr_db(entry.mixture.clean, enhanced);
    row.delta_snr_db = row.output_snr_db - row.input_snr_db;
    if (snr_capped(row.output_snr_db)) add_flag(row.flags, "capped");
    return enhanced;
  } catch (const std::exception& e) {
    row.error = e.what();
    return std::nullopt;
  }
}

struct MixtureOutcome {
  std::vector<SnrResult> rows;
};

double linf_diff(const Waveform& a, const Waveform& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double parse_number(const csv::Row& row, std::size_t col, std::string_view name,
                    std::size_t line, bool allow_empty) {
  const std::string& text = row[col];
  if (text.empty()) {
    if (allow_empty) return kNaN;
    throw InvalidArgument("results.csv row " + std::to_string(line) + ": column '" +
                          std::string(name) + "' is empty");
  }
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size()) {
    throw InvalidArgument("results.csv row " + std::to_string(line) + ": column '" +
                          std::string(name) + "' is not numeric ('" + text + "')");
  }
  return v;
}

}  // namespace

double snr_db(const Waveform& clean, const Waveform& estimate) {
  if (clean.size() != estimate.size()) {
    throw InvalidArgument("snr_db: clean and estimate lengths differ");
  }
  double signal = 0.0, error = 0.0;
  for (std::size_t i = 0; i < clean.size(); ++i) {
    signal += clean[i] * clean[i];
    const double e = estimate[i] - clean[i];
    error += e * e;
  }
  if (signal == 0.0) throw InvalidArgument("snr_db: clean signal is silent");
  if (error < kMinErrorEnergy) return kSnrCeilingDb;
  return std::min(10.0 * std::log10(signal / error), kSnrCeilingDb);
}

double delta_snr(const Waveform& clean, const Waveform& noisy,
                 const Waveform& enhanced) {
  return snr_db(clean, enhanced) - snr_db(clean, noisy);
}

StatSummary summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("cannot summarize an empty set");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  StatSummary s;
  s.count = sorted.size();
  double total = 0.0;
  for (double v : sorted) total += v;
  s.mean = total / static_cast<double>(s.count);
  double ss = 0.0;
  for (double v : sorted) ss += (v - s.mean) * (v - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(s.count));
  if (sorted.front() == sorted.back()) s.std = 0.0;
  s.min = sorted.front();
  s.max = sorted.back();
  s.median = quantile(sorted, 0.5);
  s.q1 = quantile(sorted, 0.25);
  s.q3 = quantile(sorted, 0.75);
  return s;
}

Aggregate aggregate(std::span<const SnrResult> results,
                    std::span<const GroupKey> keys) {
  std::map<std::vector<std::string>, std::vector<double>> groups;
  for (const SnrResult& r : results) {
    std::vector<std::string> k;
    for (GroupKey key : keys) k.push_back(key_value(r, key));
    auto& bucket = groups[k];
    if (r.ok() && !std::isnan(r.delta_snr_db)) bucket.push_back(r.delta_snr_db);
  }
  Aggregate out;
  for (const auto& [k, values] : groups) {
    if (values.empty()) {
      std::string label;
      for (std::size_t i = 0; i < keys.size(); ++i) {
        label += (i ? "," : "") + key_name(keys[i]) + "=" + k[i];
      }
      out.warnings.push_back("group " + label + " has no successful cells; excluded");
      continue;
    }
    GroupSummary g;
    for (std::size_t i = 0; i < keys.size(); ++i) g.keys.emplace_back(keys[i], k[i]);
    g.stats = summarize(values);
    out.groups.push_back(std::move(g));
  }
  return out;
}

double weighted_average_gain(std::span<const double> values,
                             std::span<const double> weights) {
  if (values.size() != weights.size()) {
    throw InvalidArgument("values and weights differ in length");
  }
  if (values.empty()) throw InvalidArgument("weighted average of nothing");
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(weights[i] > 0.0)) throw InvalidArgument("weights must be positive");
    num += weights[i] * values[i];
    den += weights[i];
  }
  return num / den;
}

SnrResult evaluate_cell(const CorpusEntry& entry, const PipelineConfig& cfg,
                        Waveform* enhanced_out) {
  SnrResult row = make_row(entry, cfg.filter.rule, cfg.basis);
  try {
    cfg.validate();
    const TransformOperator op = make_operator(cfg);
    const NoiseProfile profile =
        pipeline_profile(entry.mixture.noisy, entry.mixture.scaled_noise, cfg, op);
    auto enhanced = run_cell(entry, cfg, op, profile, row);
    if (enhanced && enhanced_out) *enhanced_out = std::move(*enhanced);
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  if (!row.ok()) add_flag(row.flags, "error: " + row.error);
  return row;
}

ExperimentResult run_experiment(std::span<const CorpusEntry> corpus,
                                const ExperimentConfig& cfg) {
  cfg.pipeline.validate();
  std::vector<TransformOperator> ops;
  for (Basis b : cfg.bases) {
    PipelineConfig p = cfg.pipeline;
    p.basis = b;
    ops.push_back(make_operator(p));
  }

  std::vector<MixtureOutcome> outcomes(corpus.size());
  auto work = [&](std::size_t i) {
    const CorpusEntry& entry = corpus[i];
    // enhanced[rule][basis]
    std::vector<std::vector<std::optional<Waveform>>> enhanced(
        cfg.rules.size(), std::vector<std::optional<Waveform>>(cfg.bases.size()));
    std::vector<std::vector<SnrResult>> rows(cfg.rules.size());
    for (std::size_t b = 0; b < cfg.bases.size(); ++b) {
      PipelineConfig p = cfg.pipeline;
      p.basis = cfg.bases[b];
      std::optional<NoiseProfile> profile;
      std::string profile_error;
      try {
        profile = pipeline_profile(entry.mixture.noisy, entry.mixture.scaled_noise, p,
                                   ops[b]);
      } catch (const std::exception& e) {
        profile_error = e.what();
      }
      for (std::size_t r = 0; r < cfg.rules.size(); ++r) {
        p.filter.rule = cfg.rules[r];
        SnrResult row = make_row(entry, p.filter.rule, p.basis);
        if (profile) {
          enhanced[r][b] = run_cell(entry, p, ops[b], *profile, row);
        } else {
          row.error = profile_error;
        }
        rows[r].push_back(std::move(row));
      }
    }
    const auto dft = std::find(cfg.bases.begin(), cfg.bases.end(), Basis::dft);
    const auto qft = std::find(cfg.bases.begin(), cfg.bases.end(), Basis::qft);
    for (std::size_t r = 0; r < cfg.rules.size(); ++r) {
      double diff = kNaN;
      if (dft != cfg.bases.end() && qft != cfg.bases.end()) {
        const auto& a = enhanced[r][dft - cfg.bases.begin()];
        const auto& b = enhanced[r][qft - cfg.bases.begin()];
        if (a && b) diff = linf_diff(*a, *b);
      }
      for (SnrResult& row : rows[r]) {
        row.paired_linf_diff = diff;
        if (!std::isnan(diff) && diff < kEquivalenceThreshold) add_flag(row.flags, "equiv");
        if (!row.ok()) add_flag(row.flags, "error: " + row.error);
        outcomes[i].rows.push_back(std::move(row));
      }
    }
  };

  std::size_t threads = cfg.threads ? cfg.threads : std::thread::hardware_concurrency();
  threads = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(corpus.size(), 1));
  if (threads == 1) {
    for (std::size_t i = 0; i < corpus.size(); ++i) work(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < corpus.size(); i = next++) work(i);
      });
    }
  }

  ExperimentResult result;
  for (auto& o : outcomes) {
    for (auto& row : o.rows) result.rows.push_back(std::move(row));
  }
  std::stable_sort(result.rows.begin(), result.rows.end(),
                   [](const SnrResult& a, const SnrResult& b) {
                     return std::make_tuple(a.mixture.mixture_id, to_string(a.rule),
                                            to_string(a.basis)) <
                            std::make_tuple(b.mixture.mixture_id, to_string(b.rule),
                                            to_string(b.basis));
                   });
  return result;
}

std::string results_csv(const ExperimentResult& result) {
  std::string out;
  csv::append_row(out, {"mixture_id", "clean_id", "noise_id", "target_snr_db",
                        "achieved_snr_db", "rule", "basis", "output_snr_db",
                        "delta_snr_db", "paired_linf_diff", "flags"});
  for (const SnrResult& r : result.rows) {
    csv::append_row(out, {r.mixture.mixture_id, r.mixture.clean_id, r.mixture.noise_id,
                          csv::fixed(r.mixture.target_snr_db, 2),
                          csv::fixed(r.input_snr_db), std::string(to_string(r.rule)),
                          std::string(to_string(r.basis)), csv::fixed(r.output_snr_db),
                          csv::fixed(r.delta_snr_db), csv::scientific(r.paired_linf_diff),
                          r.flags});
  }
  return out;
}

namespace {

void append_summary_rows(std::string& out, const Aggregate& agg, std::string_view level) {
  for (const GroupSummary& g : agg.groups) {
    std::string rule, basis, clean;
    for (const auto& [k, v] : g.keys) {
      if (k == GroupKey::rule) rule = v;
      if (k == GroupKey::basis) basis = v;
      if (k == GroupKey::clean_id) clean = v;
    }
    const StatSummary& s = g.stats;
    csv::append_row(out, {std::string(level), rule, basis, clean, std::to_string(s.count),
                          csv::fixed(s.mean), csv::fixed(s.std), csv::fixed(s.min),
                          csv::fixed(s.max), csv::fixed(s.median), csv::fixed(s.q1),
                          csv::fixed(s.q3)});
  }
}

}  // namespace

std::string summary_csv(std::span<const SnrResult> results) {
  std::string out;
  csv::append_row(out, {"level", "rule", "basis", "clean_id", "count", "mean", "std_pop",
                        "min", "max", "median", "q1", "q3"});
  const GroupKey method[] = {GroupKey::rule, GroupKey::basis};
  const GroupKey signal[] = {GroupKey::rule, GroupKey::basis, GroupKey::clean_id};
  append_summary_rows(out, aggregate(results, method), "method");
  append_summary_rows(out, aggregate(results, signal), "signal");
  return out;
}

std::string boxdata_csv(std::span<const SnrResult> results) {
  std::string out;
  csv::append_row(out, {"clean_id", "rule", "basis", "min", "q1", "median", "q3", "max"});
  const GroupKey keys[] = {GroupKey::clean_id, GroupKey::rule, GroupKey::basis};
  for (const GroupSummary& g : aggregate(results, keys).groups) {
    const StatSummary& s = g.stats;
    csv::append_row(out, {g.keys[0].second, g.keys[1].second, g.keys[2].second,
                          csv::fixed(s.min), csv::fixed(s.q1), csv::fixed(s.median),
                          csv::fixed(s.q3), csv::fixed(s.max)});
  }
  return out;
}

std::vector<AverageGain> average_gains(std::span<const SnrResult> results,
                                       const std::map<std::string, double>& durations_s) {
  const GroupKey keys[] = {GroupKey::rule, GroupKey::basis, GroupKey::clean_id};
  const Aggregate per_signal = aggregate(results, keys);
  std::map<std::pair<std::string, std::string>, std::vector<const GroupSummary*>> methods;
  for (const GroupSummary& g : per_signal.groups) {
    methods[{g.keys[0].second, g.keys[1].second}].push_back(&g);
  }
  std::vector<AverageGain> out;
  for (const auto& [method, signals] : methods) {
    std::vector<double> means, counts, durations;
    bool have_durations = !durations_s.empty();
    for (const GroupSummary* g : signals) {
      means.push_back(g->stats.mean);
      counts.push_back(static_cast<double>(g->stats.count));
      const auto it = durations_s.find(g->keys[2].second);
      if (it == durations_s.end()) {
        have_durations = false;
      } else {
        durations.push_back(it->second);
      }
    }
    const std::vector<double> ones(means.size(), 1.0);
    out.push_back({parse_gain_rule(method.first), parse_basis(method.second),
                   weighted_average_gain(means, ones),
                   weighted_average_gain(means, counts),
                   have_durations ? weighted_average_gain(means, durations) : kNaN});
  }
  return out;
}

std::string averages_csv(std::span<const AverageGain> averages) {
  std::string out;
  csv::append_row(out, {"rule", "basis", "unweighted_mean", "count_weighted_mean",
                        "duration_weighted_mean"});
  for (const AverageGain& a : averages) {
    csv::append_row(out, {std::string(to_string(a.rule)), std::string(to_string(a.basis)),
                          csv::fixed(a.unweighted), csv::fixed(a.count_weighted),
                          csv::fixed(a.duration_weighted)});
  }
  return out;
}

std::vector<SnrResult> parse_results_csv(const std::filesystem::path& path) {
  const csv::Table table = csv::read_file(path);
  static const char* const kColumns[] = {
      "mixture_id", "clean_id",      "noise_id",      "target_snr_db",
      "achieved_snr_db", "rule",     "basis",         "output_snr_db",
      "delta_snr_db",    "paired_linf_diff", "flags"};
  std::vector<std::size_t> idx;
  for (const char* name : kColumns) {
    const auto c = table.column(name);
    if (!c) throw InvalidArgument("results.csv: missing column '" + std::string(name) + "'");
    idx.push_back(*c);
  }
  std::vector<SnrResult> rows;
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const csv::Row& row = table.rows[i];
    const std::size_t line = i + 2;  // 1-based, after the header
    if (row.size() != table.header.size()) {
      throw InvalidArgument("results.csv row " + std::to_string(line) + ": expected " +
                            std::to_string(table.header.size()) + " fields, got " +
                            std::to_string(row.size()));
    }
    SnrResult r;
    r.mixture.mixture_id = row[idx[0]];
    r.mixture.clean_id = row[idx[1]];
    r.mixture.noise_id = row[idx[2]];
    r.mixture.target_snr_db = parse_number(row, idx[3], kColumns[3], line, false);
    r.input_snr_db = parse_number(row, idx[4], kColumns[4], line, false);
    r.mixture.achieved_snr_db = r.input_snr_db;
    r.mixture.seed = 0;
    r.mixture.noise_scale = kNaN;
    try {
      r.rule = parse_gain_rule(row[idx[5]]);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("results.csv row " + std::to_string(line) +
                            ": column 'rule' has unknown value '" + row[idx[5]] + "'");
    }
    try {
      r.basis = parse_basis(row[idx[6]]);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("results.csv row " + std::to_string(line) +
                            ": column 'basis' has unknown value '" + row[idx[6]] + "'");
    }
    r.output_snr_db = parse_number(row, idx[7], kColumns[7], line, true);
    r.delta_snr_db = parse_number(row, idx[8], kColumns[8], line, true);
    r.paired_linf_diff = parse_number(row, idx[9], kColumns[9], line, true);
    r.flags = row[idx[10]];
    if (r.flags.find("error") != std::string::npos) r.error = r.flags;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace unitone

// Copyright 2026 The Unitone Authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <ostream>
#include <sstream>

#include "unitone/audio_io.hpp"
#include "unitone/csv.hpp"
#include "unitone/errors.hpp"

namespace unitone::cli {

namespace {

// Raised for bad flag combinations discovered after parsing.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

std::string format_grid(const std::vector<double>& grid) {
  std::string out;
  for (double v : grid) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    out += (out.empty() ? "" : ",");
    out += buf;
  }
  return out;
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream o;
  o << "# unitone resolved configuration\n";
  o << "seed=" << c.master_seed << "\n";
  o << "sample-rate=" << csv::exact(c.sample_rate) << "\n";
  o << "duration=" << csv::exact(c.duration_s) << "\n";
  o << "frame-len=" << c.frame_length << "\n";
  o << "hop=" << c.hop << "\n";
  o << "window=" << c.window << "\n";
  o << "alpha=" << csv::exact(c.alpha) << "\n";
  o << "beta=" << csv::exact(c.beta) << "\n";
  o << "epsilon=" << csv::exact(c.epsilon) << "\n";
  o << "noise-mode=" << c.noise_mode << "\n";
  o << "snr-grid=" << format_grid(c.snr_grid) << "\n";
  if (!c.clean_sources.empty()) o << "clean=" << join(c.clean_sources) << "\n";
  if (!c.noise_sources.empty()) o << "noise=" << join(c.noise_sources) << "\n";
  o << "rule=" << c.rule << "\n";
  o << "basis=" << c.basis << "\n";
  o << "unity-gain=" << (c.unity_gain ? "true" : "false") << "\n";
  return o.str();
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  write_file_atomic(path, text);
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

void write_wav_checked(const std::filesystem::path& path, const Waveform& x,
                       std::ostream& err) {
  const std::size_t clipped = write_wav(path, x);
  if (clipped) {
    err << "warning: " << path.string() << ": clipped " << clipped
        << " samples outside [-1, 1]\n";
  }
}

Waveform read_input(const std::string& path, double rate, const char* flag) {
  try {
    return read_wav(path, rate);
  } catch (const std::exception& e) {
    throw IoError(std::string(flag) + " " + path + ": " + e.what());
  }
}

// --- synth -------------------------------------------------------------

int cmd_synth(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CorpusConfig cc = cfg.corpus();
  cc.clean_wavs.clear();
  const auto sources = clean_sources(cc);
  const auto dir = cfg.out_dir / "clean";
  ensure_dir(dir);
  std::string manifest;
  csv::append_row(manifest, {"clean_id", "seed", "samples", "sample_rate", "file"});
  for (const auto& s : sources) {
    const auto file = dir / (s.id + ".wav");
    write_wav_checked(file, s.signal, err);
    csv::append_row(manifest, {s.id, std::to_string(s.seed), std::to_string(s.signal.size()),
                               csv::exact(s.signal.sample_rate()),
                               "clean/" + s.id + ".wav"});
  }
  write_text(cfg.out_dir / "synth_manifest.csv", manifest);
  write_text(cfg.out_dir / "run.ini", to_ini(cfg));
  out << "wrote " << sources.size() << " clean signals to " << dir.string() << "\n";
  return kExitOk;
}

// --- mix ---------------------------------------------------------------

int cmd_mix(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto corpus = build_corpus(cfg.corpus());
  const auto dir = cfg.out_dir / "mixtures";
  ensure_dir(dir);
  for (const auto& e : corpus) {
    const std::string stem = e.spec.mixture_id;
    write_wav_checked(dir / (stem + "_noisy.wav"), e.mixture.noisy, err);
    write_wav_checked(dir / (stem + "_clean.wav"), e.mixture.clean, err);
    write_wav_checked(dir / (stem + "_noise.wav"), e.mixture.scaled_noise, err);
  }
  write_text(cfg.out_dir / "manifest.csv", manifest_csv(corpus));
  write_text(cfg.out_dir / "run.ini", to_ini(cfg));
  out << "wrote " << corpus.size() << " mixtures to " << dir.string() << "\n";
  return kExitOk;
}

// --- denoise -----------------------------------------------------------

struct DenoiseArgs {
  std::string input;
  std::string noise_ref;
  std::string clean;
  std::string output;
};

int cmd_denoise(const RunConfig& cfg, const DenoiseArgs& args, std::ostream& out,
                std::ostream& err) {
  const PipelineConfig pc = cfg.pipeline();
  if (pc.noise_mode.kind == NoiseMode::Kind::oracle && args.noise_ref.empty()) {
    throw UsageError(
        "--noise-mode oracle needs --noise-ref (or use --noise-mode leading:K)");
  }
  const Waveform noisy = read_input(args.input, cfg.sample_rate, "input");
  std::optional<Waveform> noise_ref;
  if (!args.noise_ref.empty()) {
    noise_ref = read_input(args.noise_ref, cfg.sample_rate, "--noise-ref");
  }
  std::optional<Waveform> clean;
  if (!args.clean.empty()) clean = read_input(args.clean, cfg.sample_rate, "--clean");

  const Waveform enhanced = denoise(noisy, noise_ref, pc);
  const std::filesystem::path output =
      args.output.empty() ? cfg.out_dir / "denoised.wav" : std::filesystem::path(args.output);
  if (output.has_parent_path()) ensure_dir(output.parent_path());
  write_wav_checked(output, enhanced, err);

  out << "rule: " << cfg.rule << ", basis: " << cfg.basis
      << ", noise mode: " << pc.noise_mode.to_string() << "\n";
  if (clean) {
    if (clean->size() != noisy.size()) {
      throw InvalidArgument("--clean " + args.clean + " length differs from the input");
    }
    const double in = snr_db(*clean, noisy);
    const double outp = snr_db(*clean, enhanced);
    out << "Input SNR: " << csv::fixed(in) << " dB\n";
    out << "Output SNR: " << csv::fixed(outp) << " dB\n";
    out << "Delta SNR: " << csv::fixed(outp - in) << " dB\n";
  } else {
    out << "SNR: n/a\n";
  }
  out << "wrote " << output.string() << "\n";
  return kExitOk;
}

// --- experiment --------------------------------------------------------

void print_table(std::ostream& out, const std::vector<SnrResult>& rows, GainRule rule,
                 const char* title) {
  out << title << " (delta SNR, dB)\n";
  char line[128];
  std::snprintf(line, sizeof line, "%-10s %8s %8s %8s %8s\n", "Method", "Mean",
                "Std(σ)", "Min", "Max");
  out << line;
  for (Basis b : {Basis::dft, Basis::qft}) {
    std::vector<double> values;
    for (const auto& r : rows) {
      if (r.rule == rule && r.basis == b && r.ok() && !std::isnan(r.delta_snr_db)) {
        values.push_back(r.delta_snr_db);
      }
    }
    const char* name = b == Basis::dft ? "Classical" : "QFT";
    if (values.empty()) {
      std::snprintf(line, sizeof line, "%-10s %8s\n", name, "n/a");
    } else {
      const StatSummary s = summarize(values);
      std::snprintf(line, sizeof line, "%-10s %8.3f %8.3f %8.3f %8.3f\n", name, s.mean,
                    s.std, s.min, s.max);
    }
    out << line;
  }
}

std::map<GainRule, double> max_paired_diff(const std::vector<SnrResult>& rows) {
  std::map<GainRule, double> m;
  for (const auto& r : rows) {
    if (std::isnan(r.paired_linf_diff)) continue;
    auto [it, inserted] = m.emplace(r.rule, r.paired_linf_diff);
    if (!inserted) it->second = std::max(it->second, r.paired_linf_diff);
  }
  return m;
}

void print_paired(std::ostream& out, const std::vector<SnrResult>& rows) {
  for (const auto& [rule, diff] : max_paired_diff(rows)) {
    out << "max paired |s_dft - s_qft| (" << to_string(rule)
        << "): " << csv::scientific(diff, 3)
        << (diff < kEquivalenceThreshold ? "  [bases equivalent within 1e-6]" : "")
        << "\n";
  }
}

int cmd_experiment(const RunConfig& cfg, bool dry_run, std::ostream& out,
                   std::ostream& err) {
  const auto corpus = build_corpus(cfg.corpus());
  ExperimentConfig ec;
  ec.pipeline = cfg.pipeline();
  ec.threads = cfg.threads;

  if (dry_run) {
    std::size_t cells = 0;
    for (const auto& e : corpus) {
      for (GainRule r : ec.rules) {
        for (Basis b : ec.bases) {
          out << e.spec.mixture_id << " " << e.spec.clean_id << " " << e.spec.noise_id
              << " " << csv::fixed(e.spec.target_snr_db, 1) << "dB " << to_string(r)
              << " " << to_string(b) << "\n";
          ++cells;
        }
      }
    }
    out << "planned cells: " << cells << " (" << corpus.size() << " mixtures x "
        << ec.rules.size() << " rules x " << ec.bases.size() << " bases)\n";
    return kExitOk;
  }

  const ExperimentResult result = run_experiment(corpus, ec);
  std::map<std::string, double> durations;
  for (const auto& e : corpus) durations[e.spec.clean_id] = e.mixture.clean.duration_seconds();

  ensure_dir(cfg.out_dir);
  write_text(cfg.out_dir / "results.csv", results_csv(result));
  write_text(cfg.out_dir / "summary.csv", summary_csv(result.rows));
  write_text(cfg.out_dir / "boxdata.csv", boxdata_csv(result.rows));
  const auto averages = average_gains(result.rows, durations);
  write_text(cfg.out_dir / "averages.csv", averages_csv(averages));
  write_text(cfg.out_dir / "manifest.csv", manifest_csv(corpus));
  write_text(cfg.out_dir / "run.ini", to_ini(cfg));

  std::size_t failed = 0;
  for (const auto& r : result.rows) failed += r.ok() ? 0 : 1;
  out << "evaluated " << result.rows.size() << " cells (" << corpus.size()
      << " mixtures), " << failed << " failed\n\n";
  print_table(out, result.rows, GainRule::wiener, "Table 1: Wiener filter");
  out << "\n";
  print_table(out, result.rows, GainRule::spectral_subtraction,
              "Table 2: Spectral subtraction");
  out << "\n";
  print_paired(out, result.rows);
  if (failed) err << "warning: " << failed << " cells failed; see flags in results.csv\n";
  out << "wrote results to " << cfg.out_dir.string() << "\n";
  return kExitOk;
}

// --- report ------------------------------------------------------------

std::string box_dat(const std::vector<SnrResult>& rows, GainRule rule) {
  const GroupKey keys[] = {GroupKey::clean_id, GroupKey::basis};
  std::vector<SnrResult> subset;
  for (const auto& r : rows) {
    if (r.rule == rule) subset.push_back(r);
  }
  std::map<std::string, std::map<std::string, StatSummary>> by_signal;
  for (const auto& g : aggregate(subset, keys).groups) {
    by_signal[g.keys[0].second][g.keys[1].second] = g.stats;
  }
  std::ostringstream o;
  o << "# " << to_string(rule) << ": per-signal delta SNR box statistics (dB)\n";
  o << "# index clean_id dft_min dft_q1 dft_median dft_q3 dft_max"
       " qft_min qft_q1 qft_median qft_q3 qft_max\n";
  std::size_t index = 1;
  for (const auto& [signal, per_basis] : by_signal) {
    o << index++ << " " << signal;
    for (const char* b : {"dft", "qft"}) {
      const auto it = per_basis.find(b);
      if (it == per_basis.end()) {
        o << " NaN NaN NaN NaN NaN";
        continue;
      }
      const StatSummary& s = it->second;
      o << " " << csv::fixed(s.min) << " " << csv::fixed(s.q1) << " "
        << csv::fixed(s.median) << " " << csv::fixed(s.q3) << " " << csv::fixed(s.max);
    }
    o << "\n";
  }
  return o.str();
}

std::string avg_dat(const std::vector<AverageGain>& averages, GainRule rule) {
  std::ostringstream o;
  o << "# " << to_string(rule) << ": average delta SNR across signals (dB)\n";
  o << "# basis unweighted count_weighted\n";
  for (const auto& a : averages) {
    if (a.rule != rule) continue;
    o << to_string(a.basis) << " " << csv::fixed(a.unweighted) << " "
      << csv::fixed(a.count_weighted) << "\n";
  }
  return o.str();
}

int cmd_report(const std::filesystem::path& results_path,
               const std::optional<std::filesystem::path>& out_dir, std::ostream& out) {
  const auto rows = parse_results_csv(results_path);
  if (rows.empty()) {
    throw InvalidArgument("results.csv " + results_path.string() + " has no result rows");
  }
  std::filesystem::path dir = out_dir ? *out_dir : results_path.parent_path();
  if (dir.empty()) dir = ".";
  ensure_dir(dir);
  write_text(dir / "boxdata.csv", boxdata_csv(rows));
  const auto averages = average_gains(rows);
  for (GainRule rule : {GainRule::wiener, GainRule::spectral_subtraction}) {
    const std::string name(to_string(rule));
    write_text(dir / ("box_" + name + ".dat"), box_dat(rows, rule));
    write_text(dir / ("avg_" + name + ".dat"), avg_dat(averages, rule));
  }
  for (const auto& a : averages) {
    out << to_string(a.rule) << "/" << to_string(a.basis)
        << ": unweighted mean " << csv::fixed(a.unweighted, 3)
        << " dB, count-weighted mean " << csv::fixed(a.count_weighted, 3) << " dB\n";
  }
  print_paired(out, rows);
  out << "wrote plot data to " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

PipelineConfig RunConfig::pipeline() const {
  PipelineConfig p;
  p.framing = {frame_length, hop};
  p.window = parse_window_kind(window);
  p.basis = parse_basis(basis);
  p.filter.rule = parse_gain_rule(rule);
  p.filter.alpha = alpha;
  p.filter.beta = beta;
  p.filter.epsilon = epsilon;
  p.noise_mode = NoiseMode::parse(noise_mode);
  p.force_unity_gain = unity_gain;
  return p;
}

CorpusConfig RunConfig::corpus() const {
  CorpusConfig c;
  c.master_seed = master_seed;
  c.sample_rate = sample_rate;
  c.duration_s = duration_s;
  c.snr_grid = snr_grid;
  c.clean_wavs.assign(clean_sources.begin(), clean_sources.end());
  c.noise_wavs.assign(noise_sources.begin(), noise_sources.end());
  return c;
}

void RunConfig::validate() const {
  pipeline().validate();
  if (!(sample_rate > 0.0)) throw InvalidArgument("--sample-rate must be positive");
  if (!(duration_s > 0.0)) throw InvalidArgument("--duration must be positive");
  if (static_cast<double>(frame_length) > duration_s * sample_rate) {
    throw InvalidArgument("--duration gives fewer samples than one frame");
  }
  if (snr_grid.empty()) throw InvalidArgument("--snr-grid is empty");
  for (double v : snr_grid) {
    if (!std::isfinite(v)) throw InvalidArgument("--snr-grid values must be finite");
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectral denoising with DFT and unitary QFT transform bases", "unitone"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI-style key=value file; flags override it");

  RunConfig cfg;
  auto* seed_opt = app.add_option("--seed", cfg.master_seed,
                                  "Master seed (falls back to $UNITONE_SEED)");
  app.add_option("--sample-rate", cfg.sample_rate, "Sample rate in Hz");
  app.add_option("--duration", cfg.duration_s, "Synthetic clip duration in seconds");
  app.add_option("--frame-len", cfg.frame_length, "Frame length L (= transform size)");
  app.add_option("--hop", cfg.hop, "Hop size H");
  app.add_option("--window", cfg.window, "Analysis window")
      ->check(CLI::IsMember({"hann", "hamming", "rectangular"}));
  app.add_option("--alpha", cfg.alpha, "Over-subtraction factor (>= 1)");
  app.add_option("--beta", cfg.beta, "Spectral-subtraction gain floor in [0, 1)");
  app.add_option("--epsilon", cfg.epsilon, "Division guard");
  app.add_option("--noise-mode", cfg.noise_mode, "oracle | leading:K");
  app.add_option("--snr-grid", cfg.snr_grid, "Comma-separated input SNRs in dB")
      ->delimiter(',');
  app.add_option("--clean", cfg.clean_sources,
                 "Clean speech WAVs replacing the synthetic stand-ins")
      ->delimiter(',');
  app.add_option("--noise", cfg.noise_sources, "Noise WAVs replacing the seeded noise")
      ->delimiter(',');
  auto* out_dir_opt = app.add_option("--out-dir", cfg.out_dir, "Output directory");
  app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)");
  app.add_option("--rule", cfg.rule, "Gain rule")->check(CLI::IsMember({"wiener", "ss"}));
  app.add_option("--basis", cfg.basis, "Transform basis")
      ->check(CLI::IsMember({"dft", "qft"}));
  app.add_flag("--unity-gain", cfg.unity_gain,
               "Diagnostic: bypass the gain rule (all gains 1)");

  auto* synth = app.add_subcommand("synth", "Write the synthetic clean signals");
  auto* mix = app.add_subcommand("mix", "Build the noisy corpus and its manifest");

  auto* denoise_cmd = app.add_subcommand("denoise", "Denoise a single WAV file");
  DenoiseArgs dargs;
  denoise_cmd->add_option("input", dargs.input, "Noisy input WAV")->required();
  denoise_cmd->add_option("--noise-ref", dargs.noise_ref, "Noise-only reference WAV");
  denoise_cmd->add_option("--clean-ref", dargs.clean,
                          "Clean reference WAV for SNR reporting");
  denoise_cmd->add_option("-o,--output", dargs.output, "Output WAV path");

  auto* experiment = app.add_subcommand("experiment", "Run the full rule x basis grid");
  bool dry_run = false;
  experiment->add_flag("--dry-run", dry_run, "Print the planned cells and exit");

  auto* report = app.add_subcommand("report", "Derive plot data from results.csv");
  std::string results_path;
  report->add_option("results", results_path, "results.csv from an experiment run")
      ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << "run 'unitone --help' for usage\n";
    return kExitUsage;
  }

  if (seed_opt->count() == 0) {
    if (const char* env = std::getenv("UNITONE_SEED"); env && *env) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (*end != '\0') {
        err << "usage error: UNITONE_SEED='" << env << "' is not an unsigned integer\n";
        return kExitUsage;
      }
      cfg.master_seed = v;
    }
  }

  try {
    cfg.validate();
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(cfg, out, err);
    if (*mix) return cmd_mix(cfg, out, err);
    if (*denoise_cmd) return cmd_denoise(cfg, dargs, out, err);
    if (*experiment) return cmd_experiment(cfg, dry_run, out, err);
    if (*report) {
      std::optional<std::filesystem::path> dir;
      if (out_dir_opt->count()) dir = cfg.out_dir;
      return cmd_report(results_path, dir, out);
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace unitone::cli

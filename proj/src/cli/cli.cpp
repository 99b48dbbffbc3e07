// Copyright 2026  launderbench authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "launderbench/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <unistd.h>

#include "launderbench/attack.hpp"
#include "launderbench/augment.hpp"
#include "launderbench/error.hpp"
#include "launderbench/log.hpp"
#include "launderbench/process.hpp"
#include "launderbench/rng.hpp"

namespace lb::cli {
namespace fs = std::filesystem;

namespace {

struct OptionSpec {
  const char* key;
  const char* help;
  const char* commands;  // space-separated subcommands accepting the flag
  bool is_flag = false;
};

const OptionSpec kOptions[] = {
    {"manifest", "trial manifest", "launder evaluate report"},
    {"manifest-layout", "manifest columns: native or asvspoof5", "launder evaluate report"},
    {"scores", "score file: <utterance_id> <score> per line", "evaluate report"},
    {"audio-root", "directory manifest paths are relative to", "launder"},
    {"out", "output directory", "launder report"},
    {"noise-dir", "directory holding babble/volvo/cafe/street .wav", "launder noise-check"},
    {"seed", "pipeline seed", "launder selftest"},
    {"fraction", "fraction of the manifest to augment, in (0, 1]", "launder"},
    {"jobs", "worker threads (0 = all cores)", "launder"},
    {"ffmpeg", "ffmpeg executable for the default codec backend", "launder"},
    {"encode-cmd", "encoder template with {in} {out} {bitrate_kbps}", "launder"},
    {"decode-cmd", "decoder template with {in} {out}", "launder"},
    {"codec-identity", "name recorded for custom codec templates", "launder"},
    {"c-miss", "cost of a missed bonafide trial", "evaluate report"},
    {"c-fa", "cost of an accepted spoof trial", "evaluate report"},
    {"pi-spoof", "spoof prior", "evaluate report"},
    {"invert-scores", "negate scores (lower = bonafide input)", "evaluate report", true},
    {"join", "strict or intersect", "evaluate report"},
    {"format", "tsv, csv or markdown", "report"},
    {"prefix", "report file name prefix", "report"},
    {"layout", "comma list of pooled, attack, codec, grid", "report"},
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  T out{};
  const char* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, out);
  if (ec != std::errc() || ptr != end || value.empty()) {
    throw InvalidParameter("invalid value '" + value + "' for " + key);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw InvalidParameter("invalid boolean '" + value + "' for " + key);
}

void apply_setting(RunConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "manifest") cfg.manifest = value;
  else if (key == "manifest-layout") {
    if (value == "native") cfg.manifest_layout = protocol::ManifestLayout::kNative;
    else if (value == "asvspoof5") cfg.manifest_layout = protocol::ManifestLayout::kAsvspoof5;
    else throw InvalidParameter("manifest-layout must be native or asvspoof5");
  } else if (key == "scores") cfg.scores = value;
  else if (key == "audio-root") cfg.audio_root = value;
  else if (key == "out") cfg.out_dir = value;
  else if (key == "noise-dir") cfg.noise_dir = value;
  else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
  else if (key == "fraction") cfg.fraction = parse_number<double>(key, value);
  else if (key == "jobs") cfg.parallelism = parse_number<std::size_t>(key, value);
  else if (key == "ffmpeg") cfg.ffmpeg = value;
  else if (key == "encode-cmd") cfg.encode_cmd = value;
  else if (key == "decode-cmd") cfg.decode_cmd = value;
  else if (key == "codec-identity") cfg.codec_identity = value;
  else if (key == "c-miss") cfg.metric.c_miss = parse_number<double>(key, value);
  else if (key == "c-fa") cfg.metric.c_fa = parse_number<double>(key, value);
  else if (key == "pi-spoof") cfg.metric.pi_spoof = parse_number<double>(key, value);
  else if (key == "invert-scores") cfg.invert_scores = parse_bool(key, value);
  else if (key == "join") {
    if (value == "strict") cfg.join = protocol::JoinPolicy::kStrict;
    else if (value == "intersect") cfg.join = protocol::JoinPolicy::kIntersect;
    else throw InvalidParameter("join must be strict or intersect");
  } else if (key == "format") cfg.format = reporting::parse_format(value);
  else if (key == "prefix") cfg.prefix = value;
  else if (key == "layout") cfg.layout = value;
  else throw InvalidParameter("unknown config key '" + key + "'");
}

std::string_view layout_name(protocol::ManifestLayout layout) {
  return layout == protocol::ManifestLayout::kNative ? "native" : "asvspoof5";
}

void require_file(const fs::path& p, const char* what) {
  if (p.empty()) throw InvalidParameter(std::string("missing required --") + what);
  if (!fs::is_regular_file(p)) {
    throw IoFailure(std::string(what) + " file not found: " + p.string());
  }
}

void require_dir(const fs::path& p, const char* what) {
  if (p.empty()) throw InvalidParameter(std::string("missing required --") + what);
  if (!fs::is_directory(p)) {
    throw IoFailure(std::string(what) + " directory not found: " + p.string());
  }
}

bool is_executable(const fs::path& p) {
  return fs::is_regular_file(p) && ::access(p.c_str(), X_OK) == 0;
}

// Throws BackendInvocationFailed when the template's program cannot be found.
void check_program(const std::string& command_template) {
  const std::vector<std::string> argv = split_command_line(command_template);
  if (argv.empty()) throw InvalidParameter("empty codec command template");
  const std::string& prog = argv.front();
  if (prog.find('/') != std::string::npos) {
    if (is_executable(prog)) return;
  } else if (const char* path = std::getenv("PATH")) {
    std::string_view rest = path;
    while (true) {
      const auto colon = rest.find(':');
      const std::string dir(rest.substr(0, colon));
      if (is_executable(fs::path(dir.empty() ? "." : dir) / prog)) return;
      if (colon == std::string_view::npos) break;
      rest.remove_prefix(colon + 1);
    }
  }
  throw BackendInvocationFailed("codec program '" + prog + "' not found or not executable");
}

std::vector<protocol::TrialRecord> load_manifest(const RunConfig& cfg) {
  require_file(cfg.manifest, "manifest");
  return protocol::parse_manifest(protocol::read_text_file(cfg.manifest), cfg.manifest_layout);
}

std::vector<protocol::ScoredTrial> load_scored(const RunConfig& cfg) {
  const std::vector<protocol::TrialRecord> trials = load_manifest(cfg);
  require_file(cfg.scores, "scores");
  std::vector<protocol::ScoreRecord> scores =
      protocol::parse_scores(protocol::read_text_file(cfg.scores));
  if (cfg.invert_scores) {
    for (protocol::ScoreRecord& s : scores) s.score = -s.score;
  }
  protocol::JoinResult joined = protocol::join_scores(trials, scores, cfg.join);
  if (joined.dropped_trials > 0 || joined.dropped_scores > 0) {
    log_warning("join dropped " + std::to_string(joined.dropped_trials) +
                " unscored trials and " + std::to_string(joined.dropped_scores) +
                " orphan scores");
  }
  if (joined.scored.empty()) throw EmptyInput("no trial has a matching score");
  return std::move(joined.scored);
}

std::string fixed6(double v) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << v;
  return s.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f || !(f << text) || !f.flush()) throw IoFailure("cannot write " + p.string());
}

reporting::Axes parse_layout(const std::string& text) {
  reporting::Axes axes{false, false, false};
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    if (item == "attack") axes.attack = true;
    else if (item == "codec") axes.codec = true;
    else if (item == "grid") axes.grid = true;
    else if (item != "pooled") throw InvalidParameter("unknown report layout '" + item + "'");
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return axes;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    log_error(e.what());
    return kExitUsage;
  }
}

}  // namespace

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (const OptionSpec& o : kOptions) k.emplace_back(o.key);
    return k;
  }();
  return keys;
}

std::map<std::string, std::string> parse_config_text(std::string_view text) {
  std::map<std::string, std::string> out;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    const std::string line = trim(text.substr(0, nl));
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw MalformedLine(line_no, "expected key=value");
    std::string key = trim(std::string_view(line).substr(0, eq));
    std::replace(key.begin(), key.end(), '_', '-');
    const auto& keys = config_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
      throw InvalidParameter("unknown config key '" + key + "' on line " +
                             std::to_string(line_no));
    }
    out[key] = trim(std::string_view(line).substr(eq + 1));
  }
  return out;
}

RunConfig resolve_config(const std::map<std::string, std::string>& flag_values,
                         const std::map<std::string, std::string>& file_values) {
  std::map<std::string, std::string> merged = file_values;
  for (const auto& [k, v] : flag_values) merged[k] = v;
  RunConfig cfg;
  for (const auto& [k, v] : merged) apply_setting(cfg, k, v);
  return cfg;
}

std::string describe_config(const RunConfig& cfg) {
  std::ostringstream s;
  s << "manifest=" << cfg.manifest.string() << '\n'
    << "manifest_layout=" << layout_name(cfg.manifest_layout) << '\n'
    << "scores=" << cfg.scores.string() << '\n'
    << "audio_root=" << cfg.audio_root.string() << '\n'
    << "out=" << cfg.out_dir.string() << '\n'
    << "noise_dir=" << cfg.noise_dir.string() << '\n'
    << "seed=" << cfg.seed << '\n'
    << "fraction=" << cfg.fraction << '\n'
    << "jobs=" << cfg.parallelism << '\n'
    << "ffmpeg=" << cfg.ffmpeg << '\n'
    << "encode_cmd=" << cfg.encode_cmd << '\n'
    << "decode_cmd=" << cfg.decode_cmd << '\n'
    << "codec_identity=" << cfg.codec_identity << '\n'
    << "c_miss=" << cfg.metric.c_miss << '\n'
    << "c_fa=" << cfg.metric.c_fa << '\n'
    << "pi_spoof=" << cfg.metric.pi_spoof << '\n'
    << "invert_scores=" << (cfg.invert_scores ? "true" : "false") << '\n'
    << "join=" << (cfg.join == protocol::JoinPolicy::kStrict ? "strict" : "intersect") << '\n'
    << "format=" << reporting::file_extension(cfg.format) << '\n'
    << "prefix=" << cfg.prefix << '\n'
    << "layout=" << cfg.layout << '\n';
  return s.str();
}

audio::CodecBackend make_backend(const RunConfig& cfg) {
  if (cfg.encode_cmd.empty() && cfg.decode_cmd.empty()) {
    audio::CodecBackend b = audio::ffmpeg_mp3_backend(cfg.ffmpeg);
    if (!cfg.codec_identity.empty()) b.identity = cfg.codec_identity;
    return b;
  }
  if (cfg.encode_cmd.empty() || cfg.decode_cmd.empty()) {
    throw InvalidParameter("--encode-cmd and --decode-cmd must be given together");
  }
  audio::CodecBackend b{cfg.encode_cmd, cfg.decode_cmd, cfg.codec_identity};
  if (b.identity.empty()) {
    std::ostringstream id;
    id << "custom-" << std::hex << std::setw(16) << std::setfill('0')
       << hash_string(cfg.encode_cmd + "\n" + cfg.decode_cmd);
    b.identity = id.str();
  }
  return b;
}

int cmd_launder(const RunConfig& cfg, std::ostream& out) {
  std::vector<protocol::TrialRecord> trials;
  std::vector<augment::AugmentationJob> jobs;
  std::size_t selected_count = 0;
  audio::CodecBackend backend;
  std::optional<dsp::NoiseLibrary> noises;

  const int validation = guarded([&] {
    trials = load_manifest(cfg);
    require_dir(cfg.audio_root, "audio-root");
    require_dir(cfg.noise_dir, "noise-dir");
    if (cfg.out_dir.empty()) throw InvalidParameter("missing required --out");
    noises.emplace(cfg.noise_dir);
    noises->check_assets_present();
    backend = make_backend(cfg);
    audio::validate_backend(backend);
    check_program(backend.encode_command_template);
    check_program(backend.decode_command_template);
    const std::vector<protocol::TrialRecord> selected =
        augment::select_subset(trials, cfg.fraction, cfg.seed);
    selected_count = selected.size();
    jobs = augment::plan_attacks(selected, cfg.seed);
    return kExitOk;
  });
  if (validation != kExitOk) return validation;

  return guarded([&] {
    log_info("selected " + std::to_string(selected_count) + " of " +
             std::to_string(trials.size()) + " records; " + std::to_string(jobs.size()) +
             " jobs");
    const augment::AugmentReport report = augment::execute_plan(
        jobs, cfg.audio_root, cfg.out_dir, *noises, backend, {cfg.parallelism, 1000});

    const std::vector<augment::AugmentationJob> done = augment::succeeded_jobs(jobs, report);
    write_text(cfg.out_dir / "augmented_manifest.txt",
               augment::emit_augmented_manifest(trials, done, backend.identity));

    std::ostringstream summary;
    summary << "command=launder\n"
            << describe_config(cfg) << "codec_backend=" << backend.identity << '\n'
            << "records_total=" << trials.size() << '\n'
            << "records_selected=" << selected_count << '\n'
            << "jobs_total=" << report.jobs_total << '\n'
            << "jobs_succeeded=" << report.jobs_succeeded << '\n'
            << "jobs_failed=" << report.jobs_failed << '\n'
            << "clip_events=" << report.clip_events << '\n'
            << "augmented_records=" << trials.size() + done.size() << '\n';
    for (const augment::JobFailure& f : report.failures) {
      summary << "failure=" << f.output_utterance_id << ": " << f.error << '\n';
    }
    write_text(cfg.out_dir / "run_summary.txt", summary.str());

    out << "jobs_total=" << report.jobs_total << '\n'
        << "jobs_succeeded=" << report.jobs_succeeded << '\n'
        << "jobs_failed=" << report.jobs_failed << '\n'
        << "clip_events=" << report.clip_events << '\n';
    return report.jobs_failed == 0 ? kExitOk : kExitPartial;
  });
}

int cmd_evaluate(const RunConfig& cfg, std::ostream& out) {
  return guarded([&] {
    cfg.metric.validate();
    const std::vector<protocol::ScoredTrial> scored = load_scored(cfg);
    metrics::ScoreSet set;
    for (const protocol::ScoredTrial& st : scored) {
      (st.trial.label == protocol::Label::kBonafide ? set.bonafide : set.spoof)
          .push_back(st.score);
    }
    const metrics::MetricSummary m = metrics::evaluate(set, cfg.metric);
    out << "min_dcf=" << fixed6(m.min_dcf) << '\n'
        << "act_dcf=" << fixed6(m.act_dcf) << '\n'
        << "cllr=" << fixed6(m.cllr) << '\n'
        << "eer=" << fixed6(m.eer) << '\n'
        << "n_bonafide=" << m.n_bonafide << '\n'
        << "n_spoof=" << m.n_spoof << '\n';
    return kExitOk;
  });
}

int cmd_report(const RunConfig& cfg, std::ostream& out) {
  return guarded([&] {
    cfg.metric.validate();
    const reporting::Axes axes = parse_layout(cfg.layout);
    if (cfg.out_dir.empty()) throw InvalidParameter("missing required --out");
    if (cfg.prefix.empty() || cfg.prefix.find('/') != std::string::npos) {
      throw InvalidParameter("--prefix must be a non-empty file name prefix");
    }
    const std::vector<protocol::ScoredTrial> scored = load_scored(cfg);
    const reporting::BreakdownTable table = reporting::compute_breakdown(scored, cfg.metric, axes);
    if (table.cells.empty()) throw EmptyClass("no cell has both bonafide and spoof trials");

    for (const fs::path& p : reporting::write_report(table, cfg.out_dir, cfg.prefix, cfg.format)) {
      log_info("wrote " + p.string());
    }
    if (!table.skipped.empty()) {
      log_warning(std::to_string(table.skipped.size()) + " cells skipped (see " + cfg.prefix +
                  "_skipped.txt)");
    }

    for (reporting::Axis axis : {reporting::Axis::kAttack, reporting::Axis::kCodec}) {
      const bool wanted = axis == reporting::Axis::kAttack ? axes.attack : axes.codec;
      if (!wanted) continue;
      const std::size_t k = std::min<std::size_t>(5, reporting::axis_cell_count(table, axis));
      for (reporting::Metric m : reporting::kAllMetrics) {
        out << "worst_" << reporting::to_string(axis) << '_' << reporting::to_string(m) << '=';
        const auto keys = reporting::rank_worst(table, m, k, axis);
        for (std::size_t i = 0; i < keys.size(); ++i) {
          if (i) out << ',';
          out << (axis == reporting::Axis::kAttack ? keys[i].attack_id : keys[i].codec_id);
        }
        out << '\n';
      }
    }
    return kExitOk;
  });
}

int cmd_noise_check(const RunConfig& cfg, std::ostream& out) {
  return guarded([&] {
    require_dir(cfg.noise_dir, "noise-dir");
    dsp::NoiseLibrary lib(cfg.noise_dir);
    lib.check_assets_present();
    for (dsp::NoiseName name : dsp::kAllNoiseNames) {
      out << dsp::to_string(name) << '=';
      if (name == dsp::NoiseName::kWhite) {
        out << "synthetic\n";
        continue;
      }
      const auto buf = lib.get(name);
      if (!(audio::rms_power(*buf) > 0.0)) {
        throw SilentInput("noise asset " + lib.asset_path(name).string() + " is silent");
      }
      out << "ok samples=" << buf->size() << " rate=" << buf->sample_rate_hz() << '\n';
    }
    return kExitOk;
  });
}

int cmd_selftest(const RunConfig& cfg, std::ostream& out) {
  return guarded([&] {
    bool all = true;
    for (const SelftestResult& r : run_selftest(cfg.seed)) {
      out << (r.passed ? "PASS " : "FAIL ") << r.name;
      if (!r.detail.empty()) out << " (" << r.detail << ')';
      out << '\n';
      all = all && r.passed;
    }
    return all ? kExitOk : kExitUsage;
  });
}

int run(int argc, const char* const* argv, std::ostream& out) {
  CLI::App app{"launderbench: laundering augmentation and countermeasure scoring"};
  app.require_subcommand(1);

  std::map<std::string, std::string> raw;
  std::map<std::string, bool> flags;
  std::vector<std::pair<std::string, CLI::Option*>> registered;

  const std::pair<const char*, const char*> commands[] = {
      {"launder", "build the laundered augmentation set"},
      {"evaluate", "pooled metrics for a score file"},
      {"report", "per-attack, per-codec and grid breakdown tables"},
      {"noise-check", "validate the noise assets"},
      {"selftest", "run the built-in oracle checks"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    subs[name] = sub;
    for (const OptionSpec& o : kOptions) {
      const std::string cmds = std::string(" ") + o.commands + " ";
      if (cmds.find(std::string(" ") + name + " ") == std::string::npos) continue;
      CLI::Option* opt = o.is_flag ? sub->add_flag(std::string("--") + o.key, flags[o.key], o.help)
                                   : sub->add_option(std::string("--") + o.key, raw[o.key], o.help);
      registered.emplace_back(o.key, opt);
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  RunConfig cfg;
  const int resolved = guarded([&] {
    std::map<std::string, std::string> given;
    for (const auto& [key, opt] : registered) {
      if (opt->count() == 0) continue;
      given[key] = flags.count(key) ? "true" : raw[key];
    }
    std::map<std::string, std::string> file_values;
    if (const char* path = std::getenv(kConfigEnv); path != nullptr && *path != '\0') {
      file_values = parse_config_text(protocol::read_text_file(path));
    }
    cfg = resolve_config(given, file_values);
    return kExitOk;
  });
  if (resolved != kExitOk) return resolved;

  if (subs["launder"]->parsed()) return cmd_launder(cfg, out);
  if (subs["evaluate"]->parsed()) return cmd_evaluate(cfg, out);
  if (subs["report"]->parsed()) return cmd_report(cfg, out);
  if (subs["noise-check"]->parsed()) return cmd_noise_check(cfg, out);
  return cmd_selftest(cfg, out);
}

}  // namespace lb::cli

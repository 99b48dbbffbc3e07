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

#include "launderbench/augment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <optional>
#include <thread>

#include "launderbench/error.hpp"
#include "launderbench/log.hpp"
#include "launderbench/rng.hpp"

namespace lb::augment {
namespace fs = std::filesystem;

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_rt60(double rt60) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.1f", rt60);
  return buf;
}

std::string format_int(double v) {
  return std::to_string(static_cast<long long>(std::llround(v)));
}

bool parse_int(std::string_view text, int* out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

bool parse_double(std::string_view text, double* out) {
  if (text.empty()) return false;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, *out);
  return ec == std::errc() && ptr == end;
}

template <class T, std::size_t N>
T draw(const std::array<T, N>& choices, std::uint64_t seed, std::string_view utt,
       std::string_view slot) {
  Rng rng(derive_seed(seed, {utt, slot}));
  return choices[rng.below(N)];
}

}  // namespace

std::string attack_tag(const AttackSpec& spec) {
  return std::visit(
      Overloaded{
          [](const dsp::Reverberation& r) { return "reverberation_" + format_rt60(r.rt60_s); },
          [](const dsp::AdditiveNoise& n) {
            return std::string(dsp::to_string(n.noise)) + "_" + format_int(n.snr_db);
          },
          [](const dsp::Recompression& c) {
            return "recompression_" + std::to_string(c.bitrate_kbps);
          },
          [](const dsp::Resampling& r) {
            return "resampling_" + std::to_string(r.target_rate_hz);
          },
          [](const dsp::Lowpass& l) {
            return "lowpass_" + std::to_string(l.cutoff_hz) + "_" + std::to_string(l.order);
          },
      },
      spec);
}

AttackSpec parse_attack_tag(std::string_view tag) {
  auto fail = [&]() -> AttackSpec {
    throw InvalidParameter("unrecognized attack tag '" + std::string(tag) + "'");
  };
  const auto us = tag.find('_');
  if (us == std::string_view::npos) return fail();
  const std::string_view head = tag.substr(0, us);
  const std::string_view rest = tag.substr(us + 1);
  AttackSpec spec;
  if (head == "reverberation") {
    double rt60;
    if (!parse_double(rest, &rt60)) return fail();
    spec = dsp::Reverberation{rt60};
  } else if (auto noise = dsp::parse_noise_name(head)) {
    int snr;
    if (!parse_int(rest, &snr)) return fail();
    spec = dsp::AdditiveNoise{*noise, static_cast<double>(snr)};
  } else if (head == "recompression") {
    int kbps;
    if (!parse_int(rest, &kbps)) return fail();
    spec = dsp::Recompression{kbps};
  } else if (head == "resampling") {
    int hz;
    if (!parse_int(rest, &hz)) return fail();
    spec = dsp::Resampling{hz};
  } else if (head == "lowpass") {
    const auto us2 = rest.find('_');
    int hz, order;
    if (us2 == std::string_view::npos || !parse_int(rest.substr(0, us2), &hz) ||
        !parse_int(rest.substr(us2 + 1), &order)) {
      return fail();
    }
    spec = dsp::Lowpass{hz, order};
  } else {
    return fail();
  }
  dsp::validate_attack(spec);
  return spec;
}

std::vector<TrialRecord> select_subset(std::span<const TrialRecord> trials, double fraction,
                                       std::uint64_t seed) {
  if (trials.empty()) throw EmptyInput("cannot select from an empty manifest");
  if (!(fraction > 0.0 && fraction <= 1.0)) {
    throw InvalidParameter("selection fraction must lie in (0, 1]");
  }
  const auto count =
      static_cast<std::size_t>(std::floor(fraction * static_cast<double>(trials.size()) + 1e-9));
  if (count == 0) {
    throw ZeroSelection("fraction " + std::to_string(fraction) + " of " +
                        std::to_string(trials.size()) + " records selects nothing");
  }

  std::vector<const TrialRecord*> order;
  order.reserve(trials.size());
  for (const TrialRecord& t : trials) order.push_back(&t);
  std::sort(order.begin(), order.end(), [](const TrialRecord* a, const TrialRecord* b) {
    return a->utterance_id < b->utterance_id;
  });

  Rng rng(derive_seed(seed, {"select"}));
  for (std::size_t i = order.size() - 1; i > 0; --i) {
    const std::size_t j = rng.below(i + 1);
    std::swap(order[i], order[j]);
  }

  std::vector<TrialRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(*order[i]);
  std::sort(out.begin(), out.end(), [](const TrialRecord& a, const TrialRecord& b) {
    return a.utterance_id < b.utterance_id;
  });
  return out;
}

fs::path output_path_for(std::string_view output_utterance_id) {
  const std::string shard(output_utterance_id.substr(0, 2));
  return fs::path(shard) / (std::string(output_utterance_id) + ".flac");
}

std::vector<AugmentationJob> plan_attacks(std::span<const TrialRecord> selected,
                                          std::uint64_t seed) {
  std::vector<AugmentationJob> jobs;
  jobs.reserve(selected.size() * kJobsPerFile);
  for (const TrialRecord& rec : selected) {
    const std::string_view utt = rec.utterance_id;
    std::vector<AttackSpec> specs;
    specs.reserve(kJobsPerFile);
    specs.emplace_back(dsp::Reverberation{draw(dsp::kRt60Choices, seed, utt, "reverberation")});
    for (dsp::NoiseName name : dsp::kAllNoiseNames) {
      specs.emplace_back(
          dsp::AdditiveNoise{name, draw(dsp::kSnrChoicesDb, seed, utt, dsp::to_string(name))});
    }
    specs.emplace_back(
        dsp::Recompression{draw(dsp::kBitrateChoicesKbps, seed, utt, "recompression")});
    specs.emplace_back(dsp::Resampling{draw(dsp::kResampleChoicesHz, seed, utt, "resampling")});
    specs.emplace_back(dsp::Lowpass{dsp::kLowpassCutoffHz, dsp::kLowpassOrder});

    for (AttackSpec& spec : specs) {
      AugmentationJob job;
      const std::string tag = attack_tag(spec);
      job.source = rec;
      job.spec = std::move(spec);
      job.job_seed = derive_seed(seed, {utt, tag});
      job.output_utterance_id = rec.utterance_id + "_" + tag;
      job.output_path = output_path_for(job.output_utterance_id);
      jobs.push_back(std::move(job));
    }
  }
  return jobs;
}

namespace {

void ensure_writable(const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) {
    throw IoFailure("cannot create output directory " + out_dir.string() + ": " + ec.message());
  }
  const fs::path probe = out_dir / ".write-probe";
  {
    std::ofstream f(probe, std::ios::binary);
    if (!f || !(f << 'x') || !(f.flush())) {
      throw IoFailure("output directory " + out_dir.string() + " is not writable");
    }
  }
  fs::remove(probe, ec);
}

struct JobOutcome {
  bool ok = false;
  bool clipped = false;
  std::string error;
};

void write_output(const audio::AudioBuffer& y, const fs::path& target, bool* clipped) {
  fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".partial";
  const std::size_t n_clipped = audio::write_audio(y, tmp, audio::FileFormat::kFlac);
  fs::rename(tmp, target);
  *clipped = n_clipped > 0;
}

}  // namespace

AugmentReport execute_plan(std::span<const AugmentationJob> jobs, const fs::path& audio_root,
                           const fs::path& out_dir, const dsp::NoiseLibrary& noises,
                           const audio::CodecBackend& backend, const ExecuteOptions& options) {
  ensure_writable(out_dir);

  // Jobs sharing a source are contiguous in a plan; each group reads its
  // source once.
  std::vector<std::pair<std::size_t, std::size_t>> groups;
  for (std::size_t i = 0; i < jobs.size();) {
    std::size_t j = i + 1;
    while (j < jobs.size() && jobs[j].source.utterance_id == jobs[i].source.utterance_id &&
           jobs[j].source.source_path == jobs[i].source.source_path) {
      ++j;
    }
    groups.emplace_back(i, j);
    i = j;
  }

  std::size_t workers = options.parallelism;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::max<std::size_t>(1, std::min(workers, groups.size()));

  std::vector<JobOutcome> outcomes(jobs.size());
  std::atomic<std::size_t> next_group{0};
  std::atomic<std::size_t> done{0};

  auto worker = [&](std::size_t worker_index) {
    const fs::path workdir = out_dir / (".work-" + std::to_string(worker_index));
    for (;;) {
      const std::size_t g = next_group.fetch_add(1);
      if (g >= groups.size()) break;
      const auto [begin, end] = groups[g];

      std::optional<audio::AudioBuffer> source;
      std::string source_error;
      try {
        source = audio::read_audio(audio_root / jobs[begin].source.source_path);
      } catch (const std::exception& e) {
        source_error = e.what();
      }

      for (std::size_t k = begin; k < end; ++k) {
        JobOutcome& out = outcomes[k];
        if (!source) {
          out.error = source_error;
        } else {
          try {
            const audio::AudioBuffer y =
                dsp::apply_attack(*source, jobs[k].spec, jobs[k].job_seed, &noises, &backend,
                                  workdir);
            write_output(y, out_dir / jobs[k].output_path, &out.clipped);
            out.ok = true;
          } catch (const std::exception& e) {
            out.error = e.what();
          }
        }
        const std::size_t n = done.fetch_add(1) + 1;
        if (options.progress_every > 0 && n % options.progress_every == 0) {
          log_info("processed " + std::to_string(n) + " / " + std::to_string(jobs.size()) +
                   " jobs");
        }
      }
    }
    std::error_code ec;
    fs::remove_all(workdir, ec);
  };

  if (workers == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker, w);
    for (std::thread& t : pool) t.join();
  }

  AugmentReport report;
  report.jobs_total = jobs.size();
  report.succeeded.resize(jobs.size(), false);
  for (std::size_t k = 0; k < jobs.size(); ++k) {
    const JobOutcome& out = outcomes[k];
    if (out.ok) {
      ++report.jobs_succeeded;
      report.succeeded[k] = true;
      if (out.clipped) {
        ++report.clip_events;
        log_warning("output " + jobs[k].output_utterance_id + " clipped on quantization");
      }
    } else {
      ++report.jobs_failed;
      report.failures.push_back({k, jobs[k].output_utterance_id, out.error});
      log_error("job " + jobs[k].output_utterance_id + " failed: " + out.error);
    }
  }
  return report;
}

std::vector<AugmentationJob> succeeded_jobs(std::span<const AugmentationJob> jobs,
                                            const AugmentReport& report) {
  std::vector<AugmentationJob> out;
  for (std::size_t k = 0; k < jobs.size() && k < report.succeeded.size(); ++k) {
    if (report.succeeded[k]) out.push_back(jobs[k]);
  }
  return out;
}

std::string emit_augmented_manifest(std::span<const TrialRecord> original,
                                    std::span<const AugmentationJob> jobs,
                                    std::string_view backend_identity) {
  std::string out = protocol::emit_manifest(original);
  for (const AugmentationJob& job : jobs) {
    TrialRecord rec = job.source;
    rec.utterance_id = job.output_utterance_id;
    rec.source_path = job.output_path.generic_string();
    std::string line = protocol::emit_manifest_line(rec);
    line.pop_back();  // newline
    line += " # attack=" + attack_tag(job.spec);
    if (dsp::kind_of(job.spec) == dsp::AttackKind::kRecompression) {
      line += " backend=" + std::string(backend_identity);
    }
    line += '\n';
    out += line;
  }
  return out;
}

}  // namespace lb::augment

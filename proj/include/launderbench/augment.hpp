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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "launderbench/attack.hpp"
#include "launderbench/codec.hpp"
#include "launderbench/protocol.hpp"

namespace lb::augment {

using dsp::AttackSpec;
using protocol::TrialRecord;

// Short stable name for a spec: reverberation_0.3, babble_10, recompression_64,
// resampling_11025, lowpass_8000_5. Injective over valid specs.
std::string attack_tag(const AttackSpec& spec);

// Inverse of attack_tag. Throws InvalidParameter on unknown grammar.
AttackSpec parse_attack_tag(std::string_view tag);

// floor(fraction * N) records chosen by a seeded shuffle of the id-sorted
// input; the result is sorted by id. Throws EmptyInput, ZeroSelection or
// InvalidParameter (fraction outside (0, 1]).
std::vector<TrialRecord> select_subset(std::span<const TrialRecord> trials, double fraction,
                                       std::uint64_t seed);

struct AugmentationJob {
  TrialRecord source;
  AttackSpec spec;
  std::uint64_t job_seed = 0;
  std::string output_utterance_id;
  std::filesystem::path output_path;  // relative to the output directory
};

// Nine jobs per record in a fixed slot order: reverberation, the five noises,
// recompression, resampling, lowpass.
inline constexpr std::size_t kJobsPerFile = 9;

std::vector<AugmentationJob> plan_attacks(std::span<const TrialRecord> selected,
                                          std::uint64_t seed);

// <first two characters of the id>/<id>.flac
std::filesystem::path output_path_for(std::string_view output_utterance_id);

struct JobFailure {
  std::size_t job_index = 0;
  std::string output_utterance_id;
  std::string error;
};

struct AugmentReport {
  std::size_t jobs_total = 0;
  std::size_t jobs_succeeded = 0;
  std::size_t jobs_failed = 0;
  // Outputs in which at least one sample saturated on 16-bit quantization.
  std::size_t clip_events = 0;
  std::vector<JobFailure> failures;  // ordered by job index
  std::vector<bool> succeeded;       // one flag per job
};

struct ExecuteOptions {
  std::size_t parallelism = 1;  // 0 selects the hardware thread count
  std::size_t progress_every = 1000;
};

// Runs every job, writing FLAC to out_dir / job.output_path. Per-job errors
// are recorded in the report; only an unusable out_dir throws (IoFailure).
AugmentReport execute_plan(std::span<const AugmentationJob> jobs,
                           const std::filesystem::path& audio_root,
                           const std::filesystem::path& out_dir,
                           const dsp::NoiseLibrary& noises,
                           const audio::CodecBackend& backend,
                           const ExecuteOptions& options = {});

// Jobs whose flag in report.succeeded is set, in plan order.
std::vector<AugmentationJob> succeeded_jobs(std::span<const AugmentationJob> jobs,
                                            const AugmentReport& report);

// Original records followed by one record per job. Job lines carry a trailing
// "# attack=<tag>" comment, plus "backend=<identity>" for recompression.
std::string emit_augmented_manifest(std::span<const TrialRecord> original,
                                    std::span<const AugmentationJob> jobs,
                                    std::string_view backend_identity);

}  // namespace lb::augment

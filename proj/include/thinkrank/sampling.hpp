#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "thinkrank/model.hpp"
#include "thinkrank/records.hpp"

namespace thinkrank {

/// Draws n synthetic respondents from the model. Record i depends only on
/// (seed, i). Respondent ids are "r1".."rn".
std::vector<ResponseRecord> sample_dataset(const ThinkingModel& model, std::int64_t n,
                                           std::uint64_t seed,
                                           const std::string& question_id = "q1");

/// OpenMP twin of sample_dataset with byte-identical output (per-record
/// streams make the loop order irrelevant). Record building is allocation
/// bound, so this only pays off where the allocator scales across threads;
/// see the benchmark before preferring it.
std::vector<ResponseRecord> sample_dataset_parallel(const ThinkingModel& model, std::int64_t n,
                                                    std::uint64_t seed,
                                                    const std::string& question_id = "q1");

namespace detail {
/// Single-record sampler backing both loops; exposed so tests can pin
/// individual records without materializing a dataset.
ResponseRecord sample_record(const ThinkingModel& model, std::uint64_t seed, std::int64_t index,
                             const std::string& question_id);
}  // namespace detail

/// Tabulates the records' empirical (answer, prediction) matrix over the
/// model's answer set with no thresholding, normalizes it to sum 1, and
/// returns ‖Â − M‖_∞ against compute_joint(model).
/// Throws if the records contain no predictions at all.
double expected_matrix_proportionality(const ThinkingModel& model,
                                       const std::vector<ResponseRecord>& records);

}  // namespace thinkrank

// Copyright 2026 The Panokit Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PANOKIT_BENCH_EVAL_H_
#define PANOKIT_BENCH_EVAL_H_

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlohmann/json.hpp"
#include "panokit/judge_client.h"
#include "panokit/mask_ops.h"

namespace panokit {

struct GroundingSample {
  std::string id;
  EntityMask predicted_mask;
  EntityMask gt_mask;
  // Derived from the ground-truth centroid when absent.
  std::optional<Direction> direction;
};

struct CaptionSample {
  std::string id;
  std::vector<std::string> key_phrases;
  std::string predicted_caption;
  std::optional<Direction> direction;
};

// Per-sample outcome before aggregation. Exactly one of score / error is
// set.
struct SampleOutcome {
  std::string id;
  std::optional<Direction> direction;
  std::optional<double> score;
  std::string error;
};

// Scores are kept in [0, 1]; JSON output multiplies by 100 and rounds to two
// decimals.
struct EvalReport {
  std::string task;
  // Mean per lateral direction (front, right, back, left); empty when that
  // direction has no scored samples.
  std::array<std::optional<double>, 4> per_direction;
  // Sample-weighted mean over every scored sample, including top, bottom
  // and unbinned ones.
  std::optional<double> omnidirection;
  std::array<int, 6> n_per_direction{};  // indexed by Direction
  int n_unbinned = 0;
  int n_scored = 0;
  std::vector<std::string> errored_ids;  // sorted
  int unparseable_answers = 0;
};

nlohmann::json ReportToJson(const EvalReport& report);

// Round-half-away-from-zero of score * 100 to two decimals.
double ToPercent(double score);

// Order of `outcomes` does not affect the result.
EvalReport AggregateOutcomes(std::string task,
                             std::vector<SampleOutcome> outcomes);

// IoU between a candidate mask and the entity mask it should describe.
// Throws InputError when the grids differ or the entity mask is empty.
double ReliabilityScore(const EntityMask& candidate_mask,
                        const EntityMask& entity_mask);

EvalReport EvalGrounding(const std::vector<GroundingSample>& samples,
                         int jobs = 1, const DirectionBinning& binning = {});

// Throws InputError when the sample has no phrases or two phrases coincide
// after whitespace normalization.
void ValidateCaptionSample(const CaptionSample& sample);

// One (phrase, question) per key phrase, in key-phrase order.
std::vector<std::pair<std::string, std::string>> BuildJudgeQuestions(
    const CaptionSample& sample,
    const QuestionTemplate& question_template = {});

// Fraction of true answers. Throws InputError on an empty list.
double RecallFromAnswers(const std::vector<bool>& answers);

// Asks `judge` about every key phrase of every sample from up to `jobs`
// threads. Samples whose questions cannot be answered are reported as
// errored.
EvalReport EvalCaptioning(const std::vector<CaptionSample>& samples,
                          const Judge& judge, int jobs = 1,
                          const QuestionTemplate& question_template = {});

}  // namespace panokit

#endif  // PANOKIT_BENCH_EVAL_H_

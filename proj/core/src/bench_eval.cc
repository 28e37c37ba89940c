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

#include "panokit/bench_eval.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <cmath>
#include <numeric>
#include <set>
#include <thread>

#include "panokit/errors.h"

namespace panokit {
namespace {

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (char raw : text) {
    if (std::isspace(static_cast<unsigned char>(raw))) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(raw);
  }
  return out;
}

// Sum in sorted order so the mean does not depend on sample order.
double StableMean(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> threads;
  threads.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

}  // namespace

double ToPercent(double score) { return std::round(score * 10000.0) / 100.0; }

nlohmann::json ReportToJson(const EvalReport& report) {
  nlohmann::json per_direction = nlohmann::json::object();
  for (std::size_t i = 0; i < report.per_direction.size(); ++i) {
    const auto name = std::string(DirectionName(kLateralDirections[i]));
    per_direction[name] = report.per_direction[i]
                              ? nlohmann::json(ToPercent(*report.per_direction[i]))
                              : nlohmann::json(nullptr);
  }
  nlohmann::json counts = nlohmann::json::object();
  for (int d = 0; d < 6; ++d) {
    counts[std::string(DirectionName(static_cast<Direction>(d)))] =
        report.n_per_direction[d];
  }
  counts["unbinned"] = report.n_unbinned;
  counts["scored"] = report.n_scored;
  counts["errored"] = static_cast<int>(report.errored_ids.size());
  counts["unparseable_answers"] = report.unparseable_answers;
  return nlohmann::json{
      {"task", report.task},
      {"per_direction", per_direction},
      {"omnidirection", report.omnidirection
                            ? nlohmann::json(ToPercent(*report.omnidirection))
                            : nlohmann::json(nullptr)},
      {"counts", counts},
      {"errored_ids", report.errored_ids}};
}

EvalReport AggregateOutcomes(std::string task,
                             std::vector<SampleOutcome> outcomes) {
  EvalReport report;
  report.task = std::move(task);
  std::array<std::vector<double>, 6> by_direction;
  std::vector<double> all;
  for (auto& outcome : outcomes) {
    if (!outcome.score) {
      report.errored_ids.push_back(outcome.id);
      continue;
    }
    all.push_back(*outcome.score);
    if (outcome.direction) {
      const auto d = static_cast<std::size_t>(*outcome.direction);
      by_direction[d].push_back(*outcome.score);
      ++report.n_per_direction[d];
    } else {
      ++report.n_unbinned;
    }
  }
  std::sort(report.errored_ids.begin(), report.errored_ids.end());
  report.n_scored = static_cast<int>(all.size());
  if (!all.empty()) report.omnidirection = StableMean(std::move(all));
  for (std::size_t i = 0; i < 4; ++i) {
    const auto d = static_cast<std::size_t>(kLateralDirections[i]);
    if (!by_direction[d].empty()) {
      report.per_direction[i] = StableMean(std::move(by_direction[d]));
    }
  }
  return report;
}

double ReliabilityScore(const EntityMask& candidate_mask,
                        const EntityMask& entity_mask) {
  if (!(candidate_mask.grid == entity_mask.grid)) {
    throw InputError("candidate and entity masks live on different grids");
  }
  if (entity_mask.empty()) {
    throw InputError("entity mask '" + entity_mask.id + "' is empty");
  }
  return Iou(candidate_mask, entity_mask);
}

EvalReport EvalGrounding(const std::vector<GroundingSample>& samples,
                         int jobs, const DirectionBinning& binning) {
  if (samples.empty()) throw InputError("no grounding samples");
  std::vector<SampleOutcome> outcomes(samples.size());
  ParallelFor(samples.size(), jobs, [&](std::size_t i) {
    const GroundingSample& sample = samples[i];
    SampleOutcome& outcome = outcomes[i];
    outcome.id = sample.id;
    try {
      const double score =
          ReliabilityScore(sample.predicted_mask, sample.gt_mask);
      outcome.direction = sample.direction;
      if (!outcome.direction) {
        try {
          outcome.direction =
              DirectionOf(CircularCentroid(sample.gt_mask), binning);
        } catch (const DegenerateCentroidError&) {
          // Counted in the omnidirection mean only.
        }
      }
      outcome.score = score;
    } catch (const InputError& e) {
      outcome.error = e.what();
    }
  });
  return AggregateOutcomes("grounding", std::move(outcomes));
}

void ValidateCaptionSample(const CaptionSample& sample) {
  if (sample.key_phrases.empty()) {
    throw InputError("caption sample '" + sample.id + "' has no key phrases");
  }
  std::set<std::string> seen;
  for (const auto& phrase : sample.key_phrases) {
    if (!seen.insert(CollapseWhitespace(phrase)).second) {
      throw InputError("caption sample '" + sample.id +
                       "' repeats key phrase '" + phrase + "'");
    }
  }
}

std::vector<std::pair<std::string, std::string>> BuildJudgeQuestions(
    const CaptionSample& sample, const QuestionTemplate& question_template) {
  std::vector<std::pair<std::string, std::string>> questions;
  questions.reserve(sample.key_phrases.size());
  for (const auto& phrase : sample.key_phrases) {
    questions.emplace_back(
        phrase, question_template.Render(phrase, sample.predicted_caption));
  }
  return questions;
}

double RecallFromAnswers(const std::vector<bool>& answers) {
  if (answers.empty()) throw InputError("recall of an empty answer list");
  const auto hits = std::count(answers.begin(), answers.end(), true);
  return static_cast<double>(hits) / static_cast<double>(answers.size());
}

EvalReport EvalCaptioning(const std::vector<CaptionSample>& samples,
                          const Judge& judge, int jobs,
                          const QuestionTemplate& question_template) {
  if (samples.empty()) throw InputError("no captioning samples");

  struct Slot {
    std::size_t sample;
    std::string question;
    std::optional<JudgeAnswer> answer;
    std::string error;
  };
  std::vector<Slot> slots;
  std::vector<std::string> invalid(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    try {
      ValidateCaptionSample(samples[i]);
    } catch (const InputError& e) {
      invalid[i] = e.what();
      continue;
    }
    for (auto& [phrase, question] :
         BuildJudgeQuestions(samples[i], question_template)) {
      slots.push_back({i, std::move(question), std::nullopt, {}});
    }
  }

  // Answers land in their own slot, so completion order is irrelevant.
  ParallelFor(slots.size(), jobs, [&](std::size_t k) {
    try {
      slots[k].answer = judge.Ask(slots[k].question);
    } catch (const std::exception& e) {
      slots[k].error = e.what();
    }
  });

  std::vector<SampleOutcome> outcomes(samples.size());
  std::vector<std::vector<bool>> answers(samples.size());
  std::vector<bool> failed(samples.size(), false);
  int unparseable = 0;
  for (const Slot& slot : slots) {
    if (!slot.answer) {
      failed[slot.sample] = true;
      if (invalid[slot.sample].empty()) invalid[slot.sample] = slot.error;
      continue;
    }
    answers[slot.sample].push_back(slot.answer->yes);
    if (!slot.answer->parsed) ++unparseable;
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    outcomes[i].id = samples[i].id;
    outcomes[i].direction = samples[i].direction;
    if (!invalid[i].empty() || failed[i]) {
      outcomes[i].error = invalid[i];
      continue;
    }
    outcomes[i].score = RecallFromAnswers(answers[i]);
  }
  EvalReport report = AggregateOutcomes("captioning", std::move(outcomes));
  report.unparseable_answers = unparseable;
  return report;
}

}  // namespace panokit

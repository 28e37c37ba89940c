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

#ifndef PANOKIT_JUDGE_CLIENT_H_
#define PANOKIT_JUDGE_CLIENT_H_

#include <condition_variable>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

namespace panokit {

inline constexpr std::string_view kDefaultQuestionTemplate =
    "Answer yes or no. Does the following caption explicitly mention "
    "{phrase}? Caption: {caption}";

// Prompt with one {phrase} placeholder followed by one {caption}
// placeholder.
class QuestionTemplate {
 public:
  QuestionTemplate() : QuestionTemplate(kDefaultQuestionTemplate) {}
  // Throws InputError unless the text holds both placeholders in order.
  explicit QuestionTemplate(std::string_view text);

  const std::string& text() const { return text_; }

  // Newlines, tabs and carriage returns in either argument become spaces.
  std::string Render(std::string_view phrase, std::string_view caption) const;

  // Recovers {phrase, caption} from a rendered question. Throws
  // TemplateParseError when the question does not follow the template.
  std::pair<std::string, std::string> Parse(std::string_view question) const;

 private:
  std::string text_;
  std::string prefix_;
  std::string middle_;
  std::string suffix_;
};

enum class JudgeMode { kMock, kHttp };

struct JudgeConfig {
  JudgeMode mode = JudgeMode::kMock;
  std::string endpoint_url;
  std::string model_name = "gpt-4o";
  // Name of the environment variable holding the bearer token. The token
  // itself is never stored.
  std::string auth_token_env = "JUDGE_API_KEY";
  double timeout_seconds = 30.0;
  int max_retries = 2;
  int concurrency_limit = 4;
  double retry_backoff_seconds = 0.5;
  QuestionTemplate question_template;
};

struct JudgeAnswer {
  bool yes = false;
  // False when no reply contained a yes/no token; such answers count as no.
  bool parsed = true;
  int requests = 0;
};

class Judge {
 public:
  virtual ~Judge() = default;
  // Safe to call from several threads at once.
  virtual JudgeAnswer Ask(std::string_view question) const = 0;
};

// Lowercases, drops punctuation and collapses whitespace.
std::string NormalizeForMatch(std::string_view text);

// First whole-word "yes" or "no" (case-insensitive) in a reply.
std::optional<bool> ParseYesNo(std::string_view reply);

// Offline judge: yes iff the normalized phrase is a substring of the
// normalized caption. Lexical only; not a semantic stand-in for an LLM.
class MockJudge : public Judge {
 public:
  explicit MockJudge(QuestionTemplate question_template = {})
      : template_(std::move(question_template)) {}
  JudgeAnswer Ask(std::string_view question) const override;

 private:
  QuestionTemplate template_;
};

// Limits the number of callers inside a section.
class ConcurrencyGate {
 public:
  explicit ConcurrencyGate(int limit);
  void Acquire();
  void Release();

 private:
  std::mutex mu_;
  std::condition_variable cv_;
  int limit_;
  int in_flight_ = 0;
};

// Chat-completion judge over HTTP(S). Transport failures, timeouts and
// 408/429/5xx replies are retried up to max_retries times with exponential
// backoff; a reply without a yes/no token is asked once more and then
// scored as no.
class HttpJudge : public Judge {
 public:
  // Throws InputError for a malformed endpoint and EnvironmentError when the
  // credential variable is unset.
  explicit HttpJudge(JudgeConfig config);
  ~HttpJudge() override;

  JudgeAnswer Ask(std::string_view question) const override;

 private:
  std::string Complete(std::string_view question) const;

  JudgeConfig config_;
  std::string origin_;  // scheme://host[:port]
  std::string path_;
  mutable ConcurrencyGate gate_;
};

std::unique_ptr<Judge> MakeJudge(const JudgeConfig& config);

// One-shot convenience over MakeJudge(config)->Ask(question).yes.
bool JudgeAsk(std::string_view question, const JudgeConfig& config);

}  // namespace panokit

#endif  // PANOKIT_JUDGE_CLIENT_H_

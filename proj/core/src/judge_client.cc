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

#include "panokit/judge_client.h"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <regex>
#include <thread>

#include "httplib.h"
#include "nlohmann/json.hpp"
#include "panokit/errors.h"

namespace panokit {
namespace {

constexpr std::string_view kPhraseSlot = "{phrase}";
constexpr std::string_view kCaptionSlot = "{caption}";

std::string FlattenLineBreaks(std::string_view text) {
  std::string out(text);
  for (char& c : out) {
    if (c == '\n' || c == '\r' || c == '\t') c = ' ';
  }
  return out;
}

bool IsRetryableStatus(int status) {
  return status == 408 || status == 429 || status >= 500;
}

// choices[0].message.content of a chat-completion response; empty when the
// body has another shape, which then parses as no answer.
std::string ReplyText(const std::string& body) {
  const auto reply = nlohmann::json::parse(body, nullptr, false);
  if (!reply.is_object()) return {};
  const auto choices = reply.value("choices", nlohmann::json::array());
  if (!choices.is_array() || choices.empty() || !choices[0].is_object()) {
    return {};
  }
  const auto message = choices[0].value("message", nlohmann::json::object());
  if (!message.is_object()) return {};
  const auto text = message.value("content", nlohmann::json{});
  return text.is_string() ? text.get<std::string>() : std::string{};
}

class GateGuard {
 public:
  explicit GateGuard(ConcurrencyGate& gate) : gate_(gate) { gate_.Acquire(); }
  ~GateGuard() { gate_.Release(); }
  GateGuard(const GateGuard&) = delete;
  GateGuard& operator=(const GateGuard&) = delete;

 private:
  ConcurrencyGate& gate_;
};

}  // namespace

QuestionTemplate::QuestionTemplate(std::string_view text) : text_(text) {
  const auto phrase_at = text_.find(kPhraseSlot);
  const auto caption_at = text_.find(kCaptionSlot);
  if (phrase_at == std::string::npos || caption_at == std::string::npos ||
      caption_at < phrase_at + kPhraseSlot.size()) {
    throw InputError(
        "question template needs {phrase} followed by {caption}");
  }
  prefix_ = text_.substr(0, phrase_at);
  middle_ = text_.substr(phrase_at + kPhraseSlot.size(),
                         caption_at - phrase_at - kPhraseSlot.size());
  suffix_ = text_.substr(caption_at + kCaptionSlot.size());
}

std::string QuestionTemplate::Render(std::string_view phrase,
                                     std::string_view caption) const {
  return prefix_ + FlattenLineBreaks(phrase) + middle_ +
         FlattenLineBreaks(caption) + suffix_;
}

std::pair<std::string, std::string> QuestionTemplate::Parse(
    std::string_view question) const {
  if (!question.starts_with(prefix_) || !question.ends_with(suffix_) ||
      question.size() < prefix_.size() + suffix_.size()) {
    throw TemplateParseError("question does not follow the judge template");
  }
  const std::string_view body = question.substr(
      prefix_.size(), question.size() - prefix_.size() - suffix_.size());
  const auto split = body.find(middle_);
  if (split == std::string_view::npos) {
    throw TemplateParseError("question does not follow the judge template");
  }
  return {std::string(body.substr(0, split)),
          std::string(body.substr(split + middle_.size()))};
}

std::string NormalizeForMatch(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pending_space = false;
  for (char raw : text) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isspace(c) || std::ispunct(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(static_cast<char>(std::tolower(c)));
  }
  return out;
}

std::optional<bool> ParseYesNo(std::string_view reply) {
  std::string token;
  auto check = [&token]() -> std::optional<bool> {
    if (token == "yes") return true;
    if (token == "no") return false;
    return std::nullopt;
  };
  for (char raw : reply) {
    const auto c = static_cast<unsigned char>(raw);
    if (std::isalnum(c)) {
      token.push_back(static_cast<char>(std::tolower(c)));
      continue;
    }
    if (auto answer = check()) return answer;
    token.clear();
  }
  return check();
}

JudgeAnswer MockJudge::Ask(std::string_view question) const {
  const auto [phrase, caption] = template_.Parse(question);
  const std::string needle = NormalizeForMatch(phrase);
  const std::string haystack = NormalizeForMatch(caption);
  JudgeAnswer answer;
  answer.yes = !needle.empty() && haystack.find(needle) != std::string::npos;
  answer.requests = 1;
  return answer;
}

ConcurrencyGate::ConcurrencyGate(int limit) : limit_(std::max(limit, 1)) {}

void ConcurrencyGate::Acquire() {
  std::unique_lock lock(mu_);
  cv_.wait(lock, [this] { return in_flight_ < limit_; });
  ++in_flight_;
}

void ConcurrencyGate::Release() {
  {
    std::lock_guard lock(mu_);
    --in_flight_;
  }
  cv_.notify_one();
}

HttpJudge::HttpJudge(JudgeConfig config)
    : config_(std::move(config)), gate_(config_.concurrency_limit) {
  static const std::regex kUrl(R"(^(https?://[^/?#]+)(/[^#]*)?$)");
  std::smatch match;
  if (!std::regex_match(config_.endpoint_url, match, kUrl)) {
    throw InputError("--endpoint must be an http(s) URL, got '" +
                     config_.endpoint_url + "'");
  }
  origin_ = match[1].str();
  path_ = match[2].matched ? match[2].str() : "/";
  if (config_.auth_token_env.empty() ||
      std::getenv(config_.auth_token_env.c_str()) == nullptr) {
    throw EnvironmentError("judge credential variable '" +
                           config_.auth_token_env + "' is not set");
  }
  if (config_.max_retries < 0) throw InputError("max_retries must be >= 0");
  if (!(config_.timeout_seconds > 0.0)) {
    throw InputError("judge timeout must be positive");
  }
}

HttpJudge::~HttpJudge() = default;

std::string HttpJudge::Complete(std::string_view question) const {
  const char* token = std::getenv(config_.auth_token_env.c_str());
  if (token == nullptr) {
    throw JudgeUnavailableError("judge credential variable '" +
                                config_.auth_token_env + "' is not set");
  }
  const nlohmann::json request = {
      {"model", config_.model_name},
      {"messages", {{{"role", "user"}, {"content", std::string(question)}}}},
      {"temperature", 0}};
  const std::string body = request.dump();
  const httplib::Headers headers = {
      {"Authorization", std::string("Bearer ") + token}};
  const auto timeout = std::chrono::duration<double>(config_.timeout_seconds);
  const auto timeout_us =
      std::chrono::duration_cast<std::chrono::microseconds>(timeout);

  std::string last_error;
  for (int attempt = 0; attempt <= config_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(std::chrono::duration<double>(
          config_.retry_backoff_seconds * std::pow(2.0, attempt - 1)));
    }
    httplib::Client client(origin_);
    client.set_connection_timeout(timeout_us);
    client.set_read_timeout(timeout_us);
    client.set_write_timeout(timeout_us);
    const auto result =
        client.Post(path_, headers, body, "application/json");
    if (!result) {
      last_error = httplib::to_string(result.error());
      continue;
    }
    if (result->status == 200) return ReplyText(result->body);
    if (!IsRetryableStatus(result->status)) {
      throw JudgeUnavailableError("judge endpoint answered HTTP " +
                                  std::to_string(result->status));
    }
    last_error = "HTTP " + std::to_string(result->status);
  }
  throw JudgeUnavailableError("judge endpoint unavailable after " +
                              std::to_string(config_.max_retries + 1) +
                              " attempts: " + last_error);
}

JudgeAnswer HttpJudge::Ask(std::string_view question) const {
  GateGuard guard(gate_);
  JudgeAnswer answer;
  for (int round = 0; round < 2; ++round) {
    ++answer.requests;
    if (auto verdict = ParseYesNo(Complete(question))) {
      answer.yes = *verdict;
      answer.parsed = true;
      return answer;
    }
    std::cerr << "warning: judge reply has no yes/no token"
              << (round == 0 ? "; asking again\n" : "; scoring as no\n");
  }
  answer.yes = false;
  answer.parsed = false;
  return answer;
}

std::unique_ptr<Judge> MakeJudge(const JudgeConfig& config) {
  if (config.mode == JudgeMode::kHttp) {
    return std::make_unique<HttpJudge>(config);
  }
  return std::make_unique<MockJudge>(config.question_template);
}

bool JudgeAsk(std::string_view question, const JudgeConfig& config) {
  if (question.empty()) throw InputError("judge question is empty");
  return MakeJudge(config)->Ask(question).yes;
}

}  // namespace panokit

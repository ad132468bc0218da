// Copyright 2026 The SocEval Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "soceval/score_store.h"

#include <atomic>
#include <set>
#include <system_error>
#include <thread>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "soceval/status.h"

namespace soceval {

std::string EncodeStoreLine(const ChoiceScore& score) {
  Json json = score.ToJson();
  const uint32_t crc = Crc32(json.dump());
  json["crc"] = absl::StrFormat("%08x", crc);
  return json.dump();
}

absl::StatusOr<ChoiceScore> DecodeStoreLine(absl::string_view line) {
  Json json = Json::parse(line.begin(), line.end(), nullptr,
                          /*allow_exceptions=*/false);
  if (!json.is_object() || !json.contains("crc") || !json["crc"].is_string()) {
    return MakeError(ErrorKind::kStoreCorrupt, "unparseable record");
  }
  const std::string stored = json["crc"].get<std::string>();
  json.erase("crc");
  const std::string actual = absl::StrFormat("%08x", Crc32(json.dump()));
  if (stored != actual) {
    return MakeError(ErrorKind::kStoreCorrupt,
                     absl::StrCat("checksum mismatch: stored ", stored,
                                  ", computed ", actual));
  }
  auto score = ChoiceScore::FromJson(json);
  if (!score.ok()) {
    return MakeError(ErrorKind::kStoreCorrupt, score.status().message());
  }
  return score;
}

ScoreStore::ScoreStore(std::filesystem::path path) : path_(std::move(path)) {}

absl::StatusOr<std::unique_ptr<ScoreStore>> ScoreStore::Open(
    const std::filesystem::path& path) {
  std::unique_ptr<ScoreStore> store(new ScoreStore(path));
  SOCEVAL_RETURN_IF_ERROR(store->Load());
  store->out_.open(path, std::ios::binary | std::ios::app);
  if (!store->out_) {
    return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string(),
                                                  " for append"));
  }
  return store;
}

absl::Status ScoreStore::Load() {
  std::error_code ec;
  if (!std::filesystem::exists(path_, ec)) return absl::OkStatus();
  uintmax_t valid_bytes = 0;
  bool torn = false;
  SOCEVAL_RETURN_IF_ERROR(ForEachLine(
      path_, [&](size_t line_no, absl::string_view line, bool complete) {
        if (!complete) {
          torn = true;
          return absl::OkStatus();
        }
        valid_bytes += line.size() + 1;
        if (line.empty()) return absl::OkStatus();
        auto score = DecodeStoreLine(line);
        if (!score.ok()) {
          return MakeError(ErrorKind::kStoreCorrupt,
                           absl::StrCat(path_.string(), ":", line_no, ": ",
                                        score.status().message()));
        }
        Upsert(*score);
        return absl::OkStatus();
      }));
  if (torn) {
    std::filesystem::resize_file(path_, valid_bytes, ec);
    if (ec) {
      return MakeError(ErrorKind::kIo, absl::StrCat("cannot truncate ",
                                                    path_.string(), ": ",
                                                    ec.message()));
    }
  }
  return absl::OkStatus();
}

bool ScoreStore::Upsert(const ChoiceScore& score) {
  Key key{score.scorer_id, score.prompt_id, score.fill_id};
  auto [it, inserted] = records_.try_emplace(std::move(key), score);
  if (inserted) return true;
  if (it->second == score) return false;
  it->second = score;
  return true;
}

absl::Status ScoreStore::Put(const ChoiceScore& score) {
  return PutBatch(std::span<const ChoiceScore>(&score, 1));
}

absl::Status ScoreStore::PutBatch(std::span<const ChoiceScore> scores) {
  std::lock_guard<std::mutex> lock(mu_);
  std::string buffer;
  size_t lines = 0;
  for (const ChoiceScore& score : scores) {
    if (!Upsert(score)) continue;
    absl::StrAppend(&buffer, EncodeStoreLine(score), "\n");
    ++lines;
  }
  if (buffer.empty()) return absl::OkStatus();
  out_.write(buffer.data(), static_cast<std::streamsize>(buffer.size()));
  out_.flush();
  if (!out_) {
    return MakeError(ErrorKind::kIo,
                     absl::StrCat("write to ", path_.string(), " failed"));
  }
  appended_ += lines;
  return absl::OkStatus();
}

std::optional<ChoiceScore> ScoreStore::Get(absl::string_view scorer_id,
                                           absl::string_view prompt_id,
                                           absl::string_view fill_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  const auto it = records_.find(Key{std::string(scorer_id), std::string(prompt_id),
                                    std::string(fill_id)});
  if (it == records_.end()) return std::nullopt;
  return it->second;
}

size_t ScoreStore::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return records_.size();
}

size_t ScoreStore::appended() const {
  std::lock_guard<std::mutex> lock(mu_);
  return appended_;
}

std::vector<MissingWork> ScoreStore::Missing(std::span<const Prompt> prompts,
                                             std::span<const FillWord> fills,
                                             absl::string_view scorer_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<MissingWork> out;
  Key key{std::string(scorer_id), "", ""};
  for (const Prompt& prompt : prompts) {
    std::get<1>(key) = prompt.prompt_id;
    for (const FillWord& fill : fills) {
      std::get<2>(key) = fill.id;
      if (!records_.contains(key)) out.push_back({prompt.prompt_id, fill.id});
    }
  }
  return out;
}

std::vector<ChoiceScore> ScoreStore::Records(absl::string_view scorer_id) const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<ChoiceScore> out;
  const Key lower{std::string(scorer_id), "", ""};
  for (auto it = records_.lower_bound(lower);
       it != records_.end() && std::get<0>(it->first) == scorer_id; ++it) {
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::string> ScoreStore::ScorerIds() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::set<std::string> ids;
  for (const auto& [key, score] : records_) ids.insert(std::get<0>(key));
  return {ids.begin(), ids.end()};
}

absl::Status ScoreStore::Flush() {
  std::lock_guard<std::mutex> lock(mu_);
  out_.flush();
  if (!out_) {
    return MakeError(ErrorKind::kIo,
                     absl::StrCat("flush of ", path_.string(), " failed"));
  }
  return absl::OkStatus();
}

absl::Status WriteCanonicalStore(const ScoreStore& store,
                                 absl::string_view scorer_id,
                                 const std::filesystem::path& path) {
  std::string content;
  for (const ChoiceScore& score : store.Records(scorer_id)) {
    absl::StrAppend(&content, EncodeStoreLine(score), "\n");
  }
  return WriteFile(path, content);
}

absl::StatusOr<RunSummary> RunScoring(Scorer& scorer,
                                      std::span<const Prompt> prompts,
                                      std::span<const FillWord> fills,
                                      ScoreStore& store,
                                      const RunOptions& options) {
  if (options.max_concurrency < 1) {
    return MakeError(ErrorKind::kInvalidConfig, "max_concurrency must be >= 1");
  }
  RunSummary summary;
  summary.prompts_total = prompts.size();

  std::set<std::string> incomplete;
  for (const MissingWork& w : store.Missing(prompts, fills, scorer.id())) {
    incomplete.insert(w.prompt_id);
  }
  std::vector<const Prompt*> work;
  for (const Prompt& p : prompts) {
    if (incomplete.contains(p.prompt_id)) work.push_back(&p);
  }
  summary.prompts_already_complete = prompts.size() - work.size();

  const size_t limit = options.stop_after_prompts.value_or(work.size());
  std::atomic<size_t> next{0};
  std::atomic<size_t> done{0};
  std::atomic<bool> failed{false};
  std::mutex error_mu;
  absl::Status first_error;

  auto worker = [&] {
    while (!failed.load()) {
      const size_t i = next.fetch_add(1);
      if (i >= work.size() || i >= limit) return;
      absl::Status status;
      auto scores = ScorePrompt(scorer, *work[i], fills);
      status = scores.ok() ? store.PutBatch(*scores) : scores.status();
      if (!status.ok()) {
        failed.store(true);
        std::lock_guard<std::mutex> lock(error_mu);
        if (first_error.ok()) first_error = status;
        return;
      }
      const size_t n = done.fetch_add(1) + 1;
      if (options.progress) options.progress(n, work.size());
    }
  };

  const int threads = std::min<int>(options.max_concurrency,
                                    static_cast<int>(std::max<size_t>(work.size(), 1)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }
  SOCEVAL_RETURN_IF_ERROR(store.Flush());
  if (!first_error.ok()) return first_error;
  summary.prompts_scored = done.load();
  return summary;
}

}  // namespace soceval

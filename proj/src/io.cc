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

#include "soceval/io.h"

#include <openssl/evp.h>
#include <zlib.h>

#include <array>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "soceval/status.h"

namespace soceval {
namespace {

constexpr size_t kReadChunk = 1 << 16;

bool IsGzip(const std::filesystem::path& path) {
  return path.extension() == ".gz";
}

std::string ToHex(const unsigned char* data, size_t n) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(2 * n, '0');
  for (size_t i = 0; i < n; ++i) {
    out[2 * i] = kDigits[data[i] >> 4];
    out[2 * i + 1] = kDigits[data[i] & 0xf];
  }
  return out;
}

class PlainLineWriter : public LineWriter {
 public:
  explicit PlainLineWriter(std::FILE* file) : file_(file) {}
  ~PlainLineWriter() override {
    if (file_ != nullptr) std::fclose(file_);
  }

  absl::Status WriteLine(absl::string_view line) override {
    if (std::fwrite(line.data(), 1, line.size(), file_) != line.size() ||
        std::fputc('\n', file_) == EOF) {
      return MakeError(ErrorKind::kIo, "short write");
    }
    return absl::OkStatus();
  }

  absl::Status Flush() override {
    if (std::fflush(file_) != 0) return MakeError(ErrorKind::kIo, "flush");
    return absl::OkStatus();
  }

  absl::Status Close() override {
    if (file_ == nullptr) return absl::OkStatus();
    const int rc = std::fclose(file_);
    file_ = nullptr;
    if (rc != 0) return MakeError(ErrorKind::kIo, "close");
    return absl::OkStatus();
  }

 private:
  std::FILE* file_;
};

class GzipLineWriter : public LineWriter {
 public:
  explicit GzipLineWriter(gzFile file) : file_(file) {}
  ~GzipLineWriter() override {
    if (file_ != nullptr) gzclose(file_);
  }

  absl::Status WriteLine(absl::string_view line) override {
    if (!line.empty() &&
        gzwrite(file_, line.data(), static_cast<unsigned>(line.size())) <= 0) {
      return MakeError(ErrorKind::kIo, "gzip write");
    }
    if (gzputc(file_, '\n') == -1) {
      return MakeError(ErrorKind::kIo, "gzip write");
    }
    return absl::OkStatus();
  }

  absl::Status Flush() override {
    if (gzflush(file_, Z_SYNC_FLUSH) != Z_OK) {
      return MakeError(ErrorKind::kIo, "gzip flush");
    }
    return absl::OkStatus();
  }

  absl::Status Close() override {
    if (file_ == nullptr) return absl::OkStatus();
    const int rc = gzclose(file_);
    file_ = nullptr;
    if (rc != Z_OK) return MakeError(ErrorKind::kIo, "gzip close");
    return absl::OkStatus();
  }

 private:
  gzFile file_;
};

}  // namespace

struct Sha256::State {
  EVP_MD_CTX* ctx = nullptr;
};

Sha256::Sha256() : state_(std::make_unique<State>()) {
  state_->ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr);
}

Sha256::~Sha256() { EVP_MD_CTX_free(state_->ctx); }

void Sha256::Update(absl::string_view data) {
  EVP_DigestUpdate(state_->ctx, data.data(), data.size());
}

std::string Sha256::HexDigest() {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  EVP_DigestFinal_ex(state_->ctx, digest.data(), &len);
  EVP_DigestInit_ex(state_->ctx, EVP_sha256(), nullptr);
  return ToHex(digest.data(), len);
}

std::string Sha256Hex(absl::string_view data) {
  Sha256 hasher;
  hasher.Update(data);
  return hasher.HexDigest();
}

uint32_t Crc32(absl::string_view data) {
  uLong crc = crc32(0L, Z_NULL, 0);
  crc = crc32(crc, reinterpret_cast<const Bytef*>(data.data()),
              static_cast<uInt>(data.size()));
  return static_cast<uint32_t>(crc);
}

std::string FormatDouble(double value) {
  std::array<char, 64> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(),
                                       value);
  if (ec != std::errc()) return absl::StrFormat("%.17g", value);
  return std::string(buf.data(), end);
}

std::string FormatDisplay(double value) {
  std::string out = absl::StrFormat("%.3f", value);
  if (out == "-0.000") out = "0.000";
  return out;
}

absl::StatusOr<std::unique_ptr<LineWriter>> LineWriter::Open(
    const std::filesystem::path& path, bool append) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  if (IsGzip(path)) {
    gzFile file = gzopen(path.c_str(), append ? "ab" : "wb");
    if (file == nullptr) {
      return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string()));
    }
    return std::make_unique<GzipLineWriter>(file);
  }
  std::FILE* file = std::fopen(path.c_str(), append ? "ab" : "wb");
  if (file == nullptr) {
    return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string()));
  }
  return std::make_unique<PlainLineWriter>(file);
}

absl::Status ForEachLine(const std::filesystem::path& path,
                         const LineCallback& fn) {
  std::string pending;
  size_t line_number = 0;
  auto drain = [&](const char* data, size_t n) -> absl::Status {
    size_t start = 0;
    for (size_t i = 0; i < n; ++i) {
      if (data[i] != '\n') continue;
      ++line_number;
      if (pending.empty()) {
        SOCEVAL_RETURN_IF_ERROR(
            fn(line_number, absl::string_view(data + start, i - start), true));
      } else {
        pending.append(data + start, i - start);
        SOCEVAL_RETURN_IF_ERROR(fn(line_number, pending, true));
        pending.clear();
      }
      start = i + 1;
    }
    pending.append(data + start, n - start);
    return absl::OkStatus();
  };

  std::vector<char> buf(kReadChunk);
  if (IsGzip(path)) {
    gzFile file = gzopen(path.c_str(), "rb");
    if (file == nullptr) {
      return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string()));
    }
    int n = 0;
    absl::Status status;
    while ((n = gzread(file, buf.data(), static_cast<unsigned>(buf.size()))) > 0) {
      status = drain(buf.data(), static_cast<size_t>(n));
      if (!status.ok()) break;
    }
    gzclose(file);
    SOCEVAL_RETURN_IF_ERROR(status);
    if (n < 0) {
      return MakeError(ErrorKind::kMalformedFile,
                       absl::StrCat(path.string(), ": corrupt gzip stream"));
    }
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string()));
    }
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      const auto n = static_cast<size_t>(in.gcount());
      if (n == 0) break;
      SOCEVAL_RETURN_IF_ERROR(drain(buf.data(), n));
    }
  }
  if (!pending.empty()) {
    SOCEVAL_RETURN_IF_ERROR(fn(line_number + 1, pending, false));
  }
  return absl::OkStatus();
}

absl::Status ForEachJsonLine(
    const std::filesystem::path& path,
    const std::function<absl::Status(size_t, const Json&)>& fn) {
  return ForEachLine(
      path, [&](size_t line_number, absl::string_view line, bool complete) {
        if (line.find_first_not_of(" \t\r") == absl::string_view::npos) {
          return absl::OkStatus();
        }
        Json record = Json::parse(line, nullptr, /*allow_exceptions=*/false);
        if (record.is_discarded()) {
          return MakeError(
              ErrorKind::kMalformedFile,
              absl::StrCat(path.string(), ":", line_number,
                           complete ? ": invalid JSON" : ": truncated record"));
        }
        return fn(line_number, record);
      });
}

absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string()));
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

absl::Status WriteFile(const std::filesystem::path& path,
                       absl::string_view content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    return MakeError(ErrorKind::kIo, absl::StrCat("cannot write ", path.string()));
  }
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) return MakeError(ErrorKind::kIo, "short write");
  return absl::OkStatus();
}

absl::StatusOr<std::string> HashFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return MakeError(ErrorKind::kIo, absl::StrCat("cannot open ", path.string()));
  }
  Sha256 hasher;
  std::vector<char> buf(kReadChunk);
  while (in) {
    in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
    const auto n = static_cast<size_t>(in.gcount());
    if (n == 0) break;
    hasher.Update(absl::string_view(buf.data(), n));
  }
  return hasher.HexDigest();
}

}  // namespace soceval

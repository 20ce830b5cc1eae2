#pragma once

#include <chrono>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <semaphore>
#include <string>
#include <vector>

#include "forge/backend/chat.hpp"

namespace forge::backend {

struct RetryPolicy {
  /// Total attempts including the first one.
  int max_attempts = 3;
  std::chrono::milliseconds initial_backoff{250};
  double multiplier = 2.0;
  std::chrono::milliseconds max_backoff{8000};
  /// Replaceable so tests can observe the schedule without sleeping.
  std::function<void(std::chrono::milliseconds)> sleep;

  /// Delay before attempt `attempt + 1` (attempt is 1-based).
  std::chrono::milliseconds backoff_after(int attempt) const;
};

struct BackendLimits {
  std::size_t max_in_flight = 4;
  /// 0 disables rate limiting.
  double requests_per_minute = 0.0;
};

/// Spaces request starts at least 60/rpm seconds apart.
class RateLimiter {
 public:
  explicit RateLimiter(double requests_per_minute);
  void acquire();

 private:
  std::mutex mutex_;
  std::chrono::steady_clock::duration interval_{};
  std::chrono::steady_clock::time_point next_{};
};

/// A named backend plus its retry policy, in-flight bound and rate limiter.
/// Shareable across threads.
class BackendHandle {
 public:
  BackendHandle(std::string name, std::shared_ptr<ChatBackend> backend, RetryPolicy retry = {},
                BackendLimits limits = {});

  BackendHandle(const BackendHandle&) = delete;
  BackendHandle& operator=(const BackendHandle&) = delete;

  const std::string& name() const { return name_; }
  const RetryPolicy& retry_policy() const { return retry_; }
  const BackendLimits& limits() const { return limits_; }
  ChatBackend& backend() { return *backend_; }

  /// Free-text provider version, recorded for provenance only.
  std::string model_version;

 private:
  friend BackendRecord complete(BackendHandle& handle, const ChatRequest& request);

  std::string name_;
  std::shared_ptr<ChatBackend> backend_;
  RetryPolicy retry_;
  BackendLimits limits_;
  std::counting_semaphore<> in_flight_;
  RateLimiter limiter_;
};

/// Sends `request`, retrying TransportError and Timeout with exponential
/// backoff up to retry.max_attempts; Refused is returned immediately. The
/// final outcome is reported in the record, never thrown. Errors raised by
/// the backend itself (e.g. MissingScriptEntry) propagate.
BackendRecord complete(BackendHandle& handle, const ChatRequest& request);

/// Append-only JSONL audit log; one writer, many producers.
class BackendLog {
 public:
  explicit BackendLog(const std::filesystem::path& path, bool truncate = false);

  void append(const BackendRecord& record);
  void append(const std::vector<BackendRecord>& records);

 private:
  std::mutex mutex_;
  std::ofstream out_;
};

}  // namespace forge::backend

#include "forge/backend/client.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include <spdlog/spdlog.h>

#include "forge/util/error.hpp"
#include "forge/util/hash.hpp"

namespace forge::backend {

std::chrono::milliseconds RetryPolicy::backoff_after(int attempt) const {
  const double scaled = static_cast<double>(initial_backoff.count()) * std::pow(multiplier, attempt - 1);
  const double capped = std::min(scaled, static_cast<double>(max_backoff.count()));
  return std::chrono::milliseconds(static_cast<std::int64_t>(capped));
}

RateLimiter::RateLimiter(double requests_per_minute) {
  if (requests_per_minute > 0.0) {
    interval_ = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(60.0 / requests_per_minute));
  }
}

void RateLimiter::acquire() {
  if (interval_ == std::chrono::steady_clock::duration::zero()) return;
  std::chrono::steady_clock::time_point slot;
  {
    std::lock_guard lock(mutex_);
    slot = std::max(std::chrono::steady_clock::now(), next_);
    next_ = slot + interval_;
  }
  std::this_thread::sleep_until(slot);
}

BackendHandle::BackendHandle(std::string name, std::shared_ptr<ChatBackend> backend, RetryPolicy retry,
                             BackendLimits limits)
    : name_(std::move(name)),
      backend_(std::move(backend)),
      retry_(std::move(retry)),
      limits_(limits),
      in_flight_(static_cast<std::ptrdiff_t>(std::max<std::size_t>(1, limits.max_in_flight))),
      limiter_(limits.requests_per_minute) {
  if (!backend_) throw Error(Errc::ConfigError, "backend '" + name_ + "' has no implementation");
  if (retry_.max_attempts < 1) throw Error(Errc::ConfigError, "backend '" + name_ + "': max_attempts must be >= 1");
}

namespace {

bool retryable(Outcome o) { return o == Outcome::TransportError || o == Outcome::Timeout; }

struct SemaphoreGuard {
  explicit SemaphoreGuard(std::counting_semaphore<>& s) : sem(s) { sem.acquire(); }
  ~SemaphoreGuard() { sem.release(); }
  std::counting_semaphore<>& sem;
};

}  // namespace

BackendRecord complete(BackendHandle& handle, const ChatRequest& request) {
  validate_request(request);
  BackendRecord record;
  record.backend = handle.name_;
  record.request_tag = request.request_tag;
  record.request_digest = request_digest(request);

  const RetryPolicy& policy = handle.retry_;
  for (int attempt = 1; attempt <= policy.max_attempts; ++attempt) {
    AttemptResult result;
    {
      SemaphoreGuard guard(handle.in_flight_);
      handle.limiter_.acquire();
      result = handle.backend_->send(request, record.request_digest);
    }
    record.attempts = attempt;
    record.latency_ms += result.latency_ms;
    record.outcome = result.outcome;
    record.error = result.error;
    if (result.outcome == Outcome::Ok && result.text.empty()) {
      record.outcome = Outcome::Refused;
      record.error = "empty response";
    }
    spdlog::debug("backend {} tag={} attempt {}/{} -> {}", handle.name_, request.request_tag, attempt,
                  policy.max_attempts, to_string(record.outcome));
    if (record.outcome == Outcome::Ok) {
      record.response = std::move(result.text);
      return record;
    }
    if (!retryable(record.outcome) || attempt == policy.max_attempts) break;
    const auto delay = policy.backoff_after(attempt);
    spdlog::warn("backend {} tag={} attempt {} failed ({}): {}; retrying in {} ms", handle.name_,
                 request.request_tag, attempt, to_string(record.outcome), record.error, delay.count());
    if (policy.sleep) {
      policy.sleep(delay);
    } else {
      std::this_thread::sleep_for(delay);
    }
  }
  return record;
}

BackendLog::BackendLog(const std::filesystem::path& path, bool truncate) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  out_.open(path, std::ios::binary | (truncate ? std::ios::trunc : std::ios::app));
  if (!out_) throw Error(Errc::IoError, "cannot open backend log " + path.string());
}

void BackendLog::append(const BackendRecord& record) {
  std::lock_guard lock(mutex_);
  out_ << canonical_dump(to_json(record)) << '\n';
  out_.flush();
}

void BackendLog::append(const std::vector<BackendRecord>& records) {
  std::lock_guard lock(mutex_);
  for (const auto& r : records) out_ << canonical_dump(to_json(r)) << '\n';
  out_.flush();
}

}  // namespace forge::backend

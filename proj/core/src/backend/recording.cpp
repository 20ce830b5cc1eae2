#include "forge/backend/scripted.hpp"

#include "forge/util/error.hpp"
#include "forge/util/jsonl.hpp"

namespace forge::backend {

RecordingBackend::RecordingBackend(std::shared_ptr<ChatBackend> inner) : inner_(std::move(inner)) {
  if (!inner_) throw Error(Errc::InvalidArgument, "recording backend needs an inner backend");
}

AttemptResult RecordingBackend::send(const ChatRequest& request, const std::string& digest) {
  AttemptResult result = inner_->send(request, digest);
  if (result.outcome == Outcome::Ok) {
    std::lock_guard lock(mutex_);
    recorded_[digest] = {result.text, request.request_tag};
  }
  return result;
}

void RecordingBackend::write_script(const std::filesystem::path& path) const {
  std::vector<json> rows;
  {
    std::lock_guard lock(mutex_);
    for (const auto& [digest, entry] : recorded_) {
      rows.push_back(json{{"digest", digest}, {"response", entry.first}, {"request_tag", entry.second}});
    }
  }
  write_jsonl(path, rows);
}

std::size_t RecordingBackend::size() const {
  std::lock_guard lock(mutex_);
  return recorded_.size();
}

}  // namespace forge::backend

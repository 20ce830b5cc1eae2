#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "forge/annotation/store.hpp"

namespace forge::annotation {

struct ServerOptions {
  std::string host = "127.0.0.1";
  /// 0 picks a free port.
  int port = 0;
  /// Bearer token required by GET /export. Empty disables the endpoint.
  std::string admin_token;
  /// Static UI bundle mounted at /ui when the directory exists.
  std::optional<std::filesystem::path> ui_dir;
};

/// HTTP+JSON front end over an AnnotationStore:
///
///   POST /register          {"name"}                    -> {"annotator_id", "token"}
///   GET  /tasks/next?annotator=ID   (Bearer token)       -> task payload or {"status": "none_remaining"}
///   POST /judgments         {"task_id", "verdict", "patched_text"?} (Bearer token)
///   GET  /export            (Bearer admin token)         -> {"comparisons": [...], "reviews": [...]}
///   GET  /progress                                       -> counts
///   GET  /metrics                                        -> metric names and definitions
class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, ServerOptions options);
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds and returns the port; call before start() or serve().
  int bind();
  /// Serves on a background thread.
  void start();
  /// Serves on the calling thread until stop().
  void serve();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace forge::annotation

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "polarkit/annotation.hpp"

namespace polarkit {

struct ServiceOptions {
  /// Directory served at "/" (the annotation UI bundle); optional.
  std::optional<std::filesystem::path> ui_dir;
};

/// JSON-over-HTTP front end of an AnnotationStore.
///
///   POST /tasks                              create a task
///   GET  /tasks                              list task ids
///   GET  /tasks/{id}                         task, roster, item states, progress
///   GET  /tasks/{id}/next?annotator=A        next item for A, or 204
///   POST /tasks/{id}/items/{item}/label      {"annotator", "judgment"}
///   GET  /tasks/{id}/kappa?weighting=&include_borderline=
///   GET  /tasks/{id}/export                  lexicon TSV of Final items
///   GET  /tasks/{id}/disagreements?annotator=S
///   POST /tasks/{id}/items/{item}/resolve    {"annotator", "label"}
class AnnotationServer {
 public:
  AnnotationServer(AnnotationStore& store, ServiceOptions options = {});
  ~AnnotationServer();

  AnnotationServer(const AnnotationServer&) = delete;
  AnnotationServer& operator=(const AnnotationServer&) = delete;

  /// Binds and blocks until stop().
  bool listen(const std::string& host, int port);
  /// Binds to an ephemeral port and returns it (or -1).
  int bind_any_port(const std::string& host);
  /// Serves on a socket bound by bind_any_port; blocks until stop().
  bool listen_after_bind();
  void stop();
  void wait_until_ready() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace polarkit

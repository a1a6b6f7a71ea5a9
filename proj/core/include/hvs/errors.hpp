#pragma once

#include <stdexcept>
#include <string>

namespace hvs {

/// Base class for every error thrown by this library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

enum class SceneErrorKind {
  missing_file,
  malformed_record,
  bad_aspect,
  bbox_outside,
  duplicate_scene_id,
};

/// Scene loading failure. Message names the offending file/field/id.
class SceneError : public Error {
 public:
  SceneError(SceneErrorKind kind, const std::string& msg) : Error(msg), kind_(kind) {}
  SceneErrorKind kind() const { return kind_; }

 private:
  SceneErrorKind kind_;
};

/// Structured-text parse failure (imagination blocks, suggestion blocks,
/// actor replies). line() is 1-based; 0 means the error is about the input
/// as a whole (e.g. truncated before a required final line).
class ParseError : public Error {
 public:
  ParseError(const std::string& msg, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + msg : msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

enum class WireErrorKind {
  transport,  // connect/timeout/IO, after retries were exhausted
  status,     // non-2xx HTTP status that is not retried (or retries exhausted)
  bad_reply,  // 2xx but the body is not the JSON shape we expect
};

/// Remote backend failure.
class WireError : public Error {
 public:
  WireError(WireErrorKind kind, const std::string& msg, int status = 0, int attempts = 1)
      : Error(msg), kind_(kind), status_(status), attempts_(attempts) {}
  WireErrorKind kind() const { return kind_; }
  int status() const { return status_; }
  int attempts() const { return attempts_; }

 private:
  WireErrorKind kind_;
  int status_;
  int attempts_;
};

}  // namespace hvs

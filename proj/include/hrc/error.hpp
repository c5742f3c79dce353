#pragma once

#include <stdexcept>
#include <string>

namespace hrc {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed scene, persona, schedule or config document.
class LoadError : public Error {
 public:
  using Error::Error;
};

/// Illegal state transition in the household world (pick/place rules).
class WorldError : public Error {
 public:
  using Error::Error;
};

/// Precondition or schema violation on caller-supplied values.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Model output that does not follow the expected response format.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::string raw)
      : Error(what), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Backend failure. Retryable errors carry the number of attempts made.
class GatewayError : public Error {
 public:
  GatewayError(const std::string& what, bool retryable, int attempts)
      : Error(what), retryable_(retryable), attempts_(attempts) {}

  bool retryable() const noexcept { return retryable_; }
  int attempts() const noexcept { return attempts_; }

 private:
  bool retryable_;
  int attempts_;
};

/// Strict replay asked for a response that was never recorded.
class CacheMissError : public GatewayError {
 public:
  explicit CacheMissError(const std::string& key)
      : GatewayError("replay cache miss for key " + key, false, 0), key_(key) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

/// An hour could not be completed (generation failed after retries).
class EpisodeError : public Error {
 public:
  EpisodeError(const std::string& what, std::string raw = {})
      : Error(what), raw_(std::move(raw)) {}

  const std::string& raw() const noexcept { return raw_; }

 private:
  std::string raw_;
};

/// Session service errors mapped onto HTTP status codes.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

}  // namespace hrc

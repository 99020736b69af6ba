#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace intent_bench {

// Process exit codes shared by the CLI.
enum class ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kValidation = 2,
  kBackend = 3,
};

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ExitCode code = ExitCode::kValidation)
      : std::runtime_error(what), code_(code) {}

  ExitCode exit_code() const noexcept { return code_; }

 private:
  ExitCode code_;
};

// Catalog and store I/O.
class LoadError : public Error {
 public:
  using Error::Error;
};

// Schema or invariant violation; carries the offending record and field.
class ValidationError : public Error {
 public:
  ValidationError(std::string record, std::string field, const std::string& what)
      : Error(record + ": " + field + ": " + what),
        record_(std::move(record)),
        field_(std::move(field)) {}

  const std::string& record() const noexcept { return record_; }
  const std::string& field() const noexcept { return field_; }

 private:
  std::string record_;
  std::string field_;
};

class ConflictError : public Error {
 public:
  using Error::Error;
};

class NoMatchError : public Error {
 public:
  using Error::Error;
};

class AmbiguityError : public Error {
 public:
  AmbiguityError(const std::string& what, std::vector<std::string> candidates)
      : Error(what), candidates_(std::move(candidates)) {}

  const std::vector<std::string>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<std::string> candidates_;
};

// Prompt construction preconditions.
class ArityError : public Error {
 public:
  using Error::Error;
};

class LeakageError : public Error {
 public:
  using Error::Error;
};

// Missing credentials, malformed registry or annotation store.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class BackendError : public Error {
 public:
  BackendError(const std::string& what, int status = 0)
      : Error(what, ExitCode::kBackend), status_(status) {}

  // HTTP status of the last attempt; 0 for transport failures.
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class EmptyResponseError : public BackendError {
 public:
  using BackendError::BackendError;
};

class PlanError : public Error {
 public:
  using Error::Error;
};

class AggregationError : public Error {
 public:
  using Error::Error;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(what, ExitCode::kUsage) {}
};

}  // namespace intent_bench

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace recam {

// Error categories map one-to-one onto CLI exit codes.
enum class ErrorKind {
  kUsage,       // 2
  kResource,    // 3
  kParse,       // 4
  kValidation,  // 4
  kLookup,      // 4
  kDomain,      // 4
  kNotFound,    // 4
  kDivergence,  // 5
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }
  int exit_code() const;

 private:
  ErrorKind kind_;
};

class UsageError : public Error {
 public:
  explicit UsageError(const std::string& what) : Error(ErrorKind::kUsage, what) {}
};

class ResourceError : public Error {
 public:
  explicit ResourceError(const std::string& what) : Error(ErrorKind::kResource, what) {}
};

class ParseError : public Error {
 public:
  ParseError(const std::string& file, std::size_t line, const std::string& what);
  const std::string& file() const { return file_; }
  std::size_t line() const { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what, std::string reason = "invalid")
      : Error(ErrorKind::kValidation, what), reason_(std::move(reason)) {}
  // Stable machine-readable code, e.g. "empty_passage_span".
  const std::string& reason() const { return reason_; }

 private:
  std::string reason_;
};

class LookupError : public Error {
 public:
  explicit LookupError(const std::string& what) : Error(ErrorKind::kLookup, what) {}
};

// Word has no static vector.
class OovError : public LookupError {
 public:
  explicit OovError(const std::string& word)
      : LookupError("out-of-vocabulary word: '" + word + "'"), word_(word) {}
  const std::string& word() const { return word_; }

 private:
  std::string word_;
};

class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(ErrorKind::kDomain, what) {}
};

class NotFoundError : public Error {
 public:
  explicit NotFoundError(const std::string& what) : Error(ErrorKind::kNotFound, what) {}
};

class DivergenceError : public Error {
 public:
  DivergenceError(int epoch, int batch, double loss);
  int epoch() const { return epoch_; }
  int batch() const { return batch_; }

 private:
  int epoch_;
  int batch_;
};

}  // namespace recam

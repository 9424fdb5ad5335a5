#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ctxdep {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed CoNLL-U line.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Sentence whose head graph is not a tree (cycle, dangling head, gaps).
class StructureError : public Error {
 public:
  StructureError(std::string sentence_id, const std::string& what)
      : Error("sentence " + sentence_id + ": " + what), sentence_id_(std::move(sentence_id)) {}
  const std::string& sentence_id() const noexcept { return sentence_id_; }

 private:
  std::string sentence_id_;
};

/// Malformed row in a resource file (profile, lexicon, gold, config).
class FormatError : public Error {
 public:
  FormatError(std::string file, std::size_t line, const std::string& what)
      : Error(file + ":" + std::to_string(line) + ": " + what), file_(std::move(file)), line_(line) {}
  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Caller broke an operation's precondition.
class UsageError : public Error {
 public:
  using Error::Error;
};

/// Bad data handed to the evaluation harness (e.g. duplicate gold ids).
class InputError : public Error {
 public:
  using Error::Error;
};

class TransportError : public Error {
 public:
  using Error::Error;
};

/// Concordance service answered with a non-2xx status.
class ServiceError : public Error {
 public:
  explicit ServiceError(int status)
      : Error("concordance service returned HTTP " + std::to_string(status)), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class DecodeError : public Error {
 public:
  using Error::Error;
};

}  // namespace ctxdep

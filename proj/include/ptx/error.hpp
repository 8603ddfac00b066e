#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ptx {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A character outside the 7-bit printable set (plus newline).
class UnsupportedCharacter : public Error {
 public:
  UnsupportedCharacter(std::size_t index, unsigned codepoint)
      : Error("unsupported character 0x" + to_hex(codepoint) + " at index " +
              std::to_string(index)),
        index_(index),
        codepoint_(codepoint) {}

  std::size_t index() const noexcept { return index_; }
  unsigned codepoint() const noexcept { return codepoint_; }

 private:
  static std::string to_hex(unsigned v) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string s{digits[(v >> 4) & 0xf], digits[v & 0xf]};
    return s;
  }

  std::size_t index_;
  unsigned codepoint_;
};

class EmptyDictionary : public Error {
 public:
  EmptyDictionary() : Error("dictionary has no entries") {}
};

/// Received frame is inconsistent with the filter bank (count or index mismatch).
class BrokenFrame : public Error {
 public:
  BrokenFrame(const std::string& what, std::size_t expected, std::size_t actual)
      : Error("broken frame: " + what + " (expected " + std::to_string(expected) +
              ", got " + std::to_string(actual) + ")"),
        expected_(expected),
        actual_(actual) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t actual() const noexcept { return actual_; }

 private:
  std::size_t expected_;
  std::size_t actual_;
};

class EmptyInput : public Error {
 public:
  using Error::Error;
};

class EndpointUnavailable : public Error {
 public:
  using Error::Error;
};

class MalformedReply : public Error {
 public:
  using Error::Error;
};

class ProviderUnavailable : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ptx

#pragma once

#include <stdexcept>
#include <string>

namespace renormlab {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DegreeMismatch : Error {
  explicit DegreeMismatch(const std::string& msg) : Error(msg) {}
};

struct NotBlockCompatible : Error {
  explicit NotBlockCompatible(const std::string& msg) : Error(msg) {}
};

struct BackendMismatch : Error {
  explicit BackendMismatch(const std::string& msg) : Error(msg) {}
};

struct UnsupportedForChainKind : Error {
  explicit UnsupportedForChainKind(const std::string& msg) : Error(msg) {}
};

struct UnsupportedBackend : Error {
  explicit UnsupportedBackend(const std::string& msg) : Error(msg) {}
};

struct VertexNotFixed : Error {
  explicit VertexNotFixed(const std::string& msg) : Error(msg) {}
};

struct LevelBudgetExceeded : Error {
  explicit LevelBudgetExceeded(const std::string& msg) : Error(msg) {}
};

struct IndexBudgetExceeded : Error {
  explicit IndexBudgetExceeded(const std::string& msg) : Error(msg) {}
};

struct TooLarge : Error {
  explicit TooLarge(const std::string& msg) : Error(msg) {}
};

struct InsufficientDepth : Error {
  explicit InsufficientDepth(const std::string& msg) : Error(msg) {}
};

struct ConfigInvalid : Error {
  explicit ConfigInvalid(const std::string& msg) : Error(msg) {}
};

struct CacheVersionMismatch : Error {
  explicit CacheVersionMismatch(const std::string& msg) : Error(msg) {}
};

}  // namespace renormlab

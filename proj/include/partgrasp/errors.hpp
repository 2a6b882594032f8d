#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace partgrasp {

// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Requested count exceeds the number of available elements.
class SizeError : public Error {
 public:
  using Error::Error;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class LookupError : public Error {
 public:
  using Error::Error;
};

class RegionTooSmallError : public Error {
 public:
  using Error::Error;
};

class PlyError : public Error {
 public:
  using Error::Error;
};

class SceneError : public Error {
 public:
  enum class Kind { Parse, MissingPly, OutOfRange, EmptyPart, Overlap };

  SceneError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

// Raised by pair selection when no pair survives every stage. Carries the
// stage-by-stage survivor counts: filtered arm1, filtered arm2, non-colliding
// pairs, stable pairs.
class NoFeasiblePairError : public Error {
 public:
  NoFeasiblePairError(const std::string& what, std::array<std::size_t, 4> counts)
      : Error(what), counts_(counts) {}
  const std::array<std::size_t, 4>& survivor_counts() const noexcept { return counts_; }

 private:
  std::array<std::size_t, 4> counts_;
};

}  // namespace partgrasp

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bernpairs {

/// Base of every domain error raised by the library. `name()` is the stable
/// identifier printed by the command-line front end.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* name() const noexcept = 0;
};

#define BERNPAIRS_DEFINE_ERROR(Type)                                    \
  class Type : public Error {                                           \
   public:                                                              \
    using Error::Error;                                                 \
    const char* name() const noexcept override { return #Type; }        \
  }

BERNPAIRS_DEFINE_ERROR(NotInvertible);
BERNPAIRS_DEFINE_ERROR(ResourceLimit);
BERNPAIRS_DEFINE_ERROR(PoleAtIndex);
BERNPAIRS_DEFINE_ERROR(DeltaZero);
BERNPAIRS_DEFINE_ERROR(NotIrregular);
BERNPAIRS_DEFINE_ERROR(NotIrregularPair);
BERNPAIRS_DEFINE_ERROR(NotStrongFriendly);

#undef BERNPAIRS_DEFINE_ERROR

/// A query needed primes the database does not cover. `needed_bound()` is
/// the smallest `max_p` that would satisfy it, or 0 when the search has no
/// finite bound yet.
class DatabaseTooSmall : public Error {
 public:
  DatabaseTooSmall(const std::string& what, std::uint64_t needed_bound)
      : Error(what), needed_bound_(needed_bound) {}
  const char* name() const noexcept override { return "DatabaseTooSmall"; }
  std::uint64_t needed_bound() const noexcept { return needed_bound_; }

 private:
  std::uint64_t needed_bound_;
};

class FormatError : public Error {
 public:
  FormatError(const std::string& what, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  const char* name() const noexcept override { return "FormatError"; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Arithmetic on residues with different moduli. This is a caller bug, not a
/// domain condition, so it derives from std::logic_error.
class ModulusMismatch : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace bernpairs

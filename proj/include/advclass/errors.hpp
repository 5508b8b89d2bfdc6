#pragma once

#include <stdexcept>
#include <string>

namespace advclass {

/// Bad caller input: unknown ids, malformed documents, inconsistent dimensions.
class InputError : public std::runtime_error {
 public:
  explicit InputError(const std::string& what) : std::runtime_error(what) {}
};

/// A model assumption is violated (p in {0,1}, zero noise mass at a reward
/// level). Distinct from InputError so the CLI can map it to its own exit code.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// Instance too large for a brute-force path.
class SizeError : public InputError {
 public:
  explicit SizeError(const std::string& what) : InputError(what) {}
};

/// Cannot happen for valid input; reaching it means a solver bug.
class InternalError : public std::logic_error {
 public:
  explicit InternalError(const std::string& what) : std::logic_error(what) {}
};

}  // namespace advclass

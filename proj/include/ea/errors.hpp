#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ea {

/// Malformed input: bad file, unknown label, bad grammar, precondition abuse.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A brute-force bound was hit. Never silently degraded into a guess.
class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A machine-checked mathematical statement failed on a concrete instance.
/// This is the most important failure mode of the whole tool: it means either
/// a bug or a counterexample, and each occurrence must be triaged.
class FalsificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Brute-force bounds. Overridable via the EA_CAPS environment variable,
/// a comma-separated key=value list, e.g. "topology=10,subsets=12".
struct Caps {
  std::size_t topology = 12;   // closed-set family generation (2^n sets)
  std::size_t subsets = 16;    // subset sweeps (compactness, completeness)
  std::size_t vertices = 32;   // state polytope vertex enumeration (variables)
  std::size_t enumerate = 8;   // exhaustive model enumeration (carrier size)
  std::size_t truncate = 256;  // carrier size of family truncations

  static Caps parse(const std::string& keyvals);
};

}  // namespace ea

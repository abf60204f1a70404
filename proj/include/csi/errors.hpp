#pragma once

#include <stdexcept>
#include <string>

namespace csi {

// Bad user input: unparsable files, unknown names, out-of-range flags.
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value violates the structural invariants of its type.
struct StructureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A request is valid but beyond what the implementation supports.
struct CapabilityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A precondition of an operation does not hold.
struct PreconditionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Monte Carlo or geometric computation failed to produce a usable value.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct EmbeddingError : std::runtime_error {
  EmbeddingError(const std::string& what, int comp_a, double t_a, int comp_b, double t_b)
      : std::runtime_error(what), comp_a(comp_a), t_a(t_a), comp_b(comp_b), t_b(t_b) {}
  int comp_a;
  double t_a;
  int comp_b;
  double t_b;
};

}  // namespace csi

#pragma once

#include <memory>
#include <mutex>
#include <optional>

#include "rmpc/polytope.hpp"
#include "rmpc/regions.hpp"
#include "rmpc/synthesis.hpp"

namespace rmpc {

struct ProjectionOptions {
  /// Refuse problems with more than this many tail inputs m (N - 1) to
  /// eliminate, unless `override_cap` is set.
  int elim_cap = 128;
  bool override_cap = false;
  EliminationOptions elimination{};
};

/// Projection feasibility region C of an affine law: states x for which
/// u(0) = K x + b is admissible and some tail u(1..N-1) completes a feasible
/// sequence.
///
/// The tail existence condition does not depend on the law. The engine
/// computes it once as the set W of states x(1) from which the remaining
/// N - 1 stages are feasible, eliminating one stage of m inputs at a time and
/// pruning redundant rows after every step. C is then the pullback of W and
/// of U through the law. Thread-safe.
class ProjectionEngine {
 public:
  explicit ProjectionEngine(const CondensedQP& qp, ProjectionOptions opts = {});

  /// W in x(1) coordinates. Throws ProjectionTooLarge.
  const Polytope& tail_set();

  /// C for `law`, irredundant. Throws ProjectionTooLarge.
  Polytope region_C(const AffineLaw& law);

 private:
  const CondensedQP& qp_;
  ProjectionOptions opts_;
  std::mutex mutex_;
  std::optional<Polytope> tail_;
};

/// One-shot convenience wrapper around ProjectionEngine.
Polytope projection_region_C(const CondensedQP& qp, const AffineLaw& law,
                             const ProjectionOptions& opts = {});

/// A feasible input sequence whose first input is the law's u(0) at x, found
/// by an LP over the tail inputs; empty if none exists.
std::optional<Vector> complete_sequence(const CondensedQP& qp, const AffineLaw& law,
                                        const Vector& x);

}  // namespace rmpc

#pragma once

// Requests are batches of halfspaces intersected into a cumulative body, so
// nesting holds by construction.

#include <optional>
#include <span>

#include "ncc/convexgeom.hpp"

namespace ncc {

struct Request {
  Mat rows;
  Vec bounds;
};

/// Online stream of requests. next() sees the player's current point and the
/// cumulative body so far; adaptive sources use both, oblivious ones neither.
class RequestSource {
 public:
  virtual ~RequestSource() = default;
  virtual std::size_t dim() const = 0;
  /// nullopt ends the stream.
  virtual std::optional<Request> next(std::span<const double> current, const Polytope& body) = 0;
};

}  // namespace ncc

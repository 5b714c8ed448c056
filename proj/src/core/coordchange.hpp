#pragma once

#include <optional>
#include <vector>

#include "core/supermatrix.hpp"
#include "core/superfun.hpp"

namespace superkilling {

/// Coordinate change phi: source -> target, presented by the images of
/// the target coordinates as superfunctions on the source chart. The
/// inverse direction is user-supplied when an operation needs it;
/// construction verifies that both composites are the identity.
class CoordinateChange {
 public:
  CoordinateChange(ChartPtr source, ChartPtr target,
                   std::vector<SuperFunction> images,
                   std::optional<std::vector<SuperFunction>> inverse_images =
                       std::nullopt);

  const ChartPtr& source() const { return source_; }
  const ChartPtr& target() const { return target_; }
  const std::vector<SuperFunction>& images() const { return images_; }
  bool has_inverse() const { return inverse_images_.has_value(); }
  /// The declared inverse as a change target -> source.
  CoordinateChange inverse() const;

 private:
  ChartPtr source_, target_;
  std::vector<SuperFunction> images_;
  std::optional<std::vector<SuperFunction>> inverse_images_;
};

/// J^{a'}_a = partial(images[a'], a); rows indexed by target coordinates,
/// columns by source coordinates.
SuperMatrix jacobian(const CoordinateChange& c);

/// Substitute the coordinate images into f; ring homomorphism. Even
/// images may carry nilpotent parts, handled by finite Taylor expansion.
SuperFunction pullback(const CoordinateChange& c, const SuperFunction& f);

/// Substitute images into a single even-coordinate expression.
SuperFunction pullback_scalar(const CoordinateChange& c, const ScalarExpr& s);

}  // namespace superkilling

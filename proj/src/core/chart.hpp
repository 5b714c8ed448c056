#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "core/scalar.hpp"

namespace superkilling {

enum class Parity : int { Even = 0, Odd = 1 };

inline Parity operator+(Parity a, Parity b) {
  return static_cast<Parity>((static_cast<int>(a) + static_cast<int>(b)) & 1);
}
inline int parity_int(Parity p) { return static_cast<int>(p); }

struct Interval {
  double lo = 0.1;
  double hi = 3.0;
};

class Chart;
using ChartPtr = std::shared_ptr<const Chart>;

/// A coordinate system: n even symbols followed by m odd symbols.
/// Coordinate index a in [0, n+m) is even for a < n, odd otherwise.
/// The validity box bounds numeric sampling of the even coordinates.
class Chart {
 public:
  static ChartPtr create(std::string name, std::vector<std::string> evens,
                         std::vector<std::string> odds,
                         std::vector<Interval> box = {});

  const std::string& name() const { return name_; }
  std::size_t even_dim() const { return even_names_.size(); }
  std::size_t odd_dim() const { return odd_names_.size(); }
  std::size_t dim() const { return even_dim() + odd_dim(); }

  Parity parity(std::size_t coord) const {
    return coord < even_dim() ? Parity::Even : Parity::Odd;
  }
  const std::string& coord_name(std::size_t coord) const;
  GenId even_symbol(std::size_t i) const { return even_ids_[i]; }
  const std::vector<GenId>& even_symbols() const { return even_ids_; }
  const Interval& box(std::size_t i) const { return box_[i]; }
  const std::vector<Interval>& box() const { return box_; }

  std::optional<std::size_t> index_of(const std::string& name) const;

  /// New chart extending this one: extra even symbols and extra odd
  /// coordinates appended after the existing ones, so functions on the
  /// base chart embed by re-chart alone.
  ChartPtr extended(const std::string& suffix,
                    const std::vector<std::string>& extra_evens,
                    const std::vector<std::string>& extra_odds) const;

 private:
  std::string name_;
  std::vector<std::string> even_names_;
  std::vector<std::string> odd_names_;
  std::vector<GenId> even_ids_;
  std::vector<Interval> box_;
};

}  // namespace superkilling

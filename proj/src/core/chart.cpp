#include "core/chart.hpp"

#include <set>

#include "core/errors.hpp"

namespace superkilling {

ChartPtr Chart::create(std::string name, std::vector<std::string> evens,
                       std::vector<std::string> odds,
                       std::vector<Interval> box) {
  auto chart = std::make_shared<Chart>();
  std::set<std::string> seen;
  for (const auto& list : {evens, odds})
    for (const auto& s : list)
      if (!seen.insert(s).second)
        throw InvalidArgumentError("duplicate coordinate symbol '" + s +
                                   "' in chart " + name);
  chart->name_ = std::move(name);
  chart->even_names_ = std::move(evens);
  chart->odd_names_ = std::move(odds);
  for (const auto& s : chart->even_names_)
    chart->even_ids_.push_back(intern_symbol(s));
  if (box.empty()) box.resize(chart->even_names_.size());
  if (box.size() != chart->even_names_.size())
    throw InvalidArgumentError("validity box size mismatch in chart " +
                               chart->name_);
  for (const auto& iv : box)
    if (!(iv.lo < iv.hi))
      throw InvalidArgumentError("empty validity interval in chart " +
                                 chart->name_);
  chart->box_ = std::move(box);
  return chart;
}

const std::string& Chart::coord_name(std::size_t coord) const {
  return coord < even_dim() ? even_names_[coord]
                            : odd_names_[coord - even_dim()];
}

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < dim(); ++i)
    if (coord_name(i) == name) return i;
  return std::nullopt;
}

ChartPtr Chart::extended(const std::string& suffix,
                         const std::vector<std::string>& extra_evens,
                         const std::vector<std::string>& extra_odds) const {
  std::vector<std::string> evens = even_names_;
  std::vector<std::string> odds = odd_names_;
  evens.insert(evens.end(), extra_evens.begin(), extra_evens.end());
  odds.insert(odds.end(), extra_odds.begin(), extra_odds.end());
  std::vector<Interval> box = box_;
  box.resize(evens.size());
  return create(name_ + suffix, std::move(evens), std::move(odds),
                std::move(box));
}

}  // namespace superkilling

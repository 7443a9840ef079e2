#pragma once

#include <memory>
#include <optional>

#include "dmx/engine.hpp"
#include "dmx/exact/matvec.hpp"

namespace dmx {

// Exact engine for every tag except l2 and linf. Builds whichever index the
// kernel needs at construction.
class ExactEngine final : public MatVecEngine {
 public:
  ExactEngine(Kernel kernel, std::shared_ptr<const PointSet> X, double monomial_budget = 1e7);

  bool symmetric() const override { return kernel_.symmetric(); }
  std::string name() const override { return kernel_.name(); }
  const Kernel& kernel() const noexcept { return kernel_; }

 private:
  void do_apply(std::span<const double> z, std::span<double> out) const override;

  Kernel kernel_;
  std::shared_ptr<const PointSet> X_;
  double budget_;
  std::optional<SortedIndex> sorted_;
  std::optional<MinMaxIndex> minmax_;
  std::optional<MahaIndex> maha_;
};

}  // namespace dmx

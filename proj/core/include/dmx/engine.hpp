#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "dmx/distance_matrix.hpp"
#include "dmx/kernel.hpp"
#include "dmx/point_set.hpp"

namespace dmx {

// Preprocessed state for one kernel over one point set; query(z) returns A z.
class MatVecEngine {
 public:
  virtual ~MatVecEngine() = default;

  std::size_t size() const noexcept { return n_; }
  void apply(std::span<const double> z, std::span<double> out) const;
  std::vector<double> query(std::span<const double> z) const;

  virtual bool symmetric() const = 0;
  virtual std::string name() const = 0;

 protected:
  explicit MatVecEngine(std::size_t n) : n_(n) {}
  // out is zero-filled and sized n.
  virtual void do_apply(std::span<const double> z, std::span<double> out) const = 0;

 private:
  std::size_t n_;
};

struct EngineOptions {
  double eps = 0.2;               // approximate engines only
  std::uint64_t seed = 1;         // approximate engines only
  double embed_alpha = 12.0;      // l2 embedding dimension constant
  std::size_t monomial_budget = 10'000'000;
};

// Fast engine for the kernel: exact for every tag except l2 and linf.
std::unique_ptr<MatVecEngine> make_engine(const Kernel& kernel, std::shared_ptr<const PointSet> X,
                                          const EngineOptions& opts = {});
std::unique_ptr<MatVecEngine> make_engine(const Kernel& kernel, const PointSet& X,
                                          const EngineOptions& opts = {});

// O(n^2 d) per query, nothing precomputed.
class NaiveEngine final : public MatVecEngine {
 public:
  NaiveEngine(Kernel kernel, std::shared_ptr<const PointSet> X);
  bool symmetric() const override { return kernel_.symmetric(); }
  std::string name() const override { return "naive:" + kernel_.name(); }

 private:
  void do_apply(std::span<const double> z, std::span<double> out) const override;
  Kernel kernel_;
  std::shared_ptr<const PointSet> X_;
};

// Multiplies by a materialized matrix.
class DenseEngine final : public MatVecEngine {
 public:
  DenseEngine(DistanceMatrix m, bool symmetric);
  bool symmetric() const override { return symmetric_; }
  std::string name() const override { return "dense"; }
  const DistanceMatrix& matrix() const noexcept { return m_; }

 private:
  void do_apply(std::span<const double> z, std::span<double> out) const override;
  DistanceMatrix m_;
  bool symmetric_;
};

// Forwards to another engine and counts queries.
class CountingEngine final : public MatVecEngine {
 public:
  explicit CountingEngine(const MatVecEngine& inner) : MatVecEngine(inner.size()), inner_(inner) {}
  bool symmetric() const override { return inner_.symmetric(); }
  std::string name() const override { return inner_.name(); }
  std::size_t queries() const noexcept { return count_.load(); }
  void reset() noexcept { count_ = 0; }

 private:
  void do_apply(std::span<const double> z, std::span<double> out) const override;
  const MatVecEngine& inner_;
  mutable std::atomic<std::size_t> count_{0};
};

}  // namespace dmx

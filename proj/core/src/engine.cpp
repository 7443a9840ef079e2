#include "dmx/engine.hpp"

#include <algorithm>

#include "dmx/approx/embedding.hpp"
#include "dmx/approx/linf_binary.hpp"
#include "dmx/error.hpp"
#include "dmx/exact/engines.hpp"
#include "dmx/naive.hpp"

namespace dmx {

void MatVecEngine::apply(std::span<const double> z, std::span<double> out) const {
  if (z.size() != n_ || out.size() != n_)
    throw DimensionError("engine over " + std::to_string(n_) + " points got a vector of length " +
                         std::to_string(z.size() != n_ ? z.size() : out.size()));
  std::fill(out.begin(), out.end(), 0.0);
  do_apply(z, out);
}

std::vector<double> MatVecEngine::query(std::span<const double> z) const {
  std::vector<double> out(n_);
  apply(z, out);
  return out;
}

std::unique_ptr<MatVecEngine> make_engine(const Kernel& kernel, std::shared_ptr<const PointSet> X,
                                          const EngineOptions& opts) {
  switch (kernel.tag) {
    case KernelTag::l2: return std::make_unique<L2ApproxEngine>(*X, opts.eps, opts.seed, opts.embed_alpha);
    case KernelTag::linf:
      return std::make_unique<LinfBinaryEngine>(std::move(X), opts.eps, double(opts.monomial_budget));
    default: return std::make_unique<ExactEngine>(kernel, std::move(X), double(opts.monomial_budget));
  }
}

std::unique_ptr<MatVecEngine> make_engine(const Kernel& kernel, const PointSet& X, const EngineOptions& opts) {
  return make_engine(kernel, std::make_shared<const PointSet>(X), opts);
}

NaiveEngine::NaiveEngine(Kernel kernel, std::shared_ptr<const PointSet> X)
    : MatVecEngine(X->n()), kernel_(std::move(kernel)), X_(std::move(X)) {
  validate_domain(kernel_, *X_);
}

void NaiveEngine::do_apply(std::span<const double> z, std::span<double> out) const {
  auto r = naive_matvec(kernel_, *X_, z);
  std::copy(r.begin(), r.end(), out.begin());
}

DenseEngine::DenseEngine(DistanceMatrix m, bool symmetric)
    : MatVecEngine(m.n()), m_(std::move(m)), symmetric_(symmetric) {}

void DenseEngine::do_apply(std::span<const double> z, std::span<double> out) const {
  auto r = m_.multiply(z);
  std::copy(r.begin(), r.end(), out.begin());
}

void CountingEngine::do_apply(std::span<const double> z, std::span<double> out) const {
  ++count_;
  inner_.apply(z, out);
}

}  // namespace dmx

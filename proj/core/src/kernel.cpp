#include "dmx/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "dmx/error.hpp"

namespace dmx {

namespace {

double ipow(double x, int p) {
  double r = 1.0;
  for (int i = 0; i < p; ++i) r *= x;
  return r;
}

double prob(const Kernel& k, double v) {
  if (v > 0.0) return v;
  if (k.mode == ProbabilityMode::clamp && v >= 0.0) return std::max(v, k.clamp_tau);
  if (v < 0.0) throw DomainError("negative coordinate for " + k.name());
  throw DomainError("zero coordinate for " + k.name() + " in strict mode");
}

double kl_div(const Kernel& k, std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double a = prob(k, x[i]), b = prob(k, y[i]);
    s += a * std::log(a / b);
  }
  return s;
}

}  // namespace

Kernel Kernel::lpp(int p) {
  if (p < 1) throw DomainError("lpp needs p >= 1");
  return make(p % 2 == 0 ? KernelTag::lpp_even : KernelTag::lpp_odd, p);
}

Kernel Kernel::kl(ProbabilityMode m) {
  Kernel k = make(KernelTag::kl);
  k.mode = m;
  return k;
}

Kernel Kernel::sym_kl(ProbabilityMode m, bool half) {
  Kernel k = make(KernelTag::sym_kl);
  k.mode = m;
  k.half_sym_kl = half;
  return k;
}

Kernel Kernel::cross_entropy(ProbabilityMode m) {
  Kernel k = make(KernelTag::cross_entropy);
  k.mode = m;
  return k;
}

Kernel Kernel::mahalanobis(Eigen::MatrixXd m) {
  if (m.rows() != m.cols()) throw DimensionError("Mahalanobis matrix must be square");
  Kernel k = make(KernelTag::mahalanobis_sq, 2);
  k.metric = std::make_shared<const Eigen::MatrixXd>(std::move(m));
  return k;
}

Kernel Kernel::poly(int p) {
  if (p < 1) throw DomainError("polynomial kernel needs p >= 1");
  return make(KernelTag::poly, p);
}

std::string Kernel::name() const {
  switch (tag) {
    case KernelTag::l1: return "l1";
    case KernelTag::lpp_even:
    case KernelTag::lpp_odd: return "lpp(p=" + std::to_string(p) + ")";
    case KernelTag::l2sq: return "l2sq";
    case KernelTag::tv: return "tv";
    case KernelTag::kl: return "kl";
    case KernelTag::sym_kl: return half_sym_kl ? "symkl/2" : "symkl";
    case KernelTag::cross_entropy: return "crossentropy";
    case KernelTag::bhattacharyya: return "bhattacharyya";
    case KernelTag::mixed_linf: return "mixedlinf";
    case KernelTag::mahalanobis_sq: return "mahalanobis";
    case KernelTag::poly: return "poly(p=" + std::to_string(p) + ")";
    case KernelTag::l2: return "l2";
    case KernelTag::linf: return "linf";
  }
  return "?";
}

bool Kernel::symmetric() const {
  if (tag == KernelTag::kl || tag == KernelTag::cross_entropy) return false;
  if (tag == KernelTag::mahalanobis_sq) return metric && *metric == metric->transpose();
  return true;
}

bool Kernel::zero_diagonal() const {
  switch (tag) {
    case KernelTag::l1:
    case KernelTag::lpp_even:
    case KernelTag::lpp_odd:
    case KernelTag::l2sq:
    case KernelTag::tv:
    case KernelTag::kl:
    case KernelTag::sym_kl:
    case KernelTag::l2:
    case KernelTag::linf: return true;
    default: return false;
  }
}

bool Kernel::is_distribution() const {
  return tag == KernelTag::tv || tag == KernelTag::bhattacharyya || is_kl_family();
}

bool Kernel::is_kl_family() const {
  return tag == KernelTag::kl || tag == KernelTag::sym_kl || tag == KernelTag::cross_entropy;
}

double Kernel::operator()(std::span<const double> x, std::span<const double> y) const {
  if (x.size() != y.size()) throw DimensionError("points of different dimension");
  const std::size_t d = x.size();
  double s = 0.0;
  switch (tag) {
    case KernelTag::l1:
      for (std::size_t i = 0; i < d; ++i) s += std::abs(x[i] - y[i]);
      return s;
    case KernelTag::lpp_even:
    case KernelTag::lpp_odd:
      for (std::size_t i = 0; i < d; ++i) s += ipow(std::abs(x[i] - y[i]), p);
      return s;
    case KernelTag::l2sq:
      for (std::size_t i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      return s;
    case KernelTag::l2:
      for (std::size_t i = 0; i < d; ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
      return std::sqrt(s);
    case KernelTag::linf:
      for (std::size_t i = 0; i < d; ++i) s = std::max(s, std::abs(x[i] - y[i]));
      return s;
    case KernelTag::tv:
      for (std::size_t i = 0; i < d; ++i) {
        if (x[i] < 0.0 || y[i] < 0.0) throw DomainError("negative coordinate for tv");
        s += std::abs(x[i] - y[i]);
      }
      return 0.5 * s;
    case KernelTag::kl: return kl_div(*this, x, y);
    case KernelTag::sym_kl: {
      double v = kl_div(*this, x, y) + kl_div(*this, y, x);
      return half_sym_kl ? 0.5 * v : v;
    }
    case KernelTag::cross_entropy:
      for (std::size_t i = 0; i < d; ++i) s -= prob(*this, x[i]) * std::log(prob(*this, y[i]));
      return s;
    case KernelTag::bhattacharyya:
      for (std::size_t i = 0; i < d; ++i) {
        if (x[i] < 0.0 || y[i] < 0.0) throw DomainError("negative coordinate for bhattacharyya");
        s += std::sqrt(x[i] * y[i]);
      }
      return s;
    case KernelTag::mixed_linf:
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) s = std::max(s, std::abs(x[i] - y[j]));
      return s;
    case KernelTag::mahalanobis_sq: {
      const auto& m = *metric;
      if (static_cast<std::size_t>(m.rows()) != d) throw DimensionError("Mahalanobis matrix is not d x d");
      for (std::size_t i = 0; i < d; ++i) {
        double r = 0.0;
        for (std::size_t j = 0; j < d; ++j) r += m(i, j) * y[j];
        s += x[i] * r;
      }
      return s;
    }
    case KernelTag::poly:
      for (std::size_t i = 0; i < d; ++i) s += x[i] * y[i];
      return ipow(s, p);
  }
  return s;
}

Kernel parse_kernel(std::string_view name, int p, std::size_t d) {
  if (name == "l1") return Kernel::l1();
  if (name == "lpp") return Kernel::lpp(p);
  if (name == "l2sq") return Kernel::l2sq();
  if (name == "tv") return Kernel::tv();
  if (name == "kl") return Kernel::kl();
  if (name == "symkl") return Kernel::sym_kl();
  if (name == "crossentropy") return Kernel::cross_entropy();
  if (name == "bhattacharyya") return Kernel::bhattacharyya();
  if (name == "mixedlinf") return Kernel::mixed_linf();
  if (name == "mahalanobis" || name == "gram") return Kernel::gram(d);
  if (name == "poly") return Kernel::poly(p);
  if (name == "l2") return Kernel::l2();
  if (name == "linf") return Kernel::linf();
  throw DomainError("unknown kernel '" + std::string(name) + "'");
}

}  // namespace dmx

#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace dmx {

enum class KernelTag {
  l1,
  lpp_even,
  lpp_odd,
  l2sq,
  tv,
  kl,
  sym_kl,
  cross_entropy,
  bhattacharyya,
  mixed_linf,
  mahalanobis_sq,
  poly,
  l2,
  linf,
};

// How the KL family treats coordinates that are not strictly positive.
enum class ProbabilityMode { strict, clamp };

struct Kernel {
  KernelTag tag = KernelTag::l1;
  int p = 1;
  std::shared_ptr<const Eigen::MatrixXd> metric;  // mahalanobis_sq only
  ProbabilityMode mode = ProbabilityMode::strict;
  double clamp_tau = 1e-12;
  bool half_sym_kl = false;

  static Kernel make(KernelTag t, int p = 1) {
    Kernel k;
    k.tag = t;
    k.p = p;
    return k;
  }
  static Kernel l1() { return make(KernelTag::l1); }
  static Kernel lpp(int p);
  static Kernel l2sq() { return make(KernelTag::l2sq, 2); }
  static Kernel tv() { return make(KernelTag::tv); }
  static Kernel kl(ProbabilityMode m = ProbabilityMode::strict);
  static Kernel sym_kl(ProbabilityMode m = ProbabilityMode::strict, bool half = false);
  static Kernel cross_entropy(ProbabilityMode m = ProbabilityMode::strict);
  static Kernel bhattacharyya() { return make(KernelTag::bhattacharyya); }
  static Kernel mixed_linf() { return make(KernelTag::mixed_linf); }
  static Kernel mahalanobis(Eigen::MatrixXd m);
  static Kernel gram(std::size_t d) { return mahalanobis(Eigen::MatrixXd::Identity(d, d)); }
  static Kernel poly(int p);
  static Kernel l2() { return make(KernelTag::l2); }
  static Kernel linf() { return make(KernelTag::linf); }

  std::string name() const;
  bool symmetric() const;
  bool zero_diagonal() const;
  bool is_distribution() const;
  bool is_kl_family() const;

  // f(x, y); throws DomainError for arguments outside the kernel's domain.
  double operator()(std::span<const double> x, std::span<const double> y) const;
};

// Accepts the CLI names: l1, lpp, l2sq, tv, kl, symkl, crossentropy,
// bhattacharyya, mixedlinf, mahalanobis, gram, poly, l2, linf.
Kernel parse_kernel(std::string_view name, int p, std::size_t d);

}  // namespace dmx

#include "dmx/cli/ovp.hpp"

#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "dmx/engine.hpp"
#include "dmx/error.hpp"

namespace dmx::cli {

namespace {

void check_input(const PointSet& X, const char* which) {
  if (!X.is_binary()) throw DomainError(std::string("set ") + which + " is not binary");
  for (std::size_t i = 0; i < X.n(); ++i) {
    bool any = false;
    for (double v : X.row(i)) any = any || v != 0.0;
    if (!any) throw DomainError(std::string("set ") + which + ", row " + std::to_string(i) + ": zero vector");
  }
}

double ones_sum(const PointSet& X) {
  NaiveEngine engine(Kernel::linf(), std::make_shared<const PointSet>(X));
  const std::vector<double> ones(X.n(), 1.0);
  const auto y = engine.query(ones);
  return std::accumulate(y.begin(), y.end(), 0.0);
}

}  // namespace

OvpVerdict ovp_reduction(const PointSet& A, const PointSet& B) {
  if (A.d() != B.d()) throw DimensionError("OVP sets have different dimensions");
  check_input(A, "A");
  check_input(B, "B");
  const std::size_t d = A.d();
  std::vector<double> fa(A.n() * d), gb(B.n() * d);
  for (std::size_t i = 0; i < A.n(); ++i)
    for (std::size_t c = 0; c < d; ++c) fa[i * d + c] = A(i, c) == 0.0 ? 0.5 : 0.0;
  for (std::size_t i = 0; i < B.n(); ++i)
    for (std::size_t c = 0; c < d; ++c) gb[i * d + c] = B(i, c) == 0.0 ? 0.5 : 1.0;
  std::vector<double> both(fa);
  both.insert(both.end(), gb.begin(), gb.end());

  const double s_ab = ones_sum(PointSet(A.n() + B.n(), d, std::move(both)));
  const double s_a = ones_sum(PointSet(A.n(), d, std::move(fa)));
  const double s_b = ones_sum(PointSet(B.n(), d, std::move(gb)));
  OvpVerdict v;
  v.cross_sum = (s_ab - s_a - s_b) / 2.0;
  v.pairs = double(A.n()) * double(B.n());
  v.orthogonal_pair = v.cross_sum < v.pairs;
  return v;
}

bool ovp_brute_force(const PointSet& A, const PointSet& B) {
  if (A.d() != B.d()) throw DimensionError("OVP sets have different dimensions");
  for (std::size_t i = 0; i < A.n(); ++i)
    for (std::size_t j = 0; j < B.n(); ++j) {
      double dot = 0.0;
      for (std::size_t c = 0; c < A.d(); ++c) dot += A(i, c) * B(j, c);
      if (dot == 0.0) return true;
    }
  return false;
}

}  // namespace dmx::cli

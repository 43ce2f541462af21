#include "dialseg/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace dialseg::kernels {

namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

double squared_norm_scalar(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i] * x[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void momentum_update_scalar(double* w, double* v, double mu, double a,
                            const double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = mu * v[i] + a * x[i];
    w[i] += v[i];
  }
}

const Ops kScalarOps{dot_scalar, squared_norm_scalar, axpy_scalar,
                     momentum_update_scalar};

bool cpu_has_avx2() {
#if DIALSEG_HAVE_AVX2
  return __builtin_cpu_supports("avx2") != 0;
#else
  return false;
#endif
}

Lane resolve_lane() {
  if (const char* env = std::getenv("DIALSEG_KERNELS")) {
    std::string v(env);
    if (v == "scalar") return Lane::Scalar;
    if (v == "avx2") {
      if (!cpu_has_avx2())
        throw std::runtime_error("DIALSEG_KERNELS=avx2 but CPU lacks AVX2");
      return Lane::Avx2;
    }
    // anything else (incl. "auto") falls through to detection
  }
  return cpu_has_avx2() ? Lane::Avx2 : Lane::Scalar;
}

}  // namespace

#if DIALSEG_HAVE_AVX2
const Ops& avx2_ops();  // kernels_avx2.cpp
#endif

const char* lane_name(Lane lane) {
  return lane == Lane::Scalar ? "scalar" : "avx2";
}

bool lane_available(Lane lane) {
  return lane == Lane::Scalar || cpu_has_avx2();
}

Lane active_lane() {
  static const Lane lane = resolve_lane();
  return lane;
}

const Ops& ops_for(Lane lane) {
  if (lane == Lane::Scalar) return kScalarOps;
#if DIALSEG_HAVE_AVX2
  if (cpu_has_avx2()) return avx2_ops();
#endif
  throw std::runtime_error("kernel lane unavailable: avx2");
}

const Ops& ops() {
  static const Ops& active = ops_for(active_lane());
  return active;
}

}  // namespace dialseg::kernels

#pragma once

#include <cstddef>
#include <string>

namespace dialseg::kernels {

// Dense double-precision inner loops behind the classifiers.  Scalar versions
// are the reference semantics; the AVX2 lane is selected at runtime when the
// CPU supports it and must agree with scalar within reduction rounding
// (exactly, for integral-valued inputs).  Set DIALSEG_KERNELS=scalar|avx2|auto
// to override the choice.

enum class Lane { Scalar, Avx2 };

struct Ops {
  double (*dot)(const double* x, const double* y, std::size_t n);
  double (*squared_norm)(const double* x, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // v = mu * v + a * x;  w += v   (per-element, no reductions)
  void (*momentum_update)(double* w, double* v, double mu, double a,
                          const double* x, std::size_t n);
};

const char* lane_name(Lane lane);
bool lane_available(Lane lane);

/// Lane resolved once per process from CPU detection and the environment.
Lane active_lane();

/// Ops table for the active lane.
const Ops& ops();

/// Ops table for a specific lane; throws if unavailable on this machine.
const Ops& ops_for(Lane lane);

}  // namespace dialseg::kernels

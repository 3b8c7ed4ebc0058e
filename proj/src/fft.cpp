#include "fft_detail.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace nskw::detail {
namespace {

// FFTW plan creation is not thread-safe; execution on distinct buffers is.
// Plans are created once per (d, n, sign) behind a mutex and reused through
// the new-array interface. All execution buffers come from fftw_malloc so
// their alignment matches the buffers the plans were created with.
struct PlanKey {
  int d;
  int n;
  int sign;
  auto operator<=>(const PlanKey&) const = default;
};

std::mutex plan_mutex;
std::map<PlanKey, fftw_plan> plan_cache;

fftw_plan get_plan(const Grid& g, int sign) {
  PlanKey key{g.d, g.n, sign};
  std::lock_guard<std::mutex> lock(plan_mutex);
  auto it = plan_cache.find(key);
  if (it != plan_cache.end()) return it->second;

  const size_t total = static_cast<size_t>(g.size());
  fftw_complex* in = fftw_alloc_complex(total);
  fftw_complex* out = fftw_alloc_complex(total);
  fftw_plan plan = g.d == 1
      ? fftw_plan_dft_1d(g.n, in, out, sign, FFTW_ESTIMATE)
      : fftw_plan_dft_2d(g.n, g.n, in, out, sign, FFTW_ESTIMATE);
  fftw_free(in);
  fftw_free(out);
  if (!plan) throw std::runtime_error("failed to create FFT plan");
  plan_cache.emplace(key, plan);
  return plan;
}

struct FftwDeleter {
  void operator()(fftw_complex* p) const { fftw_free(p); }
};
using FftwBuffer = std::unique_ptr<fftw_complex[], FftwDeleter>;

// One scratch pair per thread, grown on demand; avoids malloc churn in the
// time loop while keeping concurrent transforms independent.
struct Workspace {
  FftwBuffer in;
  FftwBuffer out;
  size_t capacity = 0;

  void reserve(size_t total) {
    if (capacity >= total) return;
    in.reset(fftw_alloc_complex(total));
    out.reset(fftw_alloc_complex(total));
    capacity = total;
  }
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

}  // namespace

std::vector<cplx> to_spectrum(const Grid& g, const std::vector<double>& values) {
  const size_t total = static_cast<size_t>(g.size());
  if (values.size() != total) throw std::invalid_argument("grid mismatch");
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite field");
  }

  Workspace& ws = workspace();
  ws.reserve(total);
  for (size_t i = 0; i < total; ++i) {
    ws.in[i][0] = values[i];
    ws.in[i][1] = 0.0;
  }
  fftw_execute_dft(get_plan(g, FFTW_FORWARD), ws.in.get(), ws.out.get());

  std::vector<cplx> spec(total);
  for (size_t i = 0; i < total; ++i) spec[i] = cplx(ws.out[i][0], ws.out[i][1]);
  return spec;
}

std::vector<double> from_spectrum(const Grid& g, const std::vector<cplx>& spec) {
  const size_t total = static_cast<size_t>(g.size());
  if (spec.size() != total) throw std::invalid_argument("grid mismatch");

  Workspace& ws = workspace();
  ws.reserve(total);
  for (size_t i = 0; i < total; ++i) {
    ws.in[i][0] = spec[i].real();
    ws.in[i][1] = spec[i].imag();
  }
  fftw_execute_dft(get_plan(g, FFTW_BACKWARD), ws.in.get(), ws.out.get());

  const double scale = 1.0 / static_cast<double>(total);
  std::vector<double> values(total);
  for (size_t i = 0; i < total; ++i) values[i] = ws.out[i][0] * scale;
  return values;
}

void apply_derivative(const Grid& g, std::vector<cplx>& spec, int axis) {
  if (axis < 0 || axis >= g.d) throw std::invalid_argument("axis out of range");
  const int n = g.n;
  const double two_pi = 2.0 * M_PI;

  if (g.d == 1) {
    for (int i = 0; i < n; ++i) {
      if (i == n / 2) { spec[static_cast<size_t>(i)] = 0.0; continue; }
      const double m = two_pi * wavenumber(i, n);
      spec[static_cast<size_t>(i)] *= cplx(0.0, m);
    }
    return;
  }

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const size_t idx = static_cast<size_t>(i) * n + j;
      const int mode = axis == 0 ? i : j;
      if (mode == n / 2) { spec[idx] = 0.0; continue; }
      const double m = two_pi * wavenumber(mode, n);
      spec[idx] *= cplx(0.0, m);
    }
  }
}

void apply_dealias_mask(const Grid& g, std::vector<cplx>& spec) {
  const int n = g.n;
  const int cut = dealias_cutoff(n);

  if (g.d == 1) {
    for (int i = 0; i < n; ++i) {
      if (std::abs(wavenumber(i, n)) > cut) spec[static_cast<size_t>(i)] = 0.0;
    }
    return;
  }

  for (int i = 0; i < n; ++i) {
    const bool kill_i = std::abs(wavenumber(i, n)) > cut;
    for (int j = 0; j < n; ++j) {
      if (kill_i || std::abs(wavenumber(j, n)) > cut) {
        spec[static_cast<size_t>(i) * n + j] = 0.0;
      }
    }
  }
}

}  // namespace nskw::detail

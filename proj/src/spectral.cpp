#include "gplab/spectral.hpp"

#include <fftw3.h>

#include <cstdint>
#include <map>
#include <mutex>
#include <tuple>

#include "gplab/error.hpp"

namespace gplab {
namespace {

using PlanKey = std::tuple<int, int, std::uint64_t, int>;

// FFTW planning is not thread-safe; execution of an existing plan is.
class PlanCache {
 public:
  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

  fftw_plan get(int rank, int M, std::uint64_t mask, Direction dir,
                cplx* data) {
    const PlanKey key{rank, M, mask, dir == Direction::forward ? -1 : 1};
    std::lock_guard<std::mutex> lock(mutex_);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;

    std::vector<fftw_iodim64> dims;
    std::vector<fftw_iodim64> loops;
    std::ptrdiff_t stride = 1;
    for (int axis = rank - 1; axis >= 0; --axis) {
      fftw_iodim64 io{M, stride, stride};
      if (mask & (std::uint64_t{1} << axis)) {
        dims.push_back(io);
      } else {
        loops.push_back(io);
      }
      stride *= M;
    }
    auto* ptr = reinterpret_cast<fftw_complex*>(data);
    fftw_plan plan = fftw_plan_guru64_dft(
        static_cast<int>(dims.size()), dims.data(),
        static_cast<int>(loops.size()), loops.data(), ptr, ptr,
        dir == Direction::forward ? FFTW_FORWARD : FFTW_BACKWARD,
        FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (plan == nullptr) throw NumericalError("FFTW could not create a plan");
    plans_.emplace(key, plan);
    return plan;
  }

 private:
  std::mutex mutex_;
  std::map<PlanKey, fftw_plan> plans_;
};

PlanCache& plan_cache() {
  static PlanCache cache;
  return cache;
}

}  // namespace

void fft_axes(std::span<cplx> data, int rank, int M, std::span<const int> axes,
              Direction dir) {
  require(rank >= 1 && rank <= 63, "fft_axes: rank out of range");
  require(data.size() == checked_pow(M, rank), "fft_axes: size mismatch");
  if (axes.empty()) return;
  std::uint64_t mask = 0;
  for (int a : axes) {
    require(a >= 0 && a < rank, "fft_axes: axis out of range");
    mask |= std::uint64_t{1} << a;
  }
  fftw_plan plan = plan_cache().get(rank, M, mask, dir, data.data());
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

void fft_all(std::span<cplx> data, int rank, int M, Direction dir) {
  std::vector<int> axes(rank);
  for (int a = 0; a < rank; ++a) axes[a] = a;
  fft_axes(data, rank, M, axes, dir);
}

std::vector<int> slot_axes(int d, int first_slot, int count) {
  std::vector<int> axes;
  for (int s = first_slot; s < first_slot + count; ++s) {
    for (int a = 0; a < d; ++a) axes.push_back(s * d + a);
  }
  return axes;
}

std::vector<double> slot_sum(const std::vector<double>& table,
                             const std::vector<double>& signs) {
  std::vector<double> out{0.0};
  for (double sign : signs) {
    std::vector<double> next;
    next.reserve(out.size() * table.size());
    for (double base : out) {
      for (double t : table) next.push_back(base + sign * t);
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace gplab

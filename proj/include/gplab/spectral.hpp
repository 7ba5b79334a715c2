#pragma once

// Low-level multi-axis discrete Fourier transforms on cubic tensors.
//
// A tensor of rank R with side M is stored row-major; axis 0 is the slowest.
// Transforms are unnormalized DFTs (FFTW sign conventions): forward uses
// e^{-2 pi i jk/M}, backward e^{+2 pi i jk/M}.

#include <complex>
#include <span>
#include <vector>

namespace gplab {

using cplx = std::complex<double>;

enum class Direction { forward, backward };

void fft_axes(std::span<cplx> data, int rank, int M, std::span<const int> axes,
              Direction dir);

void fft_all(std::span<cplx> data, int rank, int M, Direction dir);

// Axes belonging to particle slots [first, first + count) when each slot
// occupies d consecutive tensor axes.
std::vector<int> slot_axes(int d, int first_slot, int count);

// Given a per-slot table t (length P = M^d) and per-slot signs, returns the
// length-P^n table  T[i_1..i_n] = sum_s sign_s * t[i_s].
std::vector<double> slot_sum(const std::vector<double>& table,
                             const std::vector<double>& signs);

}  // namespace gplab

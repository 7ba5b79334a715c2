#pragma once

// Binary snapshots of states, kernels and fields.
//
// Layout (little-endian): magic "GPLB", uint32 version, uint32 kind,
// uint32 d, uint32 M, uint32 particles (N for states, k for kernels, 1 for
// fields), float64 t, float64 L, uint64 count, then count complex64 values
// (float32 real, float32 imaginary) in storage order.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "gplab/fewbody.hpp"
#include "gplab/marginals.hpp"

namespace gplab {

enum class DumpKind : std::uint32_t { nbody = 0, kernel = 1, field = 2 };

struct DumpHeader {
  std::uint32_t version = 1;
  DumpKind kind = DumpKind::field;
  std::uint32_t d = 1;
  std::uint32_t M = 0;
  std::uint32_t particles = 1;
  double t = 0.0;
  double L = 1.0;
  std::uint64_t count = 0;
};

struct DumpData {
  DumpHeader header;
  std::vector<std::complex<float>> values;
};

void write_dump(const std::filesystem::path& path, const NBodyState& state);
void write_dump(const std::filesystem::path& path, const DensityKernel& gamma);
void write_dump(const std::filesystem::path& path, const Field& field, double t = 0.0);

DumpData read_dump(const std::filesystem::path& path);

}  // namespace gplab

#include "gplab/dump.hpp"

#include <bit>
#include <cstring>
#include <fstream>

namespace gplab {

static_assert(std::endian::native == std::endian::little,
              "dump format assumes a little-endian host");

namespace {

constexpr char magic[4] = {'G', 'P', 'L', 'B'};

template <typename T>
void put(std::ofstream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::ifstream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  return value;
}

void write_raw(const std::filesystem::path& path, const DumpHeader& h,
               const std::vector<cplx>& values) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(magic, 4);
  put(out, h.version);
  put(out, static_cast<std::uint32_t>(h.kind));
  put(out, h.d);
  put(out, h.M);
  put(out, h.particles);
  put(out, h.t);
  put(out, h.L);
  put(out, static_cast<std::uint64_t>(values.size()));
  std::vector<float> buffer(2 * values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    buffer[2 * i] = static_cast<float>(values[i].real());
    buffer[2 * i + 1] = static_cast<float>(values[i].imag());
  }
  out.write(reinterpret_cast<const char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(float)));
  if (!out) throw IoError("write failed for " + path.string());
}

DumpHeader header_for(const Grid& g, DumpKind kind, int particles, double t) {
  DumpHeader h;
  h.kind = kind;
  h.d = static_cast<std::uint32_t>(g.dim());
  h.M = static_cast<std::uint32_t>(g.points_per_axis());
  h.particles = static_cast<std::uint32_t>(particles);
  h.t = t;
  h.L = g.length();
  return h;
}

}  // namespace

void write_dump(const std::filesystem::path& path, const NBodyState& state) {
  write_raw(path, header_for(state.grid, DumpKind::nbody, state.N, state.t), state.psi);
}

void write_dump(const std::filesystem::path& path, const DensityKernel& gamma) {
  write_raw(path, header_for(gamma.grid(), DumpKind::kernel, gamma.k(), gamma.t()),
            gamma.data());
}

void write_dump(const std::filesystem::path& path, const Field& field, double t) {
  write_raw(path, header_for(field.grid, DumpKind::field, 1, t), field.values);
}

DumpData read_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char tag[4];
  in.read(tag, 4);
  if (!in || std::memcmp(tag, magic, 4) != 0) {
    throw IoError(path.string() + " is not a gplab dump");
  }
  DumpData data;
  DumpHeader& h = data.header;
  h.version = get<std::uint32_t>(in);
  if (h.version != 1) throw IoError("unsupported dump version " + std::to_string(h.version));
  const auto kind = get<std::uint32_t>(in);
  if (kind > 2) throw IoError("unknown dump kind " + std::to_string(kind));
  h.kind = static_cast<DumpKind>(kind);
  h.d = get<std::uint32_t>(in);
  h.M = get<std::uint32_t>(in);
  h.particles = get<std::uint32_t>(in);
  h.t = get<double>(in);
  h.L = get<double>(in);
  h.count = get<std::uint64_t>(in);
  if (!in) throw IoError("truncated header in " + path.string());
  data.values.resize(h.count);
  in.read(reinterpret_cast<char*>(data.values.data()),
          static_cast<std::streamsize>(h.count * sizeof(std::complex<float>)));
  if (!in) throw IoError("truncated payload in " + path.string());
  return data;
}

}  // namespace gplab

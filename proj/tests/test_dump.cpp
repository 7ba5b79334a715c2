#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "gplab/dump.hpp"
#include "gplab/error.hpp"

using namespace gplab;

namespace {

std::filesystem::path scratch(const char* name) {
  const auto dir = std::filesystem::temp_directory_path() / "gplab_dump_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("N-body dump round trip") {
  const Grid g(1, 8, 2.0);
  NBodyState s = product_state(make_profile(g, {}), 3);
  s.t = 0.25;
  const auto path = scratch("state.bin");
  write_dump(path, s);
  const DumpData d = read_dump(path);
  CHECK(d.header.version == 1);
  CHECK(d.header.kind == DumpKind::nbody);
  CHECK(d.header.d == 1);
  CHECK(d.header.M == 8);
  CHECK(d.header.particles == 3);
  CHECK(d.header.t == 0.25);
  CHECK(d.header.L == 2.0);
  REQUIRE(d.header.count == s.psi.size());
  REQUIRE(d.values.size() == s.psi.size());
  for (std::size_t i = 0; i < s.psi.size(); ++i) {
    CHECK(std::abs(cplx(d.values[i]) - s.psi[i]) < 1e-6 * std::abs(s.psi[i]) + 1e-30);
  }
}

TEST_CASE("kernel and field dumps carry their kind and shape") {
  const Grid g(2, 4);
  const DensityKernel k = pure_state_kernel(make_profile(g, {}));
  write_dump(scratch("kernel.bin"), k);
  const DumpData dk = read_dump(scratch("kernel.bin"));
  CHECK(dk.header.kind == DumpKind::kernel);
  CHECK(dk.header.d == 2);
  CHECK(dk.header.particles == 1);
  CHECK(dk.values.size() == k.data().size());

  write_dump(scratch("field.bin"), make_profile(g, {}), 1.5);
  const DumpData df = read_dump(scratch("field.bin"));
  CHECK(df.header.kind == DumpKind::field);
  CHECK(df.header.t == 1.5);
  CHECK(df.values.size() == 16);
}

TEST_CASE("corrupt dumps are rejected") {
  CHECK_THROWS_AS(read_dump(scratch("missing.bin")), IoError);
  {
    std::ofstream out(scratch("bad_magic.bin"), std::ios::binary);
    out << "NOPE and some more bytes to fill a header of reasonable length....";
  }
  CHECK_THROWS_AS(read_dump(scratch("bad_magic.bin")), IoError);
  write_dump(scratch("short.bin"), make_profile(Grid(1, 8), {}));
  std::filesystem::resize_file(scratch("short.bin"), std::filesystem::file_size(scratch("short.bin")) - 4);
  CHECK_THROWS_AS(read_dump(scratch("short.bin")), IoError);
}

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "chl/field_io.hpp"
#include "chl/rng.hpp"

using namespace chl;

namespace {

std::filesystem::path temp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(is)),
                     std::istreambuf_iterator<char>());
}

void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace

TEST_CASE("round trip is bitwise") {
  const auto path = temp_file("chl_roundtrip.chfd");
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ModelParams p = seed % 2 ? ModelParams{3, 1.2, 0.06} : ModelParams{2, 1.5, 0.04};
    const Field f = random_smooth_field(p, 32, seed);
    write_field(f, path.string());
    const Field g = read_field(path.string());
    REQUIRE(g.n == f.n);
    CHECK(g.params.d == f.params.d);
    CHECK(g.params.phi == f.params.phi);
    CHECK(g.params.xi == f.params.xi);
    CHECK(std::memcmp(f.values.data(), g.values.data(),
                      f.size() * sizeof(double)) == 0);
  }
  std::filesystem::remove(path);
}

TEST_CASE("write twice gives identical bytes") {
  const auto p1 = temp_file("chl_bytes1.chfd");
  const auto p2 = temp_file("chl_bytes2.chfd");
  const Field f = random_smooth_field({2, 1.5, 0.04}, 64, 4);
  write_field(f, p1.string());
  write_field(f, p2.string());
  CHECK(slurp(p1) == slurp(p2));
  std::filesystem::remove(p1);
  std::filesystem::remove(p2);
}

TEST_CASE("reader rejects malformed files with distinct codes") {
  const auto path = temp_file("chl_bad.chfd");
  const Field f = random_smooth_field({2, 1.5, 0.04}, 32, 9);
  write_field(f, path.string());
  std::string good = slurp(path);

  SUBCASE("bad magic") {
    std::string bad = good;
    bad[0] = 'X';
    spit(path, bad);
    try {
      read_field(path.string());
      FAIL("expected FieldIoError");
    } catch (const FieldIoError& e) {
      CHECK(e.status() == FieldIoStatus::not_a_field_file);
    }
  }
  SUBCASE("unsupported version") {
    std::string bad = good;
    bad[4] = 9;
    spit(path, bad);
    try {
      read_field(path.string());
      FAIL("expected FieldIoError");
    } catch (const FieldIoError& e) {
      CHECK(e.status() == FieldIoStatus::unsupported_version);
    }
  }
  SUBCASE("truncated payload") {
    spit(path, good.substr(0, good.size() - 17));
    try {
      read_field(path.string());
      FAIL("expected FieldIoError");
    } catch (const FieldIoError& e) {
      CHECK(e.status() == FieldIoStatus::truncated_payload);
    }
  }
  SUBCASE("NaN payload") {
    std::string bad = good;
    const double nanv = std::nan("");
    std::memcpy(bad.data() + 29 + 8 * 5, &nanv, 8);
    spit(path, bad);
    try {
      read_field(path.string());
      FAIL("expected FieldIoError");
    } catch (const FieldIoError& e) {
      CHECK(e.status() == FieldIoStatus::nan_payload);
    }
  }
  SUBCASE("bad header") {
    std::string bad = good;
    bad[8] = 7;  // d = 7
    spit(path, bad);
    try {
      read_field(path.string());
      FAIL("expected FieldIoError");
    } catch (const FieldIoError& e) {
      CHECK(e.status() == FieldIoStatus::bad_header);
    }
  }
  SUBCASE("missing file") {
    try {
      read_field("/nonexistent/dir/nothing.chfd");
      FAIL("expected FieldIoError");
    } catch (const FieldIoError& e) {
      CHECK(e.status() == FieldIoStatus::io_failure);
    }
  }
  std::filesystem::remove(path);
}

#include "chl/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

namespace chl {

const char* to_string(FieldIoStatus s) {
  switch (s) {
    case FieldIoStatus::ok: return "ok";
    case FieldIoStatus::not_a_field_file: return "not a field file";
    case FieldIoStatus::unsupported_version: return "unsupported version";
    case FieldIoStatus::bad_header: return "bad header";
    case FieldIoStatus::truncated_payload: return "truncated payload";
    case FieldIoStatus::nan_payload: return "NaN payload";
    case FieldIoStatus::io_failure: return "I/O failure";
  }
  return "?";
}

namespace {

constexpr char kMagic[4] = {'C', 'H', 'F', 'D'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::string& out, double d) {
  std::uint64_t v;
  std::memcpy(&v, &d, 8);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  double d;
  std::memcpy(&d, &v, 8);
  return d;
}

}  // namespace

void write_field(const Field& f, const std::string& path) {
  std::string out;
  out.reserve(29 + 8 * f.size());
  out.append(kMagic, 4);
  put_u32(out, kVersion);
  out.push_back(static_cast<char>(f.params.d));
  put_u32(out, static_cast<std::uint32_t>(f.n));
  put_f64(out, f.params.phi);
  put_f64(out, f.params.xi);
  for (const double v : f.values) put_f64(out, v);
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw FieldIoError(FieldIoStatus::io_failure, "cannot open for writing: " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw FieldIoError(FieldIoStatus::io_failure, "write failed: " + path);
}

Field read_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FieldIoError(FieldIoStatus::io_failure, "cannot open: " + path);
  std::vector<unsigned char> raw((std::istreambuf_iterator<char>(is)),
                                 std::istreambuf_iterator<char>());
  if (raw.size() < 4 || std::memcmp(raw.data(), kMagic, 4) != 0)
    throw FieldIoError(FieldIoStatus::not_a_field_file, "bad magic: " + path);
  if (raw.size() < 29)
    throw FieldIoError(FieldIoStatus::truncated_payload, "truncated header: " + path);
  const std::uint32_t version = get_u32(raw.data() + 4);
  if (version != kVersion)
    throw FieldIoError(FieldIoStatus::unsupported_version,
                       "unsupported version " + std::to_string(version));
  const int d = raw[8];
  const int n = static_cast<int>(get_u32(raw.data() + 9));
  const double phi = get_f64(raw.data() + 13);
  const double xi = get_f64(raw.data() + 21);

  ModelParams p{d, xi, phi};
  try {
    p.validate();
    validate_grid(n);
  } catch (const std::invalid_argument& e) {
    throw FieldIoError(FieldIoStatus::bad_header, std::string(e.what()) + ": " + path);
  }
  Field f(p, n);
  const std::size_t need = 29 + 8 * f.size();
  if (raw.size() < need)
    throw FieldIoError(FieldIoStatus::truncated_payload, "truncated payload: " + path);
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double v = get_f64(raw.data() + 29 + 8 * i);
    if (std::isnan(v))
      throw FieldIoError(FieldIoStatus::nan_payload, "NaN value in payload: " + path);
    f.values[i] = v;
  }
  return f;
}

}  // namespace chl

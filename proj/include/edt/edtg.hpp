#pragma once

#include <zlib.h>

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "edt/types.hpp"

namespace edt {

/// EDTG: bit-exact binary grid container.
///
/// Layout (all integers little-endian):
///   magic   "EDTG" (4 bytes)
///   version u32 = 1
///   kind    u8   (0 plane, 1 mode grid, 2 k-grid, 3 volume, 4 occupancy)
///   dtype   u8   (0 float64, 1 complex128 interleaved)
///   rank    u8
///   dims    u32[rank]
///   spacing f64[rank]
///   origin  f64[rank]
///   mlen    u32, followed by mlen bytes of UTF-8 JSON metadata
///   payload row-major array, dims product x component multiplicity
///   crc32   u32 of the payload bytes
///
/// The metadata JSON carries everything that is not geometry: physical
/// parameters, masks, component counts.
enum class EdtgKind : std::uint8_t {
  Plane = 0,
  ModeGrid = 1,
  KGrid = 2,
  Volume = 3,
  Occupancy = 4,
};

enum class EdtgDtype : std::uint8_t { Float64 = 0, Complex128 = 1 };

struct EdtgFile {
  EdtgKind kind = EdtgKind::Plane;
  EdtgDtype dtype = EdtgDtype::Float64;
  std::vector<std::uint32_t> dims;
  std::vector<double> spacing;
  std::vector<double> origin;
  nlohmann::json metadata;
  std::vector<double> real_payload;  // dtype Float64
  std::vector<cplx> cplx_payload;    // dtype Complex128

  std::size_t grid_points() const {
    std::size_t p = 1;
    for (auto d : dims) p *= d;
    return p;
  }
  std::size_t multiplicity() const {
    return metadata.value("components", 1u);
  }
};

namespace detail {

template <typename T>
void put(std::string& out, const T& v) {
  static_assert(std::is_trivially_copyable_v<T>);
  const char* p = reinterpret_cast<const char*>(&v);
  out.append(p, sizeof(T));
}

template <typename T>
T take(const std::string& in, std::size_t& off) {
  if (off + sizeof(T) > in.size())
    throw std::runtime_error("edtg: truncated file");
  T v;
  std::memcpy(&v, in.data() + off, sizeof(T));
  off += sizeof(T);
  return v;
}

}  // namespace detail

inline std::string edtg_serialize(const EdtgFile& f) {
  const std::size_t mult = f.multiplicity();
  const std::size_t expect = f.grid_points() * mult;
  if (f.dtype == EdtgDtype::Float64 && f.real_payload.size() != expect)
    throw std::invalid_argument("edtg: payload size mismatch");
  if (f.dtype == EdtgDtype::Complex128 && f.cplx_payload.size() != expect)
    throw std::invalid_argument("edtg: payload size mismatch");
  if (f.dims.size() != f.spacing.size() || f.dims.size() != f.origin.size())
    throw std::invalid_argument("edtg: rank mismatch between dims and axes");
  std::string out;
  out.append("EDTG", 4);
  detail::put<std::uint32_t>(out, 1u);
  detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(f.kind));
  detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(f.dtype));
  detail::put<std::uint8_t>(out, static_cast<std::uint8_t>(f.dims.size()));
  for (auto d : f.dims) detail::put<std::uint32_t>(out, d);
  for (auto s : f.spacing) detail::put<double>(out, s);
  for (auto o : f.origin) detail::put<double>(out, o);
  const std::string meta = f.metadata.dump();
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(meta.size()));
  out += meta;
  const std::size_t payload_off = out.size();
  if (f.dtype == EdtgDtype::Float64) {
    out.append(reinterpret_cast<const char*>(f.real_payload.data()),
               f.real_payload.size() * sizeof(double));
  } else {
    out.append(reinterpret_cast<const char*>(f.cplx_payload.data()),
               f.cplx_payload.size() * sizeof(cplx));
  }
  const auto crc =
      crc32(0L, reinterpret_cast<const Bytef*>(out.data() + payload_off),
            static_cast<uInt>(out.size() - payload_off));
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(crc));
  return out;
}

inline EdtgFile edtg_deserialize(const std::string& in) {
  std::size_t off = 0;
  if (in.size() < 4 || in.compare(0, 4, "EDTG") != 0)
    throw std::runtime_error("edtg: bad magic");
  off = 4;
  const auto version = detail::take<std::uint32_t>(in, off);
  if (version != 1u) throw std::runtime_error("edtg: unsupported version");
  EdtgFile f;
  f.kind = static_cast<EdtgKind>(detail::take<std::uint8_t>(in, off));
  f.dtype = static_cast<EdtgDtype>(detail::take<std::uint8_t>(in, off));
  const auto rank = detail::take<std::uint8_t>(in, off);
  f.dims.resize(rank);
  for (auto& d : f.dims) d = detail::take<std::uint32_t>(in, off);
  f.spacing.resize(rank);
  for (auto& s : f.spacing) s = detail::take<double>(in, off);
  f.origin.resize(rank);
  for (auto& o : f.origin) o = detail::take<double>(in, off);
  const auto mlen = detail::take<std::uint32_t>(in, off);
  if (off + mlen > in.size()) throw std::runtime_error("edtg: truncated file");
  f.metadata = nlohmann::json::parse(in.substr(off, mlen));
  off += mlen;
  const std::size_t expect = f.grid_points() * f.multiplicity();
  const std::size_t bytes =
      expect * (f.dtype == EdtgDtype::Float64 ? sizeof(double) : sizeof(cplx));
  if (off + bytes + 4 != in.size())
    throw std::runtime_error("edtg: payload size mismatch");
  const auto crc_stored = [&] {
    std::size_t o = off + bytes;
    return detail::take<std::uint32_t>(in, o);
  }();
  const auto crc_actual = static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef*>(in.data() + off),
            static_cast<uInt>(bytes)));
  if (crc_stored != crc_actual)
    throw std::runtime_error("edtg: payload checksum mismatch");
  if (f.dtype == EdtgDtype::Float64) {
    f.real_payload.resize(expect);
    std::memcpy(f.real_payload.data(), in.data() + off, bytes);
  } else {
    f.cplx_payload.resize(expect);
    std::memcpy(f.cplx_payload.data(), in.data() + off, bytes);
  }
  return f;
}

/// Atomic write: temp file in the target directory, then rename.
inline void edtg_write(const EdtgFile& f, const std::string& path) {
  const std::string blob = edtg_serialize(f);
  const std::filesystem::path target(path);
  const std::filesystem::path tmp =
      target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("edtg: cannot open " + tmp.string());
    out.write(blob.data(), static_cast<std::streamsize>(blob.size()));
    if (!out) throw std::runtime_error("edtg: write failed for " + path);
  }
  std::filesystem::rename(tmp, target);
}

inline EdtgFile edtg_read(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("edtg: cannot open " + path);
  std::string blob((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return edtg_deserialize(blob);
}

}  // namespace edt

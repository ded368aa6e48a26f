#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "voxplan/io_error.hpp"

namespace voxplan::detail {

inline void store_le16(unsigned char* dst, std::uint16_t v) {
  dst[0] = static_cast<unsigned char>(v & 0xff);
  dst[1] = static_cast<unsigned char>(v >> 8);
}

inline void store_le32(unsigned char* dst, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) dst[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

inline void store_le64(unsigned char* dst, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) dst[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
}

inline std::uint16_t load_le16(const unsigned char* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

inline std::uint32_t load_le32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

inline std::uint64_t load_le64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

template <typename T>
void store_le_elem(unsigned char* dst, T v) {
  if constexpr (sizeof(T) == 4) {
    store_le32(dst, std::bit_cast<std::uint32_t>(v));
  } else {
    store_le64(dst, std::bit_cast<std::uint64_t>(v));
  }
}

template <typename T>
T load_le_elem(const unsigned char* p) {
  if constexpr (sizeof(T) == 4) {
    return std::bit_cast<T>(load_le32(p));
  } else {
    return std::bit_cast<T>(load_le64(p));
  }
}

inline std::vector<unsigned char> read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError(IoError::Code::io_failure, "cannot open " + path);
  f.seekg(0, std::ios::end);
  const std::streamoff size = f.tellg();
  f.seekg(0, std::ios::beg);
  std::vector<unsigned char> data(static_cast<std::size_t>(size));
  if (size > 0 && !f.read(reinterpret_cast<char*>(data.data()), size)) {
    throw IoError(IoError::Code::io_failure, "cannot read " + path);
  }
  return data;
}

inline void write_file(const std::string& path, const std::vector<unsigned char>& data) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError(IoError::Code::io_failure, "cannot open " + path + " for writing");
  if (!data.empty() && !f.write(reinterpret_cast<const char*>(data.data()),
                                static_cast<std::streamsize>(data.size()))) {
    throw IoError(IoError::Code::io_failure, "cannot write " + path);
  }
}

}  // namespace voxplan::detail

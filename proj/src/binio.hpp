/*
 * Copyright 2026 The dbamsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Little-endian scalar I/O shared by the binary file formats.

#include <array>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

#include "dbam/error.hpp"

namespace dbam::binio {

template <typename T>
void put(std::ostream& out, T v) {
  std::array<char, sizeof(T)> buf;
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    buf[i] = static_cast<char>(static_cast<std::uint64_t>(v) >> (8 * i));
  }
  out.write(buf.data(), buf.size());
}

template <typename T>
T get(std::istream& in) {
  std::array<unsigned char, sizeof(T)> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size()))
    fail(ErrorCode::kParse, "unexpected end of binary file");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    v |= static_cast<std::uint64_t>(buf[i]) << (8 * i);
  return static_cast<T>(v);
}

inline void put_magic(std::ostream& out, const char (&magic)[5]) {
  out.write(magic, 4);
}

inline void expect_magic(std::istream& in, const char (&magic)[5]) {
  char buf[4];
  if (!in.read(buf, 4) || std::string(buf, 4) != std::string(magic, 4))
    fail(ErrorCode::kParse,
         std::string("bad magic, expected '") + magic + "'");
}

}  // namespace dbam::binio

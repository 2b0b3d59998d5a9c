// Copyright 2026 The Multimark Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "multimark/key.h"

#include <openssl/rand.h>

#include <cctype>
#include <fstream>
#include <iterator>
#include <sstream>

#include "multimark/error.h"
#include "multimark/prf.h"

namespace multimark {
namespace {

int HexValue(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

bool IsHexText(const std::string& content) {
  bool any = false;
  for (char c : content) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    if (HexValue(c) < 0) return false;
    any = true;
  }
  return any;
}

}  // namespace

WatermarkKey::WatermarkKey(std::vector<std::uint8_t> bytes)
    : bytes_(std::move(bytes)) {
  if (bytes_.size() < kMinBytes) {
    throw ConfigError("watermark key has " + std::to_string(bytes_.size()) +
                      " bytes; at least " + std::to_string(kMinBytes) +
                      " are required");
  }
}

WatermarkKey WatermarkKey::FromHex(std::string_view hex) {
  std::vector<std::uint8_t> bytes;
  int high = -1;
  for (char c : hex) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    const int v = HexValue(c);
    if (v < 0) throw FormatError("invalid hex digit in key");
    if (high < 0) {
      high = v;
    } else {
      bytes.push_back(static_cast<std::uint8_t>((high << 4) | v));
      high = -1;
    }
  }
  if (high >= 0) throw FormatError("odd number of hex digits in key");
  return WatermarkKey(std::move(bytes));
}

WatermarkKey WatermarkKey::FromLabel(std::string_view label, std::size_t size) {
  Sha256Builder b;
  HashDrbg rng(b.Add("key-label").Add(label).Finish());
  std::vector<std::uint8_t> bytes(size);
  for (auto& byte : bytes) byte = static_cast<std::uint8_t>(rng.NextU32());
  return WatermarkKey(std::move(bytes));
}

WatermarkKey WatermarkKey::Random(std::size_t size) {
  std::vector<std::uint8_t> bytes(size);
  if (RAND_bytes(bytes.data(), static_cast<int>(bytes.size())) != 1) {
    throw Error("crypto", "RAND_bytes failed");
  }
  return WatermarkKey(std::move(bytes));
}

WatermarkKey WatermarkKey::LoadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open key file " + path);
  std::string content((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
  if (IsHexText(content)) return FromHex(content);
  return WatermarkKey(std::vector<std::uint8_t>(content.begin(), content.end()));
}

std::string WatermarkKey::ToHex() const { return multimark::ToHex(bytes_); }

std::vector<WatermarkKey> LoadKeySet(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open key set file " + path);
  std::vector<WatermarkKey> keys;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
    keys.push_back(WatermarkKey::FromHex(line));
  }
  if (keys.empty()) throw InputError("key set file " + path + " is empty");
  return keys;
}

}  // namespace multimark

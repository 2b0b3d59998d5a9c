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

#ifndef MULTIMARK_KEY_H_
#define MULTIMARK_KEY_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace multimark {

// Secret watermark key. At least kMinBytes long; immutable once built.
class WatermarkKey {
 public:
  static constexpr std::size_t kMinBytes = 128;

  // Throws ConfigError when `bytes` is shorter than kMinBytes.
  explicit WatermarkKey(std::vector<std::uint8_t> bytes);

  // Parses hex text; whitespace is ignored.
  static WatermarkKey FromHex(std::string_view hex);
  // Deterministic key expanded from a label. Test and demo use only.
  static WatermarkKey FromLabel(std::string_view label,
                                std::size_t size = kMinBytes);
  // Fresh key from the OS entropy source.
  static WatermarkKey Random(std::size_t size = kMinBytes);

  // Accepts hex text or raw binary. Files whose content (ignoring
  // whitespace) is entirely hex digits are read as hex.
  static WatermarkKey LoadFile(const std::string& path);

  std::span<const std::uint8_t> bytes() const { return bytes_; }
  std::size_t size() const { return bytes_.size(); }
  std::string ToHex() const;

  friend bool operator==(const WatermarkKey&, const WatermarkKey&) = default;

 private:
  std::vector<std::uint8_t> bytes_;
};

// One hex key per non-empty line.
std::vector<WatermarkKey> LoadKeySet(const std::string& path);

}  // namespace multimark

#endif  // MULTIMARK_KEY_H_

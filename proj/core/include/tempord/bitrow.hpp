// Copyright 2026 The tempord Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace tempord {

/// Fixed-width bit vector with the word-level operations the relation code
/// needs (union, counting intersections).
class BitRow {
 public:
  BitRow() = default;
  explicit BitRow(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

  std::size_t size() const noexcept { return bits_; }

  bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }
  void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) noexcept { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void clear() noexcept { std::fill(words_.begin(), words_.end(), 0); }

  std::size_t count() const noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }

  bool none() const noexcept {
    for (auto w : words_)
      if (w) return false;
    return true;
  }

  BitRow& operator|=(const BitRow& other) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= other.words_[k];
    return *this;
  }

  BitRow& operator&=(const BitRow& other) noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= other.words_[k];
    return *this;
  }

  /// True if every bit of *this is also set in other.
  bool subset_of(const BitRow& other) const noexcept {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~other.words_[k]) return false;
    return true;
  }

  friend std::size_t count_and(const BitRow& a, const BitRow& b) noexcept {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.words_.size(); ++k)
      c += static_cast<std::size_t>(std::popcount(a.words_[k] & b.words_[k]));
    return c;
  }

  /// Calls f(i) for every set bit, in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      std::uint64_t w = words_[k];
      while (w) {
        const int b = std::countr_zero(w);
        f(k * 64 + static_cast<std::size_t>(b));
        w &= w - 1;
      }
    }
  }

  const std::vector<std::uint64_t>& words() const noexcept { return words_; }
  std::vector<std::uint64_t>& words() noexcept { return words_; }

  friend bool operator==(const BitRow&, const BitRow&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace tempord

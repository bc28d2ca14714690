/* Copyright 2026 The rangelab Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rangelab/common.hpp"

namespace rangelab {

inline constexpr int kMaxDim = 6;

/// Packs a lattice point into 64 bits, floor(64/d) bits per axis.
/// Points outside the representable box raise ResourceError.
class LatticePacker {
 public:
  explicit LatticePacker(int d) : d_(d) {
    if (d < 1 || d > kMaxDim) throw DomainError("lattice dimension must be in [1, 6]");
    bits_ = 64 / d;
    if (bits_ == 64) {
      half_ = 0;  // d = 1 uses the full word via two's-complement offset
    } else {
      half_ = std::uint64_t{1} << (bits_ - 1);
    }
  }

  int dim() const noexcept { return d_; }
  int bits_per_axis() const noexcept { return bits_; }

  /// Largest |coordinate| accepted.
  std::int64_t radius() const noexcept {
    if (bits_ == 64) return std::numeric_limits<std::int64_t>::max() - 1;
    return static_cast<std::int64_t>(half_) - 2;
  }

  std::uint64_t pack(std::span<const std::int64_t> x) const {
    if (bits_ == 64) {
      if (x[0] >= radius() + 1) throw ResourceError("walk left the packed lattice box");
      return static_cast<std::uint64_t>(x[0]) ^ (std::uint64_t{1} << 63);
    }
    std::uint64_t key = 0;
    const std::int64_t r = radius();
    for (int i = 0; i < d_; ++i) {
      if (x[i] > r || x[i] < -r) throw ResourceError("walk left the packed lattice box");
      key = (key << bits_) | static_cast<std::uint64_t>(x[i] + static_cast<std::int64_t>(half_));
    }
    return key;
  }

 private:
  int d_;
  int bits_;
  std::uint64_t half_;
};

/// Open-addressing hash map from packed lattice keys to 32-bit counters.
/// The all-ones key is reserved as the empty marker; the packer never emits it.
class SiteTable {
 public:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  explicit SiteTable(std::size_t expected = 1024) { reset(expected); }

  /// Drops all entries and sizes for `expected` distinct keys.
  void reset(std::size_t expected) {
    std::size_t cap = 16;
    while (cap < 2 * expected + 16) cap <<= 1;
    if (cap != keys_.size()) {
      keys_.assign(cap, kEmpty);
      vals_.assign(cap, 0);
    } else {
      std::fill(keys_.begin(), keys_.end(), kEmpty);
    }
    mask_ = cap - 1;
    size_ = 0;
  }

  std::size_t size() const noexcept { return size_; }

  /// Returns the counter slot for `key`, inserting zero if absent.
  /// `inserted` reports whether the key was new.
  std::uint32_t& upsert(std::uint64_t key, bool& inserted) {
    if (2 * (size_ + 1) > keys_.size()) grow();
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == key) {
        inserted = false;
        return vals_[i];
      }
      if (keys_[i] == kEmpty) {
        keys_[i] = key;
        vals_[i] = 0;
        ++size_;
        inserted = true;
        return vals_[i];
      }
      i = (i + 1) & mask_;
    }
  }

  /// Inserts the key; true when it was not present.
  bool insert(std::uint64_t key) {
    bool inserted = false;
    upsert(key, inserted);
    return inserted;
  }

  /// Adds one to the key's counter.
  void increment(std::uint64_t key) {
    bool inserted = false;
    ++upsert(key, inserted);
  }

  /// Counter for `key`, or zero if absent.
  std::uint32_t find(std::uint64_t key) const noexcept {
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == key) return vals_[i];
      if (keys_[i] == kEmpty) return 0;
      i = (i + 1) & mask_;
    }
  }

  bool contains(std::uint64_t key) const noexcept {
    std::size_t i = slot(key);
    while (true) {
      if (keys_[i] == key) return true;
      if (keys_[i] == kEmpty) return false;
      i = (i + 1) & mask_;
    }
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != kEmpty) f(keys_[i], vals_[i]);
    }
  }

 private:
  std::size_t slot(std::uint64_t key) const noexcept {
    std::uint64_t h = key * 0x9e3779b97f4a7c15ULL;
    h ^= h >> 29;
    h *= 0xbf58476d1ce4e5b9ULL;
    h ^= h >> 32;
    return static_cast<std::size_t>(h) & mask_;
  }

  void grow() {
    std::vector<std::uint64_t> old_keys;
    std::vector<std::uint32_t> old_vals;
    old_keys.swap(keys_);
    old_vals.swap(vals_);
    keys_.assign(old_keys.size() * 2, kEmpty);
    vals_.assign(old_keys.size() * 2, 0);
    mask_ = keys_.size() - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == kEmpty) continue;
      bool inserted = false;
      upsert(old_keys[i], inserted) = old_vals[i];
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<std::uint32_t> vals_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

}  // namespace rangelab

#pragma once

#include <array>
#include <atomic>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <shared_mutex>
#include <vector>

#include "summat/scalar.hpp"

namespace summat {

/// Append-only memo of a sequence x_0, x_1, ... where x_i may depend on x_{i-1}.
///
/// Reads of already computed indices are lock-free; extension happens under a
/// mutex. Elements live in fixed-size chunks and never move, so returned
/// references stay valid for the lifetime of the table.
template <class T>
class MemoTable {
 public:
  /// previous is null for i == 0.
  using Generator = std::function<T(index_t i, const T* previous)>;

  static constexpr index_t kChunkBits = 14;
  static constexpr index_t kChunkSize = index_t{1} << kChunkBits;
  static constexpr index_t kMaxChunks = 4096;

  explicit MemoTable(Generator gen) : gen_(std::move(gen)) {
    for (auto& c : directory_) c.store(nullptr, std::memory_order_relaxed);
  }

  MemoTable(const MemoTable&) = delete;
  MemoTable& operator=(const MemoTable&) = delete;

  const T& operator[](index_t i) const {
    if (i < filled_.load(std::memory_order_acquire)) {
      return slot(i);
    }
    extend_to(i);
    return slot(i);
  }

  static constexpr index_t capacity() { return kChunkSize * kMaxChunks; }

 private:
  const T& slot(index_t i) const {
    T* chunk = directory_[i >> kChunkBits].load(std::memory_order_acquire);
    return chunk[i & (kChunkSize - 1)];
  }

  void extend_to(index_t i) const {
    if (i >= capacity()) {
      throw DimensionError("memo table index beyond capacity");
    }
    std::lock_guard lock(mutex_);
    index_t filled = filled_.load(std::memory_order_relaxed);
    for (index_t j = filled; j <= i; ++j) {
      index_t c = j >> kChunkBits;
      T* chunk = directory_[c].load(std::memory_order_relaxed);
      if (chunk == nullptr) {
        owned_.push_back(std::make_unique<T[]>(kChunkSize));
        chunk = owned_.back().get();
        directory_[c].store(chunk, std::memory_order_release);
      }
      const T* prev = j == 0 ? nullptr : &slot(j - 1);
      chunk[j & (kChunkSize - 1)] = gen_(j, prev);
      filled_.store(j + 1, std::memory_order_release);
    }
  }

  Generator gen_;
  mutable std::mutex mutex_;
  mutable std::atomic<index_t> filled_{0};
  mutable std::array<std::atomic<T*>, kMaxChunks> directory_;
  mutable std::vector<std::unique_ptr<T[]>> owned_;
};

/// Pure cache of computed rows keyed by index; safe for concurrent readers.
template <class Value>
class RowCache {
 public:
  using Ptr = std::shared_ptr<const Value>;

  template <class Compute>
  Ptr get_or_compute(index_t key, Compute&& compute) const {
    {
      std::shared_lock lock(mutex_);
      auto it = rows_.find(key);
      if (it != rows_.end()) return it->second;
    }
    // Computed outside the lock: concurrent duplicates produce identical values.
    Ptr fresh = std::make_shared<const Value>(compute());
    std::unique_lock lock(mutex_);
    auto [it, inserted] = rows_.emplace(key, fresh);
    return it->second;
  }

 private:
  mutable std::shared_mutex mutex_;
  mutable std::map<index_t, Ptr> rows_;
};

}  // namespace summat

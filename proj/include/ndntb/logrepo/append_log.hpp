#pragma once

#include <cstddef>
#include <memory>
#include <vector>

namespace ndntb::logrepo {

/// Immutable prefix of an AppendLog. Stays valid (and unchanged) while the
/// log keeps growing.
template <class T>
class AppendLogView {
 public:
  static constexpr std::size_t kChunk = 4096;

  AppendLogView() = default;
  AppendLogView(std::vector<std::shared_ptr<const std::vector<T>>> chunks, std::size_t size)
      : chunks_(std::move(chunks)), size_(size) {}

  std::size_t size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  const T& operator[](std::size_t i) const { return (*chunks_[i / kChunk])[i % kChunk]; }

  class iterator {
   public:
    using value_type = T;
    using difference_type = std::ptrdiff_t;
    using reference = const T&;
    using pointer = const T*;
    using iterator_category = std::forward_iterator_tag;

    iterator() = default;
    iterator(const AppendLogView* v, std::size_t i) : v_(v), i_(i) {}
    reference operator*() const { return (*v_)[i_]; }
    pointer operator->() const { return &(*v_)[i_]; }
    iterator& operator++() {
      ++i_;
      return *this;
    }
    iterator operator++(int) {
      iterator t = *this;
      ++i_;
      return t;
    }
    friend bool operator==(const iterator& a, const iterator& b) { return a.i_ == b.i_; }

   private:
    const AppendLogView* v_ = nullptr;
    std::size_t i_ = 0;
  };

  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  std::vector<std::shared_ptr<const std::vector<T>>> chunks_;
  std::size_t size_ = 0;
};

/// Append-only sequence stored in fixed-capacity chunks that never
/// reallocate, so published elements never move. Not synchronized: callers
/// serialize `append` and `view` (LogStore does this under its mutex).
template <class T>
class AppendLog {
 public:
  static constexpr std::size_t kChunk = AppendLogView<T>::kChunk;

  const T& append(T value) {
    if (size_ % kChunk == 0) {
      auto chunk = std::make_shared<std::vector<T>>();
      chunk->reserve(kChunk);
      chunks_.push_back(std::move(chunk));
    }
    auto& chunk = *chunks_.back();
    chunk.push_back(std::move(value));
    ++size_;
    return chunk.back();
  }

  std::size_t size() const noexcept { return size_; }
  const T& operator[](std::size_t i) const { return (*chunks_[i / kChunk])[i % kChunk]; }

  AppendLogView<T> view() const {
    return AppendLogView<T>({chunks_.begin(), chunks_.end()}, size_);
  }

 private:
  std::vector<std::shared_ptr<std::vector<T>>> chunks_;
  std::size_t size_ = 0;
};

}  // namespace ndntb::logrepo

#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "irslab/numerics.hpp"

namespace irslab {

// One transition. The composite action is kept in learner form: catalog
// index plus the raw continuous vector.
struct Experience {
  Vec state;
  int option = 0;
  Vec cont;
  double reward = 0.0;
  Vec next_state;
};

// Fixed-capacity ring with FIFO eviction and uniform sampling without
// replacement inside a batch.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity) : capacity_(capacity) {
    if (capacity == 0) throw std::invalid_argument("replay: zero capacity");
  }

  void push(Experience e) {
    if (data_.size() < capacity_) {
      data_.push_back(std::move(e));
    } else {
      data_[head_] = std::move(e);
      head_ = (head_ + 1) % capacity_;
    }
  }

  std::size_t size() const { return data_.size(); }
  std::size_t capacity() const { return capacity_; }
  const Experience& at(std::size_t i) const { return data_.at(i); }

  std::vector<const Experience*> sample(std::size_t n, SeededRng& rng) const {
    if (n > data_.size()) throw std::invalid_argument("replay: batch larger than buffer");
    std::vector<std::size_t> idx(data_.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::vector<const Experience*> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {  // partial Fisher-Yates
      const std::size_t j = i + rng.uniform_int(idx.size() - i);
      std::swap(idx[i], idx[j]);
      out.push_back(&data_[idx[i]]);
    }
    return out;
  }

 private:
  std::size_t capacity_;
  std::size_t head_ = 0;
  std::vector<Experience> data_;
};

}  // namespace irslab

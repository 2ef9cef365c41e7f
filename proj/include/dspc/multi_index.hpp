#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <vector>

namespace dspc {

/// Vector of per-variable degrees (i_1, ..., i_n).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::size_t n_vars) : degrees_(n_vars, 0) {}
  MultiIndex(std::initializer_list<unsigned> degrees) : degrees_(degrees) {}
  explicit MultiIndex(std::vector<unsigned> degrees) : degrees_(std::move(degrees)) {}

  std::size_t size() const noexcept { return degrees_.size(); }
  unsigned operator[](std::size_t d) const { return degrees_[d]; }
  unsigned& operator[](std::size_t d) { return degrees_[d]; }
  auto begin() const noexcept { return degrees_.begin(); }
  auto end() const noexcept { return degrees_.end(); }

  unsigned total_degree() const noexcept;

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;

 private:
  std::vector<unsigned> degrees_;
};

// I <= J componentwise.
bool componentwise_le(const MultiIndex& a, const MultiIndex& b);
MultiIndex componentwise_max(const MultiIndex& a, const MultiIndex& b);

// Total degree first, then lexicographically descending components:
// (0,0) (1,0) (0,1) (2,0) (1,1) (0,2) ...
bool graded_lex_less(const MultiIndex& a, const MultiIndex& b);

std::ostream& operator<<(std::ostream& os, const MultiIndex& index);

// Exact binomial coefficient; throws InvalidArgument on overflow.
std::uint64_t binomial(unsigned n, unsigned k);

/// Row-major layout of a dense tensor with extents degree[d] + 1, used for
/// coefficient arrays indexed by all multi-indices I <= N.
class TensorShape {
 public:
  explicit TensorShape(const MultiIndex& max_degree);

  std::size_t n_vars() const noexcept { return extents_.size(); }
  std::size_t extent(std::size_t d) const { return extents_[d]; }
  std::size_t stride(std::size_t d) const { return strides_[d]; }
  std::size_t size() const noexcept { return size_; }

  std::size_t flat(const MultiIndex& index) const;
  MultiIndex unflat(std::size_t flat) const;

  // Calls fn(offset) for the first element of every 1-D fiber along `d`;
  // the fiber's elements are offset + j * stride(d), j < extent(d).
  template <class Fn>
  void for_each_fiber(std::size_t d, Fn&& fn) const {
    const std::size_t fibers = size_ / extents_[d];
    for (std::size_t f = 0; f < fibers; ++f) {
      // Split f into the part above and below dimension d.
      const std::size_t inner = f % strides_[d];
      const std::size_t outer = f / strides_[d];
      fn(outer * strides_[d] * extents_[d] + inner);
    }
  }

 private:
  std::vector<std::size_t> extents_;
  std::vector<std::size_t> strides_;
  std::size_t size_;
};

}  // namespace dspc

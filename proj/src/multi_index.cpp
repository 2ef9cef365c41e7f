#include "dspc/multi_index.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <string>

#include "dspc/errors.hpp"

namespace dspc {

unsigned MultiIndex::total_degree() const noexcept {
  return std::accumulate(degrees_.begin(), degrees_.end(), 0u);
}

bool componentwise_le(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw InvalidArgument("multi-index dimension mismatch");
  for (std::size_t d = 0; d < a.size(); ++d) {
    if (a[d] > b[d]) return false;
  }
  return true;
}

MultiIndex componentwise_max(const MultiIndex& a, const MultiIndex& b) {
  if (a.size() != b.size()) throw InvalidArgument("multi-index dimension mismatch");
  MultiIndex out(a.size());
  for (std::size_t d = 0; d < a.size(); ++d) out[d] = std::max(a[d], b[d]);
  return out;
}

bool graded_lex_less(const MultiIndex& a, const MultiIndex& b) {
  const unsigned ta = a.total_degree();
  const unsigned tb = b.total_degree();
  if (ta != tb) return ta < tb;
  return std::lexicographical_compare(b.begin(), b.end(), a.begin(), a.end());
}

std::ostream& operator<<(std::ostream& os, const MultiIndex& index) {
  os << '(';
  for (std::size_t d = 0; d < index.size(); ++d) os << (d ? "," : "") << index[d];
  return os << ')';
}

__extension__ using Wide = unsigned __int128;

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  Wide result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    // C(n-k+i, i) = C(n-k+i-1, i-1) * (n-k+i) / i, integral at every step.
    result = result * (n - k + i) / i;
    if (result > UINT64_MAX) {
      throw InvalidArgument("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                            ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

TensorShape::TensorShape(const MultiIndex& max_degree)
    : extents_(max_degree.size()), strides_(max_degree.size()), size_(1) {
  for (std::size_t d = max_degree.size(); d-- > 0;) {
    extents_[d] = max_degree[d] + 1;
    strides_[d] = size_;
    size_ *= extents_[d];
  }
}

std::size_t TensorShape::flat(const MultiIndex& index) const {
  if (index.size() != extents_.size()) throw InvalidArgument("multi-index dimension mismatch");
  std::size_t off = 0;
  for (std::size_t d = 0; d < extents_.size(); ++d) {
    if (index[d] >= extents_[d]) throw InvalidArgument("multi-index exceeds tensor degree");
    off += index[d] * strides_[d];
  }
  return off;
}

MultiIndex TensorShape::unflat(std::size_t flat) const {
  MultiIndex out(extents_.size());
  for (std::size_t d = 0; d < extents_.size(); ++d) {
    out[d] = static_cast<unsigned>(flat / strides_[d]);
    flat %= strides_[d];
  }
  return out;
}

}  // namespace dspc

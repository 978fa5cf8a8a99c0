#include "manycopies/copy_space.hpp"

#include <limits>
#include <string>

#include "manycopies/errors.hpp"

namespace manycopies {

namespace {

constexpr std::size_t kOverflow = std::numeric_limits<std::size_t>::max();

std::size_t saturating_pow(std::size_t base, std::size_t exp) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp; ++i) {
    if (base != 0 && out > kOverflow / base) return kOverflow;
    out *= base;
  }
  return out;
}

}  // namespace

CopySpace::CopySpace(std::size_t n_copies, std::size_t local_dim)
    : n_copies_(n_copies), local_dim_(local_dim) {
  if (n_copies == 0) throw InvalidArgument("copy space needs at least one copy");
  if (local_dim == 0) throw InvalidArgument("copy space local dimension must be positive");
}

std::size_t CopySpace::dimension() const {
  const std::size_t dim = saturating_pow(local_dim_, n_copies_);
  if (dim == kOverflow) throw CapExceeded("copy space dimension", kOverflow, kOverflow);
  return dim;
}

void CopySpace::require_ket_fits(const NumericConfig& config) const {
  const std::size_t dim = saturating_pow(local_dim_, n_copies_);
  if (dim > config.dense_cap) {
    throw CapExceeded(std::to_string(n_copies_) + " copies of a " + std::to_string(local_dim_) +
                          "-level ket",
                      dim, config.dense_cap);
  }
}

void CopySpace::require_operator_fits(const NumericConfig& config) const {
  const std::size_t dim = saturating_pow(local_dim_, n_copies_);
  const std::size_t entries = (dim != 0 && dim > kOverflow / dim) ? kOverflow : dim * dim;
  if (entries > config.dense_cap) {
    throw CapExceeded(std::to_string(n_copies_) + " copies of a " + std::to_string(local_dim_) +
                          "-level operator",
                      entries, config.dense_cap);
  }
}

BasisLabel::BasisLabel(const CopySpace& space, std::vector<std::size_t> symbols)
    : symbols_(std::move(symbols)) {
  if (symbols_.size() != space.n_copies()) {
    throw InvalidArgument("basis label length " + std::to_string(symbols_.size()) +
                          " differs from copy count " + std::to_string(space.n_copies()));
  }
  for (std::size_t s : symbols_) {
    if (s >= space.local_dim()) {
      throw InvalidArgument("basis label symbol " + std::to_string(s) + " not below local dim " +
                            std::to_string(space.local_dim()));
    }
  }
}

BasisLabel BasisLabel::from_index(const CopySpace& space, std::size_t index) {
  if (index >= space.dimension()) throw InvalidArgument("basis index out of range");
  std::vector<std::size_t> symbols(space.n_copies());
  for (std::size_t j = space.n_copies(); j-- > 0;) {
    symbols[j] = index % space.local_dim();
    index /= space.local_dim();
  }
  return BasisLabel(space, std::move(symbols));
}

BasisLabel BasisLabel::uniform(const CopySpace& space, std::size_t m) {
  return BasisLabel(space, std::vector<std::size_t>(space.n_copies(), m));
}

std::size_t BasisLabel::index(const CopySpace& space) const {
  std::size_t idx = 0;
  for (std::size_t s : symbols_) idx = idx * space.local_dim() + s;
  return idx;
}

std::size_t occupation(const BasisLabel& label, std::size_t m) {
  std::size_t count = 0;
  for (std::size_t s : label.symbols()) count += (s == m) ? 1 : 0;
  return count;
}

std::int64_t spin_sum(const BasisLabel& label) {
  std::int64_t k = 0;
  for (std::size_t s : label.symbols()) {
    if (s > 1) throw InvalidArgument("spin_sum is defined for qubit labels only");
    k += (s == 0) ? 1 : -1;
  }
  return k;
}

std::size_t signed_occupation(const BasisLabel& label, std::size_t m) {
  if (m > 1) throw InvalidArgument("signed occupation is defined for qubit pointers 0 (+) and 1 (-)");
  const auto n = static_cast<std::int64_t>(label.size());
  const std::int64_t k = spin_sum(label);
  return static_cast<std::size_t>(m == 0 ? n + k : n - k);
}

std::size_t pointer_index(const CopySpace& space, std::size_t m) {
  if (m >= space.local_dim()) throw InvalidArgument("pointer index out of range");
  std::size_t idx = 0;
  for (std::size_t j = 0; j < space.n_copies(); ++j) idx = idx * space.local_dim() + m;
  return idx;
}

}  // namespace manycopies

#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <vector>

#include "manycopies/config.hpp"

namespace manycopies {

// N copies of a d-level system. Copy 1 is the leftmost (slowest varying)
// tensor factor; copy indices are 1-based throughout the public API.
class CopySpace {
 public:
  CopySpace(std::size_t n_copies, std::size_t local_dim);

  std::size_t n_copies() const noexcept { return n_copies_; }
  std::size_t local_dim() const noexcept { return local_dim_; }

  // d^N; throws CapExceeded if it does not fit in size_t.
  std::size_t dimension() const;

  // Throw CapExceeded unless a ket (amplitudes = d^N) fits the dense cap.
  void require_ket_fits(const NumericConfig& config = default_config()) const;
  // Throw CapExceeded unless a dense operator ((d^N)^2 entries) fits.
  void require_operator_fits(const NumericConfig& config = default_config()) const;

  bool operator==(const CopySpace&) const = default;

 private:
  std::size_t n_copies_;
  std::size_t local_dim_;
};

// Basis label s = (s_1, ..., s_N), s_j in {0, ..., d-1}. For qubits symbol 0
// is the pointer |+> and 1 is |->.
class BasisLabel {
 public:
  BasisLabel(const CopySpace& space, std::vector<std::size_t> symbols);
  BasisLabel(const CopySpace& space, std::initializer_list<std::size_t> symbols)
      : BasisLabel(space, std::vector<std::size_t>(symbols)) {}

  static BasisLabel from_index(const CopySpace& space, std::size_t index);
  // All-m label |m m ... m>.
  static BasisLabel uniform(const CopySpace& space, std::size_t m);

  const std::vector<std::size_t>& symbols() const noexcept { return symbols_; }
  std::size_t size() const noexcept { return symbols_.size(); }
  std::size_t operator[](std::size_t j) const { return symbols_[j]; }

  // index(s) = sum_j s_j d^(N-j), copy 1 most significant.
  std::size_t index(const CopySpace& space) const;

  bool operator==(const BasisLabel&) const = default;

 private:
  std::vector<std::size_t> symbols_;
};

// N_m: number of copies j with s_j = m.
std::size_t occupation(const BasisLabel& label, std::size_t m);

// Qubit spin sum k_s = sum_j s_j with s_j = +1 for symbol 0 and -1 for symbol 1.
std::int64_t spin_sum(const BasisLabel& label);

// Qubit convention N_+- = N +- sum_j s_j; equals twice occupation().
// `m` is 0 for + and 1 for -.
std::size_t signed_occupation(const BasisLabel& label, std::size_t m);

// Flat index of |m m ... m>.
std::size_t pointer_index(const CopySpace& space, std::size_t m);

}  // namespace manycopies

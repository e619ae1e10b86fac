#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "loopalg/errors.hpp"
#include "loopalg/field.hpp"

namespace loopalg {

using Vec = std::vector<Scalar>;

/// Dense row-major matrix over Z/p. Linear maps act on column vectors:
/// a map V -> W has shape dim(W) x dim(V).
class Matrix {
 public:
  Matrix(std::size_t rows, std::size_t cols, Scalar p)
      : rows_(rows), cols_(cols), field_(p), data_(rows * cols, 0) {}

  static Matrix identity(std::size_t n, Scalar p) {
    Matrix m(n, n, p);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1 % p;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  Scalar prime() const { return field_.prime(); }
  const Zp& field() const { return field_; }

  Scalar& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  Scalar at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const Scalar> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  Vec column(std::size_t j) const {
    Vec out(rows_);
    for (std::size_t i = 0; i < rows_; ++i) out[i] = at(i, j);
    return out;
  }

  void set_column(std::size_t j, std::span<const Scalar> v) {
    for (std::size_t i = 0; i < rows_; ++i) at(i, j) = v[i];
  }

  bool is_zero() const {
    for (Scalar x : data_)
      if (x) return false;
    return true;
  }

  Vec apply(std::span<const Scalar> v) const {
    Vec out(rows_, 0);
    for (std::size_t i = 0; i < rows_; ++i) {
      std::uint64_t acc = 0;
      for (std::size_t j = 0; j < cols_; ++j) {
        acc += static_cast<std::uint64_t>(at(i, j)) * v[j];
        if (acc >= (1ULL << 62)) acc %= field_.prime();
      }
      out[i] = static_cast<Scalar>(acc % field_.prime());
    }
    return out;
  }

  Matrix operator*(const Matrix& other) const {
    if (cols_ != other.rows_) throw InvalidInput("matrix shape mismatch in product");
    Matrix out(rows_, other.cols_, field_.prime());
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        Scalar a = at(i, k);
        if (!a) continue;
        for (std::size_t j = 0; j < other.cols_; ++j)
          out.at(i, j) = field_.add(out.at(i, j), field_.mul(a, other.at(k, j)));
      }
    return out;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.prime() == b.prime() && a.data_ == b.data_;
  }

  /// Reduced row echelon form in place; returns the pivot columns.
  std::vector<std::size_t> rref() {
    std::vector<std::size_t> pivots;
    std::size_t lead = 0;
    for (std::size_t c = 0; c < cols_ && lead < rows_; ++c) {
      std::size_t piv = lead;
      while (piv < rows_ && at(piv, c) == 0) ++piv;
      if (piv == rows_) continue;
      if (piv != lead)
        for (std::size_t j = 0; j < cols_; ++j) std::swap(at(piv, j), at(lead, j));
      Scalar inv = field_.inv(at(lead, c));
      for (std::size_t j = 0; j < cols_; ++j) at(lead, j) = field_.mul(at(lead, j), inv);
      for (std::size_t i = 0; i < rows_; ++i) {
        if (i == lead || at(i, c) == 0) continue;
        Scalar f = at(i, c);
        for (std::size_t j = c; j < cols_; ++j)
          at(i, j) = field_.sub(at(i, j), field_.mul(f, at(lead, j)));
      }
      pivots.push_back(c);
      ++lead;
    }
    return pivots;
  }

  std::size_t rank() const {
    Matrix copy = *this;
    return copy.rref().size();
  }

  /// Basis of the null space {x : A x = 0}, one vector per free column.
  std::vector<Vec> kernel() const {
    Matrix r = *this;
    auto pivots = r.rref();
    std::vector<bool> is_pivot(cols_, false);
    for (auto c : pivots) is_pivot[c] = true;
    std::vector<Vec> out;
    for (std::size_t free = 0; free < cols_; ++free) {
      if (is_pivot[free]) continue;
      Vec v(cols_, 0);
      v[free] = 1 % field_.prime();
      for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field_.neg(r.at(i, free));
      out.push_back(std::move(v));
    }
    return out;
  }

 private:
  std::size_t rows_;
  std::size_t cols_;
  Zp field_;
  std::vector<Scalar> data_;
};

/// A subspace of (Z/p)^N held as a reduced echelon basis. Insertion order
/// does not affect the stored basis.
class Subspace {
 public:
  Subspace(std::size_t ambient, Scalar p) : ambient_(ambient), field_(p) {}

  std::size_t ambient() const { return ambient_; }
  std::size_t dim() const { return rows_.size(); }
  const std::vector<Vec>& basis() const { return rows_; }
  Scalar prime() const { return field_.prime(); }

  /// v minus its projection along the echelon basis; zero iff v lies in the span.
  Vec reduce(Vec v) const {
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      Scalar c = v[pivots_[i]];
      if (!c) continue;
      for (std::size_t j = 0; j < ambient_; ++j)
        v[j] = field_.sub(v[j], field_.mul(c, rows_[i][j]));
    }
    return v;
  }

  bool contains(const Vec& v) const { return is_zero(reduce(v)); }

  /// Inserts v; returns false if it was already in the span.
  bool insert(Vec v) {
    v = reduce(std::move(v));
    std::size_t lead = 0;
    while (lead < ambient_ && v[lead] == 0) ++lead;
    if (lead == ambient_) return false;
    Scalar inv = field_.inv(v[lead]);
    for (auto& x : v) x = field_.mul(x, inv);
    for (auto& row : rows_) {
      Scalar c = row[lead];
      if (!c) continue;
      for (std::size_t j = 0; j < ambient_; ++j) row[j] = field_.sub(row[j], field_.mul(c, v[j]));
    }
    // keep rows sorted by pivot
    std::size_t pos = 0;
    while (pos < pivots_.size() && pivots_[pos] < lead) ++pos;
    rows_.insert(rows_.begin() + static_cast<long>(pos), std::move(v));
    pivots_.insert(pivots_.begin() + static_cast<long>(pos), lead);
    return true;
  }

  bool contains_all(const Subspace& other) const {
    for (const auto& v : other.rows_)
      if (!contains(v)) return false;
    return true;
  }

  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.ambient_ == b.ambient_ && a.rows_ == b.rows_;
  }

  static bool is_zero(const Vec& v) {
    for (Scalar x : v)
      if (x) return false;
    return true;
  }

 private:
  std::size_t ambient_;
  Zp field_;
  std::vector<Vec> rows_;
  std::vector<std::size_t> pivots_;
};

/// Result of ker(d_out)/im(d_in).
struct HomologyResult {
  std::size_t dimension = 0;
  std::vector<Vec> representatives;
};

/// Homology at the middle term of C' --d_in--> C --d_out--> C''.
/// Representatives are the kernel basis vectors (in null-space order) that are
/// independent modulo the image, which makes the output deterministic.
inline HomologyResult fp_homology(const Matrix& d_in, const Matrix& d_out) {
  if (d_in.rows() != d_out.cols())
    throw InvalidInput("fp_homology: d_in has " + std::to_string(d_in.rows()) +
                       " rows but d_out has " + std::to_string(d_out.cols()) + " columns");
  const Scalar p = d_in.prime();
  if (!(d_out * d_in).is_zero()) throw InvariantViolation("fp_homology: d_out * d_in != 0");

  Subspace span(d_in.rows(), p);
  for (std::size_t j = 0; j < d_in.cols(); ++j) span.insert(d_in.column(j));

  HomologyResult out;
  for (auto& z : d_out.kernel()) {
    if (span.insert(z)) {
      out.representatives.push_back(std::move(z));
      ++out.dimension;
    }
  }
  return out;
}

}  // namespace loopalg

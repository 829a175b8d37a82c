#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "qenv/error.hpp"
#include "qenv/linalg.hpp"
#include "text_util.hpp"

namespace qenv {

SparseIntMatrix::SparseIntMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows) {}

SparseIntMatrix SparseIntMatrix::identity(std::size_t n) {
  SparseIntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.data_[i].push_back({std::uint32_t(i), 1});
  return m;
}

SparseIntMatrix SparseIntMatrix::from_dense(const std::vector<std::vector<long>>& dense) {
  const std::size_t cols = dense.empty() ? 0 : dense.front().size();
  SparseIntMatrix m(dense.size(), cols);
  for (std::size_t r = 0; r < dense.size(); ++r) {
    if (dense[r].size() != cols) throw std::invalid_argument("ragged dense matrix");
    for (std::size_t c = 0; c < cols; ++c)
      if (dense[r][c]) m.data_[r].push_back({std::uint32_t(c), Integer(dense[r][c])});
  }
  return m;
}

std::size_t SparseIntMatrix::nnz() const {
  std::size_t n = 0;
  for (const auto& r : data_) n += r.size();
  return n;
}

Integer SparseIntMatrix::get(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  const auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  return (it != row.end() && it->col == c) ? it->value : Integer(0);
}

void SparseIntMatrix::set(std::size_t r, std::size_t c, const Integer& v) {
  if (r >= rows_ || c >= cols_) throw std::out_of_range("matrix index out of range");
  auto& row = data_[r];
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const Entry& e, std::size_t col) { return e.col < col; });
  if (it != row.end() && it->col == c) {
    if (v == 0) row.erase(it);
    else it->value = v;
  } else if (v != 0) {
    row.insert(it, Entry{std::uint32_t(c), v});
  }
}

void SparseIntMatrix::add(std::size_t r, std::size_t c, const Integer& v) {
  set(r, c, get(r, c) + v);
}

SparseIntMatrix::Row SparseIntMatrix::normalize(Row entries, std::size_t cols) {
  std::stable_sort(entries.begin(), entries.end(),
                   [](const Entry& a, const Entry& b) { return a.col < b.col; });
  Row out;
  out.reserve(entries.size());
  for (auto& e : entries) {
    if (e.col >= cols) throw std::out_of_range("matrix column out of range");
    if (!out.empty() && out.back().col == e.col) out.back().value += e.value;
    else out.push_back(std::move(e));
    if (out.back().value == 0) out.pop_back();
  }
  return out;
}

void SparseIntMatrix::set_row(std::size_t r, Row entries) {
  if (r >= rows_) throw std::out_of_range("matrix row out of range");
  data_[r] = normalize(std::move(entries), cols_);
}

std::size_t SparseIntMatrix::append_row(Row entries) {
  data_.push_back(normalize(std::move(entries), cols_));
  return rows_++;
}

SparseIntMatrix SparseIntMatrix::transpose() const {
  SparseIntMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& e : data_[r]) t.data_[e.col].push_back({std::uint32_t(r), e.value});
  return t;
}

SparseIntMatrix SparseIntMatrix::operator*(const SparseIntMatrix& rhs) const {
  if (cols_ != rhs.rows_) throw std::invalid_argument("matrix dimensions do not match");
  SparseIntMatrix out(rows_, rhs.cols_);
  std::vector<Integer> acc(rhs.cols_);
  std::vector<std::uint8_t> touched(rhs.cols_);
  std::vector<std::uint32_t> cols;
  for (std::size_t r = 0; r < rows_; ++r) {
    cols.clear();
    for (const auto& a : data_[r])
      for (const auto& b : rhs.data_[a.col]) {
        if (!touched[b.col]) {
          touched[b.col] = 1;
          cols.push_back(b.col);
        }
        acc[b.col] += a.value * b.value;
      }
    std::sort(cols.begin(), cols.end());
    for (auto c : cols) {
      if (acc[c] != 0) out.data_[r].push_back({c, acc[c]});
      acc[c] = 0;
      touched[c] = 0;
    }
  }
  return out;
}

bool SparseIntMatrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Row& r) { return r.empty(); });
}

std::vector<std::vector<Integer>> SparseIntMatrix::to_dense() const {
  std::vector<std::vector<Integer>> d(rows_, std::vector<Integer>(cols_));
  for (std::size_t r = 0; r < rows_; ++r)
    for (const auto& e : data_[r]) d[r][e.col] = e.value;
  return d;
}

std::string write_matrix(const SparseIntMatrix& m) {
  std::ostringstream out;
  out << m.rows() << ' ' << m.cols() << ' ' << m.nnz() << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (const auto& e : m.row(r)) out << r + 1 << ' ' << e.col + 1 << ' ' << e.value.get_str() << '\n';
  return out.str();
}

SparseIntMatrix read_matrix(std::string_view text) {
  detail::TokenReader in(text, "matrix");
  const std::size_t rows = in.next_size("row count");
  const std::size_t cols = in.next_size("column count");
  const std::size_t nnz = in.next_size("entry count");
  SparseIntMatrix m(rows, cols);
  std::vector<SparseIntMatrix::Row> data(rows);
  for (std::size_t k = 0; k < nnz; ++k) {
    const std::size_t r = in.next_size("row index");
    const std::size_t c = in.next_size("column index");
    const auto tok = in.next_token("value");
    Integer v;
    if (v.set_str(std::string(tok), 10) != 0) throw ParseError("matrix: bad value '" + std::string(tok) + "'");
    if (r < 1 || r > rows || c < 1 || c > cols)
      throw ParseError("matrix: entry (" + std::to_string(r) + "," + std::to_string(c) + ") out of range");
    data[r - 1].push_back({std::uint32_t(c - 1), v});
  }
  in.expect_end();
  for (std::size_t r = 0; r < rows; ++r) m.set_row(r, std::move(data[r]));
  return m;
}

}  // namespace qenv

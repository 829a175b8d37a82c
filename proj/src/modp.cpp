#include <algorithm>
#include <stdexcept>
#include <string>

#include "qenv/linalg.hpp"

namespace qenv {

namespace {

std::uint32_t mod_inverse(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is prime.
  std::uint64_t result = 1, base = a % p;
  for (std::uint64_t e = p - 2; e; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return std::uint32_t(result);
}

void require_prime(std::uint64_t p) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
}

}  // namespace

bool is_prime(std::uint64_t p) {
  if (p < 2) return false;
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

ModpEchelon::ModpEchelon(std::size_t cols, std::uint32_t p, Pivot rule)
    : cols_(cols), p_(p), rule_(rule), pivot_row_(cols, -1), col_rows_(cols), col_count_(cols) {
  require_prime(p);
  if (std::uint64_t(p) >= (std::uint64_t(1) << 32)) throw std::invalid_argument("prime too large");
}

void ModpEchelon::reduce(Row& row) const {
  // Pivot rows only touch free columns besides their own pivot, so one pass
  // over the original support clears every pivot column.
  if (acc_.size() != cols_) acc_.assign(cols_, 0);
  support_.clear();
  for (auto [c, v] : row) {
    acc_[c] = v;
    support_.push_back(c);
  }
  for (auto [c, v] : row) {
    const auto pr = pivot_row_[c];
    if (pr < 0) continue;
    const std::uint64_t a = acc_[c];
    if (!a) continue;
    for (auto [c2, v2] : rows_[pr]) {
      if (acc_[c2] == 0 && c2 != c) support_.push_back(c2);
      acc_[c2] = (acc_[c2] + (p_ - a) * v2) % p_;
    }
  }
  std::sort(support_.begin(), support_.end());
  support_.erase(std::unique(support_.begin(), support_.end()), support_.end());
  row.clear();
  for (auto c : support_) {
    if (acc_[c]) row.emplace_back(c, std::uint32_t(acc_[c]));
    acc_[c] = 0;
  }
}

bool ModpEchelon::add_row(const Row& input) {
  Row row;
  row.reserve(input.size());
  {
    Row sorted = input;
    std::sort(sorted.begin(), sorted.end());
    for (auto [c, v] : sorted) {
      if (c >= cols_) throw std::out_of_range("column out of range");
      const std::uint32_t r = v % p_;
      if (!row.empty() && row.back().first == c) row.back().second = (row.back().second + r) % p_;
      else row.emplace_back(c, r);
      if (row.back().second == 0) row.pop_back();
    }
  }
  reduce(row);
  if (row.empty()) return false;

  std::size_t pick = 0;
  switch (rule_) {
    case Pivot::lowest: pick = 0; break;
    case Pivot::highest: pick = row.size() - 1; break;
    case Pivot::sparsest:
      for (std::size_t i = 1; i < row.size(); ++i)
        if (col_count_[row[i].first] < col_count_[row[pick].first]) pick = i;
      break;
  }
  const std::uint32_t pc = row[pick].first;
  const std::uint64_t scale = mod_inverse(row[pick].second, p_);
  for (auto& e : row) e.second = std::uint32_t(e.second * scale % p_);

  const auto id = std::uint32_t(rows_.size());
  // Clear the new pivot column from every stored row.
  Row merged;
  for (auto rid : col_rows_[pc]) {
    Row& target = rows_[rid];
    auto it = std::lower_bound(target.begin(), target.end(), std::make_pair(pc, 0u),
                               [](const auto& a, const auto& b) { return a.first < b.first; });
    if (it == target.end() || it->first != pc) continue;
    const std::uint64_t a = it->second;
    merged.clear();
    std::size_t i = 0, j = 0;
    while (i < target.size() || j < row.size()) {
      if (j == row.size() || (i < target.size() && target[i].first < row[j].first)) {
        merged.push_back(target[i++]);
      } else if (i == target.size() || row[j].first < target[i].first) {
        const auto c = row[j].first;
        merged.emplace_back(c, std::uint32_t((p_ - a) * row[j].second % p_));
        ++col_count_[c];
        col_rows_[c].push_back(rid);
        ++j;
      } else {
        const auto c = row[j].first;
        const auto v = std::uint32_t((target[i].second + (p_ - a) * row[j].second) % p_);
        if (v) merged.emplace_back(c, v);
        else --col_count_[c];
        ++i;
        ++j;
      }
    }
    target.swap(merged);
  }
  col_rows_[pc].clear();
  for (auto [c, v] : row) {
    ++col_count_[c];
    col_rows_[c].push_back(id);
  }
  rows_.push_back(std::move(row));
  pivot_row_[pc] = id;
  pivots_.push_back(pc);
  return true;
}

bool ModpEchelon::add_dense_row(const std::vector<std::uint32_t>& dense) {
  Row row;
  for (std::uint32_t c = 0; c < dense.size(); ++c)
    if (dense[c] % p_) row.emplace_back(c, dense[c] % p_);
  return add_row(row);
}

std::vector<std::uint32_t> ModpEchelon::free_columns() const {
  std::vector<std::uint32_t> f;
  for (std::uint32_t c = 0; c < cols_; ++c)
    if (pivot_row_[c] < 0) f.push_back(c);
  return f;
}

const ModpEchelon::Row& ModpEchelon::pivot_row(std::uint32_t col) const {
  if (col >= cols_ || pivot_row_[col] < 0) throw std::out_of_range("not a pivot column");
  return rows_[pivot_row_[col]];
}

std::vector<std::vector<std::uint32_t>> ModpEchelon::nullspace() const {
  const auto free = free_columns();
  std::vector<std::vector<std::uint32_t>> basis;
  basis.reserve(free.size());
  for (auto f : free) {
    std::vector<std::uint32_t> x(cols_, 0);
    x[f] = 1;
    for (auto pc : pivots_)
      for (auto [c, v] : rows_[pivot_row_[pc]])
        if (c == f) x[pc] = (p_ - v) % p_;
    basis.push_back(std::move(x));
  }
  return basis;
}

namespace {

ModpEchelon::Row reduce_row(const SparseIntMatrix::Row& row, std::uint32_t p) {
  ModpEchelon::Row out;
  out.reserve(row.size());
  for (const auto& e : row) {
    const auto r = mpz_fdiv_ui(e.value.get_mpz_t(), p);
    if (r) out.emplace_back(e.col, std::uint32_t(r));
  }
  return out;
}

}  // namespace

std::size_t rank_mod_p(const SparseIntMatrix& m, std::uint32_t p) {
  ModpEchelon ech(m.cols(), p, ModpEchelon::Pivot::sparsest);
  for (std::size_t r = 0; r < m.rows() && ech.rank() < m.cols(); ++r) ech.add_row(reduce_row(m.row(r), p));
  return ech.rank();
}

std::vector<std::vector<std::uint32_t>> nullspace_mod_p(const SparseIntMatrix& m, std::uint32_t p) {
  ModpEchelon ech(m.cols(), p, ModpEchelon::Pivot::lowest);
  for (std::size_t r = 0; r < m.rows(); ++r) ech.add_row(reduce_row(m.row(r), p));
  return ech.nullspace();
}

}  // namespace qenv

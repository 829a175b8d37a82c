// Smith normal form of sparse integer matrices.
//
// Rows are streamed into a lattice echelon with two kinds of stored rows:
//   * unit pivot rows: +1 at the pivot column, zero at every other pivot
//     column (fully reduced), so column operations turn each into a unit
//     vector without touching anything else;
//   * residual rows: no pivot-column entries and no unit entries at all,
//     kept in Hermite order by distinct leading column.
// Pivots are chosen among the unit entries of a reduced row by the fewest
// column occurrences (Markowitz count), ties to the lowest column. What is
// left after streaming is a small dense block on the non-pivot columns,
// which goes through the classic dense algorithm.

#include <algorithm>
#include <deque>
#include <map>
#include <stdexcept>
#include <string>

#include "qenv/error.hpp"
#include "qenv/linalg.hpp"

namespace qenv {

namespace {

using Entry = SparseIntMatrix::Entry;
using ZRow = SparseIntMatrix::Row;
using Dense = std::vector<std::vector<Integer>>;

// r += k * s over sorted sparse rows.
void axpy(ZRow& r, const Integer& k, const ZRow& s) {
  if (k == 0 || s.empty()) return;
  ZRow out;
  out.reserve(r.size() + s.size());
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    if (j == s.size() || (i < r.size() && r[i].col < s[j].col)) {
      out.push_back(std::move(r[i++]));
    } else if (i == r.size() || s[j].col < r[i].col) {
      out.push_back({s[j].col, k * s[j].value});
      ++j;
    } else {
      Integer v = r[i].value + k * s[j].value;
      if (v != 0) out.push_back({r[i].col, std::move(v)});
      ++i;
      ++j;
    }
  }
  r.swap(out);
}

// r = a*r + b*s
ZRow combine(const Integer& a, const ZRow& r, const Integer& b, const ZRow& s) {
  ZRow out;
  std::size_t i = 0, j = 0;
  while (i < r.size() || j < s.size()) {
    Integer v;
    std::uint32_t c;
    if (j == s.size() || (i < r.size() && r[i].col < s[j].col)) {
      c = r[i].col;
      v = a * r[i++].value;
    } else if (i == r.size() || s[j].col < r[i].col) {
      c = s[j].col;
      v = b * s[j++].value;
    } else {
      c = r[i].col;
      v = a * r[i++].value + b * s[j++].value;
    }
    if (v != 0) out.push_back({c, std::move(v)});
  }
  return out;
}

void negate(ZRow& r) {
  for (auto& e : r) e.value = -e.value;
}

bool is_unit(const Integer& v) { return v == 1 || v == -1; }

class LatticeEchelon {
 public:
  LatticeEchelon(std::size_t cols, bool track, const SnfLimits& limits)
      : cols_(cols), track_(track), limits_(limits), pivot_of_(cols, -1), col_rows_(cols), col_count_(cols),
        acc_(cols), touched_(cols) {}

  void insert(ZRow row, ZRow combo) {
    work_.push_back({std::move(row), std::move(combo)});
    while (!work_.empty()) {
      Item item = std::move(work_.front());
      work_.pop_front();
      process(std::move(item));
    }
    if ((++inserted_ & 1023) == 0) check_deadline();
  }

  struct Stored {
    ZRow row;
    ZRow combo;
    bool alive = true;
    bool pivot = false;
  };

  std::size_t cols_;
  bool track_;
  const SnfLimits& limits_;
  std::vector<Stored> stored_;
  std::vector<std::int64_t> pivot_of_;        // column -> stored id
  std::vector<std::uint32_t> pivot_order_;    // pivot columns in creation order
  std::map<std::uint32_t, std::uint32_t> residual_;  // leading column -> stored id
  std::vector<ZRow> kernel_;
  std::size_t kernel_count_ = 0;

 private:
  struct Item {
    ZRow row;
    ZRow combo;
  };

  void check_deadline() const {
    if (limits_.deadline && std::chrono::steady_clock::now() > *limits_.deadline)
      throw ResourceError("Smith normal form: time budget exceeded");
  }

  void check_size(const ZRow& r) {
    for (const auto& e : r)
      if (mpz_sizeinbase(e.value.get_mpz_t(), 2) > limits_.max_entry_bits)
        throw ResourceError("Smith normal form: entry exceeds " + std::to_string(limits_.max_entry_bits) + " bits");
  }

  void account_add(std::uint32_t id) {
    for (const auto& e : stored_[id].row) {
      ++col_count_[e.col];
      col_rows_[e.col].push_back(id);
    }
    total_entries_ += stored_[id].row.size();
    if (total_entries_ > limits_.max_stored_entries)
      throw ResourceError("Smith normal form: stored entries exceed " + std::to_string(limits_.max_stored_entries));
  }

  void account_remove(std::uint32_t id) {
    for (const auto& e : stored_[id].row) --col_count_[e.col];
    total_entries_ -= stored_[id].row.size();
  }

  std::uint32_t store(Item&& item) {
    const auto id = std::uint32_t(stored_.size());
    stored_.push_back({std::move(item.row), std::move(item.combo), true});
    account_add(id);
    return id;
  }

  // Clears every pivot column from the row in one pass (pivot rows only
  // carry their own pivot besides non-pivot columns).
  void reduce_by_pivots(Item& item) {
    bool any = false;
    for (const auto& e : item.row)
      if (pivot_of_[e.col] >= 0) {
        any = true;
        break;
      }
    if (!any) return;
    touched_list_.clear();
    for (auto& e : item.row) {
      acc_[e.col] = e.value;
      touched_[e.col] = 1;
      touched_list_.push_back(e.col);
    }
    for (const auto& e : item.row) {
      const auto pid = pivot_of_[e.col];
      if (pid < 0) continue;
      const Integer k = -acc_[e.col];
      if (k == 0) continue;
      for (const auto& s : stored_[pid].row) {
        if (!touched_[s.col]) {
          touched_[s.col] = 1;
          touched_list_.push_back(s.col);
        }
        acc_[s.col] += k * s.value;
      }
      if (track_) axpy(item.combo, k, stored_[pid].combo);
    }
    std::sort(touched_list_.begin(), touched_list_.end());
    ZRow out;
    for (auto c : touched_list_) {
      if (acc_[c] != 0) out.push_back({c, acc_[c]});
      acc_[c] = 0;
      touched_[c] = 0;
    }
    item.row.swap(out);
    check_size(item.row);
  }

  void process(Item item) {
    for (;;) {
      reduce_by_pivots(item);
      if (item.row.empty()) {
        ++kernel_count_;
        if (track_) kernel_.push_back(std::move(item.combo));
        return;
      }
      if (std::any_of(item.row.begin(), item.row.end(), [](const Entry& e) { return is_unit(e.value); })) {
        make_pivot(std::move(item));
        return;
      }
      if (item.row.front().value < 0) {
        negate(item.row);
        if (track_) negate(item.combo);
      }
      const std::uint32_t lead = item.row.front().col;
      auto it = residual_.find(lead);
      if (it == residual_.end()) {
        residual_.emplace(lead, store(std::move(item)));
        return;
      }
      const std::uint32_t eid = it->second;
      Stored& e = stored_[eid];
      const Integer a = e.row.front().value;
      const Integer b = item.row.front().value;
      if (mpz_divisible_p(b.get_mpz_t(), a.get_mpz_t())) {
        const Integer q = -(b / a);
        axpy(item.row, q, e.row);
        if (track_) axpy(item.combo, q, e.combo);
        check_size(item.row);
        continue;
      }
      Integer g, s, t;
      mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
      const Integer bg = b / g, ag = -(a / g);
      // [s t; b/g -a/g] has determinant -1.
      ZRow new_e = combine(s, e.row, t, item.row);
      ZRow new_item = combine(bg, e.row, ag, item.row);
      ZRow new_e_combo, new_item_combo;
      if (track_) {
        new_e_combo = combine(s, e.combo, t, item.combo);
        new_item_combo = combine(bg, e.combo, ag, item.combo);
      }
      check_size(new_e);
      check_size(new_item);
      account_remove(eid);
      const bool unit = std::any_of(new_e.begin(), new_e.end(), [](const Entry& x) { return is_unit(x.value); });
      if (unit) {
        e.alive = false;
        residual_.erase(it);
        work_.push_back({std::move(new_e), std::move(new_e_combo)});
      } else {
        e.row = std::move(new_e);
        e.combo = std::move(new_e_combo);
        account_add(eid);
      }
      item.row = std::move(new_item);
      item.combo = std::move(new_item_combo);
    }
  }

  void make_pivot(Item item) {
    std::size_t pick = item.row.size();
    for (std::size_t i = 0; i < item.row.size(); ++i) {
      if (!is_unit(item.row[i].value)) continue;
      if (pick == item.row.size() || col_count_[item.row[i].col] < col_count_[item.row[pick].col]) pick = i;
    }
    const std::uint32_t pc = item.row[pick].col;
    if (item.row[pick].value < 0) {
      negate(item.row);
      if (track_) negate(item.combo);
    }
    const auto id = store(std::move(item));
    stored_[id].pivot = true;
    const ZRow& prow = stored_[id].row;

    std::vector<std::uint32_t> targets = std::move(col_rows_[pc]);
    col_rows_[pc].clear();
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (auto rid : targets) {
      if (rid == id) continue;
      Stored& t = stored_[rid];
      if (!t.alive) continue;
      auto pos = std::lower_bound(t.row.begin(), t.row.end(), pc,
                                  [](const Entry& x, std::uint32_t c) { return x.col < c; });
      if (pos == t.row.end() || pos->col != pc) continue;
      const Integer k = -pos->value;
      const std::uint32_t old_lead = t.row.front().col;
      account_remove(rid);
      axpy(t.row, k, prow);
      if (track_) axpy(t.combo, k, stored_[id].combo);
      check_size(t.row);
      if (t.pivot) {
        account_add(rid);
        continue;
      }
      // A residual row changed: take it out and feed it back in.
      residual_.erase(old_lead);
      t.alive = false;
      work_.push_back({std::move(t.row), std::move(t.combo)});
    }
    col_rows_[pc].push_back(id);
    pivot_of_[pc] = id;
    pivot_order_.push_back(pc);
  }

  std::deque<Item> work_;
  std::vector<std::vector<std::uint32_t>> col_rows_;
  std::vector<std::uint32_t> col_count_;
  std::vector<Integer> acc_;
  std::vector<std::uint8_t> touched_;
  std::vector<std::uint32_t> touched_list_;
  std::size_t total_entries_ = 0;
  std::size_t inserted_ = 0;
};

void check_entry(const Integer& v, const SnfLimits& limits) {
  if (mpz_sizeinbase(v.get_mpz_t(), 2) > limits.max_entry_bits)
    throw ResourceError("Smith normal form: entry exceeds " + std::to_string(limits.max_entry_bits) + " bits");
}

Dense identity(std::size_t n) {
  Dense d(n, std::vector<Integer>(n));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 1;
  return d;
}

}  // namespace

std::vector<Integer> SmithResult::torsion() const {
  std::vector<Integer> t;
  for (const auto& d : invariant_factors)
    if (d > 1) t.push_back(d);
  return t;
}

std::vector<Integer> dense_smith(Dense& a, std::size_t n, Dense* u, Dense* v, const SnfLimits& limits) {
  const std::size_t m = a.size();
  if (u) *u = identity(m);
  if (v) *v = identity(n);

  auto row_axpy = [&](std::size_t dst, const Integer& k, std::size_t src) {  // row dst += k row src
    for (std::size_t j = 0; j < n; ++j)
      if (a[src][j] != 0) {
        a[dst][j] += k * a[src][j];
        check_entry(a[dst][j], limits);
      }
    if (u)
      for (std::size_t j = 0; j < m; ++j)
        if ((*u)[src][j] != 0) (*u)[dst][j] += k * (*u)[src][j];
  };
  auto col_axpy = [&](std::size_t dst, const Integer& k, std::size_t src) {  // col dst += k col src
    for (std::size_t i = 0; i < m; ++i)
      if (a[i][src] != 0) {
        a[i][dst] += k * a[i][src];
        check_entry(a[i][dst], limits);
      }
    if (v)
      for (std::size_t i = 0; i < n; ++i)
        if ((*v)[i][src] != 0) (*v)[i][dst] += k * (*v)[i][src];
  };
  auto swap_rows = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    std::swap(a[x], a[y]);
    if (u) std::swap((*u)[x], (*u)[y]);
  };
  auto swap_cols = [&](std::size_t x, std::size_t y) {
    if (x == y) return;
    for (auto& r : a) std::swap(r[x], r[y]);
    if (v)
      for (auto& r : *v) std::swap(r[x], r[y]);
  };

  std::vector<Integer> diag;
  for (std::size_t t = 0; t < std::min(m, n); ++t) {
    std::size_t bi = m, bj = n;
    for (std::size_t i = t; i < m; ++i)
      for (std::size_t j = t; j < n; ++j)
        if (a[i][j] != 0 && (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) {
          bi = i;
          bj = j;
        }
    if (bi == m) break;
    swap_rows(t, bi);
    swap_cols(t, bj);
    for (;;) {
      bool clean = true;
      for (std::size_t i = t + 1; i < m; ++i)
        if (a[i][t] != 0) {
          const Integer q = a[i][t] / a[t][t];
          if (q != 0) row_axpy(i, -q, t);
          if (a[i][t] != 0) clean = false;
        }
      if (!clean) {
        std::size_t best = t;
        for (std::size_t i = t + 1; i < m; ++i)
          if (a[i][t] != 0 && abs(a[i][t]) < abs(a[best][t])) best = i;
        swap_rows(t, best);
        continue;
      }
      for (std::size_t j = t + 1; j < n; ++j)
        if (a[t][j] != 0) {
          const Integer q = a[t][j] / a[t][t];
          if (q != 0) col_axpy(j, -q, t);
          if (a[t][j] != 0) clean = false;
        }
      if (!clean) {
        std::size_t best = t;
        for (std::size_t j = t + 1; j < n; ++j)
          if (a[t][j] != 0 && abs(a[t][j]) < abs(a[t][best])) best = j;
        swap_cols(t, best);
        continue;
      }
      std::size_t bad = m;
      for (std::size_t i = t + 1; i < m && bad == m; ++i)
        for (std::size_t j = t + 1; j < n; ++j)
          if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_axpy(t, 1, bad);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      if (u)
        for (auto& x : (*u)[t]) x = -x;
    }
    diag.push_back(a[t][t]);
  }
  return diag;
}

SmithResult smith_normal_form(const SparseIntMatrix& m, bool want_transforms, const SnfLimits& limits) {
  return smith_normal_form(m, want_transforms ? Transforms::both : Transforms::none, limits);
}

SmithResult smith_normal_form(const SparseIntMatrix& m, Transforms transforms, const SnfLimits& limits) {
  SmithResult result;
  for (auto p : limits.prepass_primes) result.modular_ranks.emplace_back(p, rank_mod_p(m, p));

  const bool track = transforms == Transforms::both;
  LatticeEchelon ech(m.cols(), track, limits);

  // Shortest rows first; stable, so ties keep input order.
  std::vector<std::uint32_t> order(m.rows());
  for (std::uint32_t r = 0; r < m.rows(); ++r) order[r] = r;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint32_t x, std::uint32_t y) { return m.row(x).size() < m.row(y).size(); });
  for (auto r : order) {
    ZRow combo;
    if (track) combo.push_back({r, 1});
    ech.insert(m.row(r), std::move(combo));
  }

  // Non-pivot columns and the residual block on them.
  std::vector<std::uint32_t> nonpivot;
  std::vector<std::int64_t> np_index(m.cols(), -1);
  for (std::uint32_t c = 0; c < m.cols(); ++c)
    if (ech.pivot_of_[c] < 0) {
      np_index[c] = std::int64_t(nonpivot.size());
      nonpivot.push_back(c);
    }
  std::vector<std::uint32_t> residual_ids;
  for (const auto& [lead, id] : ech.residual_) residual_ids.push_back(id);

  Dense block(residual_ids.size(), std::vector<Integer>(nonpivot.size()));
  for (std::size_t i = 0; i < residual_ids.size(); ++i)
    for (const auto& e : ech.stored_[residual_ids[i]].row) block[i][np_index[e.col]] = e.value;
  Dense u_res, v_res;
  const auto block_diag = dense_smith(block, nonpivot.size(), track ? &u_res : nullptr,
                                      transforms != Transforms::none ? &v_res : nullptr, limits);

  const std::size_t npiv = ech.pivot_order_.size();
  result.invariant_factors.assign(npiv, Integer(1));
  result.invariant_factors.insert(result.invariant_factors.end(), block_diag.begin(), block_diag.end());
  result.rank = result.invariant_factors.size();
  result.nullity = m.cols() - result.rank;

  for (const auto& [p, r] : result.modular_ranks)
    if (r > result.rank)
      throw std::logic_error("Smith normal form: rank " + std::to_string(result.rank) + " below rank mod " +
                             std::to_string(p) + " = " + std::to_string(r));

  if (transforms == Transforms::none) return result;

  // V = (I - N) * diag(I, V_res) * P, where N holds the non-pivot entries of
  // the pivot rows and P puts pivot columns first.
  const std::size_t cols = m.cols();
  std::vector<std::vector<std::pair<std::uint32_t, Integer>>> pivot_hits(nonpivot.size());
  for (auto pc : ech.pivot_order_)
    for (const auto& e : ech.stored_[ech.pivot_of_[pc]].row)
      if (e.col != pc) pivot_hits[np_index[e.col]].emplace_back(pc, e.value);

  std::vector<ZRow> vrows(cols);
  for (std::size_t t = 0; t < npiv; ++t) vrows[ech.pivot_order_[t]].push_back({std::uint32_t(t), 1});
  for (std::size_t b = 0; b < nonpivot.size(); ++b) {
    const auto out_col = std::uint32_t(npiv + b);
    for (std::size_t a = 0; a < nonpivot.size(); ++a) {
      const Integer& k = v_res[a][b];
      if (k == 0) continue;
      vrows[nonpivot[a]].push_back({out_col, k});
      for (const auto& [pc, val] : pivot_hits[a]) vrows[pc].push_back({out_col, -k * val});
    }
  }
  SparseIntMatrix V(cols, cols);
  for (std::size_t r = 0; r < cols; ++r) V.set_row(r, std::move(vrows[r]));
  result.V = std::move(V);

  if (!track) return result;

  SparseIntMatrix U(m.rows(), m.rows());
  std::size_t next = 0;
  for (auto pc : ech.pivot_order_) U.set_row(next++, ech.stored_[ech.pivot_of_[pc]].combo);
  for (std::size_t a = 0; a < residual_ids.size(); ++a) {
    ZRow combo;
    for (std::size_t b = 0; b < residual_ids.size(); ++b)
      if (u_res[a][b] != 0) axpy(combo, u_res[a][b], ech.stored_[residual_ids[b]].combo);
    U.set_row(next++, std::move(combo));
  }
  for (auto& k : ech.kernel_) U.set_row(next++, std::move(k));
  if (next != m.rows()) throw std::logic_error("Smith normal form: row transform is incomplete");
  result.U = std::move(U);
  return result;
}

}  // namespace qenv

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "qenv/error.hpp"
#include "qenv/pquotient.hpp"

namespace qenv {

std::size_t default_collection_steps() {
  if (const char* s = std::getenv("QENV_MAX_STEPS")) {
    char* end = nullptr;
    const auto v = std::strtoull(s, &end, 10);
    if (end != s && *end == '\0' && v > 0) return std::size_t(v);
  }
  return 1'000'000;
}

struct PcGroup::Stack {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> items;  // (gen, count), top = back
  std::size_t steps = 0;
};

PcGroup::PcGroup(std::uint32_t p, std::vector<std::uint32_t> weights)
    : p_(p),
      weights_(std::move(weights)),
      powers_(weights_.size()),
      comms_(weights_.size()),
      noncommuting_(weights_.size()),
      definitions_(weights_.size()),
      max_steps_(default_collection_steps()) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (p > 65535) throw std::invalid_argument("prime too large for the collector");
}

std::uint32_t PcGroup::pclass() const {
  return weights_.empty() ? 0 : *std::max_element(weights_.begin(), weights_.end());
}

Integer PcGroup::order() const {
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p_, rank());
  return r;
}

void PcGroup::check_vector(const ExpVec& v) const {
  if (v.size() != rank()) throw std::invalid_argument("exponent vector has wrong length");
  for (auto x : v)
    if (x >= p_) throw std::invalid_argument("exponent out of range");
}

PcGroup::Sparse PcGroup::to_sparse(const ExpVec& tail) const {
  check_vector(tail);
  Sparse s;
  for (std::uint32_t g = 0; g < tail.size(); ++g)
    if (tail[g]) s.emplace_back(g, tail[g]);
  return s;
}

void PcGroup::set_power(std::size_t i, const ExpVec& tail) {
  if (i >= rank()) throw std::out_of_range("generator out of range");
  // Not required to involve later generators only: hand-built inconsistent
  // presentations are legal input and show up as non-terminating collections.
  powers_[i] = to_sparse(tail);
}

void PcGroup::set_commutator(std::size_t j, std::size_t i, const ExpVec& tail) {
  if (j >= rank() || i >= j) throw std::out_of_range("commutator needs j > i");
  auto s = to_sparse(tail);
  auto& row = comms_[j];
  if (row.empty()) {
    if (s.empty()) return;
    row.resize(j);
  }
  row[i] = std::move(s);
  auto& nc = noncommuting_[i];
  auto it = std::lower_bound(nc.begin(), nc.end(), std::uint32_t(j));
  const bool present = it != nc.end() && *it == j;
  if (row[i].empty() && present) nc.erase(it);
  if (!row[i].empty() && !present) nc.insert(it, std::uint32_t(j));
}

const PcGroup::Sparse& PcGroup::comm(std::uint32_t j, std::uint32_t i) const {
  static const Sparse none;
  const auto& row = comms_[j];
  return row.empty() ? none : row[i];
}

ExpVec PcGroup::power_relation(std::size_t i) const {
  ExpVec v = identity();
  for (auto [g, x] : powers_.at(i)) v[g] = x;
  return v;
}

ExpVec PcGroup::commutator_relation(std::size_t j, std::size_t i) const {
  if (j >= rank() || i >= j) throw std::out_of_range("commutator needs j > i");
  ExpVec v = identity();
  for (auto [g, x] : comm(std::uint32_t(j), std::uint32_t(i))) v[g] = x;
  return v;
}

void PcGroup::set_definition(std::size_t i, std::optional<PcDefinition> d) { definitions_.at(i) = d; }

ExpVec PcGroup::generator(std::size_t i) const {
  ExpVec v = identity();
  v.at(i) = 1;
  return v;
}

bool PcGroup::is_identity(const ExpVec& v) const {
  return std::all_of(v.begin(), v.end(), [](auto x) { return x == 0; });
}

// Multiplies the normal form e on the right by a_g. With s the part of e
// after a_g, (prefix a_g^x s) a_g = prefix a_g^(x+1) s^(a_g), and conjugating
// by a_g only changes letters a_j with [a_j, a_g] != 1. Letters before the
// first such nonzero a_j stay in place unless a_g^(x+1) overflows.
void PcGroup::step(ExpVec& e, std::uint32_t g, Stack& st) const {
  if (++st.steps > max_steps_)
    throw ResourceError("collection exceeded " + std::to_string(max_steps_) + " steps");
  const std::size_t k = rank();
  std::size_t j0 = k;
  for (auto j : noncommuting_[g])
    if (e[j]) {
      j0 = j;
      break;
    }
  const bool overflow = e[g] + 1 == p_;
  if (!overflow) {
    ++e[g];
    if (j0 == k) return;
  } else {
    e[g] = 0;
    if (j0 == k && powers_[g].empty()) return;
    j0 = g + 1;
  }
  // Push in reverse processing order: power tail first, then s^(a_g) left to right.
  const auto base = st.items.size();
  if (overflow) st.items.insert(st.items.end(), powers_[g].begin(), powers_[g].end());
  for (std::size_t j = j0; j < k; ++j) {
    const std::uint32_t x = e[j];
    if (!x) continue;
    e[j] = 0;
    const Sparse& c = comm(std::uint32_t(j), g);
    if (c.empty()) {
      st.items.emplace_back(std::uint32_t(j), x);
    } else {
      for (std::uint32_t r = 0; r < x; ++r) {
        st.items.emplace_back(std::uint32_t(j), 1);
        st.items.insert(st.items.end(), c.begin(), c.end());
      }
    }
  }
  std::reverse(st.items.begin() + std::ptrdiff_t(base), st.items.end());
}

void PcGroup::run(ExpVec& e, Stack& st) const {
  while (!st.items.empty()) {
    auto [g, x] = st.items.back();
    st.items.pop_back();
    if (x == 0) continue;
    if (x > 1) st.items.emplace_back(g, x - 1);
    step(e, g, st);
  }
}

ExpVec PcGroup::multiply(const ExpVec& u, const ExpVec& v) const {
  check_vector(u);
  check_vector(v);
  ExpVec e = u;
  Stack st;
  for (std::size_t g = rank(); g-- > 0;)
    if (v[g]) st.items.emplace_back(std::uint32_t(g), v[g]);
  run(e, st);
  return e;
}

ExpVec PcGroup::inverse(const ExpVec& u) const {
  check_vector(u);
  // Kill the leading exponent of u times the accumulated word until nothing is left.
  ExpVec w = u;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> letters;
  Stack st;
  for (std::size_t i = 0; i < rank(); ++i) {
    if (!w[i]) continue;
    const std::uint32_t x = p_ - w[i];
    letters.emplace_back(std::uint32_t(i), x);
    st.items.emplace_back(std::uint32_t(i), x);
    run(w, st);
  }
  ExpVec inv = identity();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) st.items.push_back(*it);
  run(inv, st);
  return inv;
}

ExpVec PcGroup::power(const ExpVec& u, std::uint64_t n) const {
  ExpVec result = identity(), base = u;
  for (; n; n >>= 1) {
    if (n & 1) result = multiply(result, base);
    if (n > 1) base = multiply(base, base);
  }
  return result;
}

ExpVec PcGroup::commutator(const ExpVec& u, const ExpVec& v) const {
  return multiply(multiply(inverse(u), inverse(v)), multiply(u, v));
}

ExpVec PcGroup::collect(const PcWord& w) const {
  ExpVec e = identity();
  for (const auto& l : w) {
    if (l.gen >= rank()) throw std::out_of_range("generator out of range");
    if (l.exp == 0) continue;
    const std::uint64_t n = std::uint64_t(l.exp < 0 ? -l.exp : l.exp);
    ExpVec g = generator(l.gen);
    if (l.exp < 0) g = inverse(g);
    e = multiply(e, power(g, n));
  }
  return e;
}

namespace {

std::string describe(const ExpVec& v) {
  std::ostringstream out;
  bool any = false;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (v[i]) {
      out << (any ? " " : "") << 'a' << i + 1;
      if (v[i] > 1) out << '^' << v[i];
      any = true;
    }
  return any ? out.str() : "id";
}

}  // namespace

std::vector<ConsistencyViolation> consistency_violations(const PcGroup& g) {
  std::vector<ConsistencyViolation> out;
  const auto k = g.rank();
  const auto p = g.prime();
  auto a = [&](std::size_t i) { return g.generator(i); };
  auto name = [](std::size_t i) { return "a" + std::to_string(i + 1); };
  auto check = [&](const std::string& word, auto&& left, auto&& right) {
    try {
      const ExpVec l = left(), r = right();
      if (l != r) out.push_back({word, describe(l) + " vs " + describe(r)});
    } catch (const ResourceError& e) {
      out.push_back({word, e.what()});
    }
  };
  for (std::size_t kk = 0; kk < k; ++kk)
    for (std::size_t j = 0; j < kk; ++j)
      for (std::size_t i = 0; i < j; ++i)
        check("(" + name(kk) + " " + name(j) + ") " + name(i),
              [&] { return g.multiply(g.multiply(a(kk), a(j)), a(i)); },
              [&] { return g.multiply(a(kk), g.multiply(a(j), a(i))); });
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      check("(" + name(j) + "^" + std::to_string(p) + ") " + name(i),
            [&] { return g.multiply(g.power_relation(j), a(i)); },
            [&] { return g.multiply(g.power(a(j), p - 1), g.multiply(a(j), a(i))); });
      check(name(j) + " (" + name(i) + "^" + std::to_string(p) + ")",
            [&] { return g.multiply(a(j), g.power_relation(i)); },
            [&] { return g.multiply(g.multiply(a(j), a(i)), g.power(a(i), p - 1)); });
    }
  for (std::size_t i = 0; i < k; ++i)
    check(name(i) + " (" + name(i) + "^" + std::to_string(p) + ")",
          [&] { return g.multiply(a(i), g.power_relation(i)); },
          [&] { return g.multiply(g.power_relation(i), a(i)); });
  return out;
}

Integer pc_subgroup_order(const PcGroup& g, const std::vector<ExpVec>& seeds, bool normal_closure) {
  const auto k = g.rank();
  const auto p = g.prime();
  // basis[i]: element with leading generator a_i at exponent 1.
  std::vector<std::optional<ExpVec>> basis(k);
  std::vector<ExpVec> queue(seeds.rbegin(), seeds.rend());
  std::size_t size = 0;
  while (!queue.empty()) {
    ExpVec u = std::move(queue.back());
    queue.pop_back();
    std::size_t i = 0;
    for (;;) {
      while (i < k && u[i] == 0) ++i;
      if (i == k || !basis[i]) break;
      u = g.multiply(u, g.power(*basis[i], p - u[i]));
    }
    if (i == k) continue;
    // Leading exponent x: u^(x^-1 mod p) has leading exponent 1.
    std::uint64_t inv = 1;
    while (inv * u[i] % p != 1) ++inv;
    u = g.power(u, inv);
    queue.push_back(g.power(u, p));
    for (std::size_t j = 0; j < k; ++j)
      if (basis[j]) queue.push_back(g.commutator(u, *basis[j]));
    if (normal_closure)
      for (std::size_t j = 0; j < k; ++j) queue.push_back(g.commutator(u, g.generator(j)));
    basis[i] = std::move(u);
    ++size;
  }
  Integer r;
  mpz_ui_pow_ui(r.get_mpz_t(), p, size);
  return r;
}

Integer pc_derived_order(const PcGroup& g) {
  std::vector<ExpVec> seeds;
  for (std::size_t j = 0; j < g.rank(); ++j)
    for (std::size_t i = 0; i < j; ++i) {
      auto c = g.commutator_relation(j, i);
      if (!g.is_identity(c)) seeds.push_back(std::move(c));
    }
  return pc_subgroup_order(g, seeds, true);
}

ExpVec evaluate(const PcGroup& g, const Epimorphism& f, const Word& w) {
  ExpVec e = g.identity();
  for (const auto& l : w) {
    const ExpVec& img = f.images.at(l.gen);
    e = g.multiply(e, l.exp > 0 ? img : g.inverse(img));
  }
  return e;
}

std::string write_pc_presentation(const PcGroup& g) {
  std::ostringstream out;
  const auto k = g.rank();
  out << g.prime() << ' ' << k << '\n';
  out << "weights";
  for (auto w : g.weights()) out << ' ' << w;
  out << '\n';
  for (std::size_t i = 0; i < k; ++i) {
    const auto& d = g.definition(i);
    if (!d) continue;
    out << "def " << i + 1 << " = ";
    switch (d->kind) {
      case PcDefinition::Kind::image: out << "x" << d->a + 1; break;
      case PcDefinition::Kind::power: out << d->a + 1 << '^' << g.prime(); break;
      case PcDefinition::Kind::commutator: out << '[' << d->a + 1 << ',' << d->b + 1 << ']'; break;
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < k; ++i) out << i + 1 << '^' << g.prime() << " = " << describe(g.power_relation(i)) << '\n';
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      auto c = g.commutator_relation(j, i);
      if (!g.is_identity(c)) out << '[' << j + 1 << ',' << i + 1 << "] = " << describe(c) << '\n';
    }
  return out.str();
}

}  // namespace qenv

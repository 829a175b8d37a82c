#include <map>
#include <stdexcept>

#include "qenv/error.hpp"
#include "qenv/pquotient.hpp"

namespace qenv {

namespace {

using Kind = PcDefinition::Kind;

struct Layer {
  PcGroup group;
  std::vector<ExpVec> images;
};

ExpVec extend(const ExpVec& v, std::size_t size) {
  ExpVec out = v;
  out.resize(size, 0);
  return out;
}

// One lift: p-cover of the current quotient relative to the source
// generators, cut down by the consistency tests and the source relators.
// Every relation that is not a definition gets a central tail of order p;
// tails that survive the linear algebra become the next layer.
std::optional<Layer> lift(const Layer& cur, const Presentation& pres, std::uint32_t weight,
                          const PQuotientOptions& options) {
  const PcGroup& g = cur.group;
  const std::uint32_t p = g.prime();
  const std::size_t k = g.rank();
  const std::size_t m = pres.generator_count();

  std::vector<bool> power_defines(k, false), image_defines(m, false);
  std::map<std::pair<std::uint32_t, std::uint32_t>, bool> comm_defines;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& d = g.definition(i);
    if (!d) continue;
    switch (d->kind) {
      case Kind::image: image_defines[d->a] = true; break;
      case Kind::power: power_defines[d->a] = true; break;
      case Kind::commutator: comm_defines[{d->a, d->b}] = true; break;
    }
  }

  // Tail slots: powers, then commutators, then source generator images. The
  // pivot rule keeps the leftmost columns free, so new generators prefer
  // power and commutator definitions.
  std::vector<PcDefinition> slots;
  std::vector<std::int64_t> power_slot(k, -1), image_slot(m, -1);
  std::vector<std::vector<std::int64_t>> comm_slot(k);
  for (std::uint32_t i = 0; i < k; ++i)
    if (!power_defines[i]) {
      power_slot[i] = std::int64_t(slots.size());
      slots.push_back({Kind::power, i, 0});
    }
  for (std::uint32_t j = 0; j < k; ++j) {
    comm_slot[j].assign(j, -1);
    for (std::uint32_t i = 0; i < j; ++i)
      if (!comm_defines.count({j, i})) {
        comm_slot[j][i] = std::int64_t(slots.size());
        slots.push_back({Kind::commutator, j, i});
      }
  }
  for (std::uint32_t x = 0; x < m; ++x)
    if (!image_defines[x]) {
      image_slot[x] = std::int64_t(slots.size());
      slots.push_back({Kind::image, x, 0});
    }
  const std::size_t t = slots.size();

  std::vector<std::uint32_t> ext_weights = g.weights();
  ext_weights.resize(k + t, weight);
  PcGroup ext(p, ext_weights);
  ext.set_max_steps(options.max_steps);
  auto with_tail = [&](const ExpVec& v, std::int64_t slot) {
    ExpVec out = extend(v, k + t);
    if (slot >= 0) out[k + std::size_t(slot)] = 1;
    return out;
  };
  for (std::size_t i = 0; i < k; ++i) ext.set_power(i, with_tail(g.power_relation(i), power_slot[i]));
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const auto c = with_tail(g.commutator_relation(j, i), comm_slot[j][i]);
      if (!ext.is_identity(c)) ext.set_commutator(j, i, c);
    }

  ModpEchelon ech(t, p, ModpEchelon::Pivot::highest);
  auto add_relation = [&](const ExpVec& left, const ExpVec& right) {
    for (std::size_t i = 0; i < k; ++i)
      if (left[i] != right[i]) throw std::logic_error("p-quotient: lower layers are inconsistent");
    ModpEchelon::Row row;
    for (std::size_t s = 0; s < t; ++s) {
      const std::uint32_t d = (left[k + s] + p - right[k + s]) % p;
      if (d) row.emplace_back(std::uint32_t(s), d);
    }
    if (!row.empty()) ech.add_row(row);
  };

  auto a = [&](std::size_t i) { return ext.generator(i); };
  for (std::size_t kk = 0; kk < k && ech.rank() < t; ++kk)
    for (std::size_t j = 0; j < kk; ++j)
      for (std::size_t i = 0; i < j; ++i)
        add_relation(ext.multiply(ext.multiply(a(kk), a(j)), a(i)), ext.multiply(a(kk), ext.multiply(a(j), a(i))));
  for (std::size_t j = 0; j < k && ech.rank() < t; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      add_relation(ext.multiply(ext.power_relation(j), a(i)),
                   ext.multiply(ext.power(a(j), p - 1), ext.multiply(a(j), a(i))));
      add_relation(ext.multiply(a(j), ext.power_relation(i)),
                   ext.multiply(ext.multiply(a(j), a(i)), ext.power(a(i), p - 1)));
    }
  for (std::size_t i = 0; i < k && ech.rank() < t; ++i)
    add_relation(ext.multiply(a(i), ext.power_relation(i)), ext.multiply(ext.power_relation(i), a(i)));

  Epimorphism ext_f;
  ext_f.images.resize(m);
  for (std::size_t x = 0; x < m; ++x) ext_f.images[x] = with_tail(cur.images[x], image_slot[x]);
  {
    std::vector<ExpVec> inv_images(m);
    for (std::size_t x = 0; x < m; ++x) inv_images[x] = ext.inverse(ext_f.images[x]);
    const ExpVec id = ext.identity();
    for (const auto& r : pres.relators()) {
      if (ech.rank() == t) break;
      ExpVec e = id;
      for (const auto& l : r) e = ext.multiply(e, l.exp > 0 ? ext_f.images[l.gen] : inv_images[l.gen]);
      add_relation(e, id);
    }
  }

  const auto free = ech.free_columns();
  if (free.empty()) return std::nullopt;
  const std::size_t k2 = k + free.size();
  if (k2 > options.max_generators)
    throw ResourceError("p-quotient needs " + std::to_string(k2) + " generators, cap is " +
                        std::to_string(options.max_generators));

  // Each tail as an exponent vector over the new generators.
  std::vector<std::int64_t> new_index(t, -1);
  for (std::size_t f = 0; f < free.size(); ++f) new_index[free[f]] = std::int64_t(k + f);
  std::vector<ExpVec> tail_value(t, ExpVec(k2, 0));
  for (std::size_t s = 0; s < t; ++s) {
    if (new_index[s] >= 0) {
      tail_value[s][std::size_t(new_index[s])] = 1;
      continue;
    }
    for (auto [c, v] : ech.pivot_row(std::uint32_t(s)))
      if (c != s) tail_value[s][std::size_t(new_index[c])] = (p - v) % p;
  }
  auto apply = [&](const ExpVec& v, std::int64_t slot) {
    ExpVec out = extend(v, k2);
    if (slot >= 0)
      for (std::size_t i = k; i < k2; ++i) out[i] = (out[i] + tail_value[std::size_t(slot)][i]) % p;
    return out;
  };

  std::vector<std::uint32_t> weights = g.weights();
  weights.resize(k2, weight);
  Layer next{PcGroup(p, weights), {}};
  PcGroup& h = next.group;
  h.set_max_steps(options.max_steps);
  for (std::size_t i = 0; i < k; ++i) {
    h.set_definition(i, g.definition(i));
    h.set_power(i, apply(g.power_relation(i), power_slot[i]));
  }
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const auto c = apply(g.commutator_relation(j, i), comm_slot[j][i]);
      if (!h.is_identity(c)) h.set_commutator(j, i, c);
    }
  for (std::size_t f = 0; f < free.size(); ++f) h.set_definition(k + f, slots[free[f]]);
  next.images.resize(m);
  for (std::size_t x = 0; x < m; ++x) next.images[x] = apply(cur.images[x], image_slot[x]);
  return next;
}

}  // namespace

PQuotient p_quotient(const Presentation& pres, std::uint32_t p, std::uint32_t maxclass,
                     const PQuotientOptions& options) {
  if (!is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
  if (maxclass < 1) throw std::invalid_argument("maxclass must be at least 1");
  Layer cur{PcGroup(p, {}), std::vector<ExpVec>(pres.generator_count())};
  cur.group.set_max_steps(options.max_steps);
  for (std::uint32_t c = 1; c <= maxclass; ++c) {
    auto next = lift(cur, pres, c, options);
    if (!next) break;
    cur = std::move(*next);
  }
  return {std::move(cur.group), Epimorphism{std::move(cur.images)}};
}

}  // namespace qenv

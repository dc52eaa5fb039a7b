#include "riskbn/factor.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "riskbn/error.hpp"
#include "riskbn/network.hpp"

namespace riskbn {

Factor::Factor(std::vector<int> scope, std::vector<std::size_t> cards,
               std::vector<double> table)
    : scope_(std::move(scope)), cards_(std::move(cards)),
      table_(std::move(table)) {
  // keep scope sorted; permute the table when needed
  for (std::size_t i = 1; i < scope_.size(); ++i)
    if (scope_[i - 1] >= scope_[i])
      fail(ErrorCode::invalid_argument, "factor scope must be strictly ascending");
  std::size_t n = 1;
  for (std::size_t c : cards_) n *= c;
  if (n != table_.size())
    fail(ErrorCode::invalid_argument, "factor table size mismatch");
}

Factor Factor::constant(double value) {
  Factor f;
  f.table_ = {value};
  return f;
}

bool Factor::contains(int var) const {
  return std::binary_search(scope_.begin(), scope_.end(), var);
}

Factor Factor::from_axes(std::vector<int> vars, std::vector<std::size_t> cards,
                         std::vector<double> raw) {
  std::vector<std::size_t> perm(vars.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(),
            [&](std::size_t a, std::size_t b) { return vars[a] < vars[b]; });

  Factor f;
  f.scope_.reserve(perm.size());
  f.cards_.reserve(perm.size());
  for (std::size_t k : perm) {
    f.scope_.push_back(vars[k]);
    f.cards_.push_back(cards[k]);
  }
  for (std::size_t i = 1; i < f.scope_.size(); ++i)
    if (f.scope_[i - 1] == f.scope_[i])
      fail(ErrorCode::invalid_argument, "factor axes repeat a variable");
  if (std::is_sorted(vars.begin(), vars.end())) {
    f.table_ = std::move(raw);
    return f;
  }
  std::vector<std::size_t> raw_stride(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;)
    raw_stride[i - 1] = raw_stride[i] * cards[i];
  f.table_.resize(raw.size());
  std::vector<std::size_t> idx(perm.size(), 0);
  for (std::size_t flat = 0; flat < raw.size(); ++flat) {
    std::size_t raw_index = 0;
    for (std::size_t k = 0; k < perm.size(); ++k)
      raw_index += idx[k] * raw_stride[perm[k]];
    f.table_[flat] = raw[raw_index];
    for (std::size_t k = perm.size(); k-- > 0;) {
      if (++idx[k] < f.cards_[k]) break;
      idx[k] = 0;
    }
  }
  return f;
}

Factor Factor::from_cpt(const Network& net, std::size_t node, int id_offset) {
  // Raw axis order is (parents..., node); entries come straight from the
  // CPT (config index = parents mixed-radix, first parent slowest).
  std::vector<int> raw_vars;
  std::vector<std::size_t> raw_cards;
  for (std::size_t p : net.parents(node)) {
    raw_vars.push_back(static_cast<int>(p) + id_offset);
    raw_cards.push_back(net.cardinality(p));
  }
  raw_vars.push_back(static_cast<int>(node) + id_offset);
  raw_cards.push_back(net.cardinality(node));

  const Cpt& cpt = net.cpt(node);
  std::vector<double> raw(cpt.rows * cpt.cols);
  for (std::size_t config = 0; config < cpt.cols; ++config)
    for (std::size_t s = 0; s < cpt.rows; ++s)
      raw[config * cpt.rows + s] = cpt.at(s, config);
  return from_axes(std::move(raw_vars), std::move(raw_cards), std::move(raw));
}

Factor Factor::multiply(const Factor& other) const {
  // merged scope
  Factor out;
  std::vector<std::size_t> map_a, map_b;  // result axis -> operand axis or npos
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  std::size_t ia = 0, ib = 0;
  while (ia < scope_.size() || ib < other.scope_.size()) {
    if (ib == other.scope_.size() ||
        (ia < scope_.size() && scope_[ia] < other.scope_[ib])) {
      out.scope_.push_back(scope_[ia]);
      out.cards_.push_back(cards_[ia]);
      map_a.push_back(ia++);
      map_b.push_back(npos);
    } else if (ia == scope_.size() || other.scope_[ib] < scope_[ia]) {
      out.scope_.push_back(other.scope_[ib]);
      out.cards_.push_back(other.cards_[ib]);
      map_a.push_back(npos);
      map_b.push_back(ib++);
    } else {
      if (cards_[ia] != other.cards_[ib])
        fail(ErrorCode::invalid_argument, "factor cardinality clash");
      out.scope_.push_back(scope_[ia]);
      out.cards_.push_back(cards_[ia]);
      map_a.push_back(ia++);
      map_b.push_back(ib++);
    }
  }
  std::size_t total = 1;
  for (std::size_t c : out.cards_) total *= c;
  out.table_.resize(total);

  std::vector<std::size_t> stride_a(scope_.size(), 1),
      stride_b(other.scope_.size(), 1);
  for (std::size_t i = scope_.size(); i-- > 1;)
    stride_a[i - 1] = stride_a[i] * cards_[i];
  for (std::size_t i = other.scope_.size(); i-- > 1;)
    stride_b[i - 1] = stride_b[i] * other.cards_[i];

  std::vector<std::size_t> idx(out.scope_.size(), 0);
  std::size_t off_a = 0, off_b = 0;
  for (std::size_t flat = 0; flat < total; ++flat) {
    out.table_[flat] = table_[off_a] * other.table_[off_b];
    for (std::size_t k = out.scope_.size(); k-- > 0;) {
      ++idx[k];
      if (map_a[k] != npos) off_a += stride_a[map_a[k]];
      if (map_b[k] != npos) off_b += stride_b[map_b[k]];
      if (idx[k] < out.cards_[k]) break;
      idx[k] = 0;
      if (map_a[k] != npos) off_a -= stride_a[map_a[k]] * out.cards_[k];
      if (map_b[k] != npos) off_b -= stride_b[map_b[k]] * out.cards_[k];
    }
  }
  return out;
}

Factor Factor::marginalize(int var) const {
  auto it = std::lower_bound(scope_.begin(), scope_.end(), var);
  if (it == scope_.end() || *it != var)
    fail(ErrorCode::invalid_argument, "marginalize: variable not in scope");
  std::size_t axis = static_cast<std::size_t>(it - scope_.begin());

  Factor out;
  out.scope_ = scope_;
  out.scope_.erase(out.scope_.begin() + axis);
  out.cards_ = cards_;
  out.cards_.erase(out.cards_.begin() + axis);

  std::size_t inner = 1;
  for (std::size_t i = axis + 1; i < cards_.size(); ++i) inner *= cards_[i];
  std::size_t outer = table_.size() / (inner * cards_[axis]);
  out.table_.assign(table_.size() / cards_[axis], 0.0);
  std::size_t src = 0;
  for (std::size_t o = 0; o < outer; ++o)
    for (std::size_t s = 0; s < cards_[axis]; ++s)
      for (std::size_t i = 0; i < inner; ++i, ++src)
        out.table_[o * inner + i] += table_[src];
  return out;
}

Factor Factor::restrict(int var, std::size_t state) const {
  auto it = std::lower_bound(scope_.begin(), scope_.end(), var);
  if (it == scope_.end() || *it != var)
    fail(ErrorCode::invalid_argument, "restrict: variable not in scope");
  std::size_t axis = static_cast<std::size_t>(it - scope_.begin());

  Factor out;
  out.scope_ = scope_;
  out.scope_.erase(out.scope_.begin() + axis);
  out.cards_ = cards_;
  out.cards_.erase(out.cards_.begin() + axis);

  std::size_t inner = 1;
  for (std::size_t i = axis + 1; i < cards_.size(); ++i) inner *= cards_[i];
  std::size_t outer = table_.size() / (inner * cards_[axis]);
  out.table_.resize(table_.size() / cards_[axis]);
  for (std::size_t o = 0; o < outer; ++o) {
    std::size_t src = (o * cards_[axis] + state) * inner;
    for (std::size_t i = 0; i < inner; ++i)
      out.table_[o * inner + i] = table_[src + i];
  }
  return out;
}

double Factor::sum() const {
  double s = 0.0;
  for (double v : table_) s += v;
  return s;
}

void Factor::normalize() {
  double s = sum();
  if (s <= 0.0)
    fail(ErrorCode::inconsistent_evidence, "factor sums to zero");
  for (double& v : table_) v /= s;
}

Factor eliminate_all_except(std::vector<Factor> factors,
                            const std::vector<int>& keep) {
  std::set<int> keep_set(keep.begin(), keep.end());
  std::set<int> remaining;
  for (const Factor& f : factors)
    for (int v : f.scope())
      if (!keep_set.count(v)) remaining.insert(v);

  while (!remaining.empty()) {
    int best = -1;
    std::size_t best_deg = 0;
    for (int v : remaining) {
      std::set<int> nbrs;
      for (const Factor& f : factors)
        if (f.contains(v))
          for (int u : f.scope())
            if (u != v && remaining.count(u)) nbrs.insert(u);
      std::size_t deg = nbrs.size();
      if (best < 0 || deg < best_deg) {
        best = v;
        best_deg = deg;
      }
    }
    remaining.erase(best);

    Factor prod = Factor::constant(1.0);
    std::vector<Factor> next;
    next.reserve(factors.size());
    for (Factor& f : factors) {
      if (f.contains(best))
        prod = prod.multiply(f);
      else
        next.push_back(std::move(f));
    }
    next.push_back(prod.marginalize(best));
    factors = std::move(next);
  }

  Factor joint = Factor::constant(1.0);
  for (const Factor& f : factors) joint = joint.multiply(f);
  return joint;
}

}  // namespace riskbn

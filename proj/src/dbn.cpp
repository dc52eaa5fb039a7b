#include "riskbn/dbn.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "riskbn/text_util.hpp"

namespace riskbn {

TwoSliceNetwork::TwoSliceNetwork(Network base, Network initial,
                                 std::vector<TemporalArc> arcs,
                                 double step_hours)
    : base_(std::move(base)), initial_(std::move(initial)),
      arcs_(std::move(arcs)), step_hours_(step_hours) {
  if (!(step_hours_ > 0.0))
    fail(ErrorCode::domain_error, "step duration must be positive");
  if (initial_.size() != base_.size())
    fail(ErrorCode::invalid_argument,
         "initial slice and template differ in node count");
  for (std::size_t i = 0; i < base_.size(); ++i) {
    const NodeSpec& s = base_.spec(i);
    std::size_t j = initial_.index_of(s.id);
    if (initial_.spec(j).states != s.states)
      fail(ErrorCode::invalid_argument,
           "initial slice and template disagree on states of '" + s.id + "'");
  }

  arc_of_.assign(base_.size(), -1);
  std::set<std::size_t> sources;
  for (std::size_t a = 0; a < arcs_.size(); ++a) {
    const TemporalArc& arc = arcs_[a];
    std::size_t src = base_.index_of(arc.source);
    std::size_t dst = base_.index_of(arc.target);
    if (arc_of_[dst] != -1)
      fail(ErrorCode::invalid_argument,
           "node '" + arc.target + "' has two temporal arcs");
    arc_of_[dst] = static_cast<int>(a);
    sources.insert(src);

    std::size_t want_cols = base_.cardinality(src);
    for (std::size_t p : base_.parents(dst)) want_cols *= base_.cardinality(p);
    const Cpt& t = arc.transition;
    if (t.rows != base_.cardinality(dst) || t.cols != want_cols ||
        t.values.size() != t.rows * t.cols)
      fail(ErrorCode::cpt_shape_mismatch,
           "transition CPT of '" + arc.target + "' has wrong shape");
    for (std::size_t col = 0; col < t.cols; ++col) {
      double sum = 0.0;
      for (std::size_t r = 0; r < t.rows; ++r) {
        double v = t.at(r, col);
        if (!(v >= 0.0 && v <= 1.0))
          fail(ErrorCode::column_not_normalized,
               "transition CPT of '" + arc.target + "' outside [0,1]");
        sum += v;
      }
      if (std::abs(sum - 1.0) > kNormalizationTolerance)
        fail(ErrorCode::column_not_normalized,
             "transition CPT of '" + arc.target + "' column " +
                 std::to_string(col) + " sums to " + std::to_string(sum));
    }
  }
  interface_.assign(sources.begin(), sources.end());
}

namespace {

std::string slice_id(const std::string& name, std::size_t t) {
  return name + "@" + std::to_string(t);
}

void check_cap(std::size_t steps, std::size_t cap, bool allow) {
  if (steps < 1)
    fail(ErrorCode::invalid_argument, "step count must be >= 1");
  if (steps > cap && !allow)
    fail(ErrorCode::step_cap_exceeded,
         "requested " + std::to_string(steps) + " steps, cap is " +
             std::to_string(cap) + " (pass the override to raise it)");
}

}  // namespace

double annual_to_step(double p_annual, double step_hours) {
  if (!(step_hours > 0.0))
    fail(ErrorCode::domain_error, "step duration must be positive");
  if (!(p_annual >= 0.0) || !(p_annual <= 1.0))
    fail(ErrorCode::domain_error, "annual probability outside [0,1]");
  if (p_annual == 1.0) return 1.0;  // absorbing at every time scale
  return -std::expm1(step_hours / 8760.0 * std::log1p(-p_annual));
}

Network unroll(const TwoSliceNetwork& tsn, std::size_t steps, std::size_t cap,
               bool allow_beyond_cap) {
  check_cap(steps, cap, allow_beyond_cap);
  const Network& base = tsn.base();
  const Network& initial = tsn.initial();

  std::vector<NodeSpec> specs;
  std::vector<Cpt> cpts;
  specs.reserve(base.size() * steps);
  for (std::size_t i = 0; i < initial.size(); ++i) {
    const NodeSpec& s = initial.spec(i);
    NodeSpec out{slice_id(s.id, 0), s.states, {}};
    for (const auto& p : s.parents) out.parents.push_back(slice_id(p, 0));
    specs.push_back(std::move(out));
    cpts.push_back(initial.cpt(i));
  }
  for (std::size_t t = 1; t < steps; ++t) {
    for (std::size_t i = 0; i < base.size(); ++i) {
      const NodeSpec& s = base.spec(i);
      NodeSpec out{slice_id(s.id, t), s.states, {}};
      int a = tsn.arc_for(i);
      if (a >= 0) {
        const TemporalArc& arc = tsn.arcs()[static_cast<std::size_t>(a)];
        out.parents.push_back(slice_id(arc.source, t - 1));
        for (const auto& p : s.parents) out.parents.push_back(slice_id(p, t));
        cpts.push_back(arc.transition);
      } else {
        for (const auto& p : s.parents) out.parents.push_back(slice_id(p, t));
        cpts.push_back(base.cpt(i));
      }
      specs.push_back(std::move(out));
    }
  }
  return build_network(std::move(specs), std::move(cpts),
                       base.name().empty() ? "unrolled"
                                           : base.name() + ".unrolled",
                       {});
}

FilterState::FilterState(const TwoSliceNetwork& tsn,
                         const std::vector<std::string>& monitored)
    : tsn_(&tsn) {
  for (const auto& m : monitored) monitored_.push_back(tsn.base().index_of(m));
  rebuild_slice(true);
}

// Variable ids: previous-slice nodes keep their base index, current-slice
// nodes are shifted by base().size().
void FilterState::rebuild_slice(bool initial) {
  const Network& base = tsn_->base();
  const int offset = static_cast<int>(base.size());
  slice_factors_.clear();
  if (initial) {
    const Network& init = tsn_->initial();
    for (std::size_t i = 0; i < base.size(); ++i) {
      std::size_t j = init.index_of(base.spec(i).id);
      // map the initial network's own indices onto base indices
      std::vector<int> vars;
      std::vector<std::size_t> cards;
      for (std::size_t p : init.parents(j)) {
        vars.push_back(static_cast<int>(base.index_of(init.spec(p).id)) + offset);
        cards.push_back(init.cardinality(p));
      }
      vars.push_back(static_cast<int>(i) + offset);
      cards.push_back(init.cardinality(j));
      const Cpt& cpt = init.cpt(j);
      std::vector<double> raw(cpt.rows * cpt.cols);
      for (std::size_t config = 0; config < cpt.cols; ++config)
        for (std::size_t s = 0; s < cpt.rows; ++s)
          raw[config * cpt.rows + s] = cpt.at(s, config);
      slice_factors_.push_back(
          Factor::from_axes(std::move(vars), std::move(cards), std::move(raw)));
    }
    return;
  }
  for (std::size_t i = 0; i < base.size(); ++i) {
    int a = tsn_->arc_for(i);
    if (a < 0) {
      slice_factors_.push_back(Factor::from_cpt(base, i, offset));
      continue;
    }
    const TemporalArc& arc = tsn_->arcs()[static_cast<std::size_t>(a)];
    std::size_t src = base.index_of(arc.source);
    std::vector<int> vars{static_cast<int>(src)};  // previous slice
    std::vector<std::size_t> cards{base.cardinality(src)};
    for (std::size_t p : base.parents(i)) {
      vars.push_back(static_cast<int>(p) + offset);
      cards.push_back(base.cardinality(p));
    }
    vars.push_back(static_cast<int>(i) + offset);
    cards.push_back(base.cardinality(i));
    const Cpt& cpt = arc.transition;
    std::vector<double> raw(cpt.rows * cpt.cols);
    for (std::size_t config = 0; config < cpt.cols; ++config)
      for (std::size_t s = 0; s < cpt.rows; ++s)
        raw[config * cpt.rows + s] = cpt.at(s, config);
    slice_factors_.push_back(
        Factor::from_axes(std::move(vars), std::move(cards), std::move(raw)));
  }
}

std::vector<std::vector<double>> FilterState::marginals() const {
  const int offset = static_cast<int>(tsn_->base().size());
  std::vector<std::vector<double>> out;
  for (std::size_t m : monitored_) {
    std::vector<Factor> factors = slice_factors_;
    if (step_ > 0) factors.insert(factors.begin(), frontier_);
    Factor f = eliminate_all_except(std::move(factors),
                                    {static_cast<int>(m) + offset});
    f.normalize();
    out.push_back(f.table());
  }
  return out;
}

void FilterState::advance() {
  const int offset = static_cast<int>(tsn_->base().size());
  std::vector<int> keep;
  for (std::size_t i : tsn_->interface_nodes())
    keep.push_back(static_cast<int>(i) + offset);
  std::vector<Factor> factors = slice_factors_;
  if (step_ > 0) factors.insert(factors.begin(), frontier_);
  Factor next = eliminate_all_except(std::move(factors), keep);
  next.normalize();
  // relabel current-slice interface ids as previous-slice ids
  std::vector<int> relabeled;
  for (int v : next.scope()) relabeled.push_back(v - offset);
  frontier_ = Factor(std::move(relabeled), next.cards(), next.table());
  ++step_;
  rebuild_slice(false);
}

TrajectoryResult filter(const TwoSliceNetwork& tsn, std::size_t steps,
                        const std::vector<std::string>& monitored,
                        std::size_t cap, bool allow_beyond_cap) {
  check_cap(steps, cap, allow_beyond_cap);
  if (monitored.empty())
    fail(ErrorCode::invalid_argument, "no monitored nodes");
  TrajectoryResult result;
  result.monitored = monitored;
  result.step_hours = tsn.step_hours();
  for (const auto& m : monitored)
    result.state_labels.push_back(tsn.base().spec(tsn.base().index_of(m)).states);

  FilterState state(tsn, monitored);
  for (std::size_t t = 0; t < steps; ++t) {
    if (t > 0) state.advance();
    result.steps.push_back({t, state.marginals()});
  }
  return result;
}

std::string trajectory_csv(const TrajectoryResult& result) {
  std::string out = "step,node,state,probability\n";
  for (const auto& step : result.steps) {
    for (std::size_t m = 0; m < result.monitored.size(); ++m) {
      const auto& dist = step.distributions[m];
      for (std::size_t s = 0; s < dist.size(); ++s) {
        out += std::to_string(step.step);
        out += ',';
        out += result.monitored[m];
        out += ',';
        out += result.state_labels[m][s];
        out += ',';
        out += format_double(dist[s]);
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace riskbn

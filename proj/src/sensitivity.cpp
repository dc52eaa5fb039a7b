#include "riskbn/sensitivity.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "riskbn/text_util.hpp"

namespace riskbn {

namespace {

/// Replaces one CPT column so that `state` has probability theta and the
/// remaining states share the complement in proportion to their baseline
/// values (equally when those are all zero).
void set_column(Cpt& cpt, std::size_t state, std::size_t config, double theta) {
  double rest = 0.0;
  for (std::size_t r = 0; r < cpt.rows; ++r)
    if (r != state) rest += cpt.at(r, config);
  double remainder = 1.0 - theta;
  for (std::size_t r = 0; r < cpt.rows; ++r) {
    if (r == state) {
      cpt.at(r, config) = theta;
    } else if (rest > 0.0) {
      cpt.at(r, config) = cpt.at(r, config) / rest * remainder;
    } else {
      cpt.at(r, config) = remainder / static_cast<double>(cpt.rows - 1);
    }
  }
}

std::vector<double> sweep_points(double p, double sweep, int points,
                                 bool* additive) {
  double lo, hi;
  *additive = (p <= 0.0 || p >= 1.0);
  if (*additive) {
    lo = std::max(0.0, p - sweep * 0.01);
    hi = std::min(1.0, p + sweep * 0.01);
  } else {
    lo = std::max(0.0, p * (1.0 - sweep));
    hi = std::min(1.0, p * (1.0 + sweep));
  }
  // symmetric point counts on each side of the baseline, so the baseline is
  // always evaluated even when the interval is clamped
  int half = (points - 1) / 2;
  std::vector<double> pts;
  for (int k = 0; k <= half; ++k)
    pts.push_back(lo + (p - lo) * static_cast<double>(k) / half);
  for (int k = 1; k <= half; ++k)
    pts.push_back(p + (hi - p) * static_cast<double>(k) / half);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

}  // namespace

std::vector<TornadoEntry> tornado(const Network& net,
                                  const SensitivityTarget& target,
                                  const TornadoOptions& options) {
  if (!(options.sweep > 0.0) || options.sweep > 1.0)
    fail(ErrorCode::invalid_sweep, "sweep fraction must be in (0, 1]");
  if (options.points < 3 || options.points % 2 == 0)
    fail(ErrorCode::invalid_sweep, "points must be odd and >= 3");
  std::size_t target_node = net.index_of(target.node);
  net.state_index(target_node, target.state);
  if (target.evidence.count(target.node))
    fail(ErrorCode::invalid_query, "target node is in evidence");

  Query q{{target.node}, target.evidence};
  std::size_t target_state = net.state_index(target_node, target.state);
  double baseline = posterior_ve(net, q).of(target.node).probabilities[target_state];

  std::vector<TornadoEntry> entries;
  for (std::size_t i = 0; i < net.size(); ++i) {
    if (i == target_node && !options.include_target) continue;
    if (options.roots_only && !net.parents(i).empty()) continue;
    const Cpt& cpt = net.cpt(i);
    for (std::size_t config = 0; config < cpt.cols; ++config) {
      double p = cpt.at(0, config);
      TornadoEntry entry;
      entry.parameter.node = net.spec(i).id;
      entry.parameter.state = net.spec(i).states[0];
      entry.parameter.node_index = i;
      entry.parameter.config_index = config;
      // decode the parent configuration labels
      std::size_t rem = config;
      const auto& parents = net.parents(i);
      std::vector<std::size_t> pstates(parents.size(), 0);
      for (std::size_t k = parents.size(); k-- > 0;) {
        pstates[k] = rem % net.cardinality(parents[k]);
        rem /= net.cardinality(parents[k]);
      }
      for (std::size_t k = 0; k < parents.size(); ++k)
        entry.parameter.parent_config.push_back(
            net.spec(i).parents[k] + "=" +
            net.spec(parents[k]).states[pstates[k]]);
      entry.parameter_value = p;
      entry.baseline = baseline;

      std::vector<double> pts =
          sweep_points(p, options.sweep, options.points, &entry.additive);
      double low = baseline, high = baseline;
      // network copy with the swept column; rebuilt per point
      for (double theta : pts) {
        double value;
        if (theta == p) {
          value = baseline;
        } else {
          std::vector<NodeSpec> specs;
          std::vector<Cpt> cpts;
          for (std::size_t n = 0; n < net.size(); ++n) {
            specs.push_back(net.spec(n));
            cpts.push_back(net.cpt(n));
          }
          set_column(cpts[i], 0, config, theta);
          Network modified =
              build_network(std::move(specs), std::move(cpts), net.name(), {});
          value = posterior_ve(modified, q)
                      .of(target.node)
                      .probabilities[target_state];
        }
        low = std::min(low, value);
        high = std::max(high, value);
      }
      entry.low = low;
      entry.high = high;
      entry.spread = high - low;
      entries.push_back(std::move(entry));
    }
  }

  std::stable_sort(entries.begin(), entries.end(),
                   [](const TornadoEntry& a, const TornadoEntry& b) {
                     if (a.spread != b.spread) return a.spread > b.spread;
                     if (a.parameter.node_index != b.parameter.node_index)
                       return a.parameter.node_index < b.parameter.node_index;
                     return a.parameter.config_index < b.parameter.config_index;
                   });
  return entries;
}

std::vector<std::pair<std::string, double>> node_importance(
    const std::vector<TornadoEntry>& entries) {
  if (entries.empty())
    fail(ErrorCode::invalid_argument, "no tornado entries to group");
  std::map<std::size_t, std::pair<std::string, double>> best;
  for (const auto& e : entries) {
    auto it = best.find(e.parameter.node_index);
    if (it == best.end())
      best.emplace(e.parameter.node_index,
                   std::make_pair(e.parameter.node, e.spread));
    else
      it->second.second = std::max(it->second.second, e.spread);
  }
  std::vector<std::pair<std::size_t, std::pair<std::string, double>>> rows(
      best.begin(), best.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second.second != b.second.second)
      return a.second.second > b.second.second;
    return a.first < b.first;
  });
  std::vector<std::pair<std::string, double>> out;
  out.reserve(rows.size());
  for (auto& r : rows) out.push_back(std::move(r.second));
  return out;
}

std::string tornado_csv(const std::vector<TornadoEntry>& entries) {
  std::string out = "rank,node,state,parent_config,baseline,low,high,spread\n";
  std::size_t rank = 1;
  for (const auto& e : entries) {
    out += std::to_string(rank++);
    out += ',';
    out += csv_field(e.parameter.node);
    out += ',';
    out += csv_field(e.parameter.state);
    out += ',';
    out += csv_field(join(e.parameter.parent_config, ";"));
    out += ',';
    out += format_double(e.baseline);
    out += ',';
    out += format_double(e.low);
    out += ',';
    out += format_double(e.high);
    out += ',';
    out += format_double(e.spread);
    out += '\n';
  }
  return out;
}

namespace {

std::string svg_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string tornado_svg(const std::vector<TornadoEntry>& entries) {
  if (entries.empty())
    fail(ErrorCode::invalid_argument, "no tornado entries to draw");
  const double label_w = 340, plot_w = 560, row_h = 22, margin = 14;
  const double header = 30;
  double height = header + row_h * static_cast<double>(entries.size()) + margin;
  double lo = entries.front().low, hi = entries.front().high;
  for (const auto& e : entries) {
    lo = std::min(lo, e.low);
    hi = std::max(hi, e.high);
  }
  double baseline = entries.front().baseline;
  lo = std::min(lo, baseline);
  hi = std::max(hi, baseline);
  if (hi <= lo) hi = lo + 1e-12;
  auto x_of = [&](double v) {
    return label_w + (v - lo) / (hi - lo) * plot_w;
  };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
         svg_num(label_w + plot_w + margin) + "\" height=\"" + svg_num(height) +
         "\" font-family=\"monospace\" font-size=\"11\">\n";
  svg += "<text x=\"" + svg_num(label_w) + "\" y=\"16\">target posterior range "
         "(baseline " + format_double(baseline) + ")</text>\n";
  svg += "<line x1=\"" + svg_num(x_of(baseline)) + "\" y1=\"" + svg_num(header - 6) +
         "\" x2=\"" + svg_num(x_of(baseline)) + "\" y2=\"" +
         svg_num(height - margin + 4) +
         "\" stroke=\"#444\" stroke-dasharray=\"3,2\"/>\n";
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    double y = header + row_h * static_cast<double>(k);
    std::string label = e.parameter.node;
    if (!e.parameter.parent_config.empty())
      label += " | " + join(e.parameter.parent_config, ";");
    svg += "<text x=\"4\" y=\"" + svg_num(y + 14) + "\">" +
           xml_escape(label) + "</text>\n";
    double x0 = x_of(e.low), x1 = x_of(e.high);
    if (x1 - x0 < 0.5) x1 = x0 + 0.5;
    svg += "<rect x=\"" + svg_num(x0) + "\" y=\"" + svg_num(y + 4) +
           "\" width=\"" + svg_num(x1 - x0) + "\" height=\"" +
           svg_num(row_h - 8) + "\" fill=\"#4878a8\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace riskbn

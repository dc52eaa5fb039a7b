#pragma once

#include <cstddef>
#include <vector>

namespace riskbn {

class Network;

/// Dense table over the joint state space of an ordered variable scope.
/// Scope variables are kept sorted ascending; the table is row-major with
/// the first scope variable varying slowest. Variables are plain integer
/// ids supplied by the caller (node indices, or shifted indices when two
/// time slices coexist).
class Factor {
 public:
  Factor() = default;
  Factor(std::vector<int> scope, std::vector<std::size_t> cards,
         std::vector<double> table);

  /// Scalar factor.
  static Factor constant(double value);

  /// CPT of `node` as a factor over (parents..., node), with all variable
  /// ids shifted by `id_offset` (used when two time slices coexist).
  static Factor from_cpt(const Network& net, std::size_t node,
                         int id_offset = 0);

  /// Table given in the axis order of `vars` (first axis slowest); the
  /// constructor sorts the scope and permutes the table to match.
  static Factor from_axes(std::vector<int> vars, std::vector<std::size_t> cards,
                          std::vector<double> raw);

  const std::vector<int>& scope() const { return scope_; }
  const std::vector<std::size_t>& cards() const { return cards_; }
  const std::vector<double>& table() const { return table_; }
  std::vector<double>& table() { return table_; }
  std::size_t size() const { return table_.size(); }
  bool contains(int var) const;

  Factor multiply(const Factor& other) const;
  /// Sums out one variable.
  Factor marginalize(int var) const;
  /// Fixes one variable to a state and drops it from the scope.
  Factor restrict(int var, std::size_t state) const;
  double sum() const;
  void normalize();

 private:
  std::vector<int> scope_;            // ascending
  std::vector<std::size_t> cards_;    // per scope entry
  std::vector<double> table_;         // product(cards_) entries
};

/// Multiplies the factor list and sums out every variable not in `keep`,
/// using min-degree elimination with ties broken by smallest variable id.
/// Deterministic: factors touching the eliminated variable are combined in
/// list order.
Factor eliminate_all_except(std::vector<Factor> factors,
                            const std::vector<int>& keep);

}  // namespace riskbn

#pragma once

// Anchoring maps and path statistics on window-truncated samples. Points outside
// the stored window count as absent (value 0); results carry a boundary flag when
// the deciding point sits on the window's outer shell.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "maxstable/lattice.hpp"

namespace maxstable {

struct AnchorMap {
  enum class Kind { first_max, last_max, first_exceed, last_exceed };
  Kind kind = Kind::first_max;
  LatticeOrder order = LatticeOrder::lexicographic;
};

const char* to_string(AnchorMap::Kind k);
AnchorMap::Kind parse_anchor_kind(const std::string& name);

struct AnchorResult {
  std::optional<LatticePoint> value;  // empty means infinity
  bool on_boundary = false;

  bool is_infinite() const { return !value.has_value(); }
  bool at_origin() const { return value && value->is_origin(); }
};

// Order-minimal point attaining max f, infinity when max f = 0.
AnchorResult first_max(const FieldSample& f, LatticeOrder order = LatticeOrder::lexicographic);
AnchorResult last_max(const FieldSample& f, LatticeOrder order = LatticeOrder::lexicographic);
// Order-minimal point with f > 1, infinity without exceedances.
AnchorResult first_exceed(const FieldSample& f, LatticeOrder order = LatticeOrder::lexicographic);
AnchorResult last_exceed(const FieldSample& f, LatticeOrder order = LatticeOrder::lexicographic);

AnchorResult apply_anchor(const AnchorMap& map, const FieldSample& f);
// Sparse form: entries ascending lexicographic, all other points of w are 0.
AnchorResult apply_anchor(const AnchorMap& map, std::span<const Entry> entries, const Window& w);

struct SumResult {
  double value = 0.0;
  double shell_fraction = 0.0;  // share of the sum carried by the outer shell
  bool tail_flag = false;
};

inline constexpr double kDefaultTailFraction = 0.05;

// S(f) = sum_t f(t)^alpha on the window.
SumResult sum_alpha(const FieldSample& f, double alpha, double tail_fraction = kDefaultTailFraction);
SumResult sum_alpha(std::span<const Entry> entries, const Window& w, double alpha,
                    double tail_fraction = kDefaultTailFraction);

struct CountResult {
  std::size_t count = 0;
  bool tail_flag = false;  // some exceedance lies on the outer shell
};

// B(f) = #{t : f(t) > 1}; f must be Y-tagged.
CountResult exceed_count(const FieldSample& f);
CountResult exceed_count(std::span<const Entry> entries, const Window& w);

using AnchorFunction = std::function<AnchorResult(const FieldSample&)>;

struct AnchoringReport {
  std::size_t samples = 0;
  std::size_t checks = 0;
  std::size_t violations_value = 0;  // f(I(f)) < min(f(0), 1)
  std::size_t violations_shift = 0;  // I(B^h f) != I(f) + h
  std::vector<std::string> messages;  // the first few violations

  bool pass() const { return violations_value == 0 && violations_shift == 0; }
};

// Checks the two anchoring conditions on every sample for each shift (default:
// all non-zero h with sup-norm at most 2). Shifted samples carry their window along.
AnchoringReport check_anchoring(const AnchorFunction& map, std::span<const FieldSample> samples,
                                std::span<const LatticePoint> shifts = {});
AnchoringReport check_anchoring(const AnchorMap& map, std::span<const FieldSample> samples,
                                std::span<const LatticePoint> shifts = {});

}  // namespace maxstable

#pragma once

// Integer-lattice geometry: points of Z^d, finite boxes, translation-invariant
// orders and field samples stored on boxes.

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace maxstable {

/// Raised for malformed calls: dimension mismatches, empty inputs, bad sizes.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a model cannot be sampled (invalid variogram, zero coefficients).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxDim = 4;

class LatticePoint {
 public:
  using Coord = std::int64_t;

  LatticePoint() = default;
  explicit LatticePoint(int dim);
  LatticePoint(std::initializer_list<Coord> coords);
  explicit LatticePoint(std::span<const Coord> coords);

  static LatticePoint origin(int dim) { return LatticePoint(dim); }

  int dim() const { return dim_; }
  Coord operator[](int j) const { return c_[static_cast<std::size_t>(j)]; }
  Coord& operator[](int j) { return c_[static_cast<std::size_t>(j)]; }

  bool is_origin() const;
  // max_j |t_j|
  Coord sup_norm() const;
  double euclidean_norm() const;

  LatticePoint operator-() const;
  friend LatticePoint operator+(const LatticePoint& a, const LatticePoint& b);
  friend LatticePoint operator-(const LatticePoint& a, const LatticePoint& b);
  friend bool operator==(const LatticePoint& a, const LatticePoint& b);

  // Lexicographic comparison; both operands must share a dimension.
  friend bool lex_less(const LatticePoint& a, const LatticePoint& b) {
    for (int j = 0; j < a.dim_; ++j) {
      if (a.c_[j] != b.c_[j]) return a.c_[j] < b.c_[j];
    }
    return false;
  }

  std::string to_string() const;

 private:
  std::array<Coord, kMaxDim> c_{};
  int dim_ = 0;
};

void require_same_dim(const LatticePoint& a, const LatticePoint& b);

enum class LatticeOrder { lexicographic, reversed_lexicographic };

enum class Ordering { less, equal, greater };

Ordering order_compare(LatticeOrder order, const LatticePoint& a, const LatticePoint& b);

inline bool order_less(LatticeOrder order, const LatticePoint& a, const LatticePoint& b) {
  return order == LatticeOrder::lexicographic ? lex_less(a, b) : lex_less(b, a);
}

/// Inclusive box [lower, upper] in Z^d.
class Window {
 public:
  Window() = default;
  Window(LatticePoint lower, LatticePoint upper);

  // The box [lo, hi]^d.
  static Window cube(int dim, LatticePoint::Coord lo, LatticePoint::Coord hi);
  // Smallest box containing every point.
  static Window bounding(std::span<const LatticePoint> points);

  int dim() const { return lower_.dim(); }
  const LatticePoint& lower() const { return lower_; }
  const LatticePoint& upper() const { return upper_; }
  LatticePoint::Coord extent(int j) const { return upper_[j] - lower_[j] + 1; }
  std::size_t size() const { return size_; }

  bool contains(const LatticePoint& p) const;
  bool contains(const Window& other) const;
  // True when p is in the box and lies on one of its faces.
  bool on_boundary(const LatticePoint& p) const;

  // Row-major index; ascending index is ascending lexicographic order.
  std::size_t index(const LatticePoint& p) const;
  LatticePoint point(std::size_t index) const;

  Window translated(const LatticePoint& h) const;
  Window expanded(LatticePoint::Coord margin) const;
  // Per-coordinate hull of two boxes of the same dimension.
  Window hull(const Window& other) const;
  // {a - b : a in *this, b in other}
  Window difference(const Window& other) const;
  // Coordinates [first, first + count) as a lower-dimensional box.
  Window slice_dims(int first, int count) const;

  friend bool operator==(const Window& a, const Window& b) {
    return a.lower_ == b.lower_ && a.upper_ == b.upper_;
  }

  std::string to_string() const;

 private:
  LatticePoint lower_;
  LatticePoint upper_;
  std::size_t size_ = 0;
  std::array<std::size_t, kMaxDim> stride_{};
};

std::vector<LatticePoint> window_points(const Window& w,
                                        LatticeOrder order = LatticeOrder::lexicographic);

enum class FieldTag { Z, Theta, Y, X };

const char* to_string(FieldTag tag);

/// A field observed on a finite window. Values outside the window are absent;
/// consumers decide how to treat them (see value_or).
class FieldSample {
 public:
  FieldSample() = default;
  FieldSample(Window window, FieldTag tag);
  FieldSample(Window window, std::vector<double> values, FieldTag tag);

  const Window& window() const { return window_; }
  FieldTag tag() const { return tag_; }
  void set_tag(FieldTag tag) { tag_ = tag; }

  std::optional<double> weight() const { return weight_; }
  void set_weight(std::optional<double> w) { weight_ = w; }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double at(const LatticePoint& p) const;
  double& at(const LatticePoint& p);
  double value_or(const LatticePoint& p, double fallback) const;

  // Multiplies every value by c.
  FieldSample scaled(double c) const;

 private:
  Window window_;
  std::vector<double> values_;
  FieldTag tag_ = FieldTag::Z;
  std::optional<double> weight_;
};

/// result(t) = f(t - h); the window moves with the values.
FieldSample shift_field(const FieldSample& f, const LatticePoint& h);

/// Copies the values of f that fall inside w; other points of w are 0.
FieldSample restrict_to(const FieldSample& f, const Window& w);

/// One non-zero value of a sparse field.
struct Entry {
  LatticePoint at;
  double value = 0.0;
};

/// Non-zero values of a field on a window, ascending lexicographic.
FieldSample to_dense(std::span<const Entry> entries, const Window& w, FieldTag tag);
std::vector<Entry> to_sparse(const FieldSample& f);

// First entry whose point is not lexicographically below p.
std::span<const Entry>::iterator lex_lower_bound(std::span<const Entry> entries,
                                                  const LatticePoint& p);

}  // namespace maxstable
